#include "freeprob/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <mutex>
#include <set>

#include "freeprob/additive.hpp"
#include "freeprob/circle.hpp"
#include "freeprob/halfline.hpp"
#include "freeprob/indicator.hpp"

namespace freeprob {

namespace {

struct Dev {
    double raw = 0.0;
    double rel = 0.0;
    cplx witness{};
};

Dev sup_dev(const CFun& f, const CFun& g, const std::vector<cplx>& pts) {
    Dev d;
    for (const cplx z : pts) {
        const cplx a = f(z), b = g(z);
        const double e = std::abs(a - b);
        if (!std::isfinite(e)) throw NumericError("non-finite value while comparing transforms");
        if (e > d.raw) {
            d.raw = e;
            d.witness = z;
        }
        d.rel = std::max(d.rel, e / (1.0 + std::abs(b)));
    }
    return d;
}

// Collects the cases of one check run.
class Recorder {
public:
    Recorder(std::string id, double tol_override) : tol_override_(tol_override) { report_.id = std::move(id); }

    // Deviation must stay below tol (or the override).
    void small(const std::string& measure, const std::string& detail, const Dev& d, double tol,
               std::string note = "") {
        CheckCase c{measure, detail, false, d.raw, d.rel, tol_override_ > 0.0 ? tol_override_ : tol, d.witness,
                    std::move(note)};
        c.pass = c.deviation <= c.tol;
        report_.cases.push_back(std::move(c));
    }

    // Deviation must exceed a threshold; tolerance overrides do not apply.
    void large(const std::string& measure, const std::string& detail, const Dev& d, double threshold,
               std::string note = "") {
        CheckCase c{measure, detail, d.raw > threshold, d.raw, d.rel, threshold, d.witness, std::move(note)};
        c.must_exceed = true;
        report_.cases.push_back(std::move(c));
    }

    void boolean(const std::string& measure, const std::string& detail, bool ok, double value,
                 std::string note = "") {
        CheckCase c{measure, detail, ok, value, value, 0.0, {}, std::move(note)};
        report_.cases.push_back(std::move(c));
    }

    void failed(const std::string& measure, const std::string& detail, const std::string& why) {
        CheckCase c{measure, detail, false, kInf, kInf, 0.0, {}, why};
        report_.cases.push_back(std::move(c));
    }

    void incompatible(const std::string& measure, const std::string& why) {
        report_.incompatible.push_back(measure + ": " + why);
    }

    template <class F>
    void guarded(const std::string& measure, const std::string& detail, F&& f) {
        try {
            f();
        } catch (const Error& e) {
            failed(measure, detail, e.what());
        }
    }

    CheckReport finish() {
        CheckReport r = std::move(report_);
        if (r.cases.empty()) {
            r.status = CheckStatus::Skipped;
            return r;
        }
        r.status = CheckStatus::Pass;
        for (const auto& c : r.cases) {
            if (!c.pass) r.status = CheckStatus::Fail;
            if (c.must_exceed || c.tol <= 0.0) continue;
            if (c.deviation >= r.max_deviation) {
                r.max_deviation = c.deviation;
                r.witness = c.witness;
            }
            r.max_relative = std::max(r.max_relative, c.relative);
        }
        return r;
    }

private:
    CheckReport report_;
    double tol_override_;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}
std::string fmt(const char* f, double a, double b) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

// Upper half-plane sample points scaled to the measure.
std::vector<cplx> upper_points(double scale, const std::optional<GridSpec>& grid) {
    std::vector<cplx> pts;
    if (grid) {
        for (int i = 0; i < grid->count; ++i)
            for (double y : {0.1, 0.5, 1.0, 2.0}) pts.emplace_back(grid->at(i), y * scale);
        return pts;
    }
    for (int i = 0; i < 10; ++i) {
        const double x = scale * (-3.0 + 6.0 * i / 9.0);
        for (double y : {0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.5, 4.0}) pts.emplace_back(x, y * scale);
    }
    return pts;
}

// Points well inside the upper half-plane, where Newton inversion of F is reliable.
std::vector<cplx> interior_points(double scale) {
    std::vector<cplx> pts;
    for (int i = 0; i < 5; ++i)
        for (double y : {1.5, 3.0, 6.0}) pts.emplace_back(scale * (-2.0 + i), y * scale);
    return pts;
}

CFun F_of(const RealLineMeasure& m) {
    return [m](cplx z) { return m.F(z); };
}
CFun eta_of(const CircleMeasure& m) {
    return [m](cplx z) { return m.eta(z); };
}
CFun eta_of(const HalfLineMeasure& m) {
    return [m](cplx z) { return m.eta(z); };
}

template <class T>
std::vector<std::pair<std::string, T>> select(const std::vector<NamedMeasure>& ms, Recorder& rec,
                                              const char* space) {
    std::vector<std::pair<std::string, T>> out;
    for (const auto& nm : ms) {
        if (const T* p = std::get_if<T>(&nm.measure)) out.emplace_back(nm.name, *p);
        else rec.incompatible(nm.name, std::string("not a measure on the ") + space);
    }
    return out;
}

bool is_cauchy(const RealLineMeasure& m) { return m.rep == RealRep::ClosedForm && m.family == RealFamily::Cauchy; }
bool is_half_stable(const RealLineMeasure& m) {
    return m.rep == RealRep::ClosedForm && m.family == RealFamily::HalfStable;
}

// Indicator estimates are shared between checks of one run.
struct IndicatorCache {
    std::mutex mu;
    std::map<std::string, IndicatorEstimate> values;

    IndicatorEstimate get(const std::string& key, const RealLineMeasure& m) {
        {
            std::lock_guard<std::mutex> lock(mu);
            auto it = values.find(key);
            if (it != values.end()) return it->second;
        }
        IndicatorEstimate e = phi_indicator(m);
        std::lock_guard<std::mutex> lock(mu);
        values.emplace(key, e);
        return e;
    }
};

// Gap between [a_lo, a_hi] and [b_lo, b_hi]; 0 when they overlap.
double interval_gap(double a_lo, double a_hi, double b_lo, double b_hi) {
    const double lo = std::max(a_lo, b_lo), hi = std::min(a_hi, b_hi);
    return lo <= hi ? 0.0 : lo - hi;
}

std::string bracket_text(const IndicatorEstimate& e) {
    return fmt("[%.4g, %.4g]", e.lower, e.upper);
}

// ------------------------------------------------------------------ real line

void check_additive_commutation(const std::vector<NamedMeasure>& ms, const std::optional<GridSpec>& grid,
                                Recorder& rec) {
    for (const auto& [name, mu] : select<RealLineMeasure>(ms, rec, "real line")) {
        const auto pts = upper_points(mu.scale(), grid);
        for (double p : {1.5, 2.0}) {
            for (double q : {0.6, 1.0, 1.5}) {
                const double qq = 1.0 - p + p * q, pp = p * q / qq;
                rec.guarded(name, fmt("p=%g q=%g", p, q), [&] {
                    const auto lhs = boolean_power(free_power(mu, p), q);
                    const auto rhs = free_power(boolean_power(mu, qq), pp);
                    rec.small(name, fmt("p=%g q=%g", p, q), sup_dev(F_of(lhs), F_of(rhs), pts), 1e-8);
                });
            }
        }
        rec.guarded(name, "free power law t=1.5 s=2", [&] {
            const auto lhs = free_power(free_power(mu, 1.5), 2.0);
            const auto rhs = free_power(mu, 3.0);
            rec.small(name, "free power law t=1.5 s=2", sup_dev(F_of(lhs), F_of(rhs), pts), 1e-8);
        });
        rec.guarded(name, "Boolean power law t=0.5 s=3", [&] {
            const auto lhs = boolean_power(boolean_power(mu, 0.5), 3.0);
            const auto rhs = boolean_power(mu, 1.5);
            rec.small(name, "Boolean power law t=0.5 s=3", sup_dev(F_of(lhs), F_of(rhs), pts), 1e-12);
        });
    }
}

void check_bt_semigroup(const std::vector<NamedMeasure>& ms, const std::optional<GridSpec>& grid,
                        Recorder& rec) {
    for (const auto& [name, mu] : select<RealLineMeasure>(ms, rec, "real line")) {
        const auto pts = upper_points(mu.scale(), grid);
        for (double t : {0.3, 1.0, 2.0}) {
            for (double s : {0.3, 1.0, 2.0}) {
                const std::string d = fmt("t=%g s=%g", t, s);
                rec.guarded(name, d, [&] {
                    const auto lhs = bt_map(bt_map(mu, s), t);
                    const auto rhs = bt_map(mu, t + s);
                    rec.small(name, d, sup_dev(F_of(lhs), F_of(rhs), pts), 1e-8);
                });
            }
            const std::string d = fmt("fast path t=%g", t);
            rec.guarded(name, d, [&] {
                rec.small(name, d, sup_dev(F_of(bt_map(mu, t, BtPath::Fast)), F_of(bt_map(mu, t)), pts), 1e-9);
            });
        }
    }
}

void check_bozejko(const std::vector<NamedMeasure>& ms, Recorder& rec) {
    for (const auto& [name, mu] : select<RealLineMeasure>(ms, rec, "real line")) {
        if (!mu.has_closed_phi()) {
            rec.incompatible(name, "no closed Voiculescu transform, so fractional free powers are unavailable");
            continue;
        }
        if (mu.rep == RealRep::Jacobi && !mu.is_point()) {
            if (jacobi_upper_bound(mu.jacobi.head()) < 1.0) {
                rec.incompatible(name, "not freely infinitely divisible (Jacobi bound below 1)");
                continue;
            }
        }
        const auto pts = interior_points(mu.scale());
        for (double t : {0.25, 0.5, 0.75}) {
            const std::string d = fmt("t=%g", t);
            rec.guarded(name, d, [&] {
                const auto b = boolean_power(mu, t);
                const auto f = free_power(mu, 1.0 - t);
                CFun lhs = [&b](cplx z) {
                    const InversionResult r = eval_phi(b, z, PhiMethod::Inversion);
                    if (r.residual > 1e-10 * (1.0 + std::abs(z))) throw NumericError("inversion of F failed");
                    return r.value;
                };
                CFun rhs = [&f, t](cplx z) { return t / (1.0 - t) * f.K(z); };
                rec.small(name, d, sup_dev(lhs, rhs, pts), 1e-7);
            });
        }
    }
}

void check_indicator_scaling(const std::vector<NamedMeasure>& ms, Recorder& rec, IndicatorCache& cache) {
    for (const auto& [name, mu] : select<RealLineMeasure>(ms, rec, "real line")) {
        rec.guarded(name, "base", [&] {
            const IndicatorEstimate base = cache.get(name, mu);
            for (double s : {0.5, 2.0}) {
                const IndicatorEstimate e = phi_indicator(boolean_power(mu, s));
                const double gap = interval_gap(base.lower / s, base.upper / s, e.lower, e.upper);
                rec.small(name, fmt("s=%g ", s) + bracket_text(e) + " vs " + bracket_text(base),
                          {gap, gap, {}}, 0.05);
            }
            const IndicatorEstimate e = phi_indicator(bt_map(mu, 1.0));
            const double gap = interval_gap(base.lower + 1.0, base.upper + 1.0, e.lower, e.upper);
            rec.small(name, "B_1 shift " + bracket_text(e) + " vs " + bracket_text(base), {gap, gap, {}}, 0.05);
        });
    }
}

void check_shift_invariance(const std::vector<NamedMeasure>& ms, Recorder& rec, IndicatorCache& cache) {
    for (const auto& [name, mu] : select<RealLineMeasure>(ms, rec, "real line")) {
        rec.guarded(name, "base", [&] {
            const IndicatorEstimate base = cache.get(name, mu);
            for (ShiftMode mode : {ShiftMode::Free, ShiftMode::Boolean}) {
                const IndicatorEstimate e = phi_indicator(translate(mu, 1.0, mode));
                const double gap = interval_gap(base.lower, base.upper, e.lower, e.upper);
                rec.small(name,
                          std::string(mode == ShiftMode::Free ? "free" : "Boolean") + " shift a=1 " +
                              bracket_text(e) + " vs " + bracket_text(base),
                          {gap, gap, {}}, 0.05);
            }
        });
    }
}

void check_stable_dichotomy(const std::vector<NamedMeasure>& ms, Recorder& rec, IndicatorCache& cache) {
    for (const auto& [name, mu] : select<RealLineMeasure>(ms, rec, "real line")) {
        if (is_half_stable(mu) || is_cauchy(mu)) {
            rec.guarded(name, "indicator infinite", [&] {
                const IndicatorEstimate e = cache.get(name, mu);
                rec.boolean(name, "upper = inf " + bracket_text(e), std::isinf(e.upper), e.lower);
                if (is_half_stable(mu)) {
                    const IndicatorEstimate f = phi_indicator(lambda_b(mu));
                    rec.boolean(name, "free 1/2-stable image upper = inf " + bracket_text(f), std::isinf(f.upper),
                                f.lower);
                }
            });
        } else if (mu.label == "bernoulli") {
            rec.guarded(name, "indicator zero", [&] {
                const IndicatorEstimate e = cache.get(name, mu);
                rec.small(name, "upper < 0.05 " + bracket_text(e), {e.upper, e.upper, {}}, 0.05);
            });
        } else if (mu.label == "semicircle") {
            rec.guarded(name, "indicator one", [&] {
                const IndicatorEstimate e = cache.get(name, mu);
                const double gap = interval_gap(e.lower, e.upper, 1.0, 1.0);
                rec.small(name, "bracket contains 1 " + bracket_text(e), {gap, gap, {}}, 1e-12);
            });
        } else {
            rec.incompatible(name, "not a stable law");
        }
    }
}

void half_stable_case(Recorder& rec, const std::string& name, double theta) {
    const std::string d = fmt("theta=%.6g", theta);
    rec.guarded(name, d, [&] {
        const double target = 0.5 * std::sin(theta) * std::sin(theta);
        const double f0 = half_stable_aux(theta, 0.0);
        double fmin = kInf;
        double xmin = 0.0;
        for (int i = 0; i <= 4000; ++i) {
            const double x = -10.0 + 20.0 * i / 4000.0;
            const double f = half_stable_aux(theta, x);
            if (f < fmin) {
                fmin = f;
                xmin = x;
            }
        }
        const double dev = std::max(std::abs(f0 - target), std::max(0.0, f0 - fmin));
        rec.small(name, d + " f(0) = sin^2/2, grid minimum at 0", {dev, dev, cplx(xmin, 0.0)}, 1e-9);

        const RealLineMeasure nu = RealLineMeasure::half_stable(std::polar(1.0, theta / 2.0));
        const GridSpec g{-16.0, 16.0, 4000, 1e-6};
        const double cell = (g.x_max - g.x_min) / (g.count - 1);
        double best = -kInf, xbest = 0.0;
        for (int i = 0; i < g.count; ++i) {
            const double v = nu.phi_closed(cplx(g.at(i), g.eps)).imag();
            if (v > best) {
                best = v;
                xbest = g.at(i);
            }
        }
        rec.boolean(name, d + fmt(" max Im phi = %.3g at x = %.3g", best, xbest),
                    best <= 1e-6 && std::abs(xbest) <= cell, best);
    });
}

void check_half_stable_fid(const std::vector<NamedMeasure>& ms, Recorder& rec) {
    for (double theta : {kPi / 4, kPi / 2, 3 * kPi / 4}) half_stable_case(rec, "half_stable(unit)", theta);
    for (const auto& [name, mu] : select<RealLineMeasure>(ms, rec, "real line")) {
        if (!is_half_stable(mu)) {
            rec.incompatible(name, "not a Boolean 1/2-stable law");
            continue;
        }
        half_stable_case(rec, name, 2.0 * std::arg(mu.coef));
    }
}

void check_fixed_point_eq(const std::vector<NamedMeasure>& ms, const std::optional<GridSpec>& grid,
                          Recorder& rec) {
    for (const auto& [name, mu] : select<RealLineMeasure>(ms, rec, "real line")) {
        const auto pts = upper_points(mu.scale(), grid);
        for (double t : {0.5, 1.0, 2.0}) {
            const std::string d = fmt("W = F of Boolean power t=%g", t);
            rec.guarded(name, d, [&] {
                const auto W = boolean_power(mu, t);
                CFun lhs = [&W](cplx z) {
                    const cplx f = W.F(z);
                    return W.F(f) - 2.0 * f + z;
                };
                const Dev dev = sup_dev(lhs, [](cplx) { return cplx(0.0); }, pts);
                if (is_cauchy(mu) || mu.is_point()) rec.small(name, d, dev, 1e-10);
                else rec.large(name, d + " (expected to fail the equation)", dev, 1e-6);
            });
        }
    }
}

void check_cauchy_fixed_point(const std::vector<NamedMeasure>& ms, const std::optional<GridSpec>& grid,
                              Recorder& rec) {
    const std::pair<double, double> ab[] = {{0.0, 1.0}, {1.0, 2.0}};
    const double ts[] = {0.5, 1.0};
    for (int k = 0; k < 2; ++k) {
        const auto g = RealLineMeasure::cauchy(ab[k].first, ab[k].second);
        const std::string name = fmt("cauchy(%g,%g)", ab[k].first, ab[k].second);
        const std::string d = fmt("t=%g", ts[k]);
        rec.guarded(name, d, [&] {
            rec.small(name, d, sup_dev(F_of(bt_map(g, ts[k])), F_of(g), upper_points(g.scale(), grid)), 1e-9);
        });
    }
    for (const auto& [name, mu] : select<RealLineMeasure>(ms, rec, "real line")) {
        const auto pts = upper_points(mu.scale(), grid);
        rec.guarded(name, "t=1", [&] {
            const Dev dev = sup_dev(F_of(bt_map(mu, 1.0)), F_of(mu), pts);
            if (is_cauchy(mu) || mu.is_point()) rec.small(name, "t=1", dev, 1e-9);
            else rec.large(name, "t=1 (not a fixed point)", dev, 1e-3);
        });
    }
}

void check_no_period_two(const std::vector<NamedMeasure>& ms, const std::optional<GridSpec>& grid,
                         Recorder& rec) {
    for (const auto& [name, mu] : select<RealLineMeasure>(ms, rec, "real line")) {
        const auto pts = upper_points(mu.scale(), grid);
        rec.guarded(name, "B_1 o B_1", [&] {
            const auto once = lambda_b(mu);
            const Dev d1 = sup_dev(F_of(once), F_of(mu), pts);
            const Dev d2 = sup_dev(F_of(lambda_b(once)), F_of(mu), pts);
            if (d1.raw <= 1e-9) {
                rec.boolean(name, "fixed point of B_1 (period one)", true, d1.raw);
            } else {
                rec.large(name, "B_1 o B_1 differs from the input", d2, 1e-3);
            }
        });
    }
}

// ---------------------------------------------------------------- unit circle

// Logarithm of f continued along the ray from 0 to z, with imaginary part im0 at 0.
cplx ray_log(const CFun& f, cplx z, double im0) {
    const int steps = 64;
    cplx val;
    for (int k = 1; k <= steps; ++k) {
        const cplx p = std::log(f(z * (double(k) / steps)));
        const double ref = k == 1 ? im0 : val.imag();
        val = p + cplx(0.0, 2.0 * kPi * std::round((ref - p.imag()) / (2.0 * kPi)));
    }
    return val;
}

cplx first_moment_numeric(const CFun& eta) {
    const int n = 64;
    const double r = 0.1;
    cplx acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const cplx z = std::polar(r, 2.0 * kPi * j / n);
        acc += eta(z) / z;
    }
    return acc / double(n);
}

struct CircleCase {
    std::string name;
    CircleMeasure mu;
    double phi = 0.0;
};

std::vector<CircleCase> branch_ready(const std::vector<NamedMeasure>& ms, Recorder& rec) {
    std::vector<CircleCase> out;
    for (const auto& [name, mu] : select<CircleMeasure>(ms, rec, "unit circle")) {
        if (mu.is_haar()) {
            out.push_back({name, mu, 0.0});
            continue;
        }
        try {
            const BranchLog b = branch_log(mu, 0);
            out.push_back({name, mu, b.phi});
        } catch (const Error& e) {
            rec.incompatible(name, e.what());
        }
    }
    return out;
}

void check_circle_commutation(const std::vector<NamedMeasure>& ms, Recorder& rec) {
    const auto pts = disc_grid();
    for (const auto& [name, mu, phi] : branch_ready(ms, rec)) {
        for (double q : {0.6, 1.0}) {
            const double p = 2.0, qq = 1.0 - p + p * q, pp = p * q / qq;
            const std::string d = fmt("p=%g q=%g", p, q);
            rec.guarded(name, d, [&] {
                const auto lhs = boolean_power_circle_arg(free_power_circle_arg(mu, p, phi), q, p * phi);
                const auto rhs = free_power_circle_arg(boolean_power_circle_arg(mu, qq, phi), pp, qq * phi);
                rec.small(name, d, sup_dev(eta_of(lhs), eta_of(rhs), pts), 1e-8);
            });
        }
        rec.guarded(name, "free power law", [&] {
            const auto lhs = free_power_circle_arg(free_power_circle_arg(mu, 2.0, phi), 1.5, 2.0 * phi);
            const auto rhs = free_power_circle_arg(mu, 3.0, phi);
            rec.small(name, "free power law t=2 s=1.5", sup_dev(eta_of(lhs), eta_of(rhs), pts), 1e-8);
        });
        rec.guarded(name, "Boolean power law", [&] {
            const auto lhs = boolean_power_circle_arg(boolean_power_circle_arg(mu, 0.5, phi), 0.6, 0.5 * phi);
            const auto rhs = boolean_power_circle_arg(mu, 0.3, phi);
            rec.small(name, "Boolean power law t=0.5 s=0.6", sup_dev(eta_of(lhs), eta_of(rhs), pts), 1e-8);
        });
        if (mu.is_haar()) continue;
        rec.guarded(name, "subordination relations t=2", [&] {
            const double t = 2.0;
            const CFun omega = circle_subordination(mu, t, phi);
            const auto rho = free_power_circle_arg(mu, t, phi);
            CFun w_ratio = [&](cplx z) { return omega(z) / z; };
            CFun e_ratio = [&](cplx z) { return rho.eta(z) / z; };
            std::vector<cplx> sub(pts.begin(), pts.end());
            CFun a1 = [&](cplx z) { return std::exp((1.0 - 1.0 / t) * ray_log(e_ratio, z, t * phi)); };
            CFun a2 = [&](cplx z) { return std::exp(t / (t - 1.0) * ray_log(w_ratio, z, (t - 1.0) * phi)); };
            rec.small(name, "omega/z = (eta/z)^(1-1/t)", sup_dev(w_ratio, a1, sub), 1e-8);
            rec.small(name, "eta/z = (omega/z)^(t/(t-1))", sup_dev(e_ratio, a2, sub), 1e-8);
        });
    }
}

// --------------------------------------------------------------- semigroups

void check_mt_semigroups(const std::vector<NamedMeasure>& ms, Recorder& rec) {
    std::vector<NamedMeasure> circ, half;
    for (const auto& nm : ms) {
        if (std::holds_alternative<CircleMeasure>(nm.measure)) circ.push_back(nm);
        else if (std::holds_alternative<HalfLineMeasure>(nm.measure)) half.push_back(nm);
        else rec.incompatible(nm.name, "not a measure on the unit circle or the half-line");
    }
    const auto pts = disc_grid();
    for (const auto& [name, mu, phi] : branch_ready(circ, rec)) {
        for (double t : {0.5, 1.0}) {
            for (double s : {0.5, 1.0}) {
                const std::string d = fmt("circle t=%g s=%g", t, s);
                rec.guarded(name, d, [&] {
                    const auto lhs = mt_map_circle_arg(mt_map_circle_arg(mu, s, phi), t, phi);
                    const auto rhs = mt_map_circle_arg(mu, t + s, phi);
                    rec.small(name, d, sup_dev(eta_of(lhs), eta_of(rhs), pts), 1e-8);
                });
            }
        }
        if (mu.is_haar()) continue;
        for (double t : {0.5, 1.0, 2.0}) {
            const std::string d = fmt("first moment constant t=%g", t);
            rec.guarded(name, d, [&] {
                const cplx m = first_moment_numeric(eta_of(mt_map_circle_arg(mu, t, phi)));
                const double e = std::abs(m - mu.m1());
                rec.small(name, d, {e, e, {}}, 1e-9);
            });
        }
        if (mu.rep == CircleRep::Poisson) {
            for (double t : {0.5, 1.0, 2.0}) {
                const std::string d = fmt("Poisson kernel fixed t=%g", t);
                rec.guarded(name, d, [&] {
                    rec.small(name, d, sup_dev(eta_of(mt_map_circle_arg(mu, t, phi)), eta_of(mu), pts), 1e-9);
                });
            }
        }
        rec.guarded(name, "Lambda_MB = M_1", [&] {
            rec.small(name, "Lambda_MB = M_1",
                      sup_dev(eta_of(lambda_mb_circle(mu)), eta_of(mt_map_circle_arg(mu, 1.0, phi)), pts), 1e-9);
        });
        rec.guarded(name, "Sigma of M_1 = k", [&] {
            const auto m1 = mt_map_circle_arg(mu, 1.0, phi);
            CircleMeasure plain = m1;
            plain.sigma_fn = nullptr;
            std::vector<cplx> reach;
            for (double r : {0.1, 0.2, 0.3})
                for (int j = 0; j < 16; ++j) {
                    const cplx z = std::polar(r, 2.0 * kPi * j / 16);
                    cplx s;
                    if (sigma_circle(plain, z, s)) reach.push_back(z);
                }
            if (reach.size() < 24) throw NumericError("Sigma unreachable on most of the small-disc grid");
            CFun sig = [&plain](cplx z) {
                cplx s;
                sigma_circle(plain, z, s);
                return s;
            };
            rec.small(name, fmt("Sigma of M_1 = k (%g nodes)", double(reach.size())),
                      sup_dev(sig, [&mu](cplx z) { return mu.k(z); }, reach), 1e-8);
        });
    }

    const auto hp = halfline_grid();
    for (const auto& [name, mu] : select<HalfLineMeasure>(half, rec, "half-line")) {
        if (mu.is_delta0()) {
            rec.incompatible(name, "point mass at 0");
            continue;
        }
        for (double t : {0.5, 1.0}) {
            for (double s : {0.5, 1.0}) {
                const std::string d = fmt("half-line t=%g s=%g", t, s);
                rec.guarded(name, d, [&] {
                    const auto lhs = mt_map_halfline(mt_map_halfline(mu, s), t);
                    const auto rhs = mt_map_halfline(mu, t + s);
                    rec.small(name, d, sup_dev(eta_of(lhs), eta_of(rhs), hp), 1e-8);
                });
            }
        }
        rec.guarded(name, "half-line Lambda_MB = M_1", [&] {
            rec.small(name, "half-line Lambda_MB = M_1",
                      sup_dev(eta_of(lambda_mb_halfline(mu)), eta_of(mt_map_halfline(mu, 1.0)), hp), 1e-9);
        });
    }
}

// ------------------------------------------------------------------ half-line

void check_mixed_commutation(const std::vector<NamedMeasure>& ms, Recorder& rec) {
    const auto hp = halfline_grid();
    for (const auto& [name, mu] : select<HalfLineMeasure>(ms, rec, "half-line")) {
        if (mu.is_delta0()) {
            rec.incompatible(name, "point mass at 0");
            continue;
        }
        for (double q : {0.6, 1.0}) {
            const double p = 2.0, qq = 1.0 - p + p * q, pp = p * q / qq;
            const std::string d = fmt("free/Boolean multiplicative p=%g q=%g", p, q);
            rec.guarded(name, d, [&] {
                const auto lhs = boolean_power_halfline(free_power_halfline(mu, p), q);
                const auto rhs = free_power_halfline(boolean_power_halfline(mu, qq), pp);
                rec.small(name, d, sup_dev(eta_of(lhs), eta_of(rhs), hp), 1e-8);
            });
        }
        const double t = 2.0;
        for (double s : {1.0, 2.0}) {
            const double c = std::pow(t, s - 1.0);
            std::string d = fmt("boxplus t=%g then boxtimes s=%g", t, s);
            rec.guarded(name, d, [&] {
                const auto lhs = free_power_halfline(boxplus_power_halfline(mu, t), s);
                const auto rhs = dilate_halfline(boxplus_power_halfline(free_power_halfline(mu, s), t), c);
                rec.small(name, d, sup_dev(eta_of(lhs), eta_of(rhs), hp), 1e-7);
            });
            d = fmt("uplus t=%g then boxtimes s=%g", t, s);
            rec.guarded(name, d, [&] {
                const auto lhs = free_power_halfline(uplus_power_halfline(mu, t), s);
                const auto rhs = dilate_halfline(uplus_power_halfline(free_power_halfline(mu, s), t), c);
                rec.small(name, d, sup_dev(eta_of(lhs), eta_of(rhs), hp), 1e-7);
            });
        }
        for (double s : {0.5, 1.0}) {
            const std::string d = fmt("uplus t=%g then utimes s=%g", t, s);
            rec.guarded(name, d, [&] {
                const auto lhs = boolean_power_halfline(uplus_power_halfline(mu, t), s);
                const auto rhs = uplus_power_halfline(boolean_power_halfline(mu, s), std::pow(t, s));
                rec.small(name, d, sup_dev(eta_of(lhs), eta_of(rhs), hp), 1e-12);
            });
        }
        rec.guarded(name, "Boolean power t=1.5 rejected", [&] {
            bool rejected = false;
            try {
                (void)boolean_power_halfline(mu, 1.5);
            } catch (const RangeError&) {
                rejected = true;
            }
            rec.boolean(name, "multiplicative Boolean power t=1.5 raises RangeError", rejected, 0.0);
        });
        if (mu.rep == HalfRep::FreePoisson) {
            rec.guarded(name, "ladder (2,2,0.5)", [&] {
                const auto ladder = uplus_power_halfline(free_power_halfline(boxplus_power_halfline(mu, 2.0), 2.0), 0.5);
                const FidReport fid = is_fid_real(halfline_to_real(ladder));
                rec.boolean(name, fmt("ladder (2,2,0.5) freely infinitely divisible, max Im phi %.3g", fid.max_im_phi),
                            fid.fid && !fid.inconclusive, fid.violation());
                const SigmaEvidence ev = sigma_positivity_halfline(ladder);
                rec.boolean(name, fmt("ladder (2,2,0.5) Sigma evidence, max Im log Sigma %.3g", ev.max_im_log_sigma),
                            ev.ok, std::max(0.0, ev.max_im_log_sigma));
            });
        }
    }
}

using CheckFn = std::function<void(const std::vector<NamedMeasure>&, const std::optional<GridSpec>&, Recorder&,
                                   IndicatorCache&)>;

const std::map<std::string, CheckFn>& check_table() {
    static const std::map<std::string, CheckFn> table = {
        {"additive-commutation",
         [](auto& ms, auto& g, auto& r, auto&) { check_additive_commutation(ms, g, r); }},
        {"bt-semigroup", [](auto& ms, auto& g, auto& r, auto&) { check_bt_semigroup(ms, g, r); }},
        {"bozejko", [](auto& ms, auto&, auto& r, auto&) { check_bozejko(ms, r); }},
        {"indicator-boolean-scaling", [](auto& ms, auto&, auto& r, auto& c) { check_indicator_scaling(ms, r, c); }},
        {"shift-invariance", [](auto& ms, auto&, auto& r, auto& c) { check_shift_invariance(ms, r, c); }},
        {"stable-dichotomy", [](auto& ms, auto&, auto& r, auto& c) { check_stable_dichotomy(ms, r, c); }},
        {"half-stable-fid", [](auto& ms, auto&, auto& r, auto&) { check_half_stable_fid(ms, r); }},
        {"circle-commutation", [](auto& ms, auto&, auto& r, auto&) { check_circle_commutation(ms, r); }},
        {"mt-semigroups", [](auto& ms, auto&, auto& r, auto&) { check_mt_semigroups(ms, r); }},
        {"mixed-commutation", [](auto& ms, auto&, auto& r, auto&) { check_mixed_commutation(ms, r); }},
        {"fixed-point-eq", [](auto& ms, auto& g, auto& r, auto&) { check_fixed_point_eq(ms, g, r); }},
        {"cauchy-fixed-point", [](auto& ms, auto& g, auto& r, auto&) { check_cauchy_fixed_point(ms, g, r); }},
        {"no-period-two", [](auto& ms, auto& g, auto& r, auto&) { check_no_period_two(ms, g, r); }},
    };
    return table;
}

CheckReport run_check_cached(const std::string& id, const std::vector<NamedMeasure>& measures,
                             const std::optional<GridSpec>& grid, double tol, IndicatorCache& cache) {
    const auto& table = check_table();
    const auto it = table.find(id);
    if (it == table.end()) throw DomainError("unknown check '" + id + "'");
    if (grid) grid->validate();
    Recorder rec(id, tol);
    it->second(measures, grid, rec, cache);
    return rec.finish();
}

bool space_listed(const std::string& spaces, const std::string& space) {
    return spaces.find(space) != std::string::npos;
}

const char* space_of(const AnyMeasure& m) {
    switch (m.index()) {
        case 0: return "real";
        case 1: return "circle";
        default: return "halfline";
    }
}

}  // namespace

double half_stable_aux(double theta, double x) {
    const RealLineMeasure nu = RealLineMeasure::half_stable(std::polar(1.0, theta / 2.0));
    const double d = 0.5 * std::sin(theta) - nu.phi_closed(cplx(x, 0.0)).imag();
    return 2.0 * d * d;
}

const std::vector<CheckInfo>& check_catalog() {
    static const std::vector<CheckInfo> info = {
        {"additive-commutation", "real", "(mu^{boxplus p})^{uplus q} = (mu^{uplus q'})^{boxplus p'} and power laws"},
        {"bt-semigroup", "real", "B_t o B_s = B_{t+s}; fast and compositional paths agree"},
        {"bozejko", "real", "phi of mu^{uplus t} = t/(1-t) K of mu^{boxplus (1-t)}"},
        {"indicator-boolean-scaling", "real", "phi(mu^{uplus s}) = phi(mu)/s and phi(B_1 mu) = phi(mu) + 1"},
        {"shift-invariance", "real", "indicator unchanged by free and Boolean shifts"},
        {"stable-dichotomy", "real", "indicators of stable laws are 0, 1 or infinite"},
        {"half-stable-fid", "real", "Boolean 1/2-stable boundary values and f(0) = sin^2(theta)/2"},
        {"circle-commutation", "circle", "branch-tracked commutation, power laws and subordination relations"},
        {"mt-semigroups", "circle,halfline", "M_{t+s} = M_t o M_s, fixed points, Lambda_MB = M_1"},
        {"mixed-commutation", "halfline", "commutation of additive and multiplicative powers on [0, inf)"},
        {"fixed-point-eq", "real", "F o F - 2F + id = 0 exactly for Cauchy and point masses"},
        {"cauchy-fixed-point", "real", "B_t fixes Cauchy laws and point masses only"},
        {"no-period-two", "real", "B_1 has no periodic points of order two"},
    };
    return info;
}

std::vector<NamedMeasure> default_measures(const std::string& space) {
    std::vector<NamedMeasure> out;
    if (space == "real") {
        out.push_back({"point(0)", RealLineMeasure::point(0.0)});
        out.push_back({"point(2)", RealLineMeasure::point(2.0)});
        out.push_back({"bernoulli", make_zoo_real("bernoulli", {{"a", 1.0}})});
        out.push_back({"semicircle", make_zoo_real("semicircle", {})});
        out.push_back({"cauchy(0,1)", RealLineMeasure::cauchy(0.0, 1.0)});
        out.push_back({"kesten_mckay(0.5)", make_zoo_real("kesten_mckay", {{"t", 0.5}})});
        out.push_back({"free_meixner(0,1,1,2)",
                       make_zoo_real("free_meixner", {{"b0", 0.0}, {"g0", 1.0}, {"b1", 1.0}, {"g1", 2.0}})});
        out.push_back({"half_stable(pi/2)", make_zoo_real("half_stable", {{"theta", kPi / 2}})});
    } else if (space == "circle") {
        out.push_back({"point(0)", CircleMeasure::point(0.0)});
        out.push_back({"point(pi/2)", CircleMeasure::point(kPi / 2)});
        out.push_back({"atoms(1,i)", CircleMeasure::from_atoms({{0.0, 0.5}, {kPi / 2, 0.5}})});
        out.push_back({"poisson_kernel(0.5,0.3)", CircleMeasure::poisson(0.5, 0.3)});
        out.push_back({"haar", CircleMeasure::haar()});
        LevyDataMultCircle lk;
        lk.gamma_arg = 0.4;
        lk.tau = LevyMeasure::point(1.0, 0.3);
        CircleMeasure m = from_levy_mult_circle(lk);
        m.label = "levy";
        out.push_back({"levy(0.4; 0.3 at 1)", m});
    } else if (space == "halfline") {
        out.push_back({"point(1)", HalfLineMeasure::point(1.0)});
        out.push_back({"point(2)", HalfLineMeasure::point(2.0)});
        out.push_back({"atoms(1,2)", HalfLineMeasure::from_atoms({{1.0, 0.5}, {2.0, 0.5}})});
        out.push_back({"free_poisson(1)", HalfLineMeasure::free_poisson(1.0)});
    } else {
        throw DomainError("unknown space '" + space + "'");
    }
    return out;
}

CheckReport run_check(const std::string& id, const std::vector<NamedMeasure>& measures,
                      const std::optional<GridSpec>& grid, double tol) {
    IndicatorCache cache;
    return run_check_cached(id, measures, grid, tol, cache);
}

bool HarnessSummary::all_pass() const {
    for (const auto& r : reports)
        if (r.status == CheckStatus::Fail) return false;
    return true;
}

HarnessSummary run_all(const HarnessConfig& config) {
    HarnessSummary summary;
    IndicatorCache cache;
    std::set<std::string> wanted(config.checks.begin(), config.checks.end());
    for (const auto& id : wanted)
        if (!check_table().count(id)) throw DomainError("unknown check '" + id + "'");
    auto space_wanted = [&](const std::string& s) {
        return config.spaces.empty() ||
               std::find(config.spaces.begin(), config.spaces.end(), s) != config.spaces.end();
    };

    for (const auto& info : check_catalog()) {
        bool enabled = wanted.empty() || wanted.count(info.id);
        bool any_space = false;
        for (const char* s : {"real", "circle", "halfline"})
            if (space_listed(info.spaces, s) && space_wanted(s)) any_space = true;
        if (!enabled || !any_space) {
            CheckReport r;
            r.id = info.id;
            r.status = CheckStatus::Skipped;
            summary.reports.push_back(std::move(r));
            continue;
        }
        std::vector<NamedMeasure> ms;
        if (config.measures) {
            for (const auto& nm : *config.measures)
                if (space_listed(info.spaces, space_of(nm.measure)) && space_wanted(space_of(nm.measure)))
                    ms.push_back(nm);
        } else {
            for (const char* s : {"real", "circle", "halfline"})
                if (space_listed(info.spaces, s) && space_wanted(s))
                    for (auto& nm : default_measures(s)) ms.push_back(std::move(nm));
        }
        summary.reports.push_back(run_check_cached(info.id, ms, config.grid, config.tol, cache));
    }
    return summary;
}

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "FAIL";
        case CheckStatus::Skipped: return "skipped";
    }
    return "?";
}

void write_table(std::ostream& os, const HarnessSummary& summary) {
    char line[256];
    std::snprintf(line, sizeof line, "%-26s %-8s %6s %12s %12s\n", "check", "status", "cases", "max dev",
                  "max rel dev");
    os << line;
    for (const auto& r : summary.reports) {
        std::snprintf(line, sizeof line, "%-26s %-8s %6zu %12.3e %12.3e\n", r.id.c_str(), to_string(r.status).c_str(),
                      r.cases.size(), r.max_deviation, r.max_relative);
        os << line;
        for (const auto& c : r.cases) {
            if (c.pass) continue;
            os << "    failed: " << c.measure << " [" << c.detail << "] deviation " << c.deviation << " tol " << c.tol;
            if (!c.note.empty()) os << " (" << c.note << ")";
            os << "\n";
        }
        for (const auto& s : r.incompatible) os << "    incompatible: " << s << "\n";
    }
    os << (summary.all_pass() ? "all checks passed\n" : "some checks failed\n");
}

}  // namespace freeprob
