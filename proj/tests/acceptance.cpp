// Acceptance run: one line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "freeprob/additive.hpp"
#include "freeprob/circle.hpp"
#include "freeprob/halfline.hpp"
#include "freeprob/harness.hpp"
#include "freeprob/indicator.hpp"

using namespace freeprob;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
        }
    }
    void note(const std::string& s) {
        if (pass) detail += (detail.empty() ? "" : "; ") + s;
    }
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::vector<cplx> upper_grid(double scale) {
    std::vector<cplx> pts;
    for (int i = 0; i < 10; ++i)
        for (double y : {0.2, 0.7, 1.5, 3.0}) pts.emplace_back(scale * (-3.0 + 6.0 * i / 9.0), scale * y);
    return pts;
}

std::vector<cplx> disc_points() {
    std::vector<cplx> pts;
    for (double r : {0.1, 0.4, 0.7, 0.9})
        for (int j = 0; j < 16; ++j) pts.push_back(std::polar(r, 2 * kPi * j / 16));
    return pts;
}

double sup_dev(const std::vector<cplx>& pts, const CFun& f, const CFun& g) {
    double d = 0.0;
    for (const cplx z : pts) d = std::max(d, std::abs(f(z) - g(z)));
    return d;
}

// Passes when the harness check passes and its largest in-tolerance deviation is below `bound`.
void require_check(Outcome& o, const std::string& id, const std::vector<NamedMeasure>& ms, double bound) {
    const CheckReport r = run_check(id, ms);
    int failed = 0;
    for (const auto& c : r.cases) failed += !c.pass;
    o.require(r.status == CheckStatus::Pass, id + fmt(": %g failing cases", failed));
    o.require(r.max_deviation < bound, id + fmt(": max deviation %.3g >= %.1g", r.max_deviation, bound));
    o.note(id + fmt(" %.0f cases, max deviation %.2e", static_cast<double>(r.cases.size()), r.max_deviation));
}

void require_bracket(Outcome& o, const std::string& name, const IndicatorEstimate& e, double target) {
    o.require(std::abs(e.lower - target) <= 0.02 && std::abs(e.upper - target) <= 0.02,
              name + fmt(" bracket [%.4f, %.4f]", e.lower, e.upper));
    o.note(name + fmt(" [%.4f, %.4f]", e.lower, e.upper));
}

// ---------------------------------------------------------------- criteria

Outcome criterion1() {
    Outcome o;
    for (double t : {0.25, 0.5, 2.0})
        require_bracket(o, fmt("KM(%g)", t), phi_indicator(make_zoo_real("kesten_mckay", {{"t", t}})), t);
    return o;
}

Outcome criterion2() {
    Outcome o;
    require_bracket(o, "semicircle", phi_indicator(make_zoo_real("semicircle", {})), 1.0);
    const IndicatorEstimate c = phi_indicator(RealLineMeasure::cauchy(0.0, 1.0));
    o.require(c.upper == kInf, "Cauchy upper bound is finite");
    const IndicatorEstimate h = phi_indicator(RealLineMeasure::half_stable(std::polar(1.0, kPi / 8)));
    o.require(h.upper == kInf, "half-stable upper bound is finite");
    o.note(fmt("Cauchy lower %g, half-stable lower %g, both upper inf", c.lower, h.lower));
    return o;
}

Outcome criterion3() {
    Outcome o;
    const double x_max = 8.0;
    const int count = 4001;
    const double cell = 2 * x_max / (count - 1);
    for (double theta : {kPi / 4, kPi / 2, 3 * kPi / 4}) {
        const auto nu = RealLineMeasure::half_stable(std::polar(1.0, theta / 2));
        double best = -kInf, arg = 0.0;
        for (int i = 0; i < count; ++i) {
            const double x = -x_max + i * cell;
            const double v = eval_phi(nu, cplx(x, 1e-6)).value.imag();
            if (v > best) best = v, arg = x;
        }
        o.require(best <= 1e-6, fmt("theta=%.3f: max Im phi %.3g", theta, best));
        o.require(std::abs(arg) <= cell, fmt("theta=%.3f: argmax at x=%.3g", theta, arg));
        const double s = std::sin(theta);
        const double f0 = half_stable_aux(theta, 0.0);
        o.require(std::abs(f0 - s * s / 2) <= 1e-9, fmt("theta=%.3f: f(0)=%.12g", theta, f0));
        o.note(fmt("theta=%.3f: max Im phi %.2e", theta, best));
    }
    return o;
}

Outcome criterion4() {
    Outcome o;
    for (double q : {-0.5, 0.0, 0.5}) {
        const auto m = make_zoo_real("q_gaussian", {{"q", q}});
        const double b = jacobi_upper_bound(jacobi_head(m));
        o.require(std::abs(b - (1 + q)) <= 1e-12, fmt("q=%g: bound %.15g", q, b));
    }
    const FidReport r = is_fid_real(make_zoo_real("q_gaussian", {{"q", -0.5}}));
    o.require(!r.fid, "q=-0.5 reported freely infinitely divisible");
    o.note("bounds 0.5, 1, 1.5; q=-0.5 not FID");
    return o;
}

Outcome criterion5() {
    Outcome o;
    const auto ms = default_measures("real");
    require_check(o, "bt-semigroup", ms, 1e-8);
    require_check(o, "additive-commutation", ms, 1e-8);
    return o;
}

Outcome criterion6() {
    Outcome o;
    std::vector<NamedMeasure> ms;
    ms.push_back({"LK semicircle", from_levy_additive_free({0.0, LevyMeasure::point(0.0)})});
    LevyMeasure two;
    two.atoms = {{-1.0, 0.25}, {1.0, 0.5}};
    ms.push_back({"LK two atoms", from_levy_additive_free({0.3, two})});
    ms.push_back({"LK uniform", from_levy_additive_free({-0.2, LevyMeasure::uniform(-1.0, 2.0, 0.8)})});
    require_check(o, "bozejko", ms, 1e-7);
    return o;
}

Outcome criterion7() {
    Outcome o;
    const CheckReport r = run_check("indicator-boolean-scaling", default_measures("real"));
    int failed = 0;
    for (const auto& c : r.cases) failed += !c.pass;
    o.require(r.status == CheckStatus::Pass, fmt("%g failing cases", failed));
    o.note(fmt("%g cases within bracket widths + 0.05", static_cast<double>(r.cases.size())));
    return o;
}

Outcome criterion8() {
    Outcome o;
    for (const auto& [a, b, t] : std::vector<std::tuple<double, double, double>>{{0, 1, 0.5}, {1, 2, 1}}) {
        const auto g = RealLineMeasure::cauchy(a, b);
        const auto out = bt_map(g, t);
        const double d = sup_dev(upper_grid(b), [&](cplx z) { return out.F(z); }, [&](cplx z) { return g.F(z); });
        o.require(d < 1e-9, fmt("Cauchy(%g,%g) moved by ", a, b) + fmt("%.3g", d));
        o.note(fmt("Cauchy(%g,%g) fixed", a, b) + fmt(" to %.1e", d));
    }
    const auto bern = make_zoo_real("bernoulli", {{"a", 1.0}});
    const auto twice = bt_map(bt_map(bern, 1.0), 1.0);
    const double dev = sup_dev(upper_grid(1.0), [&](cplx z) { return twice.F(z); }, [&](cplx z) { return bern.F(z); });
    o.require(dev > 1e-3, fmt("Bernoulli under B_1 o B_1 moved only %.3g", dev));
    o.note(fmt("Bernoulli moved by %.3g", dev));
    std::vector<NamedMeasure> cauchy = {{"cauchy(0,1)", RealLineMeasure::cauchy(0.0, 1.0)},
                                        {"cauchy(1,2)", RealLineMeasure::cauchy(1.0, 2.0)}};
    require_check(o, "fixed-point-eq", cauchy, 1e-10);
    return o;
}

Outcome criterion9() {
    Outcome o;
    const auto p = CircleMeasure::poisson(0.5, 0.3);
    double fixed = 0.0;
    for (double t : {0.5, 1.0, 2.0})
        fixed = std::max(fixed, sup_dev(disc_points(), [&](cplx z) { return mt_map_circle(p, t, 0).eta(z); },
                                        [&](cplx z) { return p.eta(z); }));
    o.require(fixed < 1e-9, fmt("Poisson kernel moved by %.3g", fixed));
    o.note(fmt("Poisson fixed to %.1e", fixed));

    const auto mu = from_levy_mult_circle({0.4, LevyMeasure::point(1.0, 0.3)});
    double semi = 0.0, moment = 0.0;
    for (int n : {0, 1}) {
        const double phi = arg_for_branch(mu, n);
        for (const auto& [t, s] : std::vector<std::pair<double, double>>{{0.5, 0.5}, {1.0, 2.0}}) {
            const auto lhs = mt_map_circle_arg(mt_map_circle_arg(mu, s, phi), t, phi);
            const auto rhs = mt_map_circle_arg(mu, t + s, phi);
            semi = std::max(semi, sup_dev(disc_points(), [&](cplx z) { return lhs.eta(z); },
                                          [&](cplx z) { return rhs.eta(z); }));
        }
        for (double t : {0.5, 1.0, 3.0})
            moment = std::max(moment, std::abs(first_moment_circle(mt_map_circle_arg(mu, t, phi)).m1 - mu.m1()));
    }
    o.require(semi < 1e-8, fmt("M_{t+s} vs composition %.3g", semi));
    o.require(moment < 1e-9, fmt("first moment drift %.3g", moment));

    const auto m1 = mt_map_circle(mu, 1.0, 0);
    double lmb = 0.0;
    for (double r : {0.05, 0.1, 0.2})
        for (int j = 0; j < 12; ++j) {
            const cplx z = std::polar(r, 2 * kPi * j / 12);
            cplx s;
            if (!sigma_circle(m1, z, s)) {
                lmb = kInf;
                continue;
            }
            lmb = std::max(lmb, std::abs(s - mu.k(z)));
        }
    o.require(lmb < 1e-8, fmt("Sigma of M_1 vs k %.3g", lmb));
    o.note(fmt("semigroup %.1e, Sigma(M_1) vs k %.1e", semi, lmb) + fmt(", moment drift %.1e", moment));
    require_check(o, "mt-semigroups", default_measures("circle"), 1e-8);
    return o;
}

Outcome criterion10() {
    Outcome o;
    const auto hl = default_measures("halfline");
    require_check(o, "mt-semigroups", hl, 1e-8);

    const auto fp = HalfLineMeasure::free_poisson(1.0);
    std::string message;
    try {
        (void)boolean_power_halfline(fp, 1.5);
    } catch (const RangeError& e) {
        message = e.what();
    }
    o.require(!message.empty(), "Boolean power t=1.5 was not rejected");
    o.note("t=1.5 rejected: " + message);

    std::vector<NamedMeasure> mixed = {{"atoms(1,2)", HalfLineMeasure::from_atoms({{1.0, 0.5}, {2.0, 0.5}})},
                                       {"free_poisson(1)", fp}};
    require_check(o, "mixed-commutation", mixed, 1e-7);

    const auto ladder = uplus_power_halfline(free_power_halfline(boxplus_power_halfline(fp, 2.0), 2.0), 0.5);
    const FidReport fid = is_fid_real(halfline_to_real(ladder));
    o.require(fid.fid && !fid.inconclusive, fmt("ladder not FID, max Im phi %.3g", fid.max_im_phi));
    const SigmaEvidence ev = sigma_positivity_halfline(ladder);
    o.require(ev.ok, fmt("ladder Sigma evidence fails, max Im log Sigma %.3g", ev.max_im_log_sigma));
    o.note(fmt("ladder FID, max Im log Sigma %.2e", ev.max_im_log_sigma));
    return o;
}

}  // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                            criterion5, criterion6, criterion7, criterion8,
                                                            criterion9, criterion10};
    bool all = true;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs >= 60.0) o.require(false, fmt("took %.1f s", secs));
        all = all && o.pass;
        std::printf("criterion %zu: %s (%.1f s) %s\n", i + 1, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
