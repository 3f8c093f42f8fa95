#include "freeprob/halfline.hpp"

#include <algorithm>

#include "freeprob/additive.hpp"
#include "freeprob/transforms.hpp"

namespace freeprob {

namespace {

HalfLineMeasure eta_measure(CFun eta, double m1, double radius, std::string label) {
    HalfLineMeasure out;
    out.rep = HalfRep::Eta;
    out.eta_fn = std::move(eta);
    out.m1_value = m1;
    out.radius = radius;
    out.label = std::move(label);
    return out;
}

// Evaluates f on the closed upper half-plane and extends by conjugation.
CFun conj_symmetric(CFun f) {
    return [f](cplx z) { return z.imag() < 0.0 ? std::conj(f(std::conj(z))) : f(z); };
}

void require_not_delta0(const HalfLineMeasure& mu) {
    if (mu.is_delta0()) throw DomainError("operation undefined for the point mass at 0");
}

}  // namespace

cplx log_eta_ratio(const HalfLineMeasure& mu, cplx z) {
    if (z == 0.0) return std::log(mu.m1());
    const cplx r = mu.eta(z) / z;
    if (r == 0.0 || !finite(r)) throw NumericError("eta(z)/z vanishes or is not finite");
    return std::log(r);
}

std::vector<cplx> halfline_grid() {
    std::vector<cplx> pts;
    for (double r : {0.1, 0.3, 1.0, 3.0})
        for (int j = 0; j < 6; ++j) pts.push_back(std::polar(r, kPi * (j + 0.5) / 6.0));
    return pts;
}

HalfLineMeasure boolean_power_halfline(const HalfLineMeasure& mu, double t) {
    if (!(t >= 0.0)) throw DomainError("Boolean power needs t >= 0");
    if (t > 1.0)
        throw RangeError("multiplicative Boolean power with t > 1 does not preserve measures on [0, inf)");
    if (t == 0.0) return HalfLineMeasure::point(1.0);
    if (t == 1.0) return mu;
    require_not_delta0(mu);
    if (mu.rep == HalfRep::Atoms && mu.atoms.size() == 1) return HalfLineMeasure::point(std::pow(mu.atoms[0].x, t));
    const HalfLineMeasure m = mu;
    auto eta = [m, t](cplx z) {
        if (z == 0.0) return cplx(0.0);
        return z * std::exp(t * log_eta_ratio(m, z));
    };
    return eta_measure(eta, std::pow(mu.m1(), t), kInf, mu.label + "^utimes");
}

CFun halfline_subordination(const HalfLineMeasure& mu, double t) {
    if (!(t >= 1.0)) throw DomainError("free power needs t >= 1");
    const HalfLineMeasure m = mu;
    return conj_symmetric([m, t](cplx z) {
        if (z == 0.0) return cplx(0.0);
        const bool on_axis = z.imag() == 0.0;
        auto T = [&](cplx w) { return z * std::exp((t - 1.0) * log_eta_ratio(m, w)); };
        auto admissible = [on_axis](cplx w) { return w != 0.0 && (on_axis || w.imag() > 0.0); };
        auto res = fixed_point_solve(T, z, admissible, 300, 1e-13);
        if (!res.converged || std::abs(T(res.value) - res.value) > 1e-10 * (1.0 + std::abs(z)))
            throw NumericError("half-line subordination did not converge");
        return res.value;
    });
}

HalfLineMeasure free_power_halfline(const HalfLineMeasure& mu, double t) {
    if (!(t >= 1.0) || !std::isfinite(t)) throw DomainError("free multiplicative power needs t >= 1");
    require_not_delta0(mu);
    if (t == 1.0) return mu;
    if (mu.rep == HalfRep::Atoms && mu.atoms.size() == 1) return HalfLineMeasure::point(std::pow(mu.atoms[0].x, t));
    const CFun omega = halfline_subordination(mu, t);
    const HalfLineMeasure m = mu;
    auto eta = [m, omega](cplx z) { return z == 0.0 ? cplx(0.0) : m.eta(omega(z)); };
    const double r = mu.support_radius();
    HalfLineMeasure out = eta_measure(eta, std::pow(mu.m1(), t), std::isfinite(r) ? std::pow(r, t) : kInf,
                                      mu.label + "^boxtimes");
    if (mu.has_closed_sigma()) {
        const CFun s = [m](cplx z) { return m.sigma_closed(z); };
        out.sigma_fn = [s, t](cplx z) { return std::pow(s(z), t); };
    }
    return out;
}

HalfLineMeasure mt_map_halfline(const HalfLineMeasure& mu, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("semigroup time must be >= 0");
    require_not_delta0(mu);
    if (t == 0.0) return mu;
    if (mu.rep == HalfRep::Atoms && mu.atoms.size() == 1) return mu;
    const CFun omega = halfline_subordination(mu, t + 1.0);
    const HalfLineMeasure m = mu;
    auto eta = [m, omega](cplx z) {
        if (z == 0.0) return cplx(0.0);
        const cplx w = omega(z);
        return z * m.eta(w) / w;
    };
    return eta_measure(eta, mu.m1(), kInf, "M_t(" + mu.label + ")");
}

HalfLineMeasure lambda_mb_halfline(const HalfLineMeasure& mu) {
    require_not_delta0(mu);
    if (mu.rep == HalfRep::Atoms && mu.atoms.size() == 1) return mu;
    const HalfLineMeasure m = mu;
    const double m1 = mu.m1();
    auto eta = conj_symmetric([m, m1](cplx z) {
        if (z == 0.0) return cplx(0.0);
        const bool on_axis = z.imag() == 0.0;
        SolveOptions opt;
        opt.tol = 1e-14;
        auto res = newton_solve([&](cplx w) { return w * w / m.eta(w) - z; }, z * m1,
                                [on_axis](cplx w) { return w != 0.0 && (on_axis || w.imag() > 0.0); }, opt);
        if (!res.converged || res.residual > 1e-11 * (1.0 + std::abs(z)))
            throw NumericError("inversion of z k(z) did not converge");
        return res.value;
    });
    HalfLineMeasure out = eta_measure(eta, m1, kInf, "Lambda_MB(" + mu.label + ")");
    out.sigma_fn = [m](cplx z) { return z == 0.0 ? cplx(1.0 / m.m1()) : z / m.eta(z); };
    return out;
}

bool sigma_halfline(const HalfLineMeasure& mu, cplx z, cplx& out) {
    if (mu.is_delta0()) return false;
    if (mu.has_closed_sigma()) {
        out = mu.sigma_closed(z);
        return finite(out);
    }
    const double m1 = mu.m1();
    if (z == 0.0) {
        out = 1.0 / m1;
        return true;
    }
    const int steps = 16;
    cplx w = 0.0;
    SolveOptions opt;
    opt.tol = 1e-14;
    try {
        for (int s = 1; s <= steps; ++s) {
            const cplx zs = z * (double(s) / steps);
            const cplx seed = s == 1 ? zs / m1 : w * (double(s) / (s - 1));
            auto res = newton_solve([&](cplx v) { return mu.eta(v) - zs; }, seed,
                                    [](cplx v) { return finite(v); }, opt);
            if (!res.converged || res.residual > 1e-12 * (1.0 + std::abs(zs))) return false;
            w = res.value;
        }
    } catch (const Error&) {
        return false;
    }
    out = w / z;
    return finite(out);
}

HalfLineMeasure uplus_power_halfline(const HalfLineMeasure& mu, double t) {
    if (!(t >= 0.0)) throw DomainError("Boolean power needs t >= 0");
    if (t == 0.0) return HalfLineMeasure::point(0.0);
    if (t == 1.0) return mu;
    const HalfLineMeasure m = mu;
    // For t <= 1, F_t = t F + (1 - t) z has no zeros off [0, R], so the support stays in [0, R].
    const double r = t <= 1.0 ? mu.support_radius() : kInf;
    return eta_measure([m, t](cplx z) { return t * m.eta(z); }, t * mu.m1(), r, mu.label + "^uplus");
}

HalfLineMeasure boxplus_power_halfline(const HalfLineMeasure& mu, double t) {
    if (!(t >= 1.0)) throw DomainError("additive free power on [0, inf) needs t >= 1");
    if (t == 1.0) return mu;
    const RealLineMeasure real = free_power(halfline_to_real(mu), t);
    double r = real.support_radius();
    if (!std::isfinite(r)) r = real.scale() * 16.0;
    const GridSpec grid{-(r + 1.0), -1e-6, 2000, 1e-8};
    const DensityResult d = stieltjes_density(real, grid);
    double neg = 0.0;
    const double h = (grid.x_max - grid.x_min) / (grid.count - 1);
    for (const auto& p : d.points) neg += p.density * h;
    for (const auto& a : d.atoms) neg += a.weight;
    if (neg > 1e-6)
        throw NumericError("additive free power leaves [0, inf): mass " + std::to_string(neg) + " on x < 0");
    HalfLineMeasure out = real_to_halfline(real, mu.label + "^boxplus");
    out.m1_value = t * mu.m1();
    // Compression bound: the support of mu^{boxplus t} lies in [0, t R].
    if (std::isfinite(mu.support_radius())) out.radius = std::min(out.radius, t * mu.support_radius());
    return out;
}

HalfLineMeasure dilate_halfline(const HalfLineMeasure& mu, double c) {
    if (!(c > 0.0)) throw DomainError("dilation factor must be positive");
    if (mu.rep == HalfRep::Atoms) {
        auto atoms = mu.atoms;
        for (auto& a : atoms) a.x *= c;
        return HalfLineMeasure::from_atoms(std::move(atoms), mu.label);
    }
    const HalfLineMeasure m = mu;
    const double r = mu.support_radius();
    return eta_measure([m, c](cplx z) { return m.eta(c * z); }, c * mu.m1(), r * c, "D(" + mu.label + ")");
}

SigmaEvidence sigma_positivity_halfline(const HalfLineMeasure& mu) {
    SigmaEvidence ev;
    const double r = mu.support_radius();
    // eta is analytic for |z| < 1/r, and eta^{-1} is reached on a smaller disc.
    const double reach = std::isfinite(r) && r > 0.0 ? 0.5 * mu.m1() / r : 0.5 * mu.m1();
    std::vector<cplx> upper, axis;
    for (double s : {0.1, 0.2, 0.4, 0.8}) {
        for (int j = 0; j < 8; ++j) upper.push_back(std::polar(s * reach, kPi * (j + 0.5) / 8.0));
        axis.push_back(-s * reach);
    }
    for (const cplx z : upper) {
        ++ev.points;
        cplx s;
        if (!sigma_halfline(mu, z, s) || s == 0.0) {
            ++ev.failures;
            continue;
        }
        const double im = std::log(s).imag();
        if (im > ev.max_im_log_sigma) {
            ev.max_im_log_sigma = im;
            ev.witness = z;
        }
    }
    for (const cplx z : axis) {
        ++ev.points;
        cplx s;
        if (!sigma_halfline(mu, z, s) || s == 0.0) {
            ++ev.failures;
            continue;
        }
        ev.max_im_on_axis = std::max(ev.max_im_on_axis, std::abs(std::log(s).imag()));
    }
    ev.ok = ev.failures == 0 && ev.max_im_log_sigma <= 1e-9 && ev.max_im_on_axis <= 1e-9;
    return ev;
}

namespace {

// The construction reaches only part of the upper half-plane (the rest lies past the cut of
// eta on the positive axis), so unreachable nodes are skipped as long as half are reached.
bool candidate_is_valid(const HalfLineMeasure& nu) {
    int reached = 0, total = 0;
    for (double r : {0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
        for (int j = 0; j < 16; ++j) {
            const cplx z = std::polar(r, kPi * (j + 0.5) / 16.0);
            ++total;
            cplx e;
            try {
                e = nu.eta(z);
            } catch (const Error&) {
                continue;
            }
            ++reached;
            if (e.imag() < -1e-9 * (1.0 + std::abs(e)) || std::arg(z) - std::arg(e) > 1e-9) return false;
            if (total % 7 == 0) {
                const double h = 1e-5 * (1.0 + std::abs(z));
                try {
                    const cplx dx = (nu.eta(z + h) - nu.eta(z - h)) / (2.0 * h);
                    const cplx dy = (nu.eta(z + kI * h) - nu.eta(z - kI * h)) / (2.0 * kI * h);
                    if (std::abs(dx - dy) > 1e-5 * (1.0 + std::abs(dx))) return false;
                } catch (const Error&) {
                }
            }
        }
    }
    return 2 * reached >= total;
}

}  // namespace

HalfLineMeasure mt_preimage_candidate(const HalfLineMeasure& mu, double t) {
    require_not_delta0(mu);
    if (t == 0.0 || (mu.rep == HalfRep::Atoms && mu.atoms.size() == 1)) return mu;
    const HalfLineMeasure m = mu;
    auto eta = conj_symmetric([m, t](cplx w) {
        if (w == 0.0) return cplx(0.0);
        // y solves y (eta(y)/y)^s = w, followed from s = 0 (y = w) to s = t inside the
        // upper half-plane; then eta_nu(w) = y (eta(y)/y)^{1+t}.
        SolveOptions opt;
        opt.tol = 1e-14;
        opt.max_iter = 40;
        const bool on_axis = w.imag() == 0.0;
        auto admissible = [on_axis](cplx y) { return y != 0.0 && (on_axis || y.imag() > 0.0); };
        const int base = 8 * static_cast<int>(std::ceil(std::max(1.0, t)));
        for (int steps = base; steps <= 4 * base; steps *= 4) {
            cplx y = w;
            bool ok = true;
            for (int k = 1; k <= steps && ok; ++k) {
                const double s = t * k / steps;
                try {
                    auto res = newton_solve([&](cplx v) { return v * std::exp(s * log_eta_ratio(m, v)) - w; }, y,
                                            admissible, opt);
                    ok = res.converged && res.residual < 1e-11 * (1.0 + std::abs(w)) &&
                         std::abs(res.value - y) < 0.25 * std::abs(y);
                    y = res.value;
                } catch (const Error&) {
                    ok = false;
                }
            }
            if (ok) return y * std::exp((1.0 + t) * log_eta_ratio(m, y));
        }
        throw NumericError("pre-image construction did not converge");
    });
    return eta_measure(eta, mu.m1(), kInf, "candidate(" + mu.label + ")");
}

IndicatorEstimate theta_indicator_halfline(const HalfLineMeasure& mu, double t_max, double tol_t) {
    if (!(t_max >= 1.0)) throw DomainError("t_max must be at least 1");
    if (!(tol_t > 0.0)) throw DomainError("tol_t must be positive");
    require_not_delta0(mu);
    IndicatorEstimate est;
    est.method = "pre-image-construction";
    est.notes.push_back("lower bound only: accepted t certify theta >= t; rejection does not bound theta above");

    const auto pts = halfline_grid();
    auto probe = [&](double t) {
        double dev = kInf;
        try {
            const HalfLineMeasure nu = mt_preimage_candidate(mu, t);
            if (candidate_is_valid(nu)) {
                const HalfLineMeasure back = mt_map_halfline(nu, t);
                double d = 0.0;
                int reached = 0;
                for (const cplx z : pts) {
                    try {
                        d = std::max(d, std::abs(back.eta(z) - mu.eta(z)));
                        ++reached;
                    } catch (const NumericError&) {
                    }
                }
                if (2 * reached >= static_cast<int>(pts.size())) dev = d;
            }
        } catch (const Error&) {
            dev = kInf;
        }
        est.probes.emplace_back(t, dev);
        return dev <= 1e-7;
    };

    double lower = 0.0, upper = kInf;
    if (probe(1.0)) {
        lower = 1.0;
        for (double t = 2.0; t <= t_max; t *= 2.0) {
            if (probe(t)) {
                lower = t;
            } else {
                upper = t;
                break;
            }
        }
    } else {
        upper = 1.0;
        for (double t = 0.5; t >= 1.0 / 1024.0; t *= 0.5) {
            if (probe(t)) {
                lower = t;
                break;
            }
            upper = t;
        }
    }
    while (std::isfinite(upper) && upper - lower > tol_t) {
        const double mid = 0.5 * (lower + upper);
        if (probe(mid)) lower = mid;
        else upper = mid;
    }
    est.lower = lower;
    est.upper = upper;
    return est;
}

}  // namespace freeprob
