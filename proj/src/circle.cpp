#include "freeprob/circle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

#include "freeprob/transforms.hpp"

namespace freeprob {

int bracket(double phi) {
    if (std::abs(phi) < kPi) return 0;
    if (phi >= kPi) return static_cast<int>(std::floor(phi / kPi));
    return static_cast<int>(std::ceil(phi / kPi));
}

double principal_arg_m1(const CircleMeasure& mu) {
    const cplx m = mu.m1();
    if (std::abs(m) < 1e-300) throw DomainError("first moment vanishes; argument undefined");
    const double a = std::arg(m);
    if (std::abs(std::abs(a) - kPi) < 1e-12)
        throw BranchError("arg m1 = pi lies on the branch boundary; pass an explicit argument choice");
    return a;
}

double recorded_arg_m1(const CircleMeasure& mu) {
    if (mu.arg_m1) return *mu.arg_m1;
    return principal_arg_m1(mu);
}

double arg_for_branch(const CircleMeasure& mu, int n) {
    double base;
    if (mu.arg_m1) {
        // Reduce the recorded argument to the principal sheet.
        base = std::remainder(*mu.arg_m1, 2.0 * kPi);
        if (std::abs(std::abs(base) - kPi) < 1e-12)
            throw BranchError("arg m1 = pi lies on the branch boundary; pass an explicit argument choice");
    } else {
        base = principal_arg_m1(mu);
    }
    return base + 2.0 * kPi * n;
}

namespace {

cplx k_at(const CircleMeasure& mu, cplx z) {
    if (z == 0.0) return 1.0 / mu.m1();
    const cplx e = mu.eta(z);
    if (std::abs(e) < 1e-300) throw BranchError("eta vanishes inside the disc; measure is not Boolean infinitely divisible");
    return z / e;
}

void check_arg_choice(double phi, double base) {
    const double k = (phi - base) / (2.0 * kPi);
    if (std::abs(k - std::round(k)) > 1e-9)
        throw DomainError("argument choice is not congruent to arg m1 modulo 2 pi");
}

// Continuation of log k along the ray from 0 to z.
cplx radial_log_k(const CircleMeasure& mu, cplx z, cplx at_zero) {
    const double r = std::abs(z);
    if (r == 0.0) return at_zero;
    const cplx dir = z / r;
    double s = 0.0;
    double h = 0.125;
    cplx val = at_zero;
    while (s < r) {
        const double s1 = std::min(s + h, r);
        const cplx p = std::log(k_at(mu, s1 * dir));
        const double turns = std::round((val.imag() - p.imag()) / (2.0 * kPi));
        const cplx cand = p + cplx(0.0, 2.0 * kPi * turns);
        if (std::abs(cand - val) > kPi / 4) {
            h *= 0.5;
            if (h < 1e-9) throw BranchError("log k cannot be continued along the ray (zero of eta)");
            continue;
        }
        val = cand;
        s = s1;
        h = std::min(2.0 * h, 0.125);
    }
    return val;
}

CircleMeasure haar_like(const CircleMeasure& mu) {
    CircleMeasure h = CircleMeasure::haar();
    h.label = mu.label;
    return h;
}

}  // namespace

CFun lift_log_k(const CircleMeasure& mu, double phi) {
    if (mu.is_haar()) throw DomainError("k is undefined for Haar measure");
    const cplx m = mu.m1();
    if (std::abs(m) < 1e-300) throw DomainError("first moment vanishes; argument undefined");
    if (mu.logk_fn) {
        const double base = -mu.logk_fn(0.0).imag();
        check_arg_choice(phi, base);
        const CFun f = mu.logk_fn;
        const double shift = phi - base;
        return [f, shift](cplx z) { return f(z) - kI * shift; };
    }
    check_arg_choice(phi, std::arg(m));
    const cplx at_zero(-std::log(std::abs(m)), -phi);
    const CircleMeasure c = mu;
    return [c, at_zero](cplx z) { return radial_log_k(c, z, at_zero); };
}

namespace {

double arg_increment(const CircleMeasure& mu, double r, double a0, double a1, cplx k0, cplx k1, int depth) {
    const double d = std::arg(k1 / k0);
    if ((std::abs(d) < kPi / 8 && std::abs(k1 - k0) < 0.5 * std::min(std::abs(k0), std::abs(k1))) || depth > 40)
        return d;
    const double am = 0.5 * (a0 + a1);
    const cplx km = k_at(mu, std::polar(r, am));
    return arg_increment(mu, r, a0, am, k0, km, depth + 1) + arg_increment(mu, r, am, a1, km, k1, depth + 1);
}

}  // namespace

int winding_of_k(const CircleMeasure& mu, double r) {
    const int n = 2048;
    double total = 0.0;
    cplx prev = k_at(mu, r);
    for (int j = 1; j <= n; ++j) {
        const double a0 = 2.0 * kPi * (j - 1) / n, a1 = 2.0 * kPi * j / n;
        const cplx cur = k_at(mu, std::polar(r, a1));
        total += arg_increment(mu, r, a0, a1, prev, cur, 0);
        prev = cur;
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

BranchLog branch_log(const CircleMeasure& mu, int n) {
    if (mu.is_haar()) throw DomainError("branch logarithm undefined for Haar measure");
    if (!mu.logk_fn) {
        const int w = winding_of_k(mu);
        if (w != 0)
            throw BranchError("k winds around 0 (eta has zeros in the disc); measure is not Boolean infinitely divisible");
    }
    BranchLog b;
    b.n = n;
    b.phi = arg_for_branch(mu, n);
    b.u = lift_log_k(mu, b.phi);
    return b;
}

CircleMeasure boolean_power_circle_arg(const CircleMeasure& mu, double t, double phi) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("Boolean power needs t >= 0");
    if (mu.is_haar()) return haar_like(mu);
    if (t == 0.0) return CircleMeasure::point(0.0);
    const CFun u = lift_log_k(mu, phi);
    CircleMeasure out;
    out.rep = CircleRep::Eta;
    out.label = mu.label + "^utimes";
    out.eta_fn = [u, t](cplx z) { return z * std::exp(-t * u(z)); };
    out.logk_fn = [u, t](cplx z) { return t * u(z); };
    out.m1_value = std::exp(-t * u(0.0));
    out.arg_m1 = t * phi;
    return out;
}

CircleMeasure boolean_power_circle(const CircleMeasure& mu, double t, int n) {
    if (mu.is_haar()) return haar_like(mu);
    const BranchLog b = branch_log(mu, n);
    return boolean_power_circle_arg(mu, t, b.phi);
}

CFun circle_subordination(const CircleMeasure& mu, double t, double phi) {
    if (!(t >= 1.0)) throw DomainError("free power needs t >= 1");
    const CFun u = lift_log_k(mu, phi);
    return [u, t](cplx z) {
        if (z == 0.0) return cplx(0.0);
        const double rz = std::abs(z);
        auto T = [&](cplx w) { return z * std::exp(-(t - 1.0) * u(w)); };
        auto admissible = [rz](cplx w) { return std::abs(w) <= rz * (1.0 + 1e-12); };
        cplx w = z;
        auto res = fixed_point_solve(
            [&](cplx v) {
                cplx nv = T(v);
                if (std::abs(nv) > rz) nv *= rz / std::abs(nv);
                return nv;
            },
            w, admissible, 300, 1e-13);
        if (!res.converged || std::abs(T(res.value) - res.value) > 1e-10)
            throw NumericError("circle subordination did not converge");
        return res.value;
    };
}

CircleMeasure free_power_circle_arg(const CircleMeasure& mu, double t, double phi) {
    if (!(t >= 1.0) || !std::isfinite(t)) throw DomainError("free power on the circle needs t >= 1");
    if (mu.is_haar()) return haar_like(mu);
    const CFun u = lift_log_k(mu, phi);
    if (t == 1.0) {
        CircleMeasure out = mu;
        out.arg_m1 = phi;
        out.logk_fn = u;
        return out;
    }
    const CFun omega = circle_subordination(mu, t, phi);
    const CircleMeasure m = mu;
    CircleMeasure out;
    out.rep = CircleRep::Eta;
    out.label = mu.label + "^boxtimes";
    out.eta_fn = [m, omega](cplx z) { return m.eta(omega(z)); };
    out.logk_fn = [u, omega, t](cplx z) { return t * u(omega(z)); };
    out.m1_value = std::exp(-t * u(0.0));
    out.arg_m1 = t * phi;
    return out;
}

CircleMeasure free_power_circle(const CircleMeasure& mu, double t, int n) {
    if (mu.is_haar()) return haar_like(mu);
    const BranchLog b = branch_log(mu, n);
    return free_power_circle_arg(mu, t, b.phi);
}

CircleMeasure mt_map_circle_arg(const CircleMeasure& mu, double t, double phi) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("semigroup time must be >= 0");
    if (mu.is_haar()) return haar_like(mu);
    if (t == 0.0) return free_power_circle_arg(mu, 1.0, phi);
    const double s = t + 1.0;
    CircleMeasure out = boolean_power_circle_arg(free_power_circle_arg(mu, s, phi), 1.0 / s, s * phi);
    out.label = "M_t(" + mu.label + ")";
    out.arg_m1 = phi;
    return out;
}

CircleMeasure mt_map_circle(const CircleMeasure& mu, double t, int n) {
    if (mu.is_haar()) return haar_like(mu);
    const BranchLog b = branch_log(mu, n);
    return mt_map_circle_arg(mu, t, b.phi);
}

CircleMeasure lambda_mb_circle(const CircleMeasure& mu) {
    if (mu.is_haar()) return haar_like(mu);
    const cplx m1 = mu.m1();
    if (std::abs(m1) < 1e-300) throw DomainError("first moment vanishes");
    const CircleMeasure m = mu;
    CFun kfun = [m](cplx z) { return k_at(m, z); };
    CFun eta = [m, m1](cplx z) {
        if (z == 0.0) return cplx(0.0);
        SolveOptions opt;
        opt.tol = 1e-14;
        auto res = newton_solve([&](cplx w) { return w * k_at(m, w) - z; }, z * m1,
                                [](cplx w) { return std::abs(w) < 1.0; }, opt);
        if (!res.converged || res.residual > 1e-11 * (1.0 + std::abs(z)))
            throw NumericError("inversion of z k(z) did not converge");
        return res.value;
    };
    CircleMeasure out;
    out.rep = CircleRep::Eta;
    out.label = "Lambda_MB(" + mu.label + ")";
    out.eta_fn = eta;
    out.sigma_fn = kfun;
    out.m1_value = m1;
    double phi = 0.0;
    bool have_phi = true;
    try {
        phi = recorded_arg_m1(mu);
    } catch (const BranchError&) {
        have_phi = false;
    }
    if (have_phi) {
        out.arg_m1 = phi;
        const CFun u = lift_log_k(mu, phi);
        out.logk_fn = [u, eta](cplx z) { return u(eta(z)); };
    }
    return out;
}

std::vector<cplx> disc_grid(int angles) {
    std::vector<cplx> pts;
    for (double r : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95})
        for (int j = 0; j < angles; ++j) pts.push_back(std::polar(r, 2.0 * kPi * j / angles));
    return pts;
}

bool sigma_circle(const CircleMeasure& mu, cplx z, cplx& out) {
    if (mu.is_haar()) return false;
    if (mu.sigma_fn) {
        out = mu.sigma_fn(z);
        return finite(out);
    }
    if (mu.rep == CircleRep::Poisson || z == 0.0) {
        out = 1.0 / mu.m1();
        return true;
    }
    const cplx m1 = mu.m1();
    const int steps = 16;
    cplx w = 0.0;
    SolveOptions opt;
    opt.tol = 1e-14;
    try {
        for (int s = 1; s <= steps; ++s) {
            const cplx zs = z * (double(s) / steps);
            const cplx seed = s == 1 ? zs / m1 : w * (double(s) / (s - 1));
            auto res = newton_solve([&](cplx v) { return mu.eta(v) - zs; }, seed,
                                    [](cplx v) { return std::abs(v) < 1.5; }, opt);
            if (!res.converged || res.residual > 1e-11) return false;
            w = res.value;
        }
    } catch (const Error&) {
        return false;
    }
    out = w / z;
    return finite(out);
}

namespace {

// Taylor coefficients of log Sigma from samples on |z| = rho; false if Sigma is not
// evaluable on the whole circle.
bool log_sigma_coefficients(const CircleMeasure& mu, double rho, int count, std::vector<cplx>& coef) {
    const int m = 128;
    std::vector<cplx> v(m);
    double prev_im = 0.0;
    for (int j = 0; j < m; ++j) {
        cplx s;
        if (!sigma_circle(mu, std::polar(rho, 2.0 * kPi * j / m), s) || std::abs(s) == 0.0) return false;
        cplx l = std::log(s);
        if (j > 0) l.imag(l.imag() + 2.0 * kPi * std::round((prev_im - l.imag()) / (2.0 * kPi)));
        prev_im = l.imag();
        v[j] = l;
    }
    if (std::abs(v[m - 1].imag() - v[0].imag()) > kPi) return false;
    coef.assign(count, 0.0);
    for (int k = 0; k < count; ++k) {
        cplx acc = 0.0;
        for (int j = 0; j < m; ++j) acc += v[j] * std::polar(1.0, -2.0 * kPi * k * j / m);
        coef[k] = acc / double(m) / std::pow(rho, k);
    }
    return true;
}

}  // namespace

MidReport is_mid_circle(const CircleMeasure& mu) {
    MidReport rep;
    if (mu.is_haar() || mu.rep == CircleRep::Poisson) {
        rep.mid = true;
        return rep;
    }
    const auto pts = disc_grid();
    rep.points = static_cast<int>(pts.size());
    for (const cplx z : pts) {
        cplx s;
        if (!sigma_circle(mu, z, s) || std::abs(s) == 0.0) {
            ++rep.failures;
            continue;
        }
        const double v = std::log(std::abs(s));
        if (v < rep.min_log_abs_sigma) {
            rep.min_log_abs_sigma = v;
            rep.witness = z;
        }
    }
    if (rep.min_log_abs_sigma < -1e-7) {
        rep.mid = false;
        return rep;
    }

    // Largest sampling radius on which Sigma is reachable; the coefficient count keeps
    // the amplified round-off rho^{-k} * 1e-14 below 1e-7.
    std::vector<cplx> coef;
    for (double rho : {0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1}) {
        const int count = std::clamp(static_cast<int>(std::log(1e7) / std::log(1.0 / rho)), 4, 32);
        if (log_sigma_coefficients(mu, rho, count, coef)) {
            rep.coeff_radius = rho;
            rep.coeff_count = count;
            break;
        }
    }
    if (rep.coeff_count == 0) {
        rep.inconclusive = true;
        rep.mid = false;
        return rep;
    }
    const int n = rep.coeff_count;
    const double c0 = coef[0].real();
    Eigen::MatrixXcd T(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx c = i == j ? cplx(c0) : 0.5 * coef[std::abs(i - j)];
            T(i, j) = i >= j ? c : std::conj(c);
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T, Eigen::EigenvaluesOnly);
    rep.toeplitz_min_eig = es.eigenvalues().minCoeff();
    rep.mid = rep.toeplitz_min_eig >= -1e-7 * (1.0 + std::abs(c0));
    return rep;
}

IndicatorEstimate theta_indicator_circle(const CircleMeasure& mu, int n, double t_max, double tol_t) {
    if (!(t_max >= 1.0)) throw DomainError("t_max must be at least 1");
    if (!(tol_t > 0.0)) throw DomainError("tol_t must be positive");
    IndicatorEstimate est;
    est.method = "boolean-bisection";
    if (mu.is_haar()) {
        est.lower = t_max;
        est.upper = kInf;
        est.notes.push_back("Haar measure: every power is Haar");
        return est;
    }
    const BranchLog b = branch_log(mu, n);
    auto probe = [&](double t) {
        const MidReport r = is_mid_circle(boolean_power_circle_arg(mu, t, b.phi));
        const double viol = std::isfinite(r.min_log_abs_sigma) ? std::max(0.0, -r.min_log_abs_sigma) : 0.0;
        est.probes.emplace_back(t, viol);
        if (r.inconclusive) {
            est.inconclusive = true;
            est.notes.push_back("inconclusive probe at t = " + std::to_string(t) + " treated as a failure");
        }
        return r.mid;
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
