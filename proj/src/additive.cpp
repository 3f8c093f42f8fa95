#include "freeprob/additive.hpp"

#include <algorithm>

namespace freeprob {

namespace {

double bt_radius_boolean(double r, double t) { return r * (1.0 + t + std::sqrt(t)); }
double bt_radius_free(double r, double t) { return r * (1.0 + t + 2.0 * std::sqrt(t)); }

std::vector<cplx> sample_points(double scale) {
    std::vector<cplx> pts;
    for (int i = 0; i < 10; ++i) {
        const double x = scale * (-3.0 + 6.0 * i / 9.0);
        for (double y : {0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.5, 4.0}) pts.emplace_back(x, y * scale);
    }
    return pts;
}

cplx solve_omega(const RealLineMeasure& mu, double t, cplx z) {
    const double c = 1.0 - 1.0 / t;
    auto res = fixed_point_solve([&](cplx w) { return z / t + c * mu.F(w); }, z, upper_half, 300, 1e-13);
    if (!res.converged) throw NumericError("subordination fixed point did not converge");
    return res.value;
}

}  // namespace

JacobiRep expand_jacobi(const JacobiRep& j) {
    JacobiRep out = j;
    if (out.beta.size() == 1) {
        if (out.periodic) {
            out.beta.push_back(out.beta[0]);
            out.gamma.push_back(out.gamma[0]);
        }
    }
    return out;
}

SubordinationSolution subordination(const RealLineMeasure& mu, double t) {
    if (!(t >= 1.0)) throw DomainError("subordination needs t >= 1");
    SubordinationSolution s;
    s.t = t;
    const RealLineMeasure m = mu;
    s.omega = [m, t](cplx z) {
        if (z.imag() < 0.0) return std::conj(solve_omega(m, t, std::conj(z)));
        return solve_omega(m, t, z);
    };
    const double c = 1.0 - 1.0 / t;
    double sup = 0.0;
    for (const cplx z : sample_points(mu.scale())) {
        const cplx w = s.omega(z);
        sup = std::max(sup, std::abs(w - z / t - c * mu.F(w)) / (1.0 + std::abs(z)));
    }
    s.residual_sup = sup;
    if (sup > 1e-10) throw NumericError("subordination residual exceeds 1e-10");
    return s;
}

RealLineMeasure boolean_power(const RealLineMeasure& mu, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("Boolean power needs t >= 0");
    if (t == 1.0) return mu;
    if (t == 0.0) return RealLineMeasure::point(0.0);
    const std::string label = mu.label + "^uplus";
    switch (mu.rep) {
        case RealRep::Atoms:
            if (mu.is_point()) return RealLineMeasure::point(t * mu.atoms.front().x);
            {
                JacobiRep j = jacobi_from_atoms(mu.atoms);
                j.beta[0] *= t;
                j.gamma[0] *= t;
                return RealLineMeasure::from_jacobi(std::move(j), label);
            }
        case RealRep::ClosedForm:
            switch (mu.family) {
                case RealFamily::Point: return RealLineMeasure::point(t * mu.a);
                case RealFamily::Cauchy: return RealLineMeasure::cauchy(t * mu.a, t * mu.b);
                case RealFamily::HalfStable: {
                    RealLineMeasure out = RealLineMeasure::half_stable(t * mu.coef);
                    out.label = label;
                    return out;
                }
            }
            break;
        case RealRep::Jacobi: {
            JacobiRep j = expand_jacobi(mu.jacobi);
            j.beta[0] *= t;
            j.gamma[0] *= t;
            return RealLineMeasure::from_jacobi(std::move(j), label);
        }
        case RealRep::Transform: break;
    }
    const RealLineMeasure m = mu;
    CFun F = [m, t](cplx z) { return (1.0 - t) * z + t * m.F(z); };
    return RealLineMeasure::from_transform(F, nullptr, bt_radius_boolean(mu.support_radius(), t),
                                           std::max(1.0, t) * mu.scale(), label);
}

RealLineMeasure free_power(const RealLineMeasure& mu, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("free power needs t >= 0");
    if (t == 1.0) return mu;
    if (t == 0.0) return RealLineMeasure::point(0.0);
    const std::string label = mu.label + "^boxplus";
    if (mu.is_point()) {
        const double a = mu.rep == RealRep::Jacobi ? mu.jacobi.beta[0]
                         : mu.rep == RealRep::Atoms ? mu.atoms.front().x
                                                    : mu.a;
        return RealLineMeasure::point(t * a);
    }
    if (mu.rep == RealRep::ClosedForm && mu.family == RealFamily::Cauchy)
        return RealLineMeasure::cauchy(t * mu.a, t * mu.b);
    if (mu.rep == RealRep::Jacobi && mu.jacobi.is_free_meixner()) {
        const JacobiHead h = mu.jacobi.head();
        const double g1 = h.gamma1 - h.gamma0 + h.gamma0 * t;
        if (g1 < -1e-14 * (1.0 + h.gamma1))
            throw DomainError("free power t < 1 leaves the free Meixner class (negative gamma)");
        JacobiRep j{{h.beta0 * t, h.beta1 - h.beta0 + h.beta0 * t}, {h.gamma0 * t, std::max(g1, 0.0)}, true};
        return RealLineMeasure::from_jacobi(std::move(j), label);
    }
    const RealLineMeasure m = mu;
    const bool has_phi = mu.has_closed_phi();
    CFun phi;
    if (has_phi) phi = [m, t](cplx z) { return t * m.phi_closed(z); };
    const double radius = bt_radius_free(mu.support_radius(), t);
    const double scale = std::max(1.0, t) * mu.scale();
    if (t < 1.0) {
        if (!has_phi)
            throw UnsupportedError("free power with t < 1 needs a Levy-Khintchine or closed-form phi");
        CFun F = [phi](cplx z) { return solve_w_plus_tphi(phi, 1.0, z); };
        return RealLineMeasure::from_transform(F, phi, radius, scale, label);
    }
    auto sub = subordination(mu, t);
    CFun omega = sub.omega;
    CFun F = [m, omega](cplx z) { return m.F(omega(z)); };
    return RealLineMeasure::from_transform(F, phi, radius, scale, label);
}

namespace {

// At time 1 the Voiculescu transform of the output is the energy function K of the input.
void attach_lambda_b_phi(RealLineMeasure& out, const RealLineMeasure& mu, double t) {
    if (t != 1.0 || out.rep != RealRep::Transform || out.phi_fn) return;
    const RealLineMeasure m = mu;
    out.phi_fn = [m](cplx z) { return m.K(z); };
}

}  // namespace

RealLineMeasure bt_map(const RealLineMeasure& mu, double t, BtPath path) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("bt_map needs t >= 0");
    if (t == 0.0) return mu;
    if (path == BtPath::Compose) {
        RealLineMeasure out = boolean_power(free_power(mu, 1.0 + t), 1.0 / (1.0 + t));
        out.label = "B_t(" + mu.label + ")";
        attach_lambda_b_phi(out, mu, t);
        return out;
    }
    auto sub = subordination(mu, 1.0 + t);
    CFun omega = sub.omega;
    CFun F = [omega, t](cplx z) { return omega(z) / t + (1.0 - 1.0 / t) * z; };
    const double r = mu.support_radius();
    RealLineMeasure out = RealLineMeasure::from_transform(
        F, nullptr, bt_radius_boolean(bt_radius_free(r, 1.0 + t), 1.0), (1.0 + t) * mu.scale(),
        "B_t(" + mu.label + ")");
    attach_lambda_b_phi(out, mu, t);
    return out;
}

RealLineMeasure lambda_b(const RealLineMeasure& mu) { return bt_map(mu, 1.0); }

RealLineMeasure translate(const RealLineMeasure& mu, double a, ShiftMode mode) {
    if (!std::isfinite(a)) throw DomainError("shift must be finite");
    if (a == 0.0) return mu;
    const std::string label = mu.label + (mode == ShiftMode::Free ? "+free" : "+bool");
    if (mu.is_point()) return RealLineMeasure::point(mu.center() + a);
    switch (mu.rep) {
        case RealRep::Atoms:
            if (mode == ShiftMode::Free) {
                auto atoms = mu.atoms;
                for (auto& at : atoms) at.x += a;
                return RealLineMeasure::from_atoms(std::move(atoms), label);
            } else {
                JacobiRep j = jacobi_from_atoms(mu.atoms);
                j.beta[0] += a;
                return RealLineMeasure::from_jacobi(std::move(j), label);
            }
        case RealRep::ClosedForm:
            if (mu.family == RealFamily::Cauchy) return RealLineMeasure::cauchy(mu.a + a, mu.b);
            break;
        case RealRep::Jacobi: {
            JacobiRep j = expand_jacobi(mu.jacobi);
            if (mode == ShiftMode::Free) {
                for (double& b : j.beta) b += a;
            } else {
                j.beta[0] += a;
            }
            return RealLineMeasure::from_jacobi(std::move(j), label);
        }
        case RealRep::Transform: break;
    }
    const RealLineMeasure m = mu;
    const double radius = mu.support_radius() + std::abs(a);
    if (mode == ShiftMode::Free) {
        CFun F = [m, a](cplx z) { return m.F(z - a); };
        CFun phi;
        if (mu.has_closed_phi()) phi = [m, a](cplx z) { return m.phi_closed(z) + a; };
        return RealLineMeasure::from_transform(F, phi, radius, mu.scale() + std::abs(a), label);
    }
    CFun F = [m, a](cplx z) { return m.F(z) - a; };
    return RealLineMeasure::from_transform(F, nullptr, radius, mu.scale() + std::abs(a), label);
}

RealLineMeasure dilate(const RealLineMeasure& mu, double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("dilation needs s > 0");
    if (s == 1.0) return mu;
    const std::string label = "D(" + mu.label + ")";
    switch (mu.rep) {
        case RealRep::Atoms: {
            auto atoms = mu.atoms;
            for (auto& at : atoms) at.x *= s;
            return RealLineMeasure::from_atoms(std::move(atoms), label);
        }
        case RealRep::ClosedForm:
            switch (mu.family) {
                case RealFamily::Point: return RealLineMeasure::point(s * mu.a);
                case RealFamily::Cauchy: return RealLineMeasure::cauchy(s * mu.a, s * mu.b);
                case RealFamily::HalfStable: {
                    RealLineMeasure out = RealLineMeasure::half_stable(std::sqrt(s) * mu.coef);
                    out.label = label;
                    return out;
                }
            }
            break;
        case RealRep::Jacobi: {
            JacobiRep j = mu.jacobi;
            for (double& b : j.beta) b *= s;
            for (double& g : j.gamma) g *= s * s;
            return RealLineMeasure::from_jacobi(std::move(j), label);
        }
        case RealRep::Transform: break;
    }
    const RealLineMeasure m = mu;
    CFun F = [m, s](cplx z) { return s * m.F(z / s); };
    CFun phi;
    if (mu.has_closed_phi()) phi = [m, s](cplx z) { return s * m.phi_closed(z / s); };
    return RealLineMeasure::from_transform(F, phi, s * mu.support_radius(), s * mu.scale(), label);
}

}  // namespace freeprob
