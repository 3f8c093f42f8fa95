#include "freeprob/measure.hpp"

#include <algorithm>
#include <numeric>

#include "freeprob/transforms.hpp"

namespace freeprob {

namespace {

double param(const Params& p, const std::string& key, double dflt) {
    auto it = p.find(key);
    return it == p.end() ? dflt : it->second;
}

void check_keys(const Params& p, std::initializer_list<const char*> allowed,
                const std::string& family) {
    for (const auto& [k, v] : p) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw DomainError("unknown parameter '" + k + "' for family " + family);
        if (!std::isfinite(v)) throw DomainError("non-finite parameter '" + k + "'");
    }
}

bool meixner_params(const JacobiRep& j, JacobiHead& h) {
    const auto n = j.beta.size();
    if (n == 0 || j.gamma.size() != n) return false;
    if (j.periodic) {
        if (n == 1) {
            h = {j.beta[0], j.gamma[0], j.beta[0], j.gamma[0]};
            return true;
        }
        if (n == 2) {
            h = {j.beta[0], j.gamma[0], j.beta[1], j.gamma[1]};
            return true;
        }
        return false;
    }
    if (n == 1) {
        h = {j.beta[0], 0.0, j.beta[0], 0.0};
        return true;
    }
    if (n == 2) {
        h = {j.beta[0], j.gamma[0], j.beta[1], 0.0};
        return true;
    }
    return false;
}

// Loose bound on the support radius of a measure with Levy data (gamma, tau).
double levy_radius_bound(double gamma, const LevyMeasure& tau) {
    double r_tau = 0.0;
    for (const auto& a : tau.atoms) r_tau = std::max(r_tau, std::abs(a.x));
    if (!tau.density.empty()) r_tau = std::max({r_tau, std::abs(tau.lo), std::abs(tau.hi)});
    const double mass = tau.integrate([](double x) { return cplx(1.0 + x * x); }).real();
    const double mean = tau.integrate([](double x) { return cplx(x); }).real();
    return std::abs(gamma - mean) + r_tau + 2.0 * std::sqrt(mass) + mass;
}

}  // namespace

// ------------------------------------------------------------- LevyMeasure

LevyMeasure LevyMeasure::point(double x, double w) {
    LevyMeasure m;
    m.atoms.push_back({x, w});
    return m;
}

LevyMeasure LevyMeasure::uniform(double lo, double hi, double mass, int nodes) {
    if (!(hi > lo) || nodes < 2048) throw DomainError("uniform Levy density needs hi > lo and >= 2048 nodes");
    LevyMeasure m;
    m.lo = lo;
    m.hi = hi;
    m.density.assign(static_cast<size_t>(nodes), mass / (hi - lo));
    return m;
}

double LevyMeasure::total_mass() const {
    return integrate([](double) { return cplx(1.0); }).real();
}

cplx LevyMeasure::integrate(const std::function<cplx(double)>& f) const {
    cplx s = 0.0;
    for (const auto& a : atoms) s += a.w * f(a.x);
    if (density.size() >= 2) {
        const size_t n = density.size();
        const double h = (hi - lo) / static_cast<double>(n - 1);
        cplx acc = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double wt = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
            acc += wt * density[i] * f(lo + h * static_cast<double>(i));
        }
        s += h * acc;
    }
    return s;
}

cplx levy_additive_integral(double gamma, const LevyMeasure& tau, cplx z) {
    return gamma + tau.integrate([z](double x) { return (1.0 + x * z) / (z - x); });
}

// ---------------------------------------------------------------- JacobiRep

bool JacobiRep::is_free_meixner() const {
    JacobiHead h;
    return meixner_params(*this, h);
}

JacobiHead JacobiRep::head() const {
    JacobiHead h;
    if (!meixner_params(*this, h)) {
        h = {beta.at(0), gamma.at(0), beta.at(1), gamma.at(1)};
    }
    if (h.gamma0 == 0.0) h.gamma1 = 0.0;
    return h;
}

JacobiRep jacobi_from_atoms(const std::vector<Atom>& atoms) {
    if (atoms.empty()) throw DomainError("empty atom list");
    double total = 0.0;
    for (const auto& a : atoms) {
        if (!(a.w >= 0.0)) throw DomainError("negative atom weight");
        total += a.w;
    }
    if (!(total > 0.0)) throw DomainError("atoms carry no mass");
    const size_t n = atoms.size();
    std::vector<double> p_prev(n, 0.0), p(n, 1.0), w(n);
    for (size_t i = 0; i < n; ++i) w[i] = atoms[i].w / total;
    JacobiRep j;
    j.periodic = false;
    double norm_prev = 1.0;
    double norm = 1.0;
    double gamma_prev = 0.0;
    for (size_t level = 0; level < n; ++level) {
        double num = 0.0;
        for (size_t i = 0; i < n; ++i) num += w[i] * atoms[i].x * p[i] * p[i];
        const double beta = num / norm;
        std::vector<double> p_next(n);
        for (size_t i = 0; i < n; ++i)
            p_next[i] = (atoms[i].x - beta) * p[i] - gamma_prev * p_prev[i];
        double norm_next = 0.0;
        for (size_t i = 0; i < n; ++i) norm_next += w[i] * p_next[i] * p_next[i];
        const double gamma = norm_next / norm;
        j.beta.push_back(beta);
        const bool last = level + 1 == n || gamma <= 1e-13 * (1.0 + std::abs(beta) * std::abs(beta));
        j.gamma.push_back(last ? 0.0 : gamma);
        if (last) break;
        p_prev = p;
        p = p_next;
        norm_prev = norm;
        norm = norm_next;
        gamma_prev = gamma;
    }
    (void)norm_prev;
    return j;
}

// ---------------------------------------------------------- RealLineMeasure

RealLineMeasure RealLineMeasure::from_atoms(std::vector<Atom> atoms, std::string label) {
    if (atoms.empty()) throw DomainError("empty atom list");
    double total = 0.0;
    for (const auto& a : atoms) {
        if (!(a.w > 0.0) || !std::isfinite(a.x)) throw DomainError("atoms need finite locations and positive weights");
        total += a.w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("atom weights must sum to 1");
    for (auto& a : atoms) a.w /= total;
    RealLineMeasure m;
    m.rep = RealRep::Atoms;
    m.atoms = std::move(atoms);
    m.label = std::move(label);
    return m;
}

RealLineMeasure RealLineMeasure::point(double a) {
    RealLineMeasure m;
    m.rep = RealRep::ClosedForm;
    m.family = RealFamily::Point;
    m.a = a;
    m.label = "point";
    return m;
}

RealLineMeasure RealLineMeasure::cauchy(double a, double b) {
    if (!(b > 0.0)) throw DomainError("Cauchy width must be positive");
    RealLineMeasure m;
    m.rep = RealRep::ClosedForm;
    m.family = RealFamily::Cauchy;
    m.a = a;
    m.b = b;
    m.label = "cauchy";
    return m;
}

RealLineMeasure RealLineMeasure::half_stable(cplx coef) {
    const double arg = std::arg(coef);
    if (std::abs(coef) == 0.0 || arg < -1e-12 || arg > kPi / 2 + 1e-12)
        throw DomainError("half-stable coefficient needs 0 <= arg <= pi/2");
    RealLineMeasure m;
    m.rep = RealRep::ClosedForm;
    m.family = RealFamily::HalfStable;
    m.coef = coef;
    m.label = "half_stable";
    return m;
}

RealLineMeasure RealLineMeasure::from_jacobi(JacobiRep j, std::string label) {
    if (j.beta.empty() || j.beta.size() != j.gamma.size())
        throw DomainError("Jacobi parameters need equally long, non-empty beta and gamma");
    for (double g : j.gamma)
        if (!(g >= 0.0)) throw DomainError("Jacobi gamma must be non-negative");
    RealLineMeasure m;
    m.rep = RealRep::Jacobi;
    m.jacobi = std::move(j);
    m.label = std::move(label);
    return m;
}

RealLineMeasure RealLineMeasure::from_transform(CFun F, CFun phi, double radius, double scale,
                                                std::string label) {
    RealLineMeasure m;
    m.rep = RealRep::Transform;
    m.F_fn = std::move(F);
    m.phi_fn = std::move(phi);
    m.radius = radius;
    m.scale_hint = scale;
    m.label = std::move(label);
    return m;
}

cplx RealLineMeasure::F(cplx z) const {
    if (z.imag() < 0.0) return std::conj(F(std::conj(z)));
    switch (rep) {
        case RealRep::Atoms: {
            cplx g = 0.0;
            for (const auto& at : atoms) g += at.w / (z - at.x);
            return require_finite(1.0 / g, "F of atoms");
        }
        case RealRep::ClosedForm:
            switch (family) {
                case RealFamily::Point: return z - a;
                case RealFamily::Cauchy: return z - a + kI * b;
                case RealFamily::HalfStable: return z + coef * std::sqrt(z);
            }
            break;
        case RealRep::Jacobi: return require_finite(1.0 / jacobi_G(jacobi, z), "F of Jacobi measure");
        case RealRep::Transform: return require_finite(F_fn(z), "F transform");
    }
    throw UnsupportedError("unknown representation");
}

bool RealLineMeasure::is_point() const {
    if (rep == RealRep::ClosedForm) return family == RealFamily::Point;
    if (rep == RealRep::Atoms) {
        for (const auto& at : atoms)
            if (at.x != atoms.front().x) return false;
        return true;
    }
    if (rep == RealRep::Jacobi) return jacobi.gamma[0] == 0.0 || (!jacobi.periodic && jacobi.beta.size() == 1);
    return false;
}

bool RealLineMeasure::has_closed_phi() const {
    switch (rep) {
        case RealRep::Atoms: return is_point();
        case RealRep::ClosedForm: return true;
        case RealRep::Jacobi: return jacobi.is_free_meixner() || is_point();
        case RealRep::Transform: return static_cast<bool>(phi_fn);
    }
    return false;
}

cplx RealLineMeasure::phi_closed(cplx z) const {
    if (z.imag() < 0.0) return std::conj(phi_closed(std::conj(z)));
    switch (rep) {
        case RealRep::Atoms:
            if (is_point()) return atoms.front().x;
            break;
        case RealRep::ClosedForm:
            switch (family) {
                case RealFamily::Point: return a;
                case RealFamily::Cauchy: return cplx(a, -b);
                case RealFamily::HalfStable: {
                    const cplx c = coef * coef;
                    return 0.5 * c - coef * std::sqrt(z + 0.25 * c);
                }
            }
            break;
        case RealRep::Jacobi: {
            if (jacobi.gamma[0] == 0.0) return jacobi.beta[0];
            JacobiHead h;
            if (!meixner_params(jacobi, h)) break;
            const cplx wp = z + h.beta0 - h.beta1;
            if (std::abs(wp) == 0.0) throw NumericError("phi evaluated at its branch point");
            const double c = h.gamma1 - h.gamma0;
            const cplx s = std::sqrt(1.0 - 4.0 * c / (wp * wp));
            return h.beta0 + 2.0 * h.gamma0 / (wp * (1.0 + s));
        }
        case RealRep::Transform:
            if (phi_fn) return phi_fn(z);
            break;
    }
    throw UnsupportedError("no closed-form Voiculescu transform for " + label);
}

double RealLineMeasure::support_radius() const {
    switch (rep) {
        case RealRep::Atoms: {
            double r = 0.0;
            for (const auto& at : atoms) r = std::max(r, std::abs(at.x));
            return r;
        }
        case RealRep::ClosedForm: return family == RealFamily::Point ? std::abs(a) : kInf;
        case RealRep::Jacobi: {
            const auto& be = jacobi.beta;
            const auto& ga = jacobi.gamma;
            const size_t n = be.size();
            double r = 0.0;
            for (size_t k = 0; k < n; ++k) {
                const double g_prev = k == 0 ? 0.0 : ga[k - 1];
                double g_here = ga[k];
                if (!jacobi.periodic && k + 1 == n) g_here = 0.0;
                r = std::max(r, std::abs(be[k]) + std::sqrt(g_prev) + std::sqrt(g_here));
            }
            if (jacobi.periodic) r = std::max(r, std::abs(be[n - 1]) + 2.0 * std::sqrt(ga[n - 1]));
            return r;
        }
        case RealRep::Transform: return radius;
    }
    return kInf;
}

double RealLineMeasure::center() const {
    switch (rep) {
        case RealRep::Atoms: {
            double s = 0.0;
            for (const auto& at : atoms) s += at.w * at.x;
            return s;
        }
        case RealRep::ClosedForm: return family == RealFamily::HalfStable ? 0.0 : a;
        case RealRep::Jacobi: return jacobi.beta[0];
        case RealRep::Transform: return 0.0;
    }
    return 0.0;
}

double RealLineMeasure::scale() const {
    const double r = support_radius();
    if (std::isfinite(r)) return std::max(r, 1e-3);
    if (rep == RealRep::ClosedForm && family == RealFamily::Cauchy) return std::abs(a) + b;
    if (rep == RealRep::ClosedForm && family == RealFamily::HalfStable) return std::norm(coef);
    return scale_hint;
}

// -------------------------------------------------------------- CircleMeasure

CircleMeasure CircleMeasure::haar() {
    CircleMeasure m;
    m.rep = CircleRep::Haar;
    m.label = "haar";
    return m;
}

CircleMeasure CircleMeasure::poisson(double a, double b) {
    if (!(a >= 0.0)) throw DomainError("Poisson kernel needs a >= 0");
    CircleMeasure m;
    m.rep = CircleRep::Poisson;
    m.a = a;
    m.b = b;
    m.label = "poisson_kernel";
    m.arg_m1 = b;
    m.logk_fn = [a, b](cplx) { return cplx(a, -b); };
    return m;
}

CircleMeasure CircleMeasure::point(double angle) {
    return from_atoms({{angle, 1.0}}, "point");
}

CircleMeasure CircleMeasure::from_atoms(std::vector<Atom> atoms, std::string label) {
    if (atoms.empty()) throw DomainError("empty atom list");
    double total = 0.0;
    for (const auto& a : atoms) {
        if (!(a.w > 0.0) || !std::isfinite(a.x)) throw DomainError("atoms need finite angles and positive weights");
        total += a.w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("atom weights must sum to 1");
    for (auto& a : atoms) a.w /= total;
    CircleMeasure m;
    m.rep = CircleRep::Atoms;
    m.atoms = std::move(atoms);
    m.label = std::move(label);
    bool single = true;
    for (const auto& a : m.atoms) single = single && a.x == m.atoms.front().x;
    if (single) {
        const double angle = m.atoms.front().x;
        m.arg_m1 = angle;
        m.logk_fn = [angle](cplx) { return cplx(0.0, -angle); };
    }
    return m;
}

cplx CircleMeasure::psi(cplx z) const {
    switch (rep) {
        case CircleRep::Atoms: {
            cplx s = 0.0;
            for (const auto& at : atoms) {
                const cplx zeta = std::polar(1.0, at.x);
                s += at.w * zeta * z / (1.0 - zeta * z);
            }
            return s;
        }
        case CircleRep::Haar: return 0.0;
        case CircleRep::Poisson: {
            const cplx c = std::polar(std::exp(-a), b);
            return c * z / (1.0 - c * z);
        }
        case CircleRep::Eta: {
            const cplx e = eta_fn(z);
            return e / (1.0 - e);
        }
    }
    return 0.0;
}

cplx CircleMeasure::eta(cplx z) const {
    switch (rep) {
        case CircleRep::Haar: return 0.0;
        case CircleRep::Poisson: return std::polar(std::exp(-a), b) * z;
        case CircleRep::Eta: return require_finite(eta_fn(z), "circle eta");
        case CircleRep::Atoms: {
            const cplx p = psi(z);
            return require_finite(p / (1.0 + p), "circle eta");
        }
    }
    return 0.0;
}

cplx CircleMeasure::m1() const {
    switch (rep) {
        case CircleRep::Atoms: {
            cplx s = 0.0;
            for (const auto& at : atoms) s += at.w * std::polar(1.0, at.x);
            return s;
        }
        case CircleRep::Haar: return 0.0;
        case CircleRep::Poisson: return std::polar(std::exp(-a), b);
        case CircleRep::Eta: return m1_value;
    }
    return 0.0;
}

// ------------------------------------------------------------ HalfLineMeasure

HalfLineMeasure HalfLineMeasure::point(double a) {
    if (!(a >= 0.0)) throw DomainError("half-line point mass needs a >= 0");
    return from_atoms({{a, 1.0}}, "point");
}

HalfLineMeasure HalfLineMeasure::free_poisson(double lambda) {
    if (!(lambda > 0.0)) throw DomainError("free Poisson rate must be positive");
    HalfLineMeasure m;
    m.rep = HalfRep::FreePoisson;
    m.lambda = lambda;
    m.label = "free_poisson";
    m.m1_value = lambda;
    m.radius = (1.0 + std::sqrt(lambda)) * (1.0 + std::sqrt(lambda));
    return m;
}

HalfLineMeasure HalfLineMeasure::from_atoms(std::vector<Atom> atoms, std::string label) {
    if (atoms.empty()) throw DomainError("empty atom list");
    double total = 0.0;
    for (const auto& a : atoms) {
        if (!(a.w > 0.0) || !(a.x >= 0.0) || !std::isfinite(a.x))
            throw DomainError("half-line atoms need x >= 0 and positive weights");
        total += a.w;
    }
    HalfLineMeasure m;
    m.rep = HalfRep::Atoms;
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("atom weights must sum to 1");
    for (auto& a : atoms) a.w /= total;
    m.atoms = std::move(atoms);
    m.label = std::move(label);
    double mean = 0.0, r = 0.0;
    for (const auto& a : m.atoms) {
        mean += a.w * a.x;
        r = std::max(r, a.x);
    }
    m.m1_value = mean;
    m.radius = r;
    return m;
}

cplx HalfLineMeasure::psi(cplx z) const {
    const cplx e = eta(z);
    return e / (1.0 - e);
}

cplx HalfLineMeasure::eta(cplx z) const {
    if (z.imag() < 0.0) return std::conj(eta(std::conj(z)));
    switch (rep) {
        case HalfRep::Atoms: {
            cplx p = 0.0;
            for (const auto& at : atoms) p += at.w * at.x * z / (1.0 - at.x * z);
            return require_finite(p / (1.0 + p), "half-line eta");
        }
        case HalfRep::FreePoisson: {
            const double l = lambda;
            const cplx u = 1.0 + z * (l - 1.0);
            cplx s;
            if (std::abs(l - 1.0) < 1e-14) {
                s = std::sqrt(1.0 - 4.0 * z);
            } else {
                const double z1 = 1.0 / ((1.0 + std::sqrt(l)) * (1.0 + std::sqrt(l)));
                const double z2 = 1.0 / ((1.0 - std::sqrt(l)) * (1.0 - std::sqrt(l)));
                s = -std::abs(l - 1.0) * std::sqrt(z - z1) * std::sqrt(z - z2);
            }
            return 0.5 * (u - s);
        }
        case HalfRep::Eta: return require_finite(eta_fn(z), "half-line eta");
    }
    return 0.0;
}

double HalfLineMeasure::m1() const { return m1_value; }

bool HalfLineMeasure::has_closed_sigma() const {
    return rep == HalfRep::FreePoisson || static_cast<bool>(sigma_fn) ||
           (rep == HalfRep::Atoms && atoms.size() == 1);
}

cplx HalfLineMeasure::sigma_closed(cplx z) const {
    if (rep == HalfRep::FreePoisson) return (1.0 - z) / (z + lambda * (1.0 - z));
    if (rep == HalfRep::Atoms && atoms.size() == 1) {
        if (atoms[0].x == 0.0) throw DomainError("Sigma undefined for the point mass at 0");
        return 1.0 / atoms[0].x;
    }
    if (sigma_fn) return sigma_fn(z);
    throw UnsupportedError("no closed-form Sigma for " + label);
}

bool HalfLineMeasure::is_delta0() const {
    if (rep == HalfRep::Atoms) {
        for (const auto& a : atoms)
            if (a.x != 0.0) return false;
        return true;
    }
    return false;
}

double HalfLineMeasure::support_radius() const { return radius; }

// ------------------------------------------------------------------- zoo

const std::vector<ZooEntry>& zoo_catalog() {
    static const std::vector<ZooEntry> entries = {
        {"real", "point", {"a"}, "point mass at a"},
        {"real", "cauchy", {"a", "b"}, "Cauchy law centred at a with width b > 0"},
        {"real", "semicircle", {"mean", "variance"}, "Wigner semicircle"},
        {"real", "kesten_mckay", {"t"}, "Kesten-McKay law with Jacobi parameters (0,0;1,t,t,...)"},
        {"real", "bernoulli", {"a"}, "symmetric Bernoulli law on {-a, a}"},
        {"real", "arcsine", {"variance"}, "arcsine law"},
        {"real", "free_meixner", {"b0", "g0", "b1", "g1"}, "constant Jacobi tail (b1, g1)"},
        {"real", "half_stable", {"theta", "scale"}, "Boolean 1/2-stable law, F(z) = z + scale e^{i theta/2} sqrt(z)"},
        {"real", "q_gaussian", {"q"}, "q-Gaussian law, -1 < q < 1"},
        {"real", "free_poisson", {"lambda"}, "free Poisson law viewed on the real line"},
        {"circle", "haar", {}, "normalized Haar measure"},
        {"circle", "poisson_kernel", {"a", "b"}, "Poisson kernel with eta(z) = e^{-a+ib} z"},
        {"circle", "point", {"angle"}, "point mass at e^{i angle}"},
        {"halfline", "point", {"a"}, "point mass at a >= 0"},
        {"halfline", "free_poisson", {"lambda"}, "free Poisson law with rate lambda"},
    };
    return entries;
}

RealLineMeasure make_zoo_real(const std::string& family, const Params& p) {
    if (family == "point") {
        check_keys(p, {"a"}, family);
        return RealLineMeasure::point(param(p, "a", 0.0));
    }
    if (family == "cauchy") {
        check_keys(p, {"a", "b"}, family);
        return RealLineMeasure::cauchy(param(p, "a", 0.0), param(p, "b", 1.0));
    }
    if (family == "semicircle") {
        check_keys(p, {"mean", "variance"}, family);
        const double v = param(p, "variance", 1.0);
        if (!(v > 0.0)) throw DomainError("semicircle variance must be positive");
        const double m = param(p, "mean", 0.0);
        return RealLineMeasure::from_jacobi({{m, m}, {v, v}, true}, "semicircle");
    }
    if (family == "kesten_mckay") {
        check_keys(p, {"t"}, family);
        const double t = param(p, "t", 1.0);
        if (!(t > 0.0)) throw DomainError("Kesten-McKay parameter must be positive");
        return RealLineMeasure::from_jacobi({{0.0, 0.0}, {1.0, t}, true}, "kesten_mckay");
    }
    if (family == "bernoulli") {
        check_keys(p, {"a"}, family);
        const double a = param(p, "a", 1.0);
        if (!(a > 0.0)) throw DomainError("Bernoulli half-width must be positive");
        return RealLineMeasure::from_jacobi({{0.0, 0.0}, {a * a, 0.0}, true}, "bernoulli");
    }
    if (family == "arcsine") {
        check_keys(p, {"variance"}, family);
        const double v = param(p, "variance", 2.0);
        if (!(v > 0.0)) throw DomainError("arcsine variance must be positive");
        return RealLineMeasure::from_jacobi({{0.0, 0.0}, {v, 0.5 * v}, true}, "arcsine");
    }
    if (family == "free_meixner") {
        check_keys(p, {"b0", "g0", "b1", "g1"}, family);
        const double g0 = param(p, "g0", 1.0), g1 = param(p, "g1", 1.0);
        if (!(g0 >= 0.0) || !(g1 >= 0.0)) throw DomainError("free Meixner gammas must be non-negative");
        return RealLineMeasure::from_jacobi({{param(p, "b0", 0.0), param(p, "b1", 0.0)}, {g0, g1}, true},
                                            "free_meixner");
    }
    if (family == "half_stable") {
        check_keys(p, {"theta", "scale"}, family);
        const double th = param(p, "theta", kPi / 2);
        const double s = param(p, "scale", 1.0);
        if (th < 0.0 || th > kPi || !(s > 0.0)) throw DomainError("half-stable needs 0 <= theta <= pi and scale > 0");
        return RealLineMeasure::half_stable(std::polar(s, th / 2));
    }
    if (family == "q_gaussian") {
        check_keys(p, {"q"}, family);
        const double q = param(p, "q", 0.0);
        if (!(q > -1.0) || !(q < 1.0)) throw DomainError("q-Gaussian needs -1 < q < 1");
        JacobiRep j;
        const int depth = 64;
        double qp = 1.0;
        for (int n = 0; n < depth; ++n) {
            qp *= q;
            j.beta.push_back(0.0);
            j.gamma.push_back((1.0 - qp) / (1.0 - q));
        }
        j.periodic = true;
        return RealLineMeasure::from_jacobi(std::move(j), "q_gaussian");
    }
    if (family == "free_poisson") {
        check_keys(p, {"lambda"}, family);
        return halfline_to_real(HalfLineMeasure::free_poisson(param(p, "lambda", 1.0)));
    }
    throw DomainError("unknown real-line family '" + family + "'");
}

CircleMeasure make_zoo_circle(const std::string& family, const Params& p) {
    if (family == "haar") {
        check_keys(p, {}, family);
        return CircleMeasure::haar();
    }
    if (family == "poisson_kernel") {
        check_keys(p, {"a", "b"}, family);
        return CircleMeasure::poisson(param(p, "a", 1.0), param(p, "b", 0.0));
    }
    if (family == "point") {
        check_keys(p, {"angle"}, family);
        return CircleMeasure::point(param(p, "angle", 0.0));
    }
    throw DomainError("unknown circle family '" + family + "'");
}

HalfLineMeasure make_zoo_halfline(const std::string& family, const Params& p) {
    if (family == "point") {
        check_keys(p, {"a"}, family);
        return HalfLineMeasure::point(param(p, "a", 1.0));
    }
    if (family == "free_poisson") {
        check_keys(p, {"lambda"}, family);
        return HalfLineMeasure::free_poisson(param(p, "lambda", 1.0));
    }
    throw DomainError("unknown half-line family '" + family + "'");
}

AnyMeasure make_zoo_measure(const std::string& space, const std::string& family,
                            const Params& params) {
    if (space == "real") return make_zoo_real(family, params);
    if (space == "circle") return make_zoo_circle(family, params);
    if (space == "halfline") return make_zoo_halfline(family, params);
    throw DomainError("unknown space '" + space + "'");
}

// ---------------------------------------------------------------- moments

std::vector<double> moments(const RealLineMeasure& mu, int k) {
    if (k < 0) throw DomainError("moment order must be non-negative");
    std::vector<double> m(static_cast<size_t>(k) + 1, 0.0);
    m[0] = 1.0;
    switch (mu.rep) {
        case RealRep::Atoms:
            for (int j = 1; j <= k; ++j)
                for (const auto& a : mu.atoms) m[j] += a.w * std::pow(a.x, j);
            return m;
        case RealRep::ClosedForm:
            if (mu.family == RealFamily::Point) {
                for (int j = 1; j <= k; ++j) m[j] = std::pow(mu.a, j);
                return m;
            }
            if (k >= 1) throw UnsupportedError("moments of order >= 1 are undefined for " + mu.label);
            return m;
        case RealRep::Jacobi: {
            // m_j = (J^j)_{00}; paths of length k stay within depth k/2 + 1.
            const auto& j = mu.jacobi;
            const size_t n_needed = static_cast<size_t>(k) / 2 + 2;
            size_t n = j.periodic ? n_needed : std::min(n_needed, j.beta.size());
            auto beta_at = [&](size_t i) { return j.beta[std::min(i, j.beta.size() - 1)]; };
            auto gamma_at = [&](size_t i) {
                if (!j.periodic && i + 1 >= j.beta.size()) return 0.0;
                return j.gamma[std::min(i, j.gamma.size() - 1)];
            };
            std::vector<double> v(n, 0.0), w(n, 0.0);
            v[0] = 1.0;
            for (int step = 1; step <= k; ++step) {
                for (size_t i = 0; i < n; ++i) {
                    double s = beta_at(i) * v[i];
                    if (i + 1 < n) s += std::sqrt(gamma_at(i)) * v[i + 1];
                    if (i > 0) s += std::sqrt(gamma_at(i - 1)) * v[i - 1];
                    w[i] = s;
                }
                std::swap(v, w);
                m[step] = v[0];
            }
            return m;
        }
        case RealRep::Transform: {
            const double r = mu.support_radius();
            if (!std::isfinite(r))
                throw UnsupportedError("moments need a bounded support estimate; " + mu.label + " has none");
            const double R = 4.0 * (1.0 + r);
            const int N = std::max(512, 16 * k + 64);
            std::vector<cplx> acc(static_cast<size_t>(k) + 1, 0.0);
            for (int n = 0; n < N; ++n) {
                const double th = 2.0 * kPi * (n + 0.5) / N;
                const cplx z = std::polar(R, th);
                const cplx g = mu.G(z);
                cplx zp = z;
                for (int j = 0; j <= k; ++j) {
                    acc[j] += zp * g;
                    zp *= z;
                }
            }
            for (int j = 1; j <= k; ++j) m[j] = acc[j].real() / N;
            return m;
        }
    }
    return m;
}

double moment(const RealLineMeasure& mu, int k) { return moments(mu, k).back(); }

JacobiHead jacobi_head_from_moments(double m1, double m2, double m3, double m4) {
    const double scale = 1.0 + std::abs(m2);
    const double g0 = m2 - m1 * m1;
    if (g0 < -1e-12 * scale) throw DomainError("moment sequence is not positive definite (variance < 0)");
    if (g0 <= 1e-14 * scale) return {m1, 0.0, m1, 0.0};
    const double b0 = m1;
    const double b1 = (m3 - 2.0 * b0 * m2 + b0 * b0 * m1) / g0;
    // P2(x) = x^2 + c1 x + c0
    const double c1 = -(b0 + b1);
    const double c0 = b0 * b1 - g0;
    const double norm2 = m4 + 2.0 * c1 * m3 + (c1 * c1 + 2.0 * c0) * m2 + 2.0 * c1 * c0 * m1 + c0 * c0;
    double g1 = norm2 / g0;
    if (g1 < -1e-10 * (1.0 + std::abs(m4))) throw DomainError("moment sequence is not positive definite");
    if (g1 < 0.0) g1 = 0.0;
    return {b0, g0, b1, g1};
}

JacobiHead jacobi_head(const RealLineMeasure& mu) {
    if (mu.rep == RealRep::Jacobi) return mu.jacobi.head();
    const auto m = moments(mu, 4);
    return jacobi_head_from_moments(m[1], m[2], m[3], m[4]);
}

// -------------------------------------------------------------- Levy data

RealLineMeasure from_levy_additive_free(const LevyTripletAdditive& lk) {
    if (lk.tau.empty()) return RealLineMeasure::point(lk.gamma);
    const double g = lk.gamma;
    const LevyMeasure tau = lk.tau;
    CFun phi = [g, tau](cplx z) {
        if (z.imag() < 0.0) return std::conj(levy_additive_integral(g, tau, std::conj(z)));
        return levy_additive_integral(g, tau, z);
    };
    CFun F = [phi](cplx z) { return solve_w_plus_tphi(phi, 1.0, z); };
    const double r = levy_radius_bound(g, tau);
    return RealLineMeasure::from_transform(F, phi, r, r, "levy_free");
}

RealLineMeasure from_levy_additive_boolean(const LevyTripletAdditive& lk) {
    if (lk.tau.empty()) return RealLineMeasure::point(lk.gamma);
    const double g = lk.gamma;
    const LevyMeasure tau = lk.tau;
    CFun F = [g, tau](cplx z) { return z - levy_additive_integral(g, tau, z); };
    const double r = levy_radius_bound(g, tau);
    return RealLineMeasure::from_transform(F, nullptr, r, r, "levy_boolean");
}

cplx solve_w_plus_tphi(const CFun& phi, double t, cplx z) {
    auto h = [&](cplx w) { return w + t * phi(w) - z; };
    SolveOptions opt;
    opt.tol = 1e-13;
    opt.max_iter = 100;
    auto res = newton_solve(h, z, upper_half, opt);
    if (res.converged && res.residual <= 1e-9 * (1.0 + std::abs(z))) return res.value;
    auto fp = fixed_point_solve([&](cplx w) { return z - t * phi(w); }, z, upper_half, 400, 1e-13);
    if (fp.converged) return fp.value;
    throw NumericError("could not solve w + t*phi(w) = z");
}

CircleMeasure from_levy_mult_circle(const LevyDataMultCircle& lk) {
    const LevyMeasure tau = lk.tau;
    const double ga = lk.gamma_arg;
    if (tau.empty()) return CircleMeasure::point(-ga);
    if (tau.atoms.empty() && tau.density.size() >= 2 && std::abs(tau.lo + kPi) < 1e-12 &&
        std::abs(tau.hi - kPi) < 1e-12) {
        const auto [mn, mx] = std::minmax_element(tau.density.begin(), tau.density.end());
        if (*mx - *mn <= 1e-14 * (1.0 + *mx)) return CircleMeasure::poisson(tau.total_mass(), -ga);
    }
    CFun logk = [ga, tau](cplx z) {
        return kI * ga + tau.integrate([z](double th) {
                   const cplx zeta = std::polar(1.0, th);
                   return (1.0 + zeta * z) / (1.0 - zeta * z);
               });
    };
    CircleMeasure m;
    m.rep = CircleRep::Eta;
    m.label = "levy_mult_circle";
    m.eta_fn = [logk](cplx z) { return z * std::exp(-logk(z)); };
    m.logk_fn = logk;
    m.m1_value = std::exp(-logk(0.0));
    m.arg_m1 = -ga;
    return m;
}

HalfLineMeasure from_levy_mult_halfline(const LevyDataMultHalfline& lk) {
    const LevyMeasure tau = lk.tau;
    const double a = lk.a, b = lk.b;
    if (a < 0.0) throw DomainError("half-line drift a must be non-negative");
    for (const auto& at : tau.atoms)
        if (at.x < 0.0) throw DomainError("half-line tau must live on [0, inf)");
    if (!tau.density.empty() && tau.lo < 0.0) throw DomainError("half-line tau must live on [0, inf)");
    CFun logk = [a, b, tau](cplx z) { return -a * z + b + levy_additive_integral(0.0, tau, z); };
    HalfLineMeasure m;
    m.rep = HalfRep::Eta;
    m.label = "levy_mult_halfline";
    m.eta_fn = [logk](cplx z) {
        if (z == 0.0) return cplx(0.0);
        return z * std::exp(-logk(z));
    };
    const double m1 = std::exp(-logk(0.0)).real();
    if (!(m1 > 0.0) || !std::isfinite(m1)) throw DomainError("Levy data give no finite first moment");
    m.m1_value = m1;
    m.radius = kInf;
    auto v = validate_eta(EtaSpace::HalfLine, [m](cplx z) { return m.eta(z); });
    if (!v.valid) throw DomainError("Levy data do not define a half-line eta transform: " + v.reason);
    return m;
}

// ------------------------------------------------------------ validate_eta

EtaValidation validate_eta(EtaSpace space, const CFun& eta, double tol) {
    EtaValidation out;
    out.valid = true;
    auto fail = [&](double viol, cplx z, const std::string& why) {
        if (viol > out.violation || out.valid) {
            out.violation = std::max(out.violation, viol);
            out.witness = z;
            out.reason = why;
        }
        out.valid = false;
    };
    try {
        const cplx z0 = space == EtaSpace::Circle ? cplx(0.0) : cplx(0.0, 1e-9);
        const cplx e0 = eta(z0);
        if (std::abs(e0) > 1e-6) fail(std::abs(e0), z0, "eta does not vanish at 0");

        std::vector<cplx> pts;
        if (space == EtaSpace::Circle) {
            for (double r : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95})
                for (int j = 0; j < 64; ++j) pts.push_back(std::polar(r, 2.0 * kPi * j / 64.0));
        } else {
            for (double r : {0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0})
                for (int j = 0; j < 16; ++j) pts.push_back(std::polar(r, kPi * (j + 0.5) / 16.0));
        }
        for (size_t i = 0; i < pts.size(); ++i) {
            const cplx z = pts[i];
            const cplx e = eta(z);
            if (!finite(e)) {
                fail(kInf, z, "eta is not finite");
                continue;
            }
            if (space == EtaSpace::Circle) {
                const double v = std::abs(e) - std::abs(z);
                if (v > tol) fail(v, z, "|eta(z)| > |z|");
            } else {
                const double v = std::arg(z) - std::arg(e);
                if (e.imag() < -tol * (1.0 + std::abs(e))) fail(-e.imag(), z, "eta leaves the upper half-plane");
                else if (v > tol) fail(v, z, "arg eta(z) < arg z");
            }
            if (i % 7 == 0) {
                const double h = 1e-5 * (1.0 + std::abs(z));
                const cplx dx = (eta(z + h) - eta(z - h)) / (2.0 * h);
                const cplx dy = (eta(z + kI * h) - eta(z - kI * h)) / (2.0 * kI * h);
                const double mis = std::abs(dx - dy);
                if (mis > 1e-5 * (1.0 + std::abs(dx))) fail(mis, z, "Cauchy-Riemann residual too large");
            }
        }
    } catch (const Error& e) {
        fail(kInf, 0.0, e.what());
    }
    return out;
}

FirstMoment first_moment_circle(const CircleMeasure& mu) {
    if (mu.is_haar()) return {0.0, 0.0};
    const cplx m = mu.m1();
    if (std::abs(m) < 1e-12) throw DomainError("first moment vanishes for a non-Haar measure");
    return {m, mu.arg_m1 ? *mu.arg_m1 : std::arg(m)};
}

// ------------------------------------------------------------- conversions

RealLineMeasure halfline_to_real(const HalfLineMeasure& mu) {
    if (mu.rep == HalfRep::Atoms) return RealLineMeasure::from_atoms(mu.atoms, mu.label);
    if (mu.rep == HalfRep::FreePoisson) {
        const double l = mu.lambda;
        return RealLineMeasure::from_jacobi({{l, l + 1.0}, {l, l}, true}, "free_poisson");
    }
    const HalfLineMeasure m = mu;
    CFun F = [m](cplx z) { return z * (1.0 - m.eta(1.0 / z)); };
    const double r = mu.support_radius();
    return RealLineMeasure::from_transform(F, nullptr, r, std::isfinite(r) ? r : 1.0, mu.label);
}

HalfLineMeasure real_to_halfline(const RealLineMeasure& mu, std::string label) {
    if (label.empty()) label = mu.label;
    if (mu.rep == RealRep::Atoms) return HalfLineMeasure::from_atoms(mu.atoms, label);
    if (mu.rep == RealRep::ClosedForm && mu.family == RealFamily::Point) return HalfLineMeasure::point(mu.a);
    HalfLineMeasure out;
    out.rep = HalfRep::Eta;
    out.label = std::move(label);
    const RealLineMeasure m = mu;
    out.eta_fn = [m](cplx z) {
        if (z == 0.0) return cplx(0.0);
        return 1.0 - z * m.F(1.0 / z);
    };
    out.m1_value = moment(mu, 1);
    out.radius = mu.support_radius();
    return out;
}

}  // namespace freeprob
