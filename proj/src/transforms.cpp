#include "freeprob/transforms.hpp"

#include <cstdio>
#include <sstream>

namespace freeprob {

void GridSpec::validate() const {
    if (count < 2) throw DomainError("grid needs at least two points");
    if (!(x_max > x_min)) throw DomainError("grid needs x_max > x_min");
    if (!(eps > 0.0) || !(eps < 1.0)) throw DomainError("grid epsilon must lie in (0, 1)");
}

double GridSpec::at(int i) const {
    return x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

GridSpec GridSpec::parse(const std::string& text, double eps) {
    GridSpec g;
    g.eps = eps;
    std::istringstream is(text);
    std::string lo, hi, n;
    if (!std::getline(is, lo, ':') || !std::getline(is, hi, ':') || !std::getline(is, n))
        throw DomainError("grid must look like lo:hi:count");
    try {
        g.x_min = std::stod(lo);
        g.x_max = std::stod(hi);
        g.count = std::stoi(n);
    } catch (const std::exception&) {
        throw DomainError("grid must look like lo:hi:count");
    }
    g.validate();
    return g;
}

cplx eval_additive_transform(const RealLineMeasure& mu, AdditiveKind kind, cplx z) {
    if (!(z.imag() > 0.0)) throw DomainError("additive transforms are evaluated on the upper half-plane");
    cplx v;
    try {
        switch (kind) {
            case AdditiveKind::G: v = mu.G(z); break;
            case AdditiveKind::F: v = mu.F(z); break;
            case AdditiveKind::K: v = mu.K(z); break;
        }
    } catch (const NumericError& e) {
        throw DomainError(std::string("pole or non-finite value: ") + e.what());
    }
    if (!finite(v)) throw DomainError("non-finite transform value");
    return v;
}

InversionResult eval_phi(const RealLineMeasure& mu, cplx z, PhiMethod method) {
    if (z.imag() < 0.0) {
        InversionResult r = eval_phi(mu, std::conj(z), method);
        r.value = std::conj(r.value);
        return r;
    }
    InversionResult out;
    if (method == PhiMethod::Auto && mu.has_closed_phi()) {
        out.value = mu.phi_closed(z);
        return out;
    }
    SolveOptions opt;
    opt.tol = 1e-11;
    opt.max_iter = 100;
    auto res = newton_solve([&](cplx w) { return mu.F(w) - z; }, z, upper_half, opt);
    if (!res.converged || !(res.residual <= 1e-9 * (1.0 + std::abs(z))))
        throw NumericError("inversion of F did not converge");
    out.value = res.value - z;
    out.residual = res.residual;
    out.iterations = res.iterations;
    return out;
}

bool invert_F_continued(const RealLineMeasure& mu, cplx z, double top, InversionResult& out) {
    const double x = z.real();
    const double y_target = z.imag();
    if (!(y_target > 0.0)) return false;
    double y = std::max(top, y_target);
    SolveOptions opt;
    opt.tol = 1e-12;
    opt.max_iter = 60;
    cplx target(x, y);
    auto first = newton_solve([&](cplx w) { return mu.F(w) - target; }, target, upper_half, opt);
    if (!first.converged) return false;
    cplx w = first.value;
    int iters = first.iterations;
    double ratio = 0.25;
    while (y > y_target) {
        const double y_next = std::max(y * ratio, y_target);
        const cplx tgt(x, y_next);
        // Shift the seed by the target increment: F(w) ~ w for a first guess.
        const cplx seed(w.real(), std::max(w.imag() - (y - y_next), 0.5 * w.imag()));
        auto res = newton_solve([&](cplx v) { return mu.F(v) - tgt; }, seed, upper_half, opt);
        iters += res.iterations;
        const bool ok = res.converged && res.residual <= 1e-9 * (1.0 + std::abs(tgt)) &&
                        std::abs(res.value - w) <= 10.0 * (y - y_next) + 0.5 * w.imag();
        if (ok) {
            w = res.value;
            y = y_next;
            ratio = std::max(0.05, ratio * ratio);
        } else {
            ratio = std::sqrt(ratio);
            if (ratio > 0.995) return false;
        }
        if (iters > 4000) return false;
    }
    out.value = w - z;
    out.residual = std::abs(mu.F(w) - z);
    out.iterations = iters;
    return out.residual <= 1e-8 * (1.0 + std::abs(z));
}

InversionResult invert_eta(const CFun& eta, cplx m1, cplx z, bool unit_disc) {
    InversionResult out;
    if (z == 0.0) return out;
    if (std::abs(m1) == 0.0) throw DomainError("eta'(0) vanishes; eta is not invertible near 0");
    const double s = z.imag();
    auto admissible = [unit_disc, s](cplx w) {
        if (unit_disc) return std::abs(w) < 1.0;
        if (s > 0.0) return w.imag() > 0.0;
        if (s < 0.0) return w.imag() < 0.0;
        return true;
    };
    SolveOptions opt;
    opt.tol = 1e-13;
    auto res = newton_solve([&](cplx w) { return eta(w) - z; }, z / m1, admissible, opt);
    if (!res.converged || !(res.residual <= 1e-10 * (1.0 + std::abs(z))))
        throw NumericError("inversion of eta did not converge");
    out.value = res.value;
    out.residual = res.residual;
    out.iterations = res.iterations;
    return out;
}

cplx eval_mult_transform(const CircleMeasure& mu, MultKind kind, cplx z) {
    if (!(std::abs(z) < 1.0)) throw DomainError("circle transforms are evaluated on the open unit disc");
    switch (kind) {
        case MultKind::Psi: return mu.psi(z);
        case MultKind::Eta: return mu.eta(z);
        case MultKind::K: {
            if (mu.is_haar()) throw DomainError("k is undefined for Haar measure (eta vanishes)");
            if (z == 0.0) return 1.0 / mu.m1();
            const cplx e = mu.eta(z);
            if (std::abs(e) < 1e-300) throw DomainError("k evaluated at a zero of eta");
            return z / e;
        }
        case MultKind::Sigma: {
            if (mu.is_haar()) throw DomainError("Sigma is undefined for Haar measure");
            if (mu.sigma_fn) return mu.sigma_fn(z);
            if (mu.rep == CircleRep::Poisson) return 1.0 / mu.m1();
            if (z == 0.0) return 1.0 / mu.m1();
            const auto inv = invert_eta([&](cplx w) { return mu.eta(w); }, mu.m1(), z, true);
            return inv.value / z;
        }
    }
    return 0.0;
}

cplx eval_mult_transform(const HalfLineMeasure& mu, MultKind kind, cplx z) {
    if (z.imag() == 0.0 && z.real() > 0.0)
        throw DomainError("half-line transforms are evaluated off the positive axis");
    switch (kind) {
        case MultKind::Psi: return mu.psi(z);
        case MultKind::Eta: return mu.eta(z);
        case MultKind::K: {
            if (mu.is_delta0()) throw DomainError("k is undefined for the point mass at 0");
            if (z == 0.0) return 1.0 / mu.m1();
            return z / mu.eta(z);
        }
        case MultKind::Sigma: {
            if (mu.is_delta0()) throw DomainError("Sigma is undefined for the point mass at 0");
            if (mu.has_closed_sigma()) return mu.sigma_closed(z);
            if (z == 0.0) return 1.0 / mu.m1();
            const auto inv = invert_eta([&](cplx w) { return mu.eta(w); }, mu.m1(), z, false);
            return inv.value / z;
        }
    }
    return 0.0;
}

cplx periodic_tail(double b, double g, cplx z) {
    const cplx w = z - b;
    if (g == 0.0) return 1.0 / w;
    return 2.0 / (w * (1.0 + std::sqrt(1.0 - 4.0 * g / (w * w))));
}

namespace {

cplx checked_inverse(cplx den) {
    if (std::abs(den) < 1e-300) throw NumericError("continued fraction hit a pole");
    return 1.0 / den;
}

}  // namespace

cplx continued_fraction_G(const std::vector<double>& beta, const std::vector<double>& gamma,
                          cplx z, int depth) {
    if (beta.empty()) throw DomainError("continued fraction needs at least one beta");
    if (depth < 0)
        depth = static_cast<int>(std::max(beta.size() - 1, gamma.size()));
    auto b = [&](int k) { return beta[std::min<size_t>(static_cast<size_t>(k), beta.size() - 1)]; };
    auto g = [&](int k) {
        if (gamma.empty()) return 0.0;
        return gamma[std::min<size_t>(static_cast<size_t>(k), gamma.size() - 1)];
    };
    cplx t = checked_inverse(z - b(depth));
    for (int k = depth - 1; k >= 0; --k) t = checked_inverse(z - b(k) - g(k) * t);
    return t;
}

cplx jacobi_G(const JacobiRep& j, cplx z) {
    const size_t n = j.beta.size();
    if (n == 0) throw DomainError("empty Jacobi parameters");
    cplx t = j.periodic ? periodic_tail(j.beta[n - 1], j.gamma[n - 1], z) : checked_inverse(z - j.beta[n - 1]);
    for (size_t k = n - 1; k-- > 0;) t = checked_inverse(z - j.beta[k] - j.gamma[k] * t);
    return t;
}

DensityResult stieltjes_density(const RealLineMeasure& mu, const GridSpec& grid) {
    grid.validate();
    if (grid.eps < 1e-8 || grid.eps > 1e-2) throw DomainError("density epsilon must lie in [1e-8, 1e-2]");
    DensityResult out;
    out.points.reserve(static_cast<size_t>(grid.count));
    for (int i = 0; i < grid.count; ++i) {
        const double x = grid.at(i);
        const cplx g = mu.G(cplx(x, grid.eps));
        double d = -g.imag() / kPi;
        if (grid.eps * std::abs(g.imag()) > 0.1) {
            out.atoms.push_back({x, -grid.eps * g.imag()});
            d = 0.0;
        }
        out.points.push_back({x, d});
    }
    return out;
}

DensityResult circle_density_from_eta(const CircleMeasure& mu, int count, double eps) {
    if (count < 2) throw DomainError("density needs at least two points");
    if (!(eps > 0.0) || !(eps < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
    DensityResult out;
    const double r = 1.0 - eps;
    for (int j = 0; j < count; ++j) {
        const double th = -kPi + 2.0 * kPi * j / count;
        const cplx p = mu.psi(std::polar(r, -th));
        double d = 0.0;
        if (!finite(p)) {
            out.atoms.push_back({th, 1.0});
        } else {
            const double re = (1.0 + 2.0 * p).real();
            // A unit atom gives re ~ 2/eps; anything bounded stays far below.
            if (re * eps > 0.2) {
                out.atoms.push_back({th, re * (1.0 - r) / (1.0 + r)});
            } else {
                d = re / (2.0 * kPi);
            }
        }
        out.points.push_back({th, d});
    }
    return out;
}

void write_density_csv(std::ostream& os, const DensityResult& d, const std::string& xname) {
    char buf[96];
    os << xname << ",density\n";
    for (const auto& p : d.points) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", p.x, p.density);
        os << buf;
    }
    for (const auto& a : d.atoms) {
        std::snprintf(buf, sizeof buf, "# atom,%.12g,%.12g\n", a.x, a.weight);
        os << buf;
    }
}

}  // namespace freeprob
