#pragma once

// Closed-form reference values computed independently of the library.

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = 3.14159265358979323846;

// Cauchy transform of a finite atomic measure.
inline cplx atoms_G(const std::vector<std::pair<double, double>>& atoms, cplx z) {
    cplx g = 0.0;
    for (const auto& [x, w] : atoms) g += w / (z - x);
    return g;
}

// Semicircle of mean m and variance v; the product of principal roots picks the
// branch with G ~ 1/z at infinity on the upper half-plane.
inline cplx semicircle_G(cplx z, double m = 0.0, double v = 1.0) {
    const double r = 2.0 * std::sqrt(v);
    const cplx w = z - m;
    return (w - std::sqrt(w - r) * std::sqrt(w + r)) / (2.0 * v);
}

inline cplx cauchy_F(cplx z, double a, double b) { return z - a + cplx(0.0, b); }

inline double cauchy_density(double x, double a, double b) { return b / (pi * ((x - a) * (x - a) + b * b)); }

inline double kesten_mckay_density(double x, double t) {
    if (x * x >= 4.0 * t) return 0.0;
    return std::sqrt(4.0 * t - x * x) / (2.0 * pi * (1.0 - (1.0 - t) * x * x));
}

inline double poisson_kernel_density(double theta, double a, double b) {
    const double q = std::exp(-a);
    return (1.0 - q * q) / (2.0 * pi * (1.0 + q * q - 2.0 * q * std::cos(theta - b)));
}

// Free Poisson law of rate lam: G solves lam-shifted quadratic
// z G^2 - (z + 1 - lam) G + 1 = 0 (unit jump size).
inline cplx free_poisson_G(cplx z, double lam) {
    const double lo = (1.0 - std::sqrt(lam)) * (1.0 - std::sqrt(lam));
    const double hi = (1.0 + std::sqrt(lam)) * (1.0 + std::sqrt(lam));
    const cplx root = std::sqrt(z - lo) * std::sqrt(z - hi);
    return (z + 1.0 - lam - root) / (2.0 * z);
}

// eta on the half-line from G: psi(z) = G(1/z)/z - 1, eta = psi/(1+psi) = 1 - z F(1/z).
inline cplx free_poisson_eta(cplx z, double lam) { return 1.0 - z / free_poisson_G(1.0 / z, lam); }

// Sigma of the free Poisson law with rate lam: (1 - z) / (z + lam (1 - z)).
inline cplx free_poisson_sigma(cplx z, double lam) { return (1.0 - z) / (z + lam * (1.0 - z)); }

// Points in the upper half-plane away from the real axis.
inline std::vector<cplx> upper_grid() {
    std::vector<cplx> pts;
    for (int i = 0; i < 10; ++i)
        for (double y : {0.2, 0.7, 1.5, 3.0}) pts.emplace_back(-3.0 + 6.0 * i / 9.0, y);
    return pts;
}

inline double sup_diff(const std::vector<cplx>& pts, auto&& f, auto&& g) {
    double d = 0.0;
    for (const cplx z : pts) d = std::max(d, std::abs(f(z) - g(z)));
    return d;
}

}  // namespace oracle
