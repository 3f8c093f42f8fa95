#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace freeprob {

using cplx = std::complex<double>;
using CFun = std::function<cplx(cplx)>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline const cplx kI{0.0, 1.0};

// Error hierarchy. Every failure raised by the library derives from Error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters or inputs outside the admissible domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Power exponent outside the supported range (e.g. multiplicative Boolean power t > 1 on the half-line).
class RangeError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Operation not available for the measure's representation.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Non-finite values, poles, non-convergent iterations.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Logarithm branch problems on the unit circle (winding, boundary branch).
class BranchError : public Error {
public:
    using Error::Error;
};

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline cplx require_finite(cplx z, const char* what) {
    if (!finite(z)) throw NumericError(std::string("non-finite value in ") + what);
    return z;
}

struct SolveResult {
    cplx value{};
    double residual = kInf;
    int iterations = 0;
    bool converged = false;
};

struct SolveOptions {
    double tol = 1e-12;   // relative step tolerance, scaled by (1 + |w|)
    int max_iter = 100;
    double fd_rel = 1e-6; // central-difference step, scaled by (1 + |w|)
};

/// Damped Newton iteration for h(w) = 0 with a central-difference derivative
/// taken along the real direction, so points just above the real axis stay in
/// the domain. `admissible` rejects iterates leaving the domain; rejected or
/// non-improving steps are halved.
SolveResult newton_solve(const CFun& h, cplx seed,
                         const std::function<bool(cplx)>& admissible,
                         const SolveOptions& opt = {});

/// Fixed-point iteration w <- T(w) that hands over to Newton on w - T(w)
/// when plain iteration stalls.
SolveResult fixed_point_solve(const CFun& T, cplx seed,
                              const std::function<bool(cplx)>& admissible,
                              int max_iter = 300, double tol = 1e-12);

inline bool upper_half(cplx z) { return z.imag() > 0.0; }

}  // namespace freeprob
