#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "freeprob/core.hpp"

namespace freeprob {

struct Atom {
    double x = 0.0;  // location (an angle for circle measures)
    double w = 0.0;  // weight
};

/// Positive measure made of point masses plus a density sampled on a uniform
/// grid over [lo, hi]; integrals use the trapezoid rule on that grid.
struct LevyMeasure {
    std::vector<Atom> atoms;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> density;

    static LevyMeasure point(double x, double w = 1.0);
    /// Uniform density of total mass `mass` on [lo, hi] sampled at `nodes` points.
    static LevyMeasure uniform(double lo, double hi, double mass, int nodes = 2049);

    double total_mass() const;
    cplx integrate(const std::function<cplx(double)>& f) const;
    bool empty() const { return atoms.empty() && density.empty(); }
};

struct LevyTripletAdditive {
    double gamma = 0.0;
    LevyMeasure tau;
};

/// Circle data: drift e^{i gamma_arg}, tau on angles in [-pi, pi].
struct LevyDataMultCircle {
    double gamma_arg = 0.0;
    LevyMeasure tau;
};

/// Half-line data (a, b, tau) for exp(-a z + b + int (1+xz)/(z-x) tau(dx)).
struct LevyDataMultHalfline {
    double a = 0.0;
    double b = 0.0;
    LevyMeasure tau;
};

struct JacobiHead {
    double beta0 = 0.0;
    double gamma0 = 0.0;
    double beta1 = 0.0;
    double gamma1 = 0.0;
};

/// Jacobi parameters. With `periodic` the last (beta, gamma) pair repeats
/// forever; otherwise the continued fraction stops after the last level.
struct JacobiRep {
    std::vector<double> beta;
    std::vector<double> gamma;
    bool periodic = true;

    /// Periodic parameters of length at most two, padded to exactly two.
    bool is_free_meixner() const;
    JacobiHead head() const;
};

// ---------------------------------------------------------------- real line

enum class RealRep { Atoms, ClosedForm, Jacobi, Transform };
enum class RealFamily { Point, Cauchy, HalfStable };

struct RealLineMeasure {
    RealRep rep = RealRep::Atoms;
    std::string label;

    std::vector<Atom> atoms;

    RealFamily family = RealFamily::Point;
    double a = 0.0;  // point location / Cauchy center
    double b = 0.0;  // Cauchy width
    cplx coef{};     // half-stable: F(z) = z + coef * sqrt(z)

    JacobiRep jacobi;

    CFun F_fn;       // transform rep, valid on the upper half-plane
    CFun phi_fn;     // optional Voiculescu transform
    double radius = kInf;
    double scale_hint = 1.0;

    static RealLineMeasure from_atoms(std::vector<Atom> atoms, std::string label = "atoms");
    static RealLineMeasure point(double a);
    static RealLineMeasure cauchy(double a, double b);
    static RealLineMeasure half_stable(cplx coef);
    static RealLineMeasure from_jacobi(JacobiRep j, std::string label = "jacobi");
    static RealLineMeasure from_transform(CFun F, CFun phi, double radius, double scale,
                                          std::string label);

    /// F = 1/G. Below the real axis the conjugate symmetry F(conj z) = conj F(z) is used.
    cplx F(cplx z) const;
    cplx G(cplx z) const { return 1.0 / F(z); }
    cplx K(cplx z) const { return z - F(z); }

    bool has_closed_phi() const;
    cplx phi_closed(cplx z) const;

    bool is_point() const;
    double support_radius() const;
    double center() const;
    /// Width used to size numerical grids; finite for heavy-tailed laws.
    double scale() const;
};

// --------------------------------------------------------------- unit circle

enum class CircleRep { Atoms, Haar, Poisson, Eta };

struct CircleMeasure {
    CircleRep rep = CircleRep::Atoms;
    std::string label;

    std::vector<Atom> atoms;  // x is the angle

    double a = 0.0;  // Poisson kernel: eta(z) = e^{-a + i b} z
    double b = 0.0;

    CFun eta_fn;     // Eta rep
    CFun logk_fn;    // continuous log of k = z/eta with Im logk(0) = -arg_m1
    CFun sigma_fn;   // explicit Sigma when known
    cplx m1_value{}; // first moment for Eta rep

    std::optional<double> arg_m1;  // chosen argument of the first moment

    static CircleMeasure haar();
    static CircleMeasure poisson(double a, double b);
    static CircleMeasure point(double angle);
    static CircleMeasure from_atoms(std::vector<Atom> atoms, std::string label = "atoms");

    bool is_haar() const { return rep == CircleRep::Haar; }
    cplx psi(cplx z) const;
    cplx eta(cplx z) const;
    cplx k(cplx z) const { return z / eta(z); }
    cplx m1() const;
};

// ----------------------------------------------------------------- half-line

enum class HalfRep { Atoms, FreePoisson, Eta };

struct HalfLineMeasure {
    HalfRep rep = HalfRep::Atoms;
    std::string label;

    std::vector<Atom> atoms;
    double lambda = 1.0;  // free Poisson rate

    CFun eta_fn;
    CFun sigma_fn;
    double m1_value = 0.0;
    double radius = kInf;

    static HalfLineMeasure point(double a);
    static HalfLineMeasure free_poisson(double lambda);
    static HalfLineMeasure from_atoms(std::vector<Atom> atoms, std::string label = "atoms");

    cplx psi(cplx z) const;
    cplx eta(cplx z) const;
    cplx k(cplx z) const { return z / eta(z); }
    double m1() const;
    bool has_closed_sigma() const;
    cplx sigma_closed(cplx z) const;
    bool is_delta0() const;
    double support_radius() const;
};

using AnyMeasure = std::variant<RealLineMeasure, CircleMeasure, HalfLineMeasure>;
using Params = std::map<std::string, double>;

struct IndicatorEstimate {
    double lower = 0.0;
    double upper = kInf;
    std::vector<std::pair<double, double>> probes;  // (t, violation)
    std::string method;
    bool inconclusive = false;
    std::vector<std::string> notes;
};

// ---------------------------------------------------------------- operations

RealLineMeasure make_zoo_real(const std::string& family, const Params& params);
CircleMeasure make_zoo_circle(const std::string& family, const Params& params);
HalfLineMeasure make_zoo_halfline(const std::string& family, const Params& params);
AnyMeasure make_zoo_measure(const std::string& space, const std::string& family,
                            const Params& params);

struct ZooEntry {
    std::string space;
    std::string family;
    std::vector<std::string> params;
    std::string note;
};
const std::vector<ZooEntry>& zoo_catalog();

/// Moments m_0..m_k (inclusive).
std::vector<double> moments(const RealLineMeasure& mu, int k);
double moment(const RealLineMeasure& mu, int k);

/// From raw moments m1..m4.
JacobiHead jacobi_head_from_moments(double m1, double m2, double m3, double m4);
JacobiHead jacobi_head(const RealLineMeasure& mu);
/// Jacobi parameters of a finite atomic measure (Lanczos / Stieltjes procedure).
JacobiRep jacobi_from_atoms(const std::vector<Atom>& atoms);

RealLineMeasure from_levy_additive_free(const LevyTripletAdditive& lk);
RealLineMeasure from_levy_additive_boolean(const LevyTripletAdditive& lk);
CircleMeasure from_levy_mult_circle(const LevyDataMultCircle& lk);
HalfLineMeasure from_levy_mult_halfline(const LevyDataMultHalfline& lk);

/// Integral gamma + int (1+xz)/(z-x) tau(dx).
cplx levy_additive_integral(double gamma, const LevyMeasure& tau, cplx z);

/// Solves w + t*phi(w) = z for w in the upper half-plane.
cplx solve_w_plus_tphi(const CFun& phi, double t, cplx z);

enum class EtaSpace { Circle, HalfLine };

struct EtaValidation {
    bool valid = false;
    double violation = 0.0;
    cplx witness{};
    std::string reason;
};

/// Checks that an eta-candidate is analytic (Cauchy-Riemann residual), vanishes
/// at 0, and satisfies the range condition of the space.
EtaValidation validate_eta(EtaSpace space, const CFun& eta, double tol = 1e-9);

struct FirstMoment {
    cplx m1{};
    double arg = 0.0;
};
FirstMoment first_moment_circle(const CircleMeasure& mu);

/// Conversions between the half-line and the real line: eta(z) = 1 - z F(1/z).
RealLineMeasure halfline_to_real(const HalfLineMeasure& mu);
HalfLineMeasure real_to_halfline(const RealLineMeasure& mu, std::string label = "");

}  // namespace freeprob
