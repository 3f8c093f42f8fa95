#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "freeprob/measure.hpp"

namespace freeprob {

struct GridSpec {
    double x_min = -5.0;
    double x_max = 5.0;
    int count = 1001;
    double eps = 1e-6;

    void validate() const;
    double at(int i) const;
    /// Parse "lo:hi:count".
    static GridSpec parse(const std::string& text, double eps = 1e-6);
};

struct InversionResult {
    cplx value{};
    double residual = 0.0;
    int iterations = 0;
};

enum class AdditiveKind { G, F, K };
enum class MultKind { Psi, Eta, K, Sigma };

cplx eval_additive_transform(const RealLineMeasure& mu, AdditiveKind kind, cplx z);

enum class PhiMethod { Auto, Inversion };

/// Voiculescu transform phi(z) = F^{-1}(z) - z. Closed forms are used when
/// available (unless Inversion is forced); otherwise Newton from the seed z.
InversionResult eval_phi(const RealLineMeasure& mu, cplx z, PhiMethod method = PhiMethod::Auto);

/// Inversion of F by continuation along the vertical segment from Re z + i*top
/// down to z; returns false when the preimage leaves the upper half-plane.
bool invert_F_continued(const RealLineMeasure& mu, cplx z, double top, InversionResult& out);

cplx eval_mult_transform(const CircleMeasure& mu, MultKind kind, cplx z);
cplx eval_mult_transform(const HalfLineMeasure& mu, MultKind kind, cplx z);

/// Inverse of eta near 0, seeded at z / eta'(0).
InversionResult invert_eta(const CFun& eta, cplx m1, cplx z, bool unit_disc);

/// G = 1/(z - b0 - g0/(z - b1 - g1/(...))) evaluated bottom-up with `depth`
/// levels of gamma (default: all of them). Lists shorter than the depth are
/// padded with their last entry.
cplx continued_fraction_G(const std::vector<double>& beta, const std::vector<double>& gamma,
                          cplx z, int depth = -1);

/// G of a Jacobi representation, including the closed-form periodic tail.
cplx jacobi_G(const JacobiRep& j, cplx z);

/// Stieltjes transform of the constant-coefficient tail (b; g, g, ...).
cplx periodic_tail(double b, double g, cplx z);

struct DensityPoint {
    double x = 0.0;
    double density = 0.0;
};
struct DensityAtom {
    double x = 0.0;
    double weight = 0.0;
};
struct DensityResult {
    std::vector<DensityPoint> points;
    std::vector<DensityAtom> atoms;
};

DensityResult stieltjes_density(const RealLineMeasure& mu, const GridSpec& grid);
/// Density on [-pi, pi) from boundary values of psi at radius 1 - eps.
DensityResult circle_density_from_eta(const CircleMeasure& mu, int count, double eps = 1e-6);

void write_density_csv(std::ostream& os, const DensityResult& d, const std::string& xname);

}  // namespace freeprob
