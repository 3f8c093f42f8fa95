#include <doctest.h>

#include "freeprob/halfline.hpp"
#include "oracles.hpp"

using namespace freeprob;

namespace {

// eta of a finite atomic measure on [0, inf), straight from the moment generating function.
cplx atoms_eta(const std::vector<std::pair<double, double>>& atoms, cplx z) {
    cplx psi = 0.0;
    for (const auto& [x, w] : atoms) psi += w * x * z / (1.0 - x * z);
    return psi / (1.0 + psi);
}

const std::vector<cplx>& small_points() {
    static const std::vector<cplx> pts = {cplx(-0.1, 0.0), cplx(-0.05, 0.05), cplx(0.02, 0.08), cplx(-0.3, 0.2)};
    return pts;
}

}  // namespace

TEST_CASE("point masses under multiplicative powers") {
    const auto d = HalfLineMeasure::point(2.0);
    for (const cplx z : halfline_grid()) {
        CHECK(std::abs(boolean_power_halfline(d, 0.5).eta(z) - std::sqrt(2.0) * z) < 1e-12);
        CHECK(std::abs(free_power_halfline(d, 3.0).eta(z) - 8.0 * z) < 1e-9);
        CHECK(std::abs(mt_map_halfline(d, 1.5).eta(z) - 2.0 * z) < 1e-9);
    }
}

TEST_CASE("Boolean power beyond one is rejected") {
    CHECK_THROWS_AS((void)boolean_power_halfline(HalfLineMeasure::free_poisson(1.0), 2.0), RangeError);
    CHECK_NOTHROW((void)boolean_power_halfline(HalfLineMeasure::free_poisson(1.0), 1.0));
}

TEST_CASE("log eta ratio lies in the expected strip") {
    const auto fp = HalfLineMeasure::free_poisson(1.0);
    for (const cplx z : halfline_grid()) {
        if (z.imag() <= 0.0) continue;
        const double im = log_eta_ratio(fp, z).imag();
        CHECK(im >= -1e-12);
        CHECK(im < oracle::pi);
    }
}

TEST_CASE("free Poisson Sigma transforms") {
    const auto fp = HalfLineMeasure::free_poisson(1.0);
    const auto sq = free_power_halfline(fp, 2.0);
    for (const cplx z : small_points()) {
        cplx s1, s2;
        REQUIRE(sigma_halfline(fp, z, s1));
        REQUIRE(sigma_halfline(sq, z, s2));
        CHECK(std::abs(s1 - oracle::free_poisson_sigma(z, 1.0)) < 1e-9);
        CHECK(std::abs(s2 - (1.0 - z) * (1.0 - z)) < 1e-8);
    }
    const SigmaEvidence ev = sigma_positivity_halfline(fp);
    CHECK(ev.ok);
    CHECK(ev.failures == 0);
}

TEST_CASE("free power eta agrees with the subordination map") {
    const auto fp = HalfLineMeasure::free_poisson(2.0);
    const CFun omega = halfline_subordination(fp, 3.0);
    const auto p = free_power_halfline(fp, 3.0);
    for (const cplx z : halfline_grid()) {
        const cplx w = omega(z);
        CHECK(std::abs(w - z * std::pow(fp.eta(w) / w, 2.0)) < 1e-9);
        CHECK(std::abs(p.eta(z) - fp.eta(w)) < 1e-9);
    }
}

TEST_CASE("Lambda_MB turns k into Sigma") {
    const std::vector<std::pair<double, double>> atoms = {{1.0, 0.5}, {2.0, 0.5}};
    const auto m = HalfLineMeasure::from_atoms({{1.0, 0.5}, {2.0, 0.5}});
    const auto out = lambda_mb_halfline(m);
    for (const cplx z : small_points()) {
        cplx s;
        REQUIRE(sigma_halfline(out, z, s));
        CHECK(std::abs(s - z / atoms_eta(atoms, z)) < 1e-8);
    }
}

TEST_CASE("additive operations on the half-line") {
    const std::vector<std::pair<double, double>> atoms = {{1.0, 0.5}, {2.0, 0.5}};
    const auto m = HalfLineMeasure::from_atoms({{1.0, 0.5}, {2.0, 0.5}});
    const auto u = uplus_power_halfline(m, 0.5);
    const auto d = dilate_halfline(m, 3.0);
    for (const cplx z : halfline_grid()) {
        CHECK(std::abs(u.eta(z) - 0.5 * atoms_eta(atoms, z)) < 1e-12);
        CHECK(std::abs(d.eta(z) - atoms_eta(atoms, 3.0 * z)) < 1e-12);
    }
    // Free Poisson laws form an additive free semigroup in the rate.
    const auto fp2 = boxplus_power_halfline(HalfLineMeasure::free_poisson(1.0), 2.0);
    for (const cplx z : halfline_grid()) CHECK(std::abs(fp2.eta(z) - oracle::free_poisson_eta(z, 2.0)) < 1e-8);
}

TEST_CASE("M_t pre-image candidate round trip") {
    const std::vector<std::pair<double, double>> atoms = {{1.0, 0.5}, {2.0, 0.5}};
    const auto nu = HalfLineMeasure::from_atoms({{1.0, 0.5}, {2.0, 0.5}});
    const auto mu = mt_map_halfline(nu, 0.5);
    const auto pre = mt_preimage_candidate(mu, 0.5);
    for (const cplx z : halfline_grid()) CHECK(std::abs(pre.eta(z) - atoms_eta(atoms, z)) < 1e-7);
}
