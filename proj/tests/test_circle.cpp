#include <doctest.h>

#include "freeprob/circle.hpp"
#include "oracles.hpp"

using namespace freeprob;

namespace {

std::vector<cplx> disc_points() {
    std::vector<cplx> pts;
    for (double r : {0.1, 0.5, 0.8})
        for (int j = 0; j < 8; ++j) pts.push_back(std::polar(r, 2 * oracle::pi * j / 8));
    return pts;
}

double eta_dev(const CircleMeasure& m, const std::function<cplx(cplx)>& expect) {
    return oracle::sup_diff(disc_points(), [&](cplx z) { return m.eta(z); }, expect);
}

}  // namespace

TEST_CASE("bracket of an argument") {
    CHECK(bracket(0.0) == 0);
    CHECK(bracket(3.0) == 0);
    CHECK(bracket(-3.0) == 0);
    CHECK(bracket(oracle::pi) == 1);
    CHECK(bracket(3.5) == 1);
    CHECK(bracket(7.0) == 2);
    CHECK(bracket(-oracle::pi) == -1);
    CHECK(bracket(-7.0) == -2);
}

TEST_CASE("first-moment arguments") {
    const auto d = CircleMeasure::point(0.4);
    CHECK(principal_arg_m1(d) == doctest::Approx(0.4));
    CHECK(arg_for_branch(d, 2) == doctest::Approx(0.4 + 4 * oracle::pi));
    CHECK_THROWS_AS((void)principal_arg_m1(CircleMeasure::point(oracle::pi)), BranchError);
    CHECK_THROWS_AS((void)principal_arg_m1(CircleMeasure::haar()), Error);
}

TEST_CASE("branch logarithm of k") {
    const auto p = CircleMeasure::poisson(0.5, 0.3);
    for (int n : {-1, 0, 2}) {
        const BranchLog bl = branch_log(p, n);
        CHECK(bl.n == n);
        CHECK(bl.phi == doctest::Approx(0.3 + 2 * oracle::pi * n));
        for (const cplx z : disc_points()) CHECK(std::abs(std::exp(bl.u(z)) - p.k(z)) < 1e-12);
        CHECK(std::abs(bl.u(0.0) - cplx(0.5, -bl.phi)) < 1e-12);
    }
    CHECK(winding_of_k(p) == 0);
}

TEST_CASE("powers of point masses follow the branch") {
    const double a = 0.4;
    const auto d = CircleMeasure::point(a);
    for (int n : {0, 1, -1}) {
        for (double t : {0.5, 2.0}) {
            const cplx rot = std::polar(1.0, t * (a + 2 * oracle::pi * n));
            const auto expect = [rot](cplx z) { return rot * z; };
            CHECK(eta_dev(boolean_power_circle(d, t, n), expect) < 1e-12);
            if (t >= 1.0) CHECK(eta_dev(free_power_circle(d, t, n), expect) < 1e-9);
        }
    }
}

TEST_CASE("Poisson kernels") {
    const double a = 0.5, b = 0.3;
    const auto p = CircleMeasure::poisson(a, b);
    SUBCASE("powers scale the exponent") {
        for (double t : {0.5, 1.0, 3.0}) {
            const cplx c = std::exp(t * cplx(-a, b));
            const auto expect = [c](cplx z) { return c * z; };
            CHECK(eta_dev(boolean_power_circle(p, t, 0), expect) < 1e-12);
            if (t >= 1.0) CHECK(eta_dev(free_power_circle(p, t, 0), expect) < 1e-9);
        }
    }
    SUBCASE("fixed by M_t on the principal branch") {
        for (double t : {0.5, 2.0}) CHECK(eta_dev(mt_map_circle(p, t, 0), [&](cplx z) { return p.eta(z); }) < 1e-9);
    }
    SUBCASE("multiplicatively infinitely divisible") {
        const MidReport r = is_mid_circle(p);
        CHECK(r.mid);
        CHECK(r.min_log_abs_sigma >= -1e-7);
    }
    SUBCASE("indicator is unbounded") {
        const IndicatorEstimate e = theta_indicator_circle(p, 0, 8.0, 0.1);
        CHECK(e.upper == kInf);
    }
}

TEST_CASE("Lambda_MB turns k into Sigma") {
    const auto m = CircleMeasure::from_atoms({{0.3, 0.7}, {-0.5, 0.3}});
    const auto out = lambda_mb_circle(m);
    for (double r : {0.05, 0.1}) {
        for (int j = 0; j < 6; ++j) {
            const cplx z = std::polar(r, 2 * oracle::pi * j / 6);
            cplx sigma;
            REQUIRE(sigma_circle(out, z, sigma));
            CHECK(std::abs(sigma - m.k(z)) < 1e-8);
        }
    }
}

TEST_CASE("two equal atoms are not multiplicatively infinitely divisible") {
    const MidReport r = is_mid_circle(CircleMeasure::from_atoms({{0.3, 0.5}, {-0.3, 0.5}}));
    CHECK_FALSE(r.mid);
}

TEST_CASE("disc grid") {
    const auto g = disc_grid(16);
    CHECK(g.size() == 10 * 16);
    for (const cplx z : g) CHECK(std::abs(z) < 1.0);
}
