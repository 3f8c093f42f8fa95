#include <doctest.h>

#include "freeprob/additive.hpp"
#include "freeprob/harness.hpp"
#include "freeprob/indicator.hpp"
#include "oracles.hpp"

using namespace freeprob;

TEST_CASE("Jacobi upper bound") {
    CHECK(jacobi_upper_bound({0.0, 1.0, 0.0, 0.5}) == 0.5);
    CHECK(jacobi_upper_bound({0.0, 0.0, 0.0, 0.0}) == kInf);
    CHECK(jacobi_upper_bound(jacobi_head(make_zoo_real("kesten_mckay", {{"t", 2.0}}))) == doctest::Approx(2.0));
}

TEST_CASE("free infinite divisibility on the real line") {
    SUBCASE("semicircle and Cauchy pass") {
        for (const auto& m : {make_zoo_real("semicircle", {}), RealLineMeasure::cauchy(0.0, 1.0)}) {
            const FidReport r = is_fid_real(m);
            CHECK(r.fid);
            CHECK_FALSE(r.inconclusive);
            CHECK(r.violation() < 1e-9);
        }
    }
    SUBCASE("Bernoulli fails with a Jacobi certificate") {
        const FidReport r = is_fid_real(make_zoo_real("bernoulli", {{"a", 1.0}}));
        CHECK_FALSE(r.fid);
        CHECK(r.jacobi_certificate);
        REQUIRE(r.jacobi_bound.has_value());
        CHECK(*r.jacobi_bound == 0.0);
        CHECK(r.violation() > 0.0);
    }
    SUBCASE("non-FID law is still caught with the Jacobi test off") {
        FidOptions opt;
        opt.jacobi = false;
        const FidReport r = is_fid_real(make_zoo_real("kesten_mckay", {{"t", 0.5}}), opt);
        CHECK_FALSE(r.fid);
        CHECK_FALSE(r.jacobi_certificate);
        CHECK(r.violation() > 0.0);
    }
    SUBCASE("Boolean half-stable law passes the boundary test") {
        const FidReport r = is_fid_real(RealLineMeasure::half_stable(std::polar(1.0, oracle::pi / 8)));
        CHECK(r.fid);
        CHECK(r.max_im_phi <= 1e-6);
    }
}

TEST_CASE("phi indicator brackets") {
    SUBCASE("Kesten-McKay") {
        const IndicatorEstimate e = phi_indicator(make_zoo_real("kesten_mckay", {{"t", 2.0}}));
        CHECK(e.lower <= 2.0 + 1e-12);
        CHECK(e.upper >= 2.0 - 1e-12);
        CHECK(e.upper - e.lower <= 0.04);
    }
    SUBCASE("Cauchy is unbounded") {
        const IndicatorEstimate e = phi_indicator(RealLineMeasure::cauchy(0.0, 1.0));
        CHECK(e.upper == kInf);
        CHECK(e.lower >= 64.0);
    }
    SUBCASE("point mass is unbounded") {
        CHECK(phi_indicator(RealLineMeasure::point(1.0)).upper == kInf);
    }
}

TEST_CASE("auxiliary minimum of the half-stable law") {
    for (double theta : {oracle::pi / 4, oracle::pi / 2, 3 * oracle::pi / 4}) {
        const double s = std::sin(theta);
        CHECK(std::abs(half_stable_aux(theta, 0.0) - s * s / 2.0) < 1e-12);
        CHECK(half_stable_aux(theta, 0.7) >= half_stable_aux(theta, 0.0));
        CHECK(half_stable_aux(theta, -0.7) >= half_stable_aux(theta, 0.0));
    }
}

TEST_CASE("parallel_for visits every index once") {
    std::vector<int> hits(37, 0);
    parallel_for(37, [&](int i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
}
