#include <doctest.h>

#include "freeprob/measure.hpp"
#include "freeprob/transforms.hpp"
#include "oracles.hpp"

using namespace freeprob;

TEST_CASE("zoo cauchy has F(z) = z - a + ib") {
    const auto m = make_zoo_real("cauchy", {{"a", 0.0}, {"b", 1.0}});
    CHECK(std::abs(m.F(kI) - cplx(0.0, 2.0)) < 1e-14);
    const auto shifted = make_zoo_real("cauchy", {{"a", 1.5}, {"b", 0.5}});
    for (const cplx z : oracle::upper_grid())
        CHECK(std::abs(shifted.F(z) - oracle::cauchy_F(z, 1.5, 0.5)) < 1e-12);
}

TEST_CASE("zoo point mass at 0 has F(z) = z") {
    const auto m = make_zoo_real("point", {{"a", 0.0}});
    for (const cplx z : oracle::upper_grid()) CHECK(std::abs(m.F(z) - z) < 1e-15);
}

TEST_CASE("zoo families match closed-form Cauchy transforms") {
    const auto sc = make_zoo_real("semicircle", {{"mean", 0.5}, {"variance", 2.0}});
    const auto km1 = make_zoo_real("kesten_mckay", {{"t", 1.0}});
    const auto bern = make_zoo_real("bernoulli", {{"a", 1.0}});
    for (const cplx z : oracle::upper_grid()) {
        CHECK(std::abs(sc.G(z) - oracle::semicircle_G(z, 0.5, 2.0)) < 1e-12);
        CHECK(std::abs(km1.G(z) - oracle::semicircle_G(z)) < 1e-12);
        CHECK(std::abs(bern.G(z) - oracle::atoms_G({{-1.0, 0.5}, {1.0, 0.5}}, z)) < 1e-12);
    }
}

TEST_CASE("zoo rejects unknown families and out-of-domain parameters") {
    CHECK_THROWS_AS(make_zoo_real("gaussian", {}), DomainError);
    CHECK_THROWS_AS(make_zoo_real("kesten_mckay", {{"t", -1.0}}), DomainError);
    CHECK_THROWS_AS(make_zoo_real("cauchy", {{"a", 0.0}, {"b", 0.0}}), DomainError);
    CHECK_THROWS_AS(make_zoo_circle("poisson_kernel", {{"a", -0.1}, {"b", 0.0}}), DomainError);
    CHECK_THROWS_AS(make_zoo_real("semicircle", {{"varaince", 1.0}}), DomainError);
}

TEST_CASE("every zoo entry constructs with defaults") {
    for (const auto& e : zoo_catalog()) {
        CAPTURE(e.family);
        CHECK_NOTHROW((void)make_zoo_measure(e.space, e.family, {}));
    }
}

TEST_CASE("moments from Jacobi recursion and atoms") {
    const auto sc = make_zoo_real("semicircle", {});
    const auto m = moments(sc, 6);
    CHECK(m[2] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m[4] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m[6] == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(std::abs(m[3]) < 1e-14);
    CHECK(moment(RealLineMeasure::point(1.7), 3) == doctest::Approx(1.7 * 1.7 * 1.7));
    CHECK(moment(make_zoo_real("bernoulli", {{"a", 1.0}}), 4) == doctest::Approx(1.0));
}

TEST_CASE("moments of a Cauchy law are reported as undefined") {
    CHECK_THROWS_AS((void)moment(RealLineMeasure::cauchy(0.0, 1.0), 1), Error);
}

TEST_CASE("Jacobi head from moments") {
    SUBCASE("q-Gaussian ratio is 1 + q") {
        for (double q : {-0.5, 0.0, 0.5}) {
            const JacobiHead h = jacobi_head_from_moments(0.0, 1.0, 0.0, 2.0 + q);
            CHECK(h.gamma1 / h.gamma0 == doctest::Approx(1.0 + q).epsilon(1e-14));
        }
    }
    SUBCASE("point mass has vanishing gammas") {
        const double a = 2.0;
        const JacobiHead h = jacobi_head_from_moments(a, a * a, a * a * a, a * a * a * a);
        CHECK(h.gamma0 == doctest::Approx(0.0));
        CHECK(h.gamma1 == 0.0);
    }
    SUBCASE("arcsine on [-2, 2]") {
        const JacobiHead h = jacobi_head_from_moments(0.0, 2.0, 0.0, 6.0);
        CHECK(h.beta0 == doctest::Approx(0.0));
        CHECK(h.gamma0 == doctest::Approx(2.0));
        CHECK(h.beta1 == doctest::Approx(0.0));
        CHECK(h.gamma1 == doctest::Approx(1.0));
    }
    SUBCASE("round trip through moments") {
        const auto fm = make_zoo_real("free_meixner", {{"b0", 0.3}, {"g0", 1.2}, {"b1", -0.4}, {"g1", 0.7}});
        const auto m = moments(fm, 4);
        const JacobiHead h = jacobi_head_from_moments(m[1], m[2], m[3], m[4]);
        CHECK(h.beta0 == doctest::Approx(0.3).epsilon(1e-10));
        CHECK(h.gamma0 == doctest::Approx(1.2).epsilon(1e-10));
        CHECK(h.beta1 == doctest::Approx(-0.4).epsilon(1e-10));
        CHECK(h.gamma1 == doctest::Approx(0.7).epsilon(1e-10));
    }
    SUBCASE("invalid moment sequence") {
        CHECK_THROWS_AS((void)jacobi_head_from_moments(0.0, -1.0, 0.0, 1.0), DomainError);
    }
}

TEST_CASE("Levy-Khintchine constructors") {
    SUBCASE("free: unit mass at 0 gives the semicircle") {
        const auto m = from_levy_additive_free({0.0, LevyMeasure::point(0.0)});
        for (const cplx z : oracle::upper_grid()) {
            CHECK(std::abs(m.G(z) - oracle::semicircle_G(z)) < 1e-10);
            CHECK(std::abs(m.phi_closed(z) - 1.0 / z) < 1e-14);
        }
    }
    SUBCASE("free: drift only gives a point mass") {
        const auto m = from_levy_additive_free({0.7, LevyMeasure{}});
        for (const cplx z : oracle::upper_grid()) CHECK(std::abs(m.F(z) - (z - 0.7)) < 1e-10);
    }
    SUBCASE("free: two-point Levy measure against direct quadrature") {
        LevyMeasure tau;
        tau.atoms = {{-1.0, 0.25}, {1.0, 0.25}};
        const auto m = from_levy_additive_free({0.0, tau});
        for (const cplx z : oracle::upper_grid()) {
            const cplx expect = 0.25 * (1.0 - z) / (z + 1.0) + 0.25 * (1.0 + z) / (z - 1.0);
            CHECK(std::abs(m.phi_closed(z) - expect) < 1e-13);
        }
    }
    SUBCASE("Boolean: unit mass at 0 gives the symmetric Bernoulli law") {
        const auto m = from_levy_additive_boolean({0.0, LevyMeasure::point(0.0)});
        for (const cplx z : oracle::upper_grid())
            CHECK(std::abs(m.G(z) - oracle::atoms_G({{-1.0, 0.5}, {1.0, 0.5}}, z)) < 1e-12);
    }
    SUBCASE("circle: trivial data gives the point mass at 1") {
        const auto m = from_levy_mult_circle({0.0, LevyMeasure{}});
        for (const cplx z : {cplx(0.3, 0.1), cplx(-0.5, 0.4)}) CHECK(std::abs(m.eta(z) - z) < 1e-12);
    }
    SUBCASE("circle: Haar-proportional Levy measure gives a Poisson kernel") {
        // A uniform tau of total mass a on the circle integrates to the constant a.
        const double a = 0.4, b = 0.3;
        const auto m = from_levy_mult_circle({-b, LevyMeasure::uniform(-oracle::pi, oracle::pi, a, 2049)});
        const cplx c = std::exp(cplx(-a, b));
        for (const cplx z : {cplx(0.5, 0.0), cplx(0.2, -0.6), cplx(-0.7, 0.1)}) CHECK(std::abs(m.k(z) - 1.0 / c) < 1e-9);
    }
    SUBCASE("half-line: constant data gives a point mass") {
        const auto m = from_levy_mult_halfline({0.0, std::log(0.5), LevyMeasure{}});
        for (const cplx z : {cplx(-0.3, 0.1), cplx(0.2, 0.5)}) CHECK(std::abs(m.eta(z) - 2.0 * z) < 1e-10);
    }
}

TEST_CASE("validate_eta") {
    CHECK(validate_eta(EtaSpace::Circle, [](cplx z) { return z; }).valid);
    const EtaValidation bad = validate_eta(EtaSpace::Circle, [](cplx z) { return 2.0 * z; });
    CHECK_FALSE(bad.valid);
    CHECK(bad.violation > 0.0);
    CHECK(validate_eta(EtaSpace::HalfLine, [](cplx z) { return oracle::free_poisson_eta(z, 1.0); }).valid);
    CHECK_FALSE(validate_eta(EtaSpace::HalfLine, [](cplx z) { return std::conj(z); }).valid);
}

TEST_CASE("constructed measures satisfy the range conditions") {
    for (const auto& e : zoo_catalog()) {
        CAPTURE(e.family);
        const AnyMeasure m = make_zoo_measure(e.space, e.family, {});
        if (const auto* r = std::get_if<RealLineMeasure>(&m)) {
            for (int i = 0; i < 20; ++i)
                for (double y : {0.01, 0.1, 1.0, 5.0, 20.0}) {
                    const cplx z(-5.0 + 10.0 * i / 19.0, y);
                    CHECK(r->F(z).imag() >= z.imag() - 1e-12);
                }
        } else if (const auto* c = std::get_if<CircleMeasure>(&m)) {
            CHECK(validate_eta(EtaSpace::Circle, [c](cplx z) { return c->eta(z); }).valid);
        } else {
            const auto& h = std::get<HalfLineMeasure>(m);
            CHECK(validate_eta(EtaSpace::HalfLine, [&h](cplx z) { return h.eta(z); }).valid);
        }
    }
}

TEST_CASE("first moment on the circle") {
    const auto d = CircleMeasure::point(oracle::pi / 3);
    const FirstMoment fm = first_moment_circle(d);
    CHECK(std::abs(fm.m1 - std::polar(1.0, oracle::pi / 3)) < 1e-14);
    CHECK(fm.arg == doctest::Approx(oracle::pi / 3));
    CHECK(std::abs(first_moment_circle(CircleMeasure::haar()).m1) == 0.0);
    const auto p = CircleMeasure::poisson(0.5, 0.3);
    CHECK(std::abs(first_moment_circle(p).m1 - std::exp(cplx(-0.5, 0.3))) < 1e-14);
    CHECK_THROWS_AS((void)first_moment_circle(CircleMeasure::from_atoms({{0.0, 0.5}, {oracle::pi, 0.5}})), Error);
}

TEST_CASE("atom weights must sum to one") {
    CHECK_THROWS_AS(RealLineMeasure::from_atoms({{0.0, 0.5}}), DomainError);
    CHECK_THROWS_AS(HalfLineMeasure::from_atoms({{-1.0, 1.0}}), DomainError);
}

TEST_CASE("half-line and real-line conversions agree") {
    const auto fp = HalfLineMeasure::free_poisson(1.0);
    const auto r = halfline_to_real(fp);
    for (const cplx z : oracle::upper_grid()) CHECK(std::abs(r.G(z) - oracle::free_poisson_G(z, 1.0)) < 1e-10);
    for (const cplx z : {cplx(-0.5, 0.2), cplx(0.1, 0.3), cplx(-2.0, 0.0)})
        CHECK(std::abs(fp.eta(z) - oracle::free_poisson_eta(z, 1.0)) < 1e-10);
}
