#include <doctest.h>

#include "freeprob/json_io.hpp"
#include "oracles.hpp"

using namespace freeprob;

TEST_CASE("measure specs round trip") {
    const std::vector<Json> specs = {
        Json::parse(R"({"space":"real","kind":"atoms","atoms":[[-1,0.25],[2,0.75]]})"),
        Json::parse(R"({"space":"real","kind":"closed_form","family":"cauchy","params":{"a":0.5,"b":2}})"),
        Json::parse(R"({"space":"real","kind":"jacobi","beta":[0,0.5],"gamma":[1,2]})"),
        Json::parse(R"({"space":"circle","kind":"closed_form","family":"poisson_kernel","params":{"a":0.5,"b":0.3}})"),
        Json::parse(R"({"space":"halfline","kind":"closed_form","family":"free_poisson","params":{"lambda":2}})"),
    };
    for (const auto& j : specs) {
        CAPTURE(j.dump());
        const auto out = measure_to_spec(parse_measure_spec(j));
        REQUIRE(out.has_value());
        CHECK(*out == j);
    }
}

TEST_CASE("parsed measures evaluate as expected") {
    const auto m = parse_measure_spec(Json::parse(R"({"space":"real","kind":"closed_form","family":"cauchy","params":{"a":1,"b":0.5}})"));
    const auto& r = std::get<RealLineMeasure>(m);
    for (const cplx z : oracle::upper_grid()) CHECK(std::abs(r.F(z) - oracle::cauchy_F(z, 1.0, 0.5)) < 1e-14);

    const auto lk = parse_measure_spec(Json::parse(R"({"space":"real","kind":"levy_free","atoms":[[0,1]]})"));
    for (const cplx z : oracle::upper_grid())
        CHECK(std::abs(std::get<RealLineMeasure>(lk).G(z) - oracle::semicircle_G(z)) < 1e-10);
}

TEST_CASE("malformed specs are rejected") {
    const char* bad[] = {
        R"([1,2])",
        R"({"space":"real"})",
        R"({"space":"plane","kind":"atoms","atoms":[[0,1]]})",
        R"({"space":"real","kind":"atoms","atoms":[[0,1]],"extra":1})",
        R"({"space":"real","kind":"atoms","atoms":[[0,0.5]]})",
        R"({"space":"real","kind":"atoms","atoms":[[0]]})",
        R"({"space":"real","kind":"closed_form","family":"cauchy","atoms":[[0,1]]})",
        R"({"space":"real","kind":"closed_form","family":"semicircle","params":{"variance":"big"}})",
        R"({"space":"circle","kind":"jacobi","beta":[0],"gamma":[1]})",
        R"({"space":"real","kind":"jacobi","beta":[0,1],"gamma":[1]})",
        R"({"space":"real","kind":"levy_mult","params":{}})",
        R"({"space":"halfline","kind":"levy_mult","params":{"gamma_arg":1}})",
    };
    for (const char* s : bad) {
        CAPTURE(s);
        CHECK_THROWS_AS((void)parse_measure_spec(Json::parse(s)), DomainError);
    }
    CHECK_THROWS_AS((void)load_measure_spec("/nonexistent/spec.json"), DomainError);
}

TEST_CASE("non-finite numbers use string sentinels") {
    CHECK(number_json(kInf) == "inf");
    CHECK(number_json(-kInf) == "-inf");
    CHECK(number_json(std::nan("")) == "nan");
    CHECK(number_json(1.5) == 1.5);
    IndicatorEstimate e;
    e.lower = 64.0;
    e.method = "bisection";
    const Json j = indicator_json(e);
    CHECK(j["upper"] == "inf");
    CHECK(j["lower"] == 64.0);
    CHECK_FALSE(j.contains("inconclusive"));
}

TEST_CASE("transform-only measures have no spec") {
    CFun F = [](cplx z) { return z; };
    const auto m = RealLineMeasure::from_transform(F, nullptr, kInf, 1.0, "t");
    CHECK_FALSE(measure_to_spec(m).has_value());
}
