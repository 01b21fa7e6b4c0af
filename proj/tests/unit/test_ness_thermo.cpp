#include "preb/errors.hpp"
#include "preb/ness_thermo.hpp"
#include "preb/pipeline.hpp"

#include <doctest.h>

#include <cmath>

using namespace preb;

TEST_CASE("carnot references")
{
    CarnotReferences h = carnot_references(0.1, 1.0);
    CHECK(h.eta_c == doctest::Approx(0.9));
    CHECK(h.eta_ca == doctest::Approx(1.0 - std::sqrt(0.1)));
    CarnotReferences r = carnot_references(0.7, 1.0);
    CHECK(r.cop_c == doctest::Approx(7.0 / 3.0));
    CHECK_THROWS_AS(carnot_references(1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(carnot_references(2.0, 1.0), ConfigError);
}

TEST_CASE("collisional limit predictions")
{
    CollisionalPrediction p = collisional_limit(2.0, -1.0, -2.0, 0.1, 1.0);
    CHECK(p.ratio == doctest::Approx(0.25));
    CHECK(p.eta0 == doctest::Approx(0.75));
    CHECK(p.cop0 == doctest::Approx(1.0 / 3.0));
    CHECK(p.engine_window);
    CHECK_FALSE(p.fridge_window);
    CollisionalPrediction f = collisional_limit(2.0, -1.0, -2.0, 0.7, 1.0);
    CHECK(f.fridge_window);
    CHECK_FALSE(f.engine_window);
}

TEST_CASE("heat engine golden point")
{
    NessReport r = run_ness(heat_engine_preset(0.05));
    CHECK(r.P_ext == doctest::Approx(-0.11653).epsilon(1e-3));
    CHECK(r.radius == doctest::Approx(0.713).epsilon(2e-3));
    CHECK(r.regime == Regime::heat_engine);
    REQUIRE(r.eta);
    CHECK(*r.eta == doctest::Approx(0.667).epsilon(2e-3));
    CHECK(*r.eta < r.eta_c);
    CHECK(r.sigma > 0.0);
    REQUIRE(r.copies);
    CHECK(*r.copies == 101);
}

TEST_CASE("steady-state rates obey both laws")
{
    for (const RunConfig& cfg : {heat_engine_preset(0.2), refrigerator_preset(0.2)}) {
        NessReport r = run_ness(cfg);
        CHECK(std::abs(r.P - r.Qdot[0] - r.Qdot[1]) < 1e-9 * r.scale());
        CHECK(std::abs(r.P - r.P_ext - r.P_chem) < 1e-12 * r.scale());
        CHECK(std::abs(r.Ndot[0] + r.Ndot[1]) < 1e-10);
        CHECK(r.sigma > 0.0);
        CHECK(std::abs(r.dU_rate) < 1e-9 * r.scale());
        CHECK(std::abs(r.dS_rate) < 1e-9 * r.scale());
    }
}

TEST_CASE("equal baths give a dud and reversed baths are rejected")
{
    NessReport e = run_ness(equal_bath_preset(0.2));
    CHECK(e.regime == Regime::dud);
    CHECK(e.eta_c == 0.0);
    CHECK(std::isinf(e.cop_c));
    CHECK(e.sigma > -1e-12);
    RunConfig rev = heat_engine_preset(0.2);
    std::swap(rev.baths[0].thermal.beta, rev.baths[1].thermal.beta);
    CHECK_THROWS_AS(run_ness(rev), ConfigError);
}

TEST_CASE("regime labels")
{
    CHECK(to_string(Regime::heat_engine) == "heat-engine");
    CHECK(to_string(Regime::refrigerator) == "refrigerator");
    CHECK(to_string(Regime::dud) == "dud");
}
