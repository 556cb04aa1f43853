#include <doctest.h>

#include <random>

#include "tscond/twophase.hpp"

using namespace tscond;

#ifndef TSCOND_DATA_DIR
#define TSCOND_DATA_DIR "data"
#endif

namespace {

const SaturationModel& shipped_model() {
    static const SaturationModel m =
        SaturationModel::from_file(std::string(TSCOND_DATA_DIR) + "/r245fa_saturation.txt");
    return m;
}

SaturationModel toy_model() {
    return SaturationModel::from_rows({
        {{300.0, 1000.0, 10.0, 200.0e3, 430.0e3, 1.0e5, 4.0e-4, 1.0e-5}},
        {{400.0, 1000.0, 10.0, 300.0e3, 500.0e3, 5.0e5, 3.0e-4, 1.2e-5}},
    });
}

}  // namespace

TEST_SUITE("twophase") {

TEST_CASE("shipped property table loads and is physical") {
    const SaturationModel& m = shipped_model();
    CHECK(m.T_min() == doctest::Approx(290.0));
    CHECK(m.T_max() == doctest::Approx(370.0));
    CHECK(m.rho_L(320.0) > m.rho_V(320.0));
    CHECK(m.H_V(320.0) > m.H_L(320.0));
    CHECK(m.p_sat(330.0) > m.p_sat(300.0));
    // p_sat inversion is the exact inverse of the interpolant
    for (double T : {295.0, 318.4, 350.0, 369.0})
        CHECK(m.T_sat(m.p_sat(T)) == doctest::Approx(T).epsilon(1e-12));
}

TEST_CASE("invalid tables are rejected") {
    // decreasing saturation pressure
    CHECK_THROWS_AS(SaturationModel::from_rows({
                        {{300.0, 1000.0, 10.0, 2.0e5, 4.3e5, 2.0e5, 4e-4, 1e-5}},
                        {{400.0, 1000.0, 10.0, 3.0e5, 5.0e5, 1.0e5, 3e-4, 1e-5}},
                    }),
                    config_error);
    // vapor denser than liquid
    CHECK_THROWS_AS(SaturationModel::from_rows({
                        {{300.0, 10.0, 1000.0, 2.0e5, 4.3e5, 1.0e5, 4e-4, 1e-5}},
                        {{400.0, 10.0, 1000.0, 3.0e5, 5.0e5, 5.0e5, 3e-4, 1e-5}},
                    }),
                    config_error);
    // a single row is not a table
    CHECK_THROWS_AS(SaturationModel::from_rows(
                        {{{300.0, 1000.0, 10.0, 2.0e5, 4.3e5, 1.0e5, 4e-4, 1e-5}}}),
                    config_error);
}

TEST_CASE("mixture laws") {
    const SaturationModel m = toy_model();
    CHECK(mixture_density(300.0, 0.0, m) == doctest::Approx(1000.0));
    CHECK(mixture_density(300.0, 1.0, m) == doctest::Approx(10.0));
    CHECK(mixture_density(300.0, 0.5, m) == doctest::Approx(10000.0 / 505.0).epsilon(1e-14));
    CHECK(mixture_enthalpy(300.0, 0.0, m) == doctest::Approx(200.0e3));
    CHECK(mixture_enthalpy(300.0, 1.0, m) == doctest::Approx(430.0e3));
    CHECK(mixture_enthalpy(300.0, 0.25, m) == doctest::Approx(257.5e3).epsilon(1e-14));
    CHECK_THROWS_AS(mixture_density(300.0, 1.5, m), config_error);
    CHECK_THROWS_AS(mixture_density(200.0, 0.5, m), config_error);  // out of range

    // density bounded by the phase densities for any quality
    const SaturationModel& real = shipped_model();
    for (int i = 0; i <= 20; ++i) {
        const double x = i / 20.0;
        const double rho = mixture_density(330.0, x, real);
        CHECK(rho >= real.rho_V(330.0) - 1e-12);
        CHECK(rho <= real.rho_L(330.0) + 1e-12);
    }
}

TEST_CASE("state inversion round-trips through the mixture laws") {
    const SaturationModel& m = shipped_model();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> UT(m.T_min() + 1.0, m.T_max() - 1.0);
    std::uniform_real_distribution<double> Ux(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double T = UT(rng), x = Ux(rng);
        const double H = mixture_enthalpy(T, x, m);
        const InvertedState s = invert_state_at_p(H, m.p_sat(T), m);
        CHECK(std::abs(s.T - T) / T <= 1e-8);
        CHECK(std::abs(s.x - x) <= 1e-8);
        CHECK(s.rho == doctest::Approx(mixture_density(T, x, m)).epsilon(1e-8));
        CHECK(s.p == doctest::Approx(m.p_sat(T)).epsilon(1e-8));
        CHECK(!s.subcooled);
        CHECK(!s.superheated);
    }
}

TEST_CASE("inversion clamps outside the saturated band") {
    const SaturationModel& m = shipped_model();
    const double T = 340.0, p = m.p_sat(T);
    const InvertedState sub = invert_state_at_p(m.H_L(T) - 5.0e3, p, m);
    CHECK(sub.subcooled);
    CHECK(sub.x == 0.0);
    CHECK(sub.T < T);  // liquid cools below saturation
    CHECK(m.H_L(sub.T) == doctest::Approx(m.H_L(T) - 5.0e3).epsilon(1e-9));

    const InvertedState sup = invert_state_at_p(m.H_V(T) + 5.0e3, p, m);
    CHECK(sup.superheated);
    CHECK(sup.x == 1.0);
    CHECK(sup.T > T);

    const InvertedState mid = invert_state_at_T((m.H_L(T) + m.H_V(T)) / 2.0, T, m);
    CHECK(mid.x == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("Blasius-type resistance") {
    CHECK(blasius_resistance(0.0, 100.0, 1e-5, 0.004) == 0.0);
    const double R1 = blasius_resistance(3.0, 100.0, 1e-5, 0.004);
    const double R2 = blasius_resistance(6.0, 100.0, 1e-5, 0.004);
    CHECK(R1 > 0.0);
    CHECK(R2 / R1 == doctest::Approx(1.681792830507429).epsilon(1e-12));
    CHECK(blasius_resistance(-3.0, 100.0, 1e-5, 0.004) == doctest::Approx(R1));
    CHECK_THROWS_AS(blasius_resistance(1.0, 100.0, 1e-5, 0.0), config_error);
    CHECK(laminar_resistance(100.0, 1e-5, 0.004) == doctest::Approx(32.0 * 1e-5 / (100.0 * 1.6e-5)));
}

TEST_CASE("mixture viscosity interpolates between the phases") {
    const SaturationModel m = toy_model();
    CHECK(mixture_viscosity(300.0, 0.0, m) == doctest::Approx(4.0e-4));
    CHECK(mixture_viscosity(300.0, 1.0, m) == doctest::Approx(1.0e-5));
    const double mid = mixture_viscosity(300.0, 0.5, m);
    CHECK(mid > 1.0e-5);
    CHECK(mid < 4.0e-4);
}

TEST_CASE("Shah condensation correlation") {
    CHECK(shah_baseline_h(50.0, 0.0, 0.1) == doctest::Approx(50.0));
    CHECK(shah_baseline_h(50.0, 1.0, 0.1) == doctest::Approx(0.0));
    double prev = shah_baseline_h(50.0, 0.0, 0.1);
    for (int i = 1; i <= 18; ++i) {
        const double h = shah_baseline_h(50.0, 0.05 * i, 0.1);
        CHECK(h > prev);  // monotone on (0, 0.9)
        prev = h;
    }
    CHECK_THROWS_AS(shah_baseline_h(50.0, 0.5, 1.5), std::domain_error);
    CHECK_THROWS_AS(shah_baseline_h(50.0, 0.5, 0.0), std::domain_error);
}

TEST_CASE("correlation set dispatch") {
    CorrelationSet c;
    CHECK(c.wall_coolant_h(0.5, 1.0e5) == doctest::Approx(3.0));
    c.heat_transfer = CorrelationSet::HeatTransfer::ShahBaseline;
    c.shah_h_L = 100.0;
    const double h = c.wall_coolant_h(0.5, 3.651e5);
    CHECK(h > 0.0);
    CHECK(c.wall_coolant_h(1.0, 3.651e5) == doctest::Approx(5.0));  // all-vapor floor
    CHECK(c.air_speed(350.0, 300.0) == doctest::Approx(1.0));
    c.air_velocity = CorrelationSet::AirVelocity::NaturalConvection;
    CHECK(c.air_speed(350.0, 300.0) > 0.0);
    CHECK(c.air_speed(290.0, 300.0) == 0.0);
}

}  // TEST_SUITE
