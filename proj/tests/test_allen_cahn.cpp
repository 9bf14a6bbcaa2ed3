#include <cmath>

#include "doctest.h"
#include "evokan/problems/allen_cahn.hpp"

using namespace evokan;

TEST_CASE("residual vanishes at the phase equilibria") {
    AllenCahnSpec s;
    s.dim = 1;
    s.eps = 0.1;
    for (double u : {-1.0, 0.0, 1.0}) {
        JetValue jet = JetValue::constant(u, 1);
        CHECK(ac_residual(s, jet) == 0.0);
    }
}

TEST_CASE("residual reproduces the hand-evaluated sine example") {
    // u = sin(pi x) at x = 0.5 with eps = 0.1: u = 1, u_xx = -pi^2,
    // N = eps^2 u_xx - g(1) = -0.01 pi^2.
    AllenCahnSpec s;
    s.dim = 1;
    s.eps = 0.1;
    JetValue jet = JetValue::constant(1.0, 1);
    jet.dxx[0] = -kPi * kPi;
    CHECK(ac_residual(s, jet) == doctest::Approx(-0.01 * kPi * kPi).epsilon(1e-12));
    CHECK(ac_residual(s, jet) == doctest::Approx(-0.098696).epsilon(1e-4));
}

TEST_CASE("residual requires full second-derivative jets") {
    AllenCahnSpec s;
    s.dim = 2;
    JetValue jet = JetValue::constant(0.5, 1);  // wrong dimension
    CHECK_THROWS_AS(ac_residual(s, jet), contract_error);
    JetValue first_order = JetValue::constant(0.5, 2);
    first_order.order = 1;
    CHECK_THROWS_AS(ac_residual(s, first_order), contract_error);
}

TEST_CASE("g is the derivative of G") {
    AllenCahnSpec s;
    s.eps = 0.3;
    const double h = 1e-6;
    for (int i = 0; i <= 40; ++i) {
        const double u = -2.0 + 4.0 * i / 40.0;
        const double fd = (ac_G(s, u + h) - ac_G(s, u - h)) / (2 * h);
        const double g = ac_g(s, u);
        CHECK(g == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
    }
}

TEST_CASE("energy of the constant phases") {
    AllenCahnSpec s;
    s.dim = 1;
    s.eps = 0.5;
    s.c0 = 1.0;
    FieldSnapshot ones = sample_snapshot(64, 1, 0.0, [](double, double) { return 1.0; });
    auto [e_total, e1] = ac_energy(s, ones);
    CHECK(std::abs(e_total) < 1e-12);
    CHECK(e1 == doctest::Approx(1.0).epsilon(1e-12));

    // u = 0: int G = |Omega| / (4 eps^2) = 2 / (4 * 0.25) = 2
    FieldSnapshot zeros = make_snapshot(64, 1, 1, 0.0);
    auto [e0_total, e0_1] = ac_energy(s, zeros);
    CHECK(e0_total == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(e0_1 == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("initial conditions") {
    AllenCahnSpec s1;
    s1.dim = 1;
    s1.amp = 0.25;
    auto ic1 = ac_initial_condition(s1);
    CHECK(ic1(0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(ic1(0.5, 0.0) == doctest::Approx(0.25).epsilon(1e-12));

    AllenCahnSpec s2;
    s2.dim = 2;
    s2.alpha = 1;
    auto ic2 = ac_initial_condition(s2);
    CHECK(ic2(0.5, 0.5) == doctest::Approx(0.08).epsilon(1e-12));
}

TEST_CASE("spec validation") {
    AllenCahnSpec s;
    s.eps = 0.0;
    CHECK_THROWS_AS(s.validate(), invalid_argument);
    s.eps = 0.1;
    s.alpha = 0;
    CHECK_THROWS_AS(s.validate(), invalid_argument);
    s.alpha = 1;
    s.dim = 3;
    CHECK_THROWS_AS(s.validate(), invalid_argument);
}

TEST_CASE("ac_energy rejects vector snapshots") {
    AllenCahnSpec s;
    FieldSnapshot two = make_snapshot(32, 1, 2, 0.0);
    CHECK_THROWS_AS(ac_energy(s, two), contract_error);
}
