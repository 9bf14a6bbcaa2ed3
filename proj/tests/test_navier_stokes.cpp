#include <cmath>

#include "doctest.h"
#include "evokan/problems/navier_stokes.hpp"

using namespace evokan;

namespace {

FieldSnapshot taylor_green(int n, double decay = 1.0) {
    FieldSnapshot s = make_snapshot(n, n, 2, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double x = s.x(i), y = s.y(j);
            s.at(0, j, i) = -std::cos(2 * kPi * x) * std::sin(2 * kPi * y) * decay;
            s.at(1, j, i) = std::sin(2 * kPi * x) * std::cos(2 * kPi * y) * decay;
        }
    return s;
}

}  // namespace

TEST_CASE("uniform flow is steady") {
    NavierStokesSpec spec;
    spec.nu = 0.05;
    FieldSnapshot s = make_snapshot(32, 32, 2, 0.0);
    for (int j = 0; j < 32; ++j)
        for (int i = 0; i < 32; ++i) s.at(0, j, i) = 0.7;
    const FieldSnapshot n = nse_residual(spec, s);
    for (double v : n.values) CHECK(std::abs(v) < 1e-13);
}

TEST_CASE("Taylor-Green tendency matches the analytic decay rate") {
    NavierStokesSpec spec;
    spec.nu = 0.05;
    const int n = 64;
    const FieldSnapshot tg = taylor_green(n);
    const FieldSnapshot r = nse_residual(spec, tg);
    const double rate = -8.0 * kPi * kPi * spec.nu;
    double worst = 0.0;
    for (std::size_t i = 0; i < r.values.size(); ++i)
        worst = std::max(worst, std::abs(r.values[i] - rate * tg.values[i]));
    CHECK(worst < 1e-10);
}

TEST_CASE("residual is divergence-free on random band-limited fields") {
    NavierStokesSpec spec;
    spec.nu = 0.01;
    NseResidual op(spec, 64);
    Rng rng(77);
    for (int trial = 0; trial < 5; ++trial) {
        // random band-limited field: modes |m| <= 4, coefficients drawn once
        double cu[4][2], cv[4][2];
        for (int m = 0; m < 4; ++m)
            for (int c = 0; c < 2; ++c) {
                cu[m][c] = rng.uniform(-1, 1);
                cv[m][c] = rng.uniform(-1, 1);
            }
        FieldSnapshot s = make_snapshot(64, 64, 2, 0.0);
        for (int j = 0; j < 64; ++j)
            for (int i = 0; i < 64; ++i) {
                const double x = s.x(i), y = s.y(j);
                double u = 0.0, v = 0.0;
                for (int m = 1; m <= 4; ++m) {
                    u += cu[m - 1][0] * std::sin(m * kPi * x + cu[m - 1][1]) *
                         std::cos(m * kPi * y);
                    v += cv[m - 1][0] * std::cos(m * kPi * x) *
                         std::sin(m * kPi * y + cv[m - 1][1]);
                }
                s.at(0, j, i) = u;
                s.at(1, j, i) = v;
            }
        const FieldSnapshot r = op(s);
        CHECK(max_spectral_divergence(r) < 1e-9);
    }
}

TEST_CASE("initial condition variants") {
    NavierStokesSpec spec;
    spec.ic = NseIc::DivergenceFree;
    auto ic = nse_initial_condition(spec);
    FieldSnapshot s = make_snapshot(64, 64, 2, 0.0);
    for (int j = 0; j < 64; ++j)
        for (int i = 0; i < 64; ++i) ic(s.x(i), s.y(j), s.at(0, j, i), s.at(1, j, i));
    CHECK(max_spectral_divergence(s) < 1e-12);

    spec.ic = NseIc::PaperLiteral;
    auto icp = nse_initial_condition(spec);
    double u = 0, v = 0;
    icp(0.3, 0.1, u, v);
    CHECK(u == doctest::Approx(-std::sin(0.2 * kPi)).epsilon(1e-14));
    CHECK(v == doctest::Approx(std::cos(0.2 * kPi)).epsilon(1e-14));
}

TEST_CASE("grid validation") {
    NavierStokesSpec spec;
    FieldSnapshot bad = make_snapshot(48, 48, 2, 0.0);
    CHECK_THROWS_AS(nse_residual(spec, bad), invalid_argument);
    FieldSnapshot rect = make_snapshot(64, 32, 2, 0.0);
    CHECK_THROWS_AS(nse_residual(spec, rect), invalid_argument);
    NavierStokesSpec badspec;
    badspec.nu = 0.0;
    CHECK_THROWS_AS(badspec.validate(), invalid_argument);
}
