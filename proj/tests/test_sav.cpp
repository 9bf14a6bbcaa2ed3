#include <cmath>

#include "doctest.h"
#include "evokan/problems/allen_cahn.hpp"

using namespace evokan;

namespace {

GradientFlowForm make_form(double eps, double c0) {
    GradientFlowForm f;
    f.spec.dim = 1;
    f.spec.eps = eps;
    f.spec.c0 = c0;
    return f;
}

}  // namespace

TEST_CASE("sav_init matches sqrt(E1) exactly") {
    const GradientFlowForm form = make_form(0.5, 1.0);
    FieldSnapshot ones = sample_snapshot(64, 1, 0.0, [](double, double) { return 1.0; });
    CHECK(sav_init(form, ones).r == doctest::Approx(1.0).epsilon(1e-14));

    FieldSnapshot zeros = make_snapshot(64, 1, 1, 0.0);
    CHECK(sav_init(form, zeros).r == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));

    FieldSnapshot wave = sample_snapshot(64, 1, 0.0,
                                         [](double x, double) { return 0.4 * std::sin(kPi * x); });
    const SavState s = sav_init(form, wave);
    CHECK(std::abs(s.r * s.r - form.e1(wave)) <= 4e-16 * form.e1(wave));
}

TEST_CASE("at initialization mu is the plain chemical potential") {
    const GradientFlowForm form = make_form(0.2, 1.0);
    FieldSnapshot wave = sample_snapshot(64, 1, 0.0,
                                         [](double x, double) { return 0.3 * std::sin(2 * kPi * x); });
    const SavState sav = sav_init(form, wave);
    const std::vector<double> mu = sav_mu(form, wave, sav);
    const std::vector<double> lphi = form.lphi(wave);
    for (int i = 0; i < wave.nx; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        const double plain = lphi[ii] + form.U(wave.values[ii]);
        CHECK(mu[ii] == doctest::Approx(plain).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("equilibrium fields give zero mu and zero rates") {
    const GradientFlowForm form = make_form(0.25, 1.0);
    for (double c : {0.0, 1.0}) {
        FieldSnapshot snap = sample_snapshot(64, 1, 0.0, [c](double, double) { return c; });
        const SavState sav = sav_init(form, snap);
        const std::vector<double> mu = sav_mu(form, snap, sav);
        for (double m : mu) CHECK(std::abs(m) < 1e-12);
        const SavRhs rhs = sav_rhs(form, snap, sav);
        for (double p : rhs.phi_t) CHECK(std::abs(p) < 1e-12);
        CHECK(std::abs(rhs.r_t) < 1e-12);
    }
}

TEST_CASE("dissipation structure: (mu, G mu) <= 0 on arbitrary snapshots") {
    const GradientFlowForm form = make_form(0.1, 1.0);
    Rng rng(44);
    for (int trial = 0; trial < 10; ++trial) {
        FieldSnapshot snap = make_snapshot(64, 1, 1, 0.0);
        for (auto& v : snap.values) v = rng.uniform(-1.5, 1.5);
        const SavState sav = sav_init(form, snap);
        const std::vector<double> mu = sav_mu(form, snap, sav);
        const SavRhs rhs = sav_rhs(form, snap, sav);
        double inner = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) inner += mu[i] * rhs.phi_t[i];
        inner *= snap.cell_volume();
        CHECK(inner <= 1e-12);
    }
}

TEST_CASE("sav_mu rejects a non-positive auxiliary variable") {
    const GradientFlowForm form = make_form(0.1, 1.0);
    FieldSnapshot snap = make_snapshot(64, 1, 1, 0.0);
    SavState bad;
    bad.r = 0.0;
    CHECK_THROWS_AS(sav_mu(form, snap, bad), contract_error);
}

TEST_CASE("E1 stays above the shift constant") {
    const GradientFlowForm form = make_form(0.05, 1.0);
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        FieldSnapshot snap = make_snapshot(32, 1, 1, 0.0);
        for (auto& v : snap.values) v = rng.uniform(-2.0, 2.0);
        CHECK(form.e1(snap) >= form.spec.c0);
    }
}
