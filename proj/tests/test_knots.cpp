#include <cmath>

#include "doctest.h"
#include "evokan/knots.hpp"

using namespace evokan;

TEST_CASE("make_knots produces the extended uniform sequence") {
    const KnotVector kv = make_knots(-1.0, 1.0, 4, 3);
    CHECK(kv.knots.size() == 11);  // G + 2k + 1
    CHECK(kv.basis_count() == 7);  // G + k
    CHECK(kv.knots.front() == doctest::Approx(-2.5).epsilon(1e-15));
    CHECK(kv.knots.back() == doctest::Approx(2.5).epsilon(1e-15));
    for (std::size_t i = 1; i < kv.knots.size(); ++i)
        CHECK(kv.knots[i] - kv.knots[i - 1] == doctest::Approx(0.5).epsilon(1e-13));

    const KnotVector kv2 = make_knots(0.0, 1.0, 2, 1);
    REQUIRE(kv2.knots.size() == 5);
    const double expect[5] = {-0.5, 0.0, 0.5, 1.0, 1.5};
    for (int i = 0; i < 5; ++i)
        CHECK(kv2.knots[static_cast<std::size_t>(i)] == doctest::Approx(expect[i]).epsilon(1e-15));
}

TEST_CASE("make_knots rejects bad arguments") {
    CHECK_THROWS_AS(make_knots(1.0, 1.0, 4, 3), invalid_argument);
    CHECK_THROWS_AS(make_knots(0.0, 1.0, 1, 3), invalid_argument);
    CHECK_THROWS_AS(make_knots(0.0, 1.0, 4, 0), invalid_argument);
}

TEST_CASE("cubic uniform basis hits 2/3 and 1/6 at knots") {
    // On a uniform grid the cubic basis takes 2/3 at its central knot and
    // 1/6 at the two neighbours.
    const KnotVector kv = make_knots(-1.0, 1.0, 8, 3);
    const double h = kv.spacing();
    const int i = 4;  // a fully interior basis
    const double center = kv.knots[static_cast<std::size_t>(i)] + 2.0 * h;
    CHECK(std::abs(bspline_basis(kv, i, center) - 2.0 / 3.0) < 1e-12);
    CHECK(std::abs(bspline_basis(kv, i, center - h) - 1.0 / 6.0) < 1e-12);
    CHECK(std::abs(bspline_basis(kv, i, center + h) - 1.0 / 6.0) < 1e-12);
}

TEST_CASE("basis index out of range throws") {
    const KnotVector kv = make_knots(-1.0, 1.0, 4, 3);
    CHECK_THROWS_AS(bspline_basis(kv, -1, 0.0), invalid_argument);
    CHECK_THROWS_AS(bspline_basis(kv, kv.basis_count(), 0.0), invalid_argument);
}

TEST_CASE("compact support") {
    const KnotVector kv = make_knots(-1.0, 1.0, 8, 3);
    // basis 0 is supported on [knots_0, knots_4] = [-1.75, -0.75]
    CHECK(bspline_basis(kv, 0, -0.5) == 0.0);
    CHECK(bspline_basis(kv, 0, 0.9) == 0.0);
    CHECK(bspline_basis(kv, kv.basis_count() - 1, -0.9) == 0.0);
}

TEST_CASE("partition of unity over the domain") {
    for (int k = 1; k <= 4; ++k) {
        const KnotVector kv = make_knots(-1.0, 1.0, 6, k);
        double worst = 0.0;
        for (int s = 0; s < 1000; ++s) {
            const double x = -1.0 + 2.0 * (s + 0.5) / 1000.0;
            double sum = 0.0;
            for (int i = 0; i < kv.basis_count(); ++i) sum += bspline_basis(kv, i, x);
            worst = std::max(worst, std::abs(sum - 1.0));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("clamped evaluation outside the domain") {
    const KnotVector kv = make_knots(-1.0, 1.0, 8, 3);
    for (int i = 0; i < kv.basis_count(); ++i) {
        CHECK(bspline_basis(kv, i, -5.0) == bspline_basis(kv, i, -1.0));
        CHECK(bspline_basis(kv, i, 5.0) == bspline_basis(kv, i, 1.0));
    }
}

TEST_CASE("window derivatives match central finite differences") {
    const KnotVector kv = make_knots(-1.0, 1.0, 8, 3);
    const double eps = 1e-5;
    for (int s = 0; s < 50; ++s) {
        const double x = -0.95 + 1.9 * s / 49.0;
        BasisWindow w, wp, wm;
        basis_window<true>(kv, x, w);
        basis_window<false>(kv, x + eps, wp);
        basis_window<false>(kv, x - eps, wm);
        if (wp.span != w.span || wm.span != w.span) continue;  // skip knot crossings
        for (int r = 0; r <= kv.order; ++r) {
            const auto ri = static_cast<std::size_t>(r);
            const double fd1 = (wp.value[ri] - wm.value[ri]) / (2 * eps);
            CHECK(w.d1[ri] == doctest::Approx(fd1).epsilon(1e-6).scale(1.0));
        }
    }
}
