#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "evokan/common.hpp"

namespace evokan {

// Extended uniform B-spline knot sequence of degree k over [lo, hi] with G
// interior cells: G+1 uniform interior knots plus k extra uniform knots on
// each side, G+2k+1 knots total, carrying G+k basis functions.
struct KnotVector {
    int order = 0;  // polynomial degree k >= 1
    int grid = 0;   // interior cell count G >= 2
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> knots;

    int basis_count() const { return grid + order; }
    double spacing() const { return (hi - lo) / grid; }
};

inline KnotVector make_knots(double lo, double hi, int G, int k) {
    if (!(hi > lo)) throw invalid_argument("make_knots: hi must be > lo");
    if (G < 2) throw invalid_argument("make_knots: interior grid count G must be >= 2");
    if (k < 1) throw invalid_argument("make_knots: order k must be >= 1");
    KnotVector kv;
    kv.order = k;
    kv.grid = G;
    kv.lo = lo;
    kv.hi = hi;
    const double h = (hi - lo) / G;
    kv.knots.resize(static_cast<std::size_t>(G + 2 * k + 1));
    for (int i = 0; i <= G + 2 * k; ++i) kv.knots[static_cast<std::size_t>(i)] = lo + (i - k) * h;
    return kv;
}

namespace detail {

// Index m with knots[m] <= x < knots[m+1], clamped to the interior spans
// [k, k+G-1] so x at/beyond the domain ends lands in the boundary cell.
inline int find_span(const KnotVector& kv, double x) {
    const double h = kv.spacing();
    int cell = static_cast<int>(std::floor((x - kv.lo) / h));
    if (cell < 0) cell = 0;
    if (cell > kv.grid - 1) cell = kv.grid - 1;
    return cell + kv.order;
}

}  // namespace detail

// All k+1 basis values (and optionally first/second derivatives) that are
// nonzero at x, for basis indices span-k .. span. Inputs outside [lo, hi]
// are clamped to the nearest endpoint.
struct BasisWindow {
    int span = 0;  // basis indices span-k .. span are active
    std::array<double, 8> value{};
    std::array<double, 8> d1{};
    std::array<double, 8> d2{};

    int first_basis(int order) const { return span - order; }
};

template <bool WithDerivs>
inline void basis_window(const KnotVector& kv, double x, BasisWindow& out) {
    const int k = kv.order;
    if (k + 1 > 8) throw invalid_argument("basis_window: order too large (k <= 7 supported)");
    double xc = x;
    if (xc < kv.lo) xc = kv.lo;
    if (xc > kv.hi) xc = kv.hi;
    const int m = detail::find_span(kv, xc);
    out.span = m;
    const double* t = kv.knots.data();

    // Cox-de Boor triangle; N[r] holds degree-d values after stage d.
    double N[8];
    double left[8], right[8];
    double nm1[8] = {0};  // degree k-1 snapshot
    double nm2[8] = {0};  // degree k-2 snapshot
    N[0] = 1.0;
    for (int d = 1; d <= k; ++d) {
        left[d] = xc - t[m + 1 - d];
        right[d] = t[m + d] - xc;
        double saved = 0.0;
        for (int r = 0; r < d; ++r) {
            const double denom = right[r + 1] + left[d - r];
            const double temp = N[r] / denom;
            N[r] = saved + right[r + 1] * temp;
            saved = left[d - r] * temp;
        }
        N[d] = saved;
        if (WithDerivs) {
            if (d == k - 1) for (int r = 0; r <= d; ++r) nm1[r] = N[r];
            if (d == k - 2) for (int r = 0; r <= d; ++r) nm2[r] = N[r];
        }
    }
    for (int r = 0; r <= k; ++r) out.value[static_cast<std::size_t>(r)] = N[r];

    if (!WithDerivs) return;

    // Degree-(k-1) values indexed by basis j = m-k+1 .. m; degree-(k-2) by
    // j = m-k+2 .. m. Zero outside those ranges.
    auto bkm1 = [&](int j) -> double {
        const int r = j - (m - k + 1);
        return (r < 0 || r > k - 1) ? 0.0 : nm1[r];
    };
    auto bkm2 = [&](int j) -> double {
        const int r = j - (m - k + 2);
        return (r < 0 || r > k - 2) ? 0.0 : nm2[r];
    };
    auto d1_of = [&](int i, int deg, auto&& lower) -> double {
        const double a = lower(i);
        const double b = lower(i + 1);
        double res = 0.0;
        if (a != 0.0) res += a / (t[i + deg] - t[i]);
        if (b != 0.0) res -= b / (t[i + deg + 1] - t[i + 1]);
        return deg * res;
    };
    for (int r = 0; r <= k; ++r) {
        const int i = m - k + r;
        out.d1[static_cast<std::size_t>(r)] = d1_of(i, k, bkm1);
        if (k >= 2) {
            const double da = d1_of(i, k - 1, bkm2);
            const double db = d1_of(i + 1, k - 1, bkm2);
            out.d2[static_cast<std::size_t>(r)] =
                k * (da / (t[i + k] - t[i]) - db / (t[i + k + 1] - t[i + 1]));
        } else {
            out.d2[static_cast<std::size_t>(r)] = 0.0;
        }
    }
}

// Single Cox-de Boor basis value; the direct recursion, kept as the slow
// reference path. 0 outside the support of basis i; x clamped to [lo, hi].
inline double bspline_basis(const KnotVector& kv, int i, double x) {
    if (i < 0 || i >= kv.basis_count())
        throw invalid_argument("bspline_basis: basis index " + std::to_string(i) +
                               " out of range [0, " + std::to_string(kv.basis_count()) + ")");
    double xc = x;
    if (xc < kv.lo) xc = kv.lo;
    if (xc > kv.hi) xc = kv.hi;
    BasisWindow w;
    basis_window<false>(kv, xc, w);
    const int r = i - w.first_basis(kv.order);
    if (r < 0 || r > kv.order) return 0.0;
    return w.value[static_cast<std::size_t>(r)];
}

}  // namespace evokan
