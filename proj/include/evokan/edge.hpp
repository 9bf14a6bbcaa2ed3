#pragma once

#include <vector>

#include "evokan/jet.hpp"
#include "evokan/knots.hpp"

namespace evokan {

// One trainable KAN edge: phi(x) = w_b * silu(x) + w_s * sum_i c_i B_i(x).
// The spline part is clamped: outside [lo, hi] it is held at the boundary
// value (zero slope), while the silu part keeps its true derivatives.
struct EdgeFunction {
    std::vector<double> coeff;
    double w_b = 1.0;
    double w_s = 1.0;
};

namespace detail {

// phi, phi', phi'' at scalar x given the span-local coefficient window
// c[span-k .. span]. Spline derivatives vanish where the input is clamped.
inline void edge_scalar_jet(const KnotVector& kv, const double* coeff, double w_b, double w_s,
                            double x, double& f, double& fp, double& fpp) {
    double sf, sfp, sfpp;
    silu_jet(x, sf, sfp, sfpp);
    BasisWindow w;
    basis_window<true>(kv, x, w);
    const bool inside = (x >= kv.lo && x <= kv.hi);
    double sv = 0.0, sd1 = 0.0, sd2 = 0.0;
    const int k = kv.order;
    const int base = w.first_basis(k);
    for (int r = 0; r <= k; ++r) {
        const double c = coeff[base + r];
        sv += c * w.value[static_cast<std::size_t>(r)];
        sd1 += c * w.d1[static_cast<std::size_t>(r)];
        sd2 += c * w.d2[static_cast<std::size_t>(r)];
    }
    if (!inside) { sd1 = 0.0; sd2 = 0.0; }
    f = w_b * sf + w_s * sv;
    fp = w_b * sfp + w_s * sd1;
    fpp = w_b * sfpp + w_s * sd2;
}

}  // namespace detail

inline JetValue edge_eval(const EdgeFunction& e, const KnotVector& kv, const JetValue& x) {
    if (static_cast<int>(e.coeff.size()) != kv.basis_count())
        throw invalid_argument("edge_eval: coefficient count must equal basis count");
    double f, fp, fpp;
    detail::edge_scalar_jet(kv, e.coeff.data(), e.w_b, e.w_s, x.v, f, fp, fpp);
    return compose_univariate(x, f, fp, fpp);
}

}  // namespace evokan
