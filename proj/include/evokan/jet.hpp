#pragma once

#include <array>
#include <cmath>

#include "evokan/common.hpp"

namespace evokan {

// Value with first and pure second spatial derivatives (dim <= 2); the
// mixed derivative slot is maintained only when with_cross is set.
struct JetValue {
    double v = 0.0;
    std::array<double, 2> dx{0.0, 0.0};
    std::array<double, 2> dxx{0.0, 0.0};
    double dxy = 0.0;
    int dim = 1;
    int order = 2;  // highest derivative carried
    bool with_cross = false;

    static JetValue seed(double value, int coord, int dimension, bool cross = false) {
        JetValue j;
        j.v = value;
        j.dim = dimension;
        j.with_cross = cross;
        j.dx[static_cast<std::size_t>(coord)] = 1.0;
        return j;
    }

    static JetValue constant(double value, int dimension, bool cross = false) {
        JetValue j;
        j.v = value;
        j.dim = dimension;
        j.with_cross = cross;
        return j;
    }
};

inline JetValue operator+(const JetValue& a, const JetValue& b) {
    JetValue r = a;
    r.v += b.v;
    for (int d = 0; d < a.dim; ++d) {
        r.dx[static_cast<std::size_t>(d)] += b.dx[static_cast<std::size_t>(d)];
        r.dxx[static_cast<std::size_t>(d)] += b.dxx[static_cast<std::size_t>(d)];
    }
    if (a.with_cross) r.dxy += b.dxy;
    return r;
}

// Composition u -> f(u) given f(u), f'(u), f''(u) at u.v.
inline JetValue compose_univariate(const JetValue& u, double f, double fp, double fpp) {
    JetValue r;
    r.dim = u.dim;
    r.order = u.order;
    r.with_cross = u.with_cross;
    r.v = f;
    for (int d = 0; d < u.dim; ++d) {
        const auto i = static_cast<std::size_t>(d);
        r.dx[i] = fp * u.dx[i];
        r.dxx[i] = fpp * u.dx[i] * u.dx[i] + fp * u.dxx[i];
    }
    if (u.with_cross) r.dxy = fpp * u.dx[0] * u.dx[1] + fp * u.dxy;
    return r;
}

// silu(x) = x / (1 + e^{-x}) with exact first and second derivatives.
inline void silu_jet(double x, double& f, double& fp, double& fpp) {
    const double s = 1.0 / (1.0 + std::exp(-x));
    f = x * s;
    fp = s * (1.0 + x * (1.0 - s));
    fpp = s * (1.0 - s) * (2.0 + x * (1.0 - 2.0 * s));
}

inline double silu(double x) {
    const double s = 1.0 / (1.0 + std::exp(-x));
    return x * s;
}

}  // namespace evokan
