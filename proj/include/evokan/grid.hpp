#pragma once

#include <vector>

#include "evokan/common.hpp"

namespace evokan {

// Sampled solution values on a uniform periodic grid over [-1,1]^d at one
// timestamp. Cell-centered nodes x_i = -1 + (i+1/2)h, which excludes the
// duplicate periodic endpoint and keeps phase-field zero level sets off the
// grid. Values are stored row-major per component: index (c, iy, ix).
struct FieldSnapshot {
    int nx = 0;
    int ny = 1;  // 1 for one-dimensional fields
    int components = 1;
    double time = 0.0;
    std::vector<double> values;

    int dim() const { return ny > 1 ? 2 : 1; }
    long cells() const { return static_cast<long>(nx) * ny; }
    double hx() const { return 2.0 / nx; }
    double hy() const { return 2.0 / ny; }
    double x(int i) const { return -1.0 + (i + 0.5) * hx(); }
    double y(int j) const { return -1.0 + (j + 0.5) * hy(); }
    double cell_volume() const { return dim() == 2 ? hx() * hy() : hx(); }
    double domain_volume() const { return dim() == 2 ? 4.0 : 2.0; }

    double& at(int c, int iy, int ix) {
        return values[static_cast<std::size_t>((static_cast<long>(c) * ny + iy) * nx + ix)];
    }
    double at(int c, int iy, int ix) const {
        return values[static_cast<std::size_t>((static_cast<long>(c) * ny + iy) * nx + ix)];
    }
    double* component(int c) { return values.data() + static_cast<long>(c) * cells(); }
    const double* component(int c) const { return values.data() + static_cast<long>(c) * cells(); }
};

inline FieldSnapshot make_snapshot(int nx, int ny, int components, double time) {
    if (nx < 1 || ny < 1 || components < 1)
        throw invalid_argument("make_snapshot: bad shape");
    FieldSnapshot s;
    s.nx = nx;
    s.ny = ny;
    s.components = components;
    s.time = time;
    s.values.assign(static_cast<std::size_t>(static_cast<long>(nx) * ny * components), 0.0);
    return s;
}

template <typename F>
inline FieldSnapshot sample_snapshot(int nx, int ny, double time, F&& f) {
    FieldSnapshot s = make_snapshot(nx, ny, 1, time);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) s.at(0, j, i) = f(s.x(i), s.y(j));
    return s;
}

}  // namespace evokan
