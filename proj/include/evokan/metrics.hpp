#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "evokan/grid.hpp"

namespace evokan {

// Root mean square difference sqrt( (1/|Omega|) \int |a-b|^2 dx ) by
// rectangle quadrature (spectrally accurate on periodic grids); components
// are summed inside the norm.
inline double l2_snapshot_error(const FieldSnapshot& a, const FieldSnapshot& b) {
    if (a.nx != b.nx || a.ny != b.ny || a.components != b.components)
        throw invalid_argument("l2_snapshot_error: snapshot grids do not match");
    if (std::abs(a.time - b.time) > 1e-9)
        throw invalid_argument("l2_snapshot_error: timestamps differ by more than 1e-9");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        acc += d * d;
    }
    return std::sqrt(acc * a.cell_volume() / a.domain_volume());
}

inline double l2_snapshot_norm(const FieldSnapshot& a) {
    double acc = 0.0;
    for (double v : a.values) acc += v * v;
    return std::sqrt(acc * a.cell_volume() / a.domain_volume());
}

struct ErrorReport {
    std::vector<double> times;
    std::vector<double> abs_error;  // per-snapshot L2 error
    std::vector<double> rel_error;  // normalized by the reference snapshot norm
    double time_averaged = 0.0;     // the time-averaged L2 error
    double max_over_time = 0.0;
    std::string problem, method;
    double parameter = 0.0;  // eps or nu
};

// Time-averaged L2 error: trapezoidal rule over the snapshot times divided
// by the final time.
inline double time_averaged_error(const std::vector<FieldSnapshot>& a,
                                  const std::vector<FieldSnapshot>& b, double T) {
    if (a.size() != b.size() || a.empty())
        throw invalid_argument("time_averaged_error: trajectories must align");
    if (a.size() == 1) return l2_snapshot_error(a[0], b[0]);
    double acc = 0.0;
    double prev_e = l2_snapshot_error(a[0], b[0]);
    for (std::size_t i = 1; i < a.size(); ++i) {
        if (std::abs(a[i].time - b[i].time) > 1e-9)
            throw invalid_argument("time_averaged_error: snapshot times do not match");
        const double e = l2_snapshot_error(a[i], b[i]);
        acc += 0.5 * (prev_e + e) * (a[i].time - a[i - 1].time);
        prev_e = e;
    }
    return acc / T;
}

inline ErrorReport compare_trajectories(const std::vector<FieldSnapshot>& test,
                                        const std::vector<FieldSnapshot>& reference, double T) {
    ErrorReport r;
    r.time_averaged = time_averaged_error(test, reference, T);
    for (std::size_t i = 0; i < test.size(); ++i) {
        const double e = l2_snapshot_error(test[i], reference[i]);
        const double n = l2_snapshot_norm(reference[i]);
        r.times.push_back(test[i].time);
        r.abs_error.push_back(e);
        r.rel_error.push_back(n > 0 ? e / n : e);
        r.max_over_time = std::max(r.max_over_time, e);
    }
    return r;
}

struct EnergyTracePoint {
    double time = 0.0;
    double total = 0.0;    // E
    double nonlinear = 0.0;  // E1 (shifted)
    bool increased = false;  // rose beyond relative 1e-3 from the previous snapshot
};

template <typename EnergyFn>
inline std::vector<EnergyTracePoint> energy_trace(const std::vector<FieldSnapshot>& traj,
                                                  EnergyFn&& energy) {
    std::vector<EnergyTracePoint> out;
    out.reserve(traj.size());
    for (const auto& s : traj) {
        EnergyTracePoint p;
        p.time = s.time;
        const auto [etot, e1] = energy(s);
        p.total = etot;
        p.nonlinear = e1;
        if (!out.empty()) {
            const double prev = out.back().total;
            p.increased = p.total > prev + 1e-3 * std::max(1.0, std::abs(prev));
        }
        out.push_back(p);
    }
    return out;
}

}  // namespace evokan
