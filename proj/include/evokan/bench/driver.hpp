#pragma once

#include <cmath>
#include <vector>

#include "evokan/bench/ac_spectral.hpp"
#include "evokan/bench/nse_spectral.hpp"
#include "evokan/runconfig.hpp"

namespace evokan {

// Snapshot times an evolution run with this config will emit: step 0, every
// cadence steps, and the final step.
inline std::vector<double> evolution_snapshot_times(const EvolutionConfig& evo) {
    std::vector<double> times{0.0};
    const long n_steps = static_cast<long>(std::llround(evo.T / evo.dt));
    for (long s = evo.snapshot_cadence; s < n_steps; s += evo.snapshot_cadence)
        times.push_back(static_cast<double>(s) * evo.dt);
    times.push_back(static_cast<double>(n_steps) * evo.dt);
    return times;
}

struct BenchResult {
    std::vector<FieldSnapshot> snapshots;  // on the comparison grid
    double final_r = 0.0;                  // sav scheme only
};

// Reference trajectory for the config's problem at the benchmark resolution,
// reduced to the comparison grid at the requested times.
inline BenchResult run_benchmark(const RunConfig& cfg, const std::vector<double>& times) {
    BenchResult res;
    const int mnx = cfg.metrics_nx ? cfg.metrics_nx : cfg.colloc.n;
    const int mny = cfg.dim() == 2 ? mnx : 1;
    auto reduce = [&](const FieldSnapshot& s) {
        return cfg.bench_downsample == "decimate" ? downsample_decimate(s, mnx, mny)
                                                  : downsample_spectral(s, mnx, mny);
    };
    if (cfg.is_ac()) {
        AcSpectralSolver solver(cfg.ac, cfg.bench_n, cfg.dim() == 2 ? cfg.bench_n : 1);
        auto ic = ac_initial_condition(cfg.ac);
        solver.set_initial(sample_snapshot(cfg.bench_n, cfg.dim() == 2 ? cfg.bench_n : 1, 0.0,
                                           [&](double x, double y) { return ic(x, y); }));
        for (double target : times) {
            const long steps = std::llround((target - solver.time()) / cfg.bench_dt);
            for (long s = 0; s < steps; ++s) {
                if (cfg.bench_scheme == "sav") solver.step_sav(cfg.bench_dt);
                else solver.step_imex(cfg.bench_dt);
            }
            FieldSnapshot snap = solver.snapshot();
            snap.time = target;  // nominal time; accumulation error << dt
            res.snapshots.push_back(reduce(snap));
            res.final_r = solver.sav_r();
        }
    } else {
        NseSpectralSolver solver(cfg.nse, cfg.bench_n);
        auto ic = nse_initial_condition(cfg.nse);
        FieldSnapshot s0 = make_snapshot(cfg.bench_n, cfg.bench_n, 2, 0.0);
        for (int j = 0; j < cfg.bench_n; ++j)
            for (int i = 0; i < cfg.bench_n; ++i)
                ic(s0.x(i), s0.y(j), s0.at(0, j, i), s0.at(1, j, i));
        solver.set_initial(s0);
        for (double target : times) {
            const long steps = std::llround((target - solver.time()) / cfg.bench_dt);
            for (long s = 0; s < steps; ++s) solver.step(cfg.bench_dt);
            FieldSnapshot snap = solver.snapshot();
            snap.time = target;
            res.snapshots.push_back(reduce(snap));
        }
    }
    return res;
}

}  // namespace evokan
