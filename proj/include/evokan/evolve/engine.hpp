#pragma once

#include <chrono>
#include <cmath>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "evokan/evolve/collocation.hpp"
#include "evokan/evolve/fit.hpp"
#include "evokan/evolve/lsq.hpp"
#include "evokan/evolve/residual_ops.hpp"

namespace evokan {

enum class Integrator { Euler, Rk4 };

struct EvolutionConfig {
    double dt = 1e-3;
    double T = 1.0;
    Integrator integrator = Integrator::Rk4;
    double lambda = 1e-8;  // trace-scaled Tikhonov damping
    bool sav = false;
    int snapshot_cadence = 10;
    double blowup_max = 10.0;

    void validate() const {
        if (!(dt > 0)) throw invalid_argument("evolution: dt must be > 0");
        if (!(T >= dt)) throw invalid_argument("evolution: T must be >= dt");
        if (snapshot_cadence < 1) throw invalid_argument("evolution: cadence must be >= 1");
        if (lambda < 0) throw invalid_argument("evolution: lambda must be >= 0");
    }
};

struct EvolutionState {
    ParamVector params;
    double r = 0.0;
    bool has_sav = false;
    long step = 0;

    double time(double dt) const { return static_cast<double>(step) * dt; }
};

struct StepDiagnostics {
    double residual_norm = 0.0;  // ||J gamma - N|| after the solve
    double gamma_norm = 0.0;
    double e1 = std::numeric_limits<double>::quiet_NaN();
};

// Fourth-order Runge-Kutta on the combined (params, r) state; f returns
// the parameter direction and r rate.
template <typename F>
inline void rk4_combined(ParamVector& k, double& r, double dt, F&& f) {
    const auto [g1, r1] = f(k, r);
    const auto [g2, r2] = f(ParamVector(k + 0.5 * dt * g1), r + 0.5 * dt * r1);
    const auto [g3, r3] = f(ParamVector(k + 0.5 * dt * g2), r + 0.5 * dt * r2);
    const auto [g4, r4] = f(ParamVector(k + dt * g3), r + dt * r3);
    k += (dt / 6.0) * (g1 + 2.0 * g2 + 2.0 * g3 + g4);
    r += (dt / 6.0) * (r1 + 2.0 * r2 + 2.0 * r3 + r4);
}

// The per-step least-squares projection of the PDE residual onto the
// network's parameter tangent space.
class Evolver {
public:
    Evolver(const Network& net, ResidualOperator& op, const CollocationSet& colloc,
            const EvolutionConfig& cfg)
        : net_(net), op_(op), colloc_(colloc), cfg_(cfg) {
        cfg_.validate();
        colloc_.validate();
        if (cfg_.sav && !op_.is_gradient_flow())
            throw invalid_argument("evolution: SAV mode requires a gradient-flow problem");
        if (cfg_.sav && colloc_.kind != CollocKind::UniformGrid)
            throw invalid_argument("evolution: SAV quadratures need a uniform grid");
        if (colloc_.size() * op_.components() < net_.param_count() / 4)
            std::cerr << "[evokan] warning: collocation count " << colloc_.size()
                      << " is below a quarter of the parameter count " << net_.param_count()
                      << "\n";
        pts_ = colloc_.points(0);
    }

    struct Direction {
        Eigen::VectorXd gamma;
        double r_t = 0.0;
        StepDiagnostics diag;
    };

    Direction direction(const ParamVector& params, double r) {
        Direction d;
        param_jacobian_into(net_, params, pts_, J_, nullptr, jw_);
        SavContext sav;
        sav.active = cfg_.sav;
        sav.r = r;
        sav.quad_weight = colloc_.quad_weight();
        const ResidualInfo info = op_.eval(net_, params, pts_, sav, rows_, values_);
        if (!rows_.allFinite())
            throw numerical_error("evolution: non-finite residual (blow-up in the nonlinearity)");
        const double vmax = values_.cwiseAbs().maxCoeff();
        if (vmax > cfg_.blowup_max)
            throw numerical_error("evolution: |u| = " + std::to_string(vmax) +
                                  " exceeded the blow-up guard " +
                                  std::to_string(cfg_.blowup_max));
        d.gamma = solve_gn_direction(J_, rows_, cfg_.lambda);
        if (!d.gamma.allFinite()) throw numerical_error("evolution: non-finite direction");

        const double j0 = rows_.squaredNorm();
        const double j_opt = (J_ * d.gamma - rows_).squaredNorm();
        if (j_opt > j0 * (1.0 + 1e-10) + 1e-14)
            throw numerical_error("evolution: least-squares objective increased (J(gamma) = " +
                                  std::to_string(j_opt) + " > J(0) = " + std::to_string(j0) + ")");
        d.diag.residual_norm = std::sqrt(j_opt);
        d.diag.gamma_norm = d.gamma.norm();
        d.diag.e1 = info.e1;

        if (cfg_.sav) {
            // r_t = (1 / 2 sqrt(E1)) \int U[phi] phi_t dx with phi_t = N = -mu
            double acc = 0.0;
            for (long q = 0; q < values_.size(); ++q)
                acc += op_.variational_derivative(values_[q]) * rows_[q];
            d.r_t = acc * colloc_.quad_weight() / (2.0 * std::sqrt(info.e1));
        }
        return d;
    }

    EvolutionState step(const EvolutionState& in, StepDiagnostics* diag_out = nullptr) {
        EvolutionState out = in;
        if (colloc_.resample_per_step) pts_ = colloc_.points(in.step);
        if (cfg_.integrator == Integrator::Euler) {
            Direction d = direction(in.params, in.r);
            out.params = in.params + cfg_.dt * d.gamma;
            if (in.has_sav) out.r = in.r + cfg_.dt * d.r_t;
            if (diag_out) *diag_out = d.diag;
        } else {
            StepDiagnostics first;
            bool captured = false;
            auto f = [&](const ParamVector& k, double r) {
                Direction d = direction(k, r);
                if (!captured) {
                    first = d.diag;
                    captured = true;
                }
                return std::pair<Eigen::VectorXd, double>(std::move(d.gamma), d.r_t);
            };
            rk4_combined(out.params, out.r, cfg_.dt, f);
            if (diag_out) *diag_out = first;
        }
        out.step = in.step + 1;
        return out;
    }

    // Initial SAV value r = sqrt(E1) of the current network field; the op
    // reports E1 when evaluated in SAV mode (probe r = 1).
    double initial_r(const ParamVector& params) {
        SavContext probe;
        probe.active = true;
        probe.r = 1.0;
        probe.quad_weight = colloc_.quad_weight();
        const ResidualInfo info = op_.eval(net_, params, pts_, probe, rows_, values_);
        return std::sqrt(info.e1);
    }

    const Eigen::MatrixXd& points() const { return pts_; }

private:
    const Network& net_;
    ResidualOperator& op_;
    CollocationSet colloc_;
    EvolutionConfig cfg_;
    Eigen::MatrixXd pts_;
    RowMajorMatrix J_;
    JacobianWorkspace jw_;
    Eigen::VectorXd rows_, values_;
};

struct DiagRow {
    long step = 0;
    double t = 0.0;
    double residual_norm = 0.0;
    double gamma_norm = 0.0;
    double energy = std::numeric_limits<double>::quiet_NaN();
    double modified_energy = std::numeric_limits<double>::quiet_NaN();
};

struct RunSetup {
    Network net;
    std::shared_ptr<ResidualOperator> op;
    TargetFn ic;
    CollocationSet colloc;
    EvolutionConfig evo;
    FitConfig fit;
    int metrics_nx = 0;  // 0: use the collocation grid
    int metrics_ny = 1;
};

struct RunResult {
    std::vector<FieldSnapshot> snapshots;
    std::vector<DiagRow> diagnostics;
    std::vector<double> wall_ms;  // per step, kept out of the deterministic CSV
    FitReport fit;
    ParamVector fitted_params;
    ParamVector final_params;
    double final_r = 0.0;
    bool completed = false;
    std::string error;
};

inline FieldSnapshot sample_network(const Network& net, const ParamVector& p, double t, int nx,
                                    int ny) {
    FieldSnapshot s = make_snapshot(nx, ny, net.out_dim(), t);
    const long cells = s.cells();
#pragma omp parallel for schedule(static)
    for (long q = 0; q < cells; ++q) {
        const int i = static_cast<int>(q % nx);
        const int j = static_cast<int>(q / nx);
        double x[2] = {s.x(i), s.y(j)};
        double out[4];
        network_forward(net, p, x, out);
        for (int c = 0; c < net.out_dim(); ++c) s.component(c)[q] = out[c];
    }
    return s;
}

// Fit the initial condition, then march the parameter ODE to T, sampling
// snapshots on the metrics grid. Errors terminate the loop and leave the
// partial trajectory in the result.
inline RunResult run_evolution(const RunSetup& setup) {
    RunResult res;
    Network net = setup.net;
    EvolutionConfig evo = setup.evo;
    evo.validate();

    int mnx = setup.metrics_nx;
    int mny = setup.metrics_ny;
    if (mnx == 0) {
        if (setup.colloc.kind != CollocKind::UniformGrid)
            throw invalid_argument("run: metrics grid required with random collocation");
        mnx = setup.colloc.n;
        mny = setup.colloc.dim == 2 ? setup.colloc.n : 1;
    }

    ParamVector params = net.init_params(setup.fit.seed);
    res.fit = fit_initial(net, setup.ic, setup.colloc.points(0), setup.fit, params);
    res.fitted_params = params;

    Evolver evolver(net, *setup.op, setup.colloc, evo);
    EvolutionState state;
    state.params = std::move(params);
    state.has_sav = evo.sav;
    if (evo.sav) state.r = evolver.initial_r(state.params);

    const long n_steps = static_cast<long>(std::llround(evo.T / evo.dt));
    auto snap_at = [&](const EvolutionState& s) {
        FieldSnapshot f = sample_network(net, s.params, s.time(evo.dt), mnx, mny);
        res.snapshots.push_back(std::move(f));
    };
    auto diag_at = [&](const EvolutionState& s, const StepDiagnostics& d) {
        DiagRow row;
        row.step = s.step;
        row.t = s.time(evo.dt);
        row.residual_norm = d.residual_norm;
        row.gamma_norm = d.gamma_norm;
        const FieldSnapshot& f = res.snapshots.back();
        row.energy = setup.op->energy(f);
        if (evo.sav) row.modified_energy = setup.op->modified_energy(f, s.r);
        res.diagnostics.push_back(row);
    };

    snap_at(state);
    try {
        for (long k = 0; k < n_steps; ++k) {
            const auto t0 = std::chrono::steady_clock::now();
            StepDiagnostics diag;
            state = evolver.step(state, &diag);
            const auto t1 = std::chrono::steady_clock::now();
            res.wall_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
            if (state.step % evo.snapshot_cadence == 0 || state.step == n_steps) {
                snap_at(state);
                diag_at(state, diag);
            }
        }
        res.completed = true;
    } catch (const numerical_error& e) {
        res.error = e.what();
    }
    res.final_params = state.params;
    res.final_r = state.r;
    return res;
}

}  // namespace evokan
