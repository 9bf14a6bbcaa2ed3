#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "evokan/evolve/lsq.hpp"

namespace evokan {

struct FitConfig {
    int max_iterations = 200;
    double rms_tolerance = 1e-6;
    double lm_init = 1e-3;
    double lm_up = 5.0;
    double lm_down = 0.2;
    std::uint64_t seed = 1;

    void validate() const {
        if (max_iterations < 0) throw invalid_argument("fit: max_iterations must be >= 0");
        if (!(rms_tolerance > 0)) throw invalid_argument("fit: rms_tolerance must be > 0");
        if (!(lm_init > 0) || !(lm_up > 1) || !(lm_down <= 1) || !(lm_down > 0))
            throw invalid_argument("fit: bad Levenberg-Marquardt damping schedule");
    }
};

struct FitReport {
    int iterations = 0;
    double rms = 0.0;
    bool converged = false;
    std::vector<double> rms_history;  // per accepted iteration
};

// target fills out[0..m) with the initial condition at (x, y).
using TargetFn = std::function<void(double x, double y, double* out)>;

namespace detail {

inline double fit_rms(const Network& net, const ParamVector& p, const Eigen::MatrixXd& pts,
                      const Eigen::VectorXd& target, Eigen::VectorXd& resid) {
    const long n = pts.rows();
    const int m = net.out_dim();
    resid.resize(n * m);
#pragma omp parallel for schedule(static)
    for (long q = 0; q < n; ++q) {
        double x[2] = {pts(q, 0), pts.cols() > 1 ? pts(q, 1) : 0.0};
        double out[4];
        network_forward(net, p, x, out);
        for (int o = 0; o < m; ++o) resid[q * m + o] = out[o] - target[q * m + o];
    }
    return std::sqrt(resid.squaredNorm() / static_cast<double>(n * m));
}

}  // namespace detail

// Levenberg-Marquardt fit of the network to the initial condition at the
// collocation points. Non-convergence is reported, not fatal; the best
// parameters found are kept.
inline FitReport fit_initial(const Network& net, const TargetFn& target,
                             const Eigen::MatrixXd& pts, const FitConfig& cfg,
                             ParamVector& params) {
    cfg.validate();
    if (pts.rows() == 0) throw invalid_argument("fit_initial: empty collocation set");
    net.check_params(params);
    const long n = pts.rows();
    const int m = net.out_dim();

    Eigen::VectorXd want(n * m);
    for (long q = 0; q < n; ++q) {
        double out[4] = {0, 0, 0, 0};
        target(pts(q, 0), pts.cols() > 1 ? pts(q, 1) : 0.0, out);
        for (int o = 0; o < m; ++o) want[q * m + o] = out[o];
    }

    Eigen::VectorXd resid;
    double rms = detail::fit_rms(net, params, pts, want, resid);
    FitReport report;
    report.rms = rms;
    report.converged = rms <= cfg.rms_tolerance;
    report.rms_history.push_back(rms);
    if (report.converged || cfg.max_iterations == 0) return report;

    RowMajorMatrix J;
    JacobianWorkspace w;
    double mu = cfg.lm_init;
    ParamVector best = params;
    double best_rms = rms;
    Eigen::VectorXd trial_resid;

    for (int it = 1; it <= cfg.max_iterations; ++it) {
        param_jacobian_into(net, params, pts, J, nullptr, w);
        bool accepted = false;
        for (int inner = 0; inner < 25; ++inner) {
            const Eigen::VectorXd step = solve_gn_direction(J, -resid, mu);
            ParamVector trial = params + step;
            const double trial_rms = detail::fit_rms(net, trial, pts, want, trial_resid);
            if (std::isfinite(trial_rms) && trial_rms < rms) {
                params = std::move(trial);
                resid.swap(trial_resid);
                rms = trial_rms;
                mu = std::max(mu * cfg.lm_down, 1e-14);
                accepted = true;
                break;
            }
            mu *= cfg.lm_up;
        }
        report.iterations = it;
        report.rms_history.push_back(rms);
        if (rms < best_rms) {
            best = params;
            best_rms = rms;
        }
        if (rms <= cfg.rms_tolerance) {
            report.converged = true;
            break;
        }
        if (!accepted) break;  // stalled; keep the best point found
    }
    params = best;
    report.rms = best_rms;
    return report;
}

}  // namespace evokan
