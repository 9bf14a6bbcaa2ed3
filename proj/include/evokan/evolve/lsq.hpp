#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "evokan/evolve/residual_ops.hpp"
#include "evokan/jacobian.hpp"

namespace evokan {

struct NormalSystem {
    Eigen::MatrixXd A;  // J^T J, symmetric PSD
    Eigen::VectorXd b;  // J^T N
};

namespace detail {

// A = J^T J by row-blocked rank updates, one block per thread, summed in
// fixed order so the result is deterministic regardless of scheduling.
inline void syrk_into(const RowMajorMatrix& J, Eigen::MatrixXd& A) {
    const long rows = J.rows();
    const long cols = J.cols();
    int nt = 1;
#ifdef _OPENMP
    nt = std::min(omp_get_max_threads(), 8);
#endif
    if (nt <= 1 || rows < 4 * nt || cols < 64) {
        A.setZero(cols, cols);
        A.selfadjointView<Eigen::Lower>().rankUpdate(J.transpose());
        A = A.selfadjointView<Eigen::Lower>();
        return;
    }
    std::vector<Eigen::MatrixXd> parts(static_cast<std::size_t>(nt));
#pragma omp parallel for schedule(static, 1)
    for (int b = 0; b < nt; ++b) {
        const long lo = rows * b / nt;
        const long hi = rows * (b + 1) / nt;
        auto& P = parts[static_cast<std::size_t>(b)];
        P.setZero(cols, cols);
        P.selfadjointView<Eigen::Lower>().rankUpdate(J.middleRows(lo, hi - lo).transpose());
    }
    A = parts[0];
    for (int b = 1; b < nt; ++b) A += parts[static_cast<std::size_t>(b)];
    A = A.selfadjointView<Eigen::Lower>();
}

}  // namespace detail

// Builds the normal equations of the per-step least squares
// min || J gamma - N ||^2 at the collocation points.
inline NormalSystem assemble_normal_system(const Network& net, const ParamVector& p,
                                           ResidualOperator& op, const Eigen::MatrixXd& pts,
                                           const SavContext& sav = {}) {
    if (pts.rows() == 0) throw invalid_argument("assemble_normal_system: empty collocation set");
    RowMajorMatrix J;
    JacobianWorkspace w;
    param_jacobian_into(net, p, pts, J, nullptr, w);
    Eigen::VectorXd rows, values;
    op.eval(net, p, pts, sav, rows, values);
    if (!rows.allFinite())
        throw numerical_error("assemble_normal_system: non-finite residual (solution blow-up)");
    NormalSystem sys;
    detail::syrk_into(J, sys.A);
    sys.b = J.transpose() * rows;
    return sys;
}

// Solves (A + lambda * s * I) gamma = b with s = trace(A)/n (scale-aware
// Tikhonov) by Cholesky; on factorization failure the damping is escalated
// tenfold up to three times.
inline Eigen::VectorXd solve_direction(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                       double lambda) {
    if (lambda < 0) throw invalid_argument("solve_direction: lambda must be >= 0");
    const long n = A.rows();
    double s = A.trace() / static_cast<double>(n);
    if (!(s > 0)) s = 1.0;
    Eigen::MatrixXd M(n, n);
    double lam = lambda;
    for (int attempt = 0; attempt <= 3; ++attempt) {
        M = A;
        M.diagonal().array() += lam * s;
        Eigen::LLT<Eigen::MatrixXd> llt(M);
        if (llt.info() == Eigen::Success) {
            Eigen::VectorXd gamma = llt.solve(b);
            if (gamma.allFinite()) return gamma;
        }
        lam = (lam > 0 ? lam : 1e-12) * 10.0;
    }
    throw numerical_error("solve_direction: singular normal equations (n = " + std::to_string(n) +
                          ", trace scale = " + std::to_string(s) +
                          ", final lambda = " + std::to_string(lam) + ")");
}

// Ridge direction straight from (J, N). Uses the normal equations when the
// system is tall; for wide systems (more parameters than residual rows) the
// algebraically identical dual form gamma = J^T (J J^T + lambda s I)^{-1} N
// keeps the factorization at the row count.
inline Eigen::VectorXd solve_gn_direction(const RowMajorMatrix& J, const Eigen::VectorXd& N,
                                          double lambda) {
    const long rows = J.rows();
    const long cols = J.cols();
    double s = J.squaredNorm() / static_cast<double>(cols);
    if (!(s > 0)) s = 1.0;
    double lam = lambda;
    for (int attempt = 0; attempt <= 3; ++attempt) {
        const double mu = lam * s;
        if (rows >= cols) {
            Eigen::MatrixXd A;
            detail::syrk_into(J, A);
            A.diagonal().array() += mu;
            Eigen::LLT<Eigen::MatrixXd> llt(A);
            if (llt.info() == Eigen::Success) {
                Eigen::VectorXd gamma = llt.solve(J.transpose() * N);
                if (gamma.allFinite()) return gamma;
            }
        } else {
            Eigen::MatrixXd M;
            M.setZero(rows, rows);
            M.selfadjointView<Eigen::Lower>().rankUpdate(J);
            M.diagonal().array() += mu;
            Eigen::LLT<Eigen::MatrixXd> llt(M.selfadjointView<Eigen::Lower>());
            if (llt.info() == Eigen::Success) {
                Eigen::VectorXd y = llt.solve(N);
                if (y.allFinite()) return J.transpose() * y;
            }
        }
        lam = (lam > 0 ? lam : 1e-12) * 10.0;
    }
    throw numerical_error("solve_gn_direction: singular system after damping escalation");
}

}  // namespace evokan
