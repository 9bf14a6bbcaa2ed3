#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "evokan/evolve/lsq.hpp"
#include "evokan/evolve/residual_ops.hpp"

using namespace evokan;

namespace {

struct HeatOp final : ResidualOperator {
    int components() const override { return 1; }
    ResidualInfo eval(const Network& net, const ParamVector& p, const Eigen::MatrixXd& pts,
                      const SavContext&, Eigen::VectorXd& rows, Eigen::VectorXd& values) override {
        rows.resize(pts.rows());
        values.resize(pts.rows());
        for (long q = 0; q < pts.rows(); ++q) {
            double x[2] = {pts(q, 0), 0.0};
            JetValue jet;
            network_forward_jet(net, p, x, &jet);
            rows[q] = jet.dxx[0];
            values[q] = jet.v;
        }
        return {};
    }
};

}  // namespace

TEST_CASE("solve_direction basics") {
    // b = 0 -> gamma = 0 for any lambda
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(5, 5) * 3.0;
    CHECK(solve_direction(A, Eigen::VectorXd::Zero(5), 0.0).norm() == 0.0);
    CHECK(solve_direction(A, Eigen::VectorXd::Zero(5), 1e-3).norm() == 0.0);

    // A = I, lambda = 0 -> gamma = b
    Eigen::VectorXd b(3);
    b << 1.0, -2.0, 0.5;
    const Eigen::VectorXd g = solve_direction(Eigen::MatrixXd::Identity(3, 3), b, 0.0);
    CHECK((g - b).cwiseAbs().maxCoeff() < 1e-14);

    CHECK_THROWS_AS(solve_direction(A, Eigen::VectorXd::Zero(5), -1.0), invalid_argument);
}

TEST_CASE("rank-deficient systems match the pseudoinverse residual") {
    // Duplicated collocation points make J^T J rank-deficient.
    Network net = Network::kan({1, 2, 1}, 3, 5);
    const ParamVector p = net.init_params(4);
    Eigen::MatrixXd pts(12, 1);
    for (int i = 0; i < 6; ++i) {
        pts(i, 0) = -0.8 + 0.3 * i;
        pts(i + 6, 0) = pts(i, 0);  // exact duplicates
    }
    HeatOp op;
    const NormalSystem sys = assemble_normal_system(net, p, op, pts);
    REQUIRE(sys.A.rows() == net.param_count());

    // exact symmetry by construction
    CHECK((sys.A - sys.A.transpose()).cwiseAbs().maxCoeff() == 0.0);

    const Eigen::VectorXd gamma = solve_direction(sys.A, sys.b, 1e-10);
    const Eigen::VectorXd gamma_pinv =
        sys.A.completeOrthogonalDecomposition().pseudoInverse() * sys.b;
    const double r1 = (sys.A * gamma - sys.b).norm();
    const double r2 = (sys.A * gamma_pinv - sys.b).norm();
    CHECK(r1 <= r2 + 1e-8);
}

TEST_CASE("normal equations match the finite-difference J^T J") {
    Network net = Network::kan({1, 3, 1}, 3, 6);
    const ParamVector p = net.init_params(11);
    Eigen::MatrixXd pts(16, 1);
    for (int i = 0; i < 16; ++i) pts(i, 0) = -1.0 + 2.0 * (i + 0.5) / 16.0;
    HeatOp op;
    const NormalSystem sys = assemble_normal_system(net, p, op, pts);

    const double h = 1e-6;
    RowMajorMatrix Jfd(16, net.param_count());
    Eigen::VectorXd out0(1), out1(1);
    for (long j = 0; j < net.param_count(); ++j) {
        ParamVector pp = p;
        pp[j] += h;
        for (int q = 0; q < 16; ++q) {
            double x[2] = {pts(q, 0), 0.0};
            network_forward(net, p, x, out0.data());
            network_forward(net, pp, x, out1.data());
            Jfd(q, j) = (out1[0] - out0[0]) / h;
        }
    }
    const Eigen::MatrixXd Afd = Jfd.transpose() * Jfd;
    CHECK((sys.A - Afd).norm() / Afd.norm() < 1e-5);
}

TEST_CASE("zero residual gives a zero right-hand side and zero direction") {
    Network net = Network::kan({1, 3, 1}, 3, 5);
    const ParamVector p = ParamVector::Zero(net.param_count());  // u == 0
    Eigen::MatrixXd pts(8, 1);
    for (int i = 0; i < 8; ++i) pts(i, 0) = -0.9 + 0.25 * i;
    AllenCahnSpec spec;
    spec.dim = 1;
    spec.eps = 0.1;
    AcResidualOp op(spec);
    const NormalSystem sys = assemble_normal_system(net, p, op, pts);
    CHECK(sys.b.cwiseAbs().maxCoeff() == 0.0);
    CHECK(solve_direction(sys.A, sys.b, 1e-8).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("primal and dual ridge directions agree") {
    Rng rng(17);
    for (const bool wide : {false, true}) {
        const long rows = wide ? 20 : 60;
        const long cols = 40;
        RowMajorMatrix J(rows, cols);
        Eigen::VectorXd N(rows);
        for (long i = 0; i < rows; ++i) {
            N[i] = rng.uniform(-1, 1);
            for (long j = 0; j < cols; ++j) J(i, j) = rng.uniform(-1, 1);
        }
        const double lambda = 1e-6;
        const double s = J.squaredNorm() / static_cast<double>(cols);
        // reference: explicit primal with the same scaling
        const Eigen::MatrixXd A =
            (J.transpose() * J + lambda * s * Eigen::MatrixXd::Identity(cols, cols));
        const Eigen::VectorXd want = A.ldlt().solve(J.transpose() * N);
        const Eigen::VectorXd got = solve_gn_direction(J, N, lambda);
        CHECK((want - got).norm() / want.norm() < 1e-8);
    }
}

TEST_CASE("blow-up in the residual aborts assembly") {
    Network net = Network::kan({1, 2, 1}, 3, 5);
    ParamVector p = net.init_params(2);
    p *= 1e160;  // overflow through the cubic
    Eigen::MatrixXd pts(4, 1);
    pts << -0.5, 0.0, 0.5, 0.9;
    AllenCahnSpec spec;
    spec.dim = 1;
    spec.eps = 0.05;
    AcResidualOp op(spec);
    CHECK_THROWS_AS(assemble_normal_system(net, p, op, pts), numerical_error);
}

TEST_CASE("empty collocation set is rejected") {
    Network net = Network::kan({1, 2, 1}, 3, 5);
    const ParamVector p = net.init_params(1);
    HeatOp op;
    Eigen::MatrixXd pts(0, 1);
    CHECK_THROWS_AS(assemble_normal_system(net, p, op, pts), invalid_argument);
}
