#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <memory>

#include "evokan/grid.hpp"
#include "evokan/metrics.hpp"
#include "evokan/network.hpp"
#include "evokan/problems/allen_cahn.hpp"
#include "evokan/problems/navier_stokes.hpp"

namespace evokan {

struct SavContext {
    bool active = false;
    double r = 0.0;
    double quad_weight = 0.0;  // rectangle weight per collocation point
};

struct ResidualInfo {
    double e1 = std::numeric_limits<double>::quiet_NaN();
    double sav_ratio = 1.0;
};

// A PDE's spatial operator N(u) evaluated at collocation points from the
// current network state, so the evolution solves u_t = N(u). Gradient-flow
// problems additionally expose the pieces the SAV coupling needs.
class ResidualOperator {
public:
    virtual ~ResidualOperator() = default;
    virtual int components() const = 0;

    // rows: point-major residual values, components contiguous per point;
    // values: the sampled network outputs in the same layout. In SAV mode
    // the variational derivative is scaled by r / sqrt(E1[u]).
    virtual ResidualInfo eval(const Network& net, const ParamVector& p,
                              const Eigen::MatrixXd& pts, const SavContext& sav,
                              Eigen::VectorXd& rows, Eigen::VectorXd& values) = 0;

    virtual bool is_gradient_flow() const { return false; }
    virtual double variational_derivative(double) const {
        throw contract_error("residual operator: not a gradient flow");
    }

    // Trace diagnostics on metric-grid snapshots; NaN when undefined.
    virtual double energy(const FieldSnapshot&) const {
        return std::numeric_limits<double>::quiet_NaN();
    }
    virtual double modified_energy(const FieldSnapshot&, double) const {
        return std::numeric_limits<double>::quiet_NaN();
    }
};

class AcResidualOp final : public ResidualOperator {
public:
    explicit AcResidualOp(const AllenCahnSpec& spec) : spec_(spec) { spec_.validate(); }

    const AllenCahnSpec& spec() const { return spec_; }
    int components() const override { return 1; }
    bool is_gradient_flow() const override { return true; }

    ResidualInfo eval(const Network& net, const ParamVector& p, const Eigen::MatrixXd& pts,
                      const SavContext& sav, Eigen::VectorXd& rows,
                      Eigen::VectorXd& values) override {
        const long n = pts.rows();
        rows.resize(n);
        values.resize(n);
        const double e2 = spec_.eps * spec_.eps;
#pragma omp parallel for schedule(static)
        for (long q = 0; q < n; ++q) {
            double x[2] = {pts(q, 0), spec_.dim == 2 ? pts(q, 1) : 0.0};
            JetValue jet;
            network_forward_jet(net, p, x, &jet);
            double lap = 0.0;
            for (int d = 0; d < spec_.dim; ++d) lap += jet.dxx[static_cast<std::size_t>(d)];
            rows[q] = e2 * lap;  // the L part; the U part is scaled below
            values[q] = jet.v;
        }
        ResidualInfo info;
        if (sav.active) {
            if (!(sav.r > 0)) throw contract_error("sav evolution: r must stay positive");
            double gsum = 0.0;
            for (long q = 0; q < n; ++q) gsum += ac_G(spec_, values[q]);
            info.e1 = gsum * sav.quad_weight + spec_.c0;
            info.sav_ratio = sav.r / std::sqrt(info.e1);
        }
        for (long q = 0; q < n; ++q) rows[q] -= info.sav_ratio * ac_g(spec_, values[q]);
        return info;
    }

    double variational_derivative(double u) const override { return ac_g(spec_, u); }

    double energy(const FieldSnapshot& snap) const override {
        return ac_energy(spec_, snap).first;
    }

    // 1/2 (phi, L phi) + r^2
    double modified_energy(const FieldSnapshot& snap, double r) const override {
        const auto [e_total, e1] = ac_energy(spec_, snap);
        const double quad = e_total - (e1 - spec_.c0);  // the eps^2/2 |grad|^2 part
        return quad + r * r;
    }

private:
    AllenCahnSpec spec_;
};

class NseResidualOp final : public ResidualOperator {
public:
    NseResidualOp(const NavierStokesSpec& spec, int n) : op_(spec, n), n_(n) {}

    int components() const override { return 2; }

    ResidualInfo eval(const Network& net, const ParamVector& p, const Eigen::MatrixXd& pts,
                      const SavContext&, Eigen::VectorXd& rows,
                      Eigen::VectorXd& values) override {
        const long npts = static_cast<long>(n_) * n_;
        if (pts.rows() != npts || pts.cols() != 2)
            throw invalid_argument(
                "nse residual: collocation must be the uniform power-of-two grid");
        FieldSnapshot snap = make_snapshot(n_, n_, 2, 0.0);
#pragma omp parallel for schedule(static)
        for (long q = 0; q < npts; ++q) {
            double x[2] = {pts(q, 0), pts(q, 1)};
            double out[2];
            network_forward(net, p, x, out);
            snap.component(0)[q] = out[0];
            snap.component(1)[q] = out[1];
        }
        const FieldSnapshot res = op_(snap);
        rows.resize(2 * npts);
        values.resize(2 * npts);
        for (long q = 0; q < npts; ++q) {
            rows[2 * q] = res.component(0)[q];
            rows[2 * q + 1] = res.component(1)[q];
            values[2 * q] = snap.component(0)[q];
            values[2 * q + 1] = snap.component(1)[q];
        }
        return {};
    }

    double energy(const FieldSnapshot& snap) const override {
        // kinetic energy 1/2 int |v|^2
        double acc = 0.0;
        for (double v : snap.values) acc += v * v;
        return 0.5 * acc * snap.cell_volume();
    }

private:
    NseResidual op_;
    int n_;
};

}  // namespace evokan
