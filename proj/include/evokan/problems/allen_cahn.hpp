#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "evokan/grid.hpp"
#include "evokan/jet.hpp"
#include "evokan/spectral.hpp"

namespace evokan {

// Allen-Cahn phase field on [-1,1]^d with periodic boundaries:
//   u_t = eps^2 Lap(u) - g(u),   g = G' = u(u^2-1)/eps^2,
//   G(u) = (u^2-1)^2 / (4 eps^2).
struct AllenCahnSpec {
    int dim = 1;
    double eps = 0.02;
    double half_width = 1.0;  // L
    double amp = 0.25;        // 1D initial amplitude a
    int alpha = 1;            // 2D initial frequency
    double c0 = 1.0;          // shift keeping E1 >= c0 > 0

    void validate() const {
        if (dim != 1 && dim != 2) throw invalid_argument("allen-cahn: dim must be 1 or 2");
        if (!(eps > 0)) throw invalid_argument("allen-cahn: eps must be > 0");
        if (alpha < 1) throw invalid_argument("allen-cahn: alpha must be >= 1");
        if (!(c0 > 0)) throw invalid_argument("allen-cahn: c0 must be > 0");
    }
};

inline double ac_G(const AllenCahnSpec& s, double u) {
    const double w = u * u - 1.0;
    return w * w / (4.0 * s.eps * s.eps);
}

inline double ac_g(const AllenCahnSpec& s, double u) {
    return u * (u * u - 1.0) / (s.eps * s.eps);
}

// Right-hand side N(u) so the evolution solves u_t = N(u).
inline double ac_residual(const AllenCahnSpec& s, const JetValue& jet) {
    if (jet.order < 2 || jet.dim != s.dim)
        throw contract_error("ac_residual: jet must carry second derivatives in all coordinates");
    double lap = 0.0;
    for (int d = 0; d < s.dim; ++d) lap += jet.dxx[static_cast<std::size_t>(d)];
    return s.eps * s.eps * lap - ac_g(s, jet.v);
}

inline std::function<double(double, double)> ac_initial_condition(const AllenCahnSpec& s) {
    if (s.dim == 1) {
        const double a = s.amp;
        return [a](double x, double) { return a * std::sin(kPi * x); };
    }
    const double w = s.alpha * kPi;
    return [w](double x, double y) { return 0.08 * std::sin(w * x) * std::sin(w * y); };
}

// (E, E1): the free energy 1/2 (phi, L phi) + int G with L = -eps^2 Lap,
// i.e. E = int eps^2/2 |grad u|^2 + G(u) dx, and the shifted nonlinear part
// E1 = int G dx + c0. Gradients are spectral on the snapshot grid.
inline std::pair<double, double> ac_energy(const AllenCahnSpec& s, const FieldSnapshot& snap) {
    if (snap.components != 1)
        throw contract_error("ac_energy: scalar snapshot expected");
    const SpectralGrid g(snap.nx, snap.ny);
    const long n = snap.cells();
    std::vector<double> ux(static_cast<std::size_t>(n)), uy;
    if (snap.dim() == 2) uy.resize(static_cast<std::size_t>(n));
    spectral_gradient(g, snap.component(0), ux.data(), snap.dim() == 2 ? uy.data() : nullptr);
    const double w = snap.cell_volume();
    double grad2 = 0.0, gsum = 0.0;
    for (long i = 0; i < n; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        double g2 = ux[ii] * ux[ii];
        if (snap.dim() == 2) g2 += uy[ii] * uy[ii];
        grad2 += g2;
        gsum += ac_G(s, snap.values[ii]);
    }
    const double e_total = 0.5 * s.eps * s.eps * grad2 * w + gsum * w;
    const double e1 = gsum * w + s.c0;
    return {e_total, e1};
}

// Gradient-flow decomposition u_t = G mu, mu = L u + U(u), with
// G = -identity, L = -eps^2 Lap, U = g, E1 = int G(u) + c0.
struct GradientFlowForm {
    AllenCahnSpec spec;

    double U(double u) const { return ac_g(spec, u); }

    double e1(const FieldSnapshot& snap) const {
        double gsum = 0.0;
        for (double v : snap.values) gsum += ac_G(spec, v);
        return gsum * snap.cell_volume() + spec.c0;
    }

    // L phi = -eps^2 Lap(phi), spectrally on the snapshot grid.
    std::vector<double> lphi(const FieldSnapshot& snap) const {
        const SpectralGrid g(snap.nx, snap.ny);
        std::vector<Complex> hat(static_cast<std::size_t>(g.modes()));
        fft_forward(g, snap.component(0), hat.data());
        laplacian(g, hat.data());
        std::vector<double> out(static_cast<std::size_t>(g.modes()));
        fft_inverse(g, hat.data(), out.data());
        const double e2 = spec.eps * spec.eps;
        for (double& v : out) v *= -e2;
        return out;
    }

    double lphi_jet(const JetValue& jet) const {
        double lap = 0.0;
        for (int d = 0; d < spec.dim; ++d) lap += jet.dxx[static_cast<std::size_t>(d)];
        return -spec.eps * spec.eps * lap;
    }
};

// Scalar auxiliary variable r = sqrt(E1).
struct SavState {
    double r = 0.0;
};

inline SavState sav_init(const GradientFlowForm& form, const FieldSnapshot& snap) {
    return SavState{std::sqrt(form.e1(snap))};
}

// mu = L phi + (r / sqrt(E1[phi])) U[phi], pointwise on the grid.
inline std::vector<double> sav_mu(const GradientFlowForm& form, const FieldSnapshot& snap,
                                  const SavState& sav) {
    if (!(sav.r > 0)) throw contract_error("sav_mu: auxiliary variable must be positive");
    std::vector<double> mu = form.lphi(snap);
    const double ratio = sav.r / std::sqrt(form.e1(snap));
    for (std::size_t i = 0; i < mu.size(); ++i) mu[i] += ratio * form.U(snap.values[i]);
    return mu;
}

struct SavRhs {
    std::vector<double> phi_t;
    double r_t = 0.0;
};

// phi_t = G mu = -mu; r_t = (1 / 2 sqrt(E1)) \int U[phi] phi_t dx.
inline SavRhs sav_rhs(const GradientFlowForm& form, const FieldSnapshot& snap,
                      const SavState& sav) {
    SavRhs out;
    out.phi_t = sav_mu(form, snap, sav);
    for (double& v : out.phi_t) v = -v;
    const double se1 = std::sqrt(form.e1(snap));
    double acc = 0.0;
    for (std::size_t i = 0; i < out.phi_t.size(); ++i)
        acc += form.U(snap.values[i]) * out.phi_t[i];
    out.r_t = acc * snap.cell_volume() / (2.0 * se1);
    return out;
}

}  // namespace evokan
