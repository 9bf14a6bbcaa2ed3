#pragma once

#include <cmath>
#include <vector>

#include "evokan/problems/navier_stokes.hpp"
#include "evokan/spectral.hpp"

namespace evokan {

// Pseudo-spectral solver for the 2D incompressible NSE: three-stage
// third-order Runge-Kutta on the projected advection term with the viscous
// part integrated exactly per stage (integrating factor e^{-nu |k|^2 dt}).
class NseSpectralSolver {
public:
    NseSpectralSolver(const NavierStokesSpec& spec, int n)
        : spec_(spec), grid_(n, n) {
        spec_.validate();
        const auto m = static_cast<std::size_t>(grid_.modes());
        uh_.assign(m, Complex(0, 0));
        vh_.assign(m, Complex(0, 0));
        for (auto* w : {&nu1_, &nv1_, &nu2_, &nv2_, &tu_, &tv_}) w->resize(m);
        for (auto* w : {&ru_, &rv_, &rux_, &ruy_, &rvx_, &rvy_, &rax_, &ray_}) w->resize(m);
    }

    const SpectralGrid& grid() const { return grid_; }
    double time() const { return time_; }

    void set_initial(const FieldSnapshot& snap) {
        if (snap.nx != grid_.nx || snap.ny != grid_.ny || snap.components != 2)
            throw invalid_argument("nse solver: initial snapshot does not match the grid");
        fft_forward(grid_, snap.component(0), uh_.data());
        fft_forward(grid_, snap.component(1), vh_.data());
        time_ = 0.0;
    }

    FieldSnapshot snapshot() const {
        FieldSnapshot s = make_snapshot(grid_.nx, grid_.ny, 2, time_);
        fft_inverse(grid_, uh_.data(), s.component(0));
        fft_inverse(grid_, vh_.data(), s.component(1));
        return s;
    }

    void step(double dt) {
        // stage values at c = 1/3 and 2/3, weights (1/4, 0, 3/4)
        tendency(uh_, vh_, nu1_, nv1_);  // N(v0)
        for (std::size_t i = 0; i < uh_.size(); ++i) {
            tu_[i] = uh_[i] + (dt / 3.0) * nu1_[i];
            tv_[i] = vh_[i] + (dt / 3.0) * nv1_[i];
        }
        scale_exp(tu_, tv_, dt / 3.0);  // v_a

        tendency(tu_, tv_, nu2_, nv2_);  // N(v_a)
        for (std::size_t i = 0; i < uh_.size(); ++i) {
            tu_[i] = nu2_[i];
            tv_[i] = nv2_[i];
        }
        scale_exp(tu_, tv_, dt / 3.0);  // E_{1/3} N(v_a)
        std::vector<Complex>& bu = nu2_;
        std::vector<Complex>& bv = nv2_;
        for (std::size_t i = 0; i < uh_.size(); ++i) {
            bu[i] = uh_[i];
            bv[i] = vh_[i];
        }
        scale_exp(bu, bv, 2.0 * dt / 3.0);
        for (std::size_t i = 0; i < uh_.size(); ++i) {
            bu[i] += (2.0 * dt / 3.0) * tu_[i];  // v_b
            bv[i] += (2.0 * dt / 3.0) * tv_[i];
        }

        tendency(bu, bv, tu_, tv_);      // N(v_b)
        scale_exp(tu_, tv_, dt / 3.0);   // E_{1/3} N(v_b)
        scale_exp(nu1_, nv1_, dt);       // E_1 N(v0)
        scale_exp(uh_, vh_, dt);         // E_1 v0
        for (std::size_t i = 0; i < uh_.size(); ++i) {
            uh_[i] += dt * (0.25 * nu1_[i] + 0.75 * tu_[i]);
            vh_[i] += dt * (0.25 * nv1_[i] + 0.75 * tv_[i]);
        }
        time_ += dt;
        guard();
    }

    double kinetic_energy() const {
        const double scale = cell_volume() / static_cast<double>(grid_.modes());
        double acc = 0.0;
        for (std::size_t i = 0; i < uh_.size(); ++i)
            acc += std::norm(uh_[i]) + std::norm(vh_[i]);
        return 0.5 * acc * scale;
    }

    double enstrophy() const {
        const double scale = cell_volume() / static_cast<double>(grid_.modes());
        double acc = 0.0;
        for (int my = 0; my < grid_.ny; ++my)
            for (int mx = 0; mx < grid_.nx; ++mx) {
                const auto i = static_cast<std::size_t>(static_cast<long>(my) * grid_.nx + mx);
                const double kx = grid_.nyquist_x(mx) ? 0.0 : grid_.kx[static_cast<std::size_t>(mx)];
                const double ky = grid_.nyquist_y(my) ? 0.0 : grid_.ky[static_cast<std::size_t>(my)];
                acc += std::norm(kx * vh_[i] - ky * uh_[i]);
            }
        return 0.5 * acc * scale;
    }

private:
    double cell_volume() const { return (2.0 / grid_.nx) * (2.0 / grid_.ny); }

    // N(v) = -P[dealias((v.grad)v)^]; viscosity lives in the exponential.
    void tendency(const std::vector<Complex>& uh, const std::vector<Complex>& vh,
                  std::vector<Complex>& nu, std::vector<Complex>& nv) {
        auto real_deriv = [&](const std::vector<Complex>& hat, bool xdir, std::vector<double>& out) {
            nu = hat;
            if (xdir) deriv_x(grid_, nu.data());
            else deriv_y(grid_, nu.data());
            fft_inverse(grid_, nu.data(), out.data());
        };
        fft_inverse(grid_, uh.data(), ru_.data());
        fft_inverse(grid_, vh.data(), rv_.data());
        real_deriv(uh, true, rux_);
        real_deriv(uh, false, ruy_);
        real_deriv(vh, true, rvx_);
        real_deriv(vh, false, rvy_);
        for (std::size_t i = 0; i < ru_.size(); ++i) {
            rax_[i] = ru_[i] * rux_[i] + rv_[i] * ruy_[i];
            ray_[i] = ru_[i] * rvx_[i] + rv_[i] * rvy_[i];
        }
        fft_forward(grid_, rax_.data(), nu.data());
        fft_forward(grid_, ray_.data(), nv.data());
        dealias(grid_, nu.data());
        dealias(grid_, nv.data());
        for (auto& c : nu) c = -c;
        for (auto& c : nv) c = -c;
        detail::project_solenoidal(grid_, nu.data(), nv.data());
    }

    void scale_exp(std::vector<Complex>& a, std::vector<Complex>& b, double tau) {
        for (int my = 0; my < grid_.ny; ++my)
            for (int mx = 0; mx < grid_.nx; ++mx) {
                const auto i = static_cast<std::size_t>(static_cast<long>(my) * grid_.nx + mx);
                const double e = std::exp(-spec_.nu * grid_.k2(mx, my) * tau);
                a[i] *= e;
                b[i] *= e;
            }
    }

    void guard() {
        fft_inverse(grid_, uh_.data(), ru_.data());
        double m = 0.0;
        for (double v : ru_) m = std::max(m, std::abs(v));
        if (!std::isfinite(m) || m > 1e3)
            throw numerical_error("nse spectral solver: velocity blew up at t = " +
                                  std::to_string(time_));
    }

    NavierStokesSpec spec_;
    SpectralGrid grid_;
    std::vector<Complex> uh_, vh_, nu1_, nv1_, nu2_, nv2_, tu_, tv_;
    std::vector<double> ru_, rv_, rux_, ruy_, rvx_, rvy_, rax_, ray_;
    double time_ = 0.0;
};

// omega = dv/dx - du/dy, spectrally.
inline FieldSnapshot vorticity(const FieldSnapshot& snap) {
    if (snap.components != 2) throw contract_error("vorticity: (u, v) snapshot expected");
    const SpectralGrid g(snap.nx, snap.ny);
    std::vector<Complex> a(static_cast<std::size_t>(g.modes()));
    std::vector<Complex> b(static_cast<std::size_t>(g.modes()));
    fft_forward(g, snap.component(1), a.data());
    deriv_x(g, a.data());
    fft_forward(g, snap.component(0), b.data());
    deriv_y(g, b.data());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    FieldSnapshot out = make_snapshot(snap.nx, snap.ny, 1, snap.time);
    fft_inverse(g, a.data(), out.component(0));
    return out;
}

}  // namespace evokan
