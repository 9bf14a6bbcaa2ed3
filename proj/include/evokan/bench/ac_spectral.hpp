#pragma once

#include <cmath>
#include <vector>

#include "evokan/problems/allen_cahn.hpp"
#include "evokan/spectral.hpp"

namespace evokan {

// Pseudo-spectral Allen-Cahn reference solvers (1D, and 2D via ny > 1).
// State is kept in Fourier space between steps; the nonlinearity is
// evaluated pointwise in real space and dealiased.
class AcSpectralSolver {
public:
    AcSpectralSolver(const AllenCahnSpec& spec, int nx, int ny = 1)
        : spec_(spec), grid_(nx, ny) {
        spec_.validate();
        const auto m = static_cast<std::size_t>(grid_.modes());
        hat_.assign(m, Complex(0, 0));
        bhat_.resize(m);
        u_.resize(m);
        b_.resize(m);
    }

    const SpectralGrid& grid() const { return grid_; }
    double time() const { return time_; }
    double sav_r() const { return r_; }

    void set_initial(const FieldSnapshot& snap) {
        if (snap.nx != grid_.nx || snap.ny != grid_.ny || snap.components != 1)
            throw invalid_argument("ac solver: initial snapshot does not match the grid");
        fft_forward(grid_, snap.component(0), hat_.data());
        time_ = 0.0;
        sync_real();
        r_ = std::sqrt(e1_real());
    }

    FieldSnapshot snapshot() const {
        FieldSnapshot s = make_snapshot(grid_.nx, grid_.ny, 1, time_);
        fft_inverse(grid_, hat_.data(), s.component(0));
        return s;
    }

    // First-order IMEX: (1 + dt eps^2 |k|^2) u^{n+1} = u^n - dt g(u^n)^,
    // with the nonlinearity dealiased. The functor g is the Allen-Cahn
    // cubic by default; tests substitute other reaction terms.
    template <typename G>
    void step_imex(double dt, G&& g) {
        sync_real();
        for (std::size_t i = 0; i < u_.size(); ++i) b_[i] = g(u_[i]);
        fft_forward(grid_, b_.data(), bhat_.data());
        dealias(grid_, bhat_.data());
        const double e2 = spec_.eps * spec_.eps;
        for (int my = 0; my < grid_.ny; ++my)
            for (int mx = 0; mx < grid_.nx; ++mx) {
                const auto idx = static_cast<std::size_t>(static_cast<long>(my) * grid_.nx + mx);
                hat_[idx] = (hat_[idx] - dt * bhat_[idx]) / (1.0 + dt * e2 * grid_.k2(mx, my));
            }
        real_valid_ = false;
        time_ += dt;
        check_finite();
    }

    void step_imex(double dt) {
        step_imex(dt, [this](double u) { return ac_g(spec_, u); });
    }

    // First-order SAV step. With A = (1 + dt eps^2 |k|^2)^{-1} and
    // b = U(phi^n)/sqrt(E1[phi^n]) (dealiased once, then used everywhere):
    //   r^{n+1} [1 + dt/2 (b, A b)] = r^n + 1/2 (b, (A - I) phi^n)
    //   phi^{n+1} = A phi^n - dt r^{n+1} A b
    // which dissipates 1/2 (phi, L phi) + r^2 for every dt.
    void step_sav(double dt) {
        sync_real();
        const double se1 = std::sqrt(e1_real());
        for (std::size_t i = 0; i < u_.size(); ++i) b_[i] = ac_g(spec_, u_[i]) / se1;
        fft_forward(grid_, b_.data(), bhat_.data());
        dealias(grid_, bhat_.data());

        const double e2 = spec_.eps * spec_.eps;
        const double w = cell_volume();
        // A phi^n and A b (the two applications of the implicit solve)
        std::vector<Complex>& aphi = work1_;
        std::vector<Complex>& ab = work2_;
        aphi = hat_;
        ab = bhat_;
        for (int my = 0; my < grid_.ny; ++my)
            for (int mx = 0; mx < grid_.nx; ++mx) {
                const auto idx = static_cast<std::size_t>(static_cast<long>(my) * grid_.nx + mx);
                const double inv = 1.0 / (1.0 + dt * e2 * grid_.k2(mx, my));
                aphi[idx] *= inv;
                ab[idx] *= inv;
            }
        // inner products via Parseval: (f, g)_h = sum conj(f_hat) g_hat * w / N
        const double scale = w / static_cast<double>(grid_.modes());
        double b_ab = 0.0, b_aphi_minus_phi = 0.0;
        for (std::size_t i = 0; i < hat_.size(); ++i) {
            b_ab += (std::conj(bhat_[i]) * ab[i]).real();
            b_aphi_minus_phi += (std::conj(bhat_[i]) * (aphi[i] - hat_[i])).real();
        }
        b_ab *= scale;
        b_aphi_minus_phi *= scale;

        const double r_next = (r_ + 0.5 * b_aphi_minus_phi) / (1.0 + 0.5 * dt * b_ab);
        for (std::size_t i = 0; i < hat_.size(); ++i) hat_[i] = aphi[i] - dt * r_next * ab[i];
        r_ = r_next;
        real_valid_ = false;
        time_ += dt;
        check_finite();
    }

    // 1/2 (phi, L phi) + r^2 = eps^2/2 \int |grad phi|^2 + r^2, the SAV
    // scheme's dissipated quantity, evaluated spectrally.
    double modified_energy() {
        const double scale = cell_volume() / static_cast<double>(grid_.modes());
        double quad = 0.0;
        for (int my = 0; my < grid_.ny; ++my)
            for (int mx = 0; mx < grid_.nx; ++mx) {
                const auto idx = static_cast<std::size_t>(static_cast<long>(my) * grid_.nx + mx);
                quad += grid_.k2(mx, my) * std::norm(hat_[idx]);
            }
        const double e2 = spec_.eps * spec_.eps;
        return 0.5 * e2 * quad * scale + r_ * r_;
    }

    double e1() {
        sync_real();
        return e1_real();
    }

private:
    double cell_volume() const {
        const double hx = 2.0 / grid_.nx;
        return grid_.ny > 1 ? hx * (2.0 / grid_.ny) : hx;
    }

    double e1_real() const {
        double acc = 0.0;
        for (double v : u_) acc += ac_G(spec_, v);
        return acc * cell_volume() + spec_.c0;
    }

    void sync_real() {
        if (!real_valid_) {
            fft_inverse(grid_, hat_.data(), u_.data());
            real_valid_ = true;
        }
    }

    void check_finite() {
        for (const auto& c : hat_)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw numerical_error("ac spectral solver: state blew up at t = " +
                                      std::to_string(time_));
    }

    AllenCahnSpec spec_;
    SpectralGrid grid_;
    std::vector<Complex> hat_, bhat_, work1_, work2_;
    std::vector<double> u_, b_;
    double time_ = 0.0;
    double r_ = 0.0;
    bool real_valid_ = false;
};

}  // namespace evokan
