#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "evokan/grid.hpp"
#include "evokan/spectral.hpp"

namespace evokan {

enum class NseIc { PaperLiteral, DivergenceFree };

// 2D incompressible Navier-Stokes on [-1,1]^2, doubly periodic, zero
// forcing. Pressure is eliminated spectrally.
struct NavierStokesSpec {
    double nu = 0.05;
    NseIc ic = NseIc::DivergenceFree;

    void validate() const {
        if (!(nu > 0)) throw invalid_argument("navier-stokes: nu must be > 0");
    }
};

inline std::function<void(double, double, double&, double&)> nse_initial_condition(
    const NavierStokesSpec& s) {
    if (s.ic == NseIc::PaperLiteral)
        return [](double, double y, double& u, double& v) {
            u = -std::sin(2.0 * kPi * y);
            v = std::cos(2.0 * kPi * y);
        };
    return [](double x, double y, double& u, double& v) {
        u = -std::sin(2.0 * kPi * y);
        v = std::cos(2.0 * kPi * x);
    };
}

namespace detail {

// Leray projection in place: a_hat -= k (k . a_hat) / |k|^2. The mean mode
// is zeroed (no mean forcing), and so are the Nyquist modes, where the sign
// of k is ambiguous and no solenoidal decomposition exists.
inline void project_solenoidal(const SpectralGrid& g, Complex* ah_x, Complex* ah_y) {
    for (int my = 0; my < g.ny; ++my)
        for (int mx = 0; mx < g.nx; ++mx) {
            const long idx = static_cast<long>(my) * g.nx + mx;
            if ((mx == 0 && my == 0) || g.nyquist_x(mx) || g.nyquist_y(my)) {
                ah_x[idx] = 0.0;
                ah_y[idx] = 0.0;
                continue;
            }
            const double kx = g.kx[static_cast<std::size_t>(mx)];
            const double ky = g.ky[static_cast<std::size_t>(my)];
            const double k2 = kx * kx + ky * ky;
            const Complex kd = (kx * ah_x[idx] + ky * ah_y[idx]) / k2;
            ah_x[idx] -= kx * kd;
            ah_y[idx] -= ky * kd;
        }
}

}  // namespace detail

// Spectral workspace for evaluating the projected NSE tendency on a fixed
// n x n grid (n a power of two).
class NseResidual {
public:
    explicit NseResidual(const NavierStokesSpec& spec, int n)
        : spec_(spec), grid_(n, n) {
        spec_.validate();
        const auto m = static_cast<std::size_t>(grid_.modes());
        uh_.resize(m); vh_.resize(m); wx_.resize(m); wy_.resize(m);
        u_.resize(m); v_.resize(m);
        ux_.resize(m); uy_.resize(m); vx_.resize(m); vy_.resize(m);
        ax_.resize(m); ay_.resize(m);
    }

    const SpectralGrid& grid() const { return grid_; }
    const NavierStokesSpec& spec() const { return spec_; }

    // N = P[ -(v.grad)v + nu Lap v ] with P the Leray projector; advection
    // is pseudo-spectral with 2/3 dealiasing. Projecting the whole tendency
    // keeps it divergence-free for any sampled field.
    FieldSnapshot operator()(const FieldSnapshot& snap) {
        check(snap);
        const long n = grid_.modes();
        fft_forward(grid_, snap.component(0), uh_.data());
        fft_forward(grid_, snap.component(1), vh_.data());

        auto real_deriv = [&](const std::vector<Complex>& hat, bool xdir, std::vector<double>& out) {
            wx_ = hat;
            if (xdir) deriv_x(grid_, wx_.data());
            else deriv_y(grid_, wx_.data());
            fft_inverse(grid_, wx_.data(), out.data());
        };
        real_deriv(uh_, true, ux_);
        real_deriv(uh_, false, uy_);
        real_deriv(vh_, true, vx_);
        real_deriv(vh_, false, vy_);

        const double* u = snap.component(0);
        const double* v = snap.component(1);
        for (long i = 0; i < n; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            ax_[ii] = u[i] * ux_[ii] + v[i] * uy_[ii];
            ay_[ii] = u[i] * vx_[ii] + v[i] * vy_[ii];
        }
        fft_forward(grid_, ax_.data(), wx_.data());
        fft_forward(grid_, ay_.data(), wy_.data());
        dealias(grid_, wx_.data());
        dealias(grid_, wy_.data());

        // tendency in Fourier space: -(advection) - nu |k|^2 v
        for (int my = 0; my < grid_.ny; ++my)
            for (int mx = 0; mx < grid_.nx; ++mx) {
                const long idx = static_cast<long>(my) * grid_.nx + mx;
                const double k2 = grid_.k2(mx, my);
                wx_[static_cast<std::size_t>(idx)] =
                    -wx_[static_cast<std::size_t>(idx)] - spec_.nu * k2 * uh_[static_cast<std::size_t>(idx)];
                wy_[static_cast<std::size_t>(idx)] =
                    -wy_[static_cast<std::size_t>(idx)] - spec_.nu * k2 * vh_[static_cast<std::size_t>(idx)];
            }
        detail::project_solenoidal(grid_, wx_.data(), wy_.data());

        FieldSnapshot out = make_snapshot(snap.nx, snap.ny, 2, snap.time);
        fft_inverse(grid_, wx_.data(), out.component(0));
        fft_inverse(grid_, wy_.data(), out.component(1));
        return out;
    }

    // Pressure recovered from the advection term (for rendering): p_hat =
    // -i k . a_hat / |k|^2, zero mean.
    FieldSnapshot pressure(const FieldSnapshot& snap) {
        check(snap);
        const long n = grid_.modes();
        fft_forward(grid_, snap.component(0), uh_.data());
        fft_forward(grid_, snap.component(1), vh_.data());
        auto real_deriv = [&](const std::vector<Complex>& hat, bool xdir, std::vector<double>& out) {
            wx_ = hat;
            if (xdir) deriv_x(grid_, wx_.data());
            else deriv_y(grid_, wx_.data());
            fft_inverse(grid_, wx_.data(), out.data());
        };
        real_deriv(uh_, true, ux_);
        real_deriv(uh_, false, uy_);
        real_deriv(vh_, true, vx_);
        real_deriv(vh_, false, vy_);
        const double* u = snap.component(0);
        const double* v = snap.component(1);
        for (long i = 0; i < n; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            ax_[ii] = u[i] * ux_[ii] + v[i] * uy_[ii];
            ay_[ii] = u[i] * vx_[ii] + v[i] * vy_[ii];
        }
        fft_forward(grid_, ax_.data(), wx_.data());
        fft_forward(grid_, ay_.data(), wy_.data());
        dealias(grid_, wx_.data());
        dealias(grid_, wy_.data());
        for (int my = 0; my < grid_.ny; ++my)
            for (int mx = 0; mx < grid_.nx; ++mx) {
                const long idx = static_cast<long>(my) * grid_.nx + mx;
                const auto ii = static_cast<std::size_t>(idx);
                if (mx == 0 && my == 0) {
                    wx_[ii] = 0.0;
                    continue;
                }
                const double kx = grid_.kx[static_cast<std::size_t>(mx)];
                const double ky = grid_.ky[static_cast<std::size_t>(my)];
                wx_[ii] = Complex(0, -1) * (kx * wx_[ii] + ky * wy_[ii]) / (kx * kx + ky * ky);
            }
        FieldSnapshot out = make_snapshot(snap.nx, snap.ny, 1, snap.time);
        fft_inverse(grid_, wx_.data(), out.component(0));
        return out;
    }

private:
    void check(const FieldSnapshot& snap) const {
        if (snap.components != 2)
            throw contract_error("nse_residual: (u, v) snapshot expected");
        if (snap.nx != grid_.nx || snap.ny != grid_.ny)
            throw invalid_argument("nse_residual: snapshot grid does not match workspace");
    }

    NavierStokesSpec spec_;
    SpectralGrid grid_;
    std::vector<Complex> uh_, vh_, wx_, wy_;
    std::vector<double> u_, v_, ux_, uy_, vx_, vy_, ax_, ay_;
};

inline FieldSnapshot nse_residual(const NavierStokesSpec& spec, const FieldSnapshot& snap) {
    if (snap.nx != snap.ny || snap.nx < 16 || (snap.nx & (snap.nx - 1)) != 0)
        throw invalid_argument("nse_residual: grid must be square with a power-of-two size");
    NseResidual op(spec, snap.nx);
    return op(snap);
}

// Spectral divergence, max norm; the projection property check.
inline double max_spectral_divergence(const FieldSnapshot& snap) {
    const SpectralGrid g(snap.nx, snap.ny);
    std::vector<Complex> a(static_cast<std::size_t>(g.modes()));
    std::vector<Complex> b(static_cast<std::size_t>(g.modes()));
    fft_forward(g, snap.component(0), a.data());
    fft_forward(g, snap.component(1), b.data());
    deriv_x(g, a.data());
    deriv_y(g, b.data());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    std::vector<double> div(static_cast<std::size_t>(g.modes()));
    fft_inverse(g, a.data(), div.data());
    double m = 0.0;
    for (double v : div) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace evokan
