#pragma once

#include <complex>
#include <vector>

#include "evokan/fft.hpp"
#include "evokan/grid.hpp"

namespace evokan {

using Complex = std::complex<double>;

// Fourier workspace for a uniform periodic grid on [-1,1]^d. Wavenumbers
// are pi times the signed integer frequency (domain length 2). The grid is
// cell-centered; operator symbols act on DFT bins directly, which is exact
// for trigonometric interpolants regardless of the sample offset.
struct SpectralGrid {
    int nx;
    int ny;  // 1 for 1D
    Fft fft_x;
    Fft fft_y;
    std::vector<double> kx, ky;

    explicit SpectralGrid(int nx_, int ny_ = 1)
        : nx(nx_), ny(ny_), fft_x(nx_), fft_y(ny_ > 1 ? ny_ : 2) {
        if (nx < 16 || (nx & (nx - 1)) != 0)
            throw invalid_argument("SpectralGrid: nx must be a power of two >= 16");
        if (ny != 1 && (ny < 16 || (ny & (ny - 1)) != 0))
            throw invalid_argument("SpectralGrid: ny must be 1 or a power of two >= 16");
        kx.resize(static_cast<std::size_t>(nx));
        for (int m = 0; m < nx; ++m) kx[static_cast<std::size_t>(m)] = kPi * freq(m, nx);
        ky.resize(static_cast<std::size_t>(ny));
        for (int m = 0; m < ny; ++m)
            ky[static_cast<std::size_t>(m)] = ny > 1 ? kPi * freq(m, ny) : 0.0;
    }

    static int freq(int m, int n) { return m <= n / 2 ? m : m - n; }
    int dim() const { return ny > 1 ? 2 : 1; }
    long modes() const { return static_cast<long>(nx) * ny; }
    double k2(int mx, int my) const {
        const double a = kx[static_cast<std::size_t>(mx)];
        const double b = ky[static_cast<std::size_t>(my)];
        return a * a + b * b;
    }
    bool nyquist_x(int mx) const { return mx == nx / 2; }
    bool nyquist_y(int my) const { return ny > 1 && my == ny / 2; }
};

namespace detail {
// Grow-only scratch shared by the transform wrappers; avoids per-call
// allocation of grid-sized buffers in solver loops.
inline std::vector<Complex>& fft_scratch(std::size_t n) {
    thread_local std::vector<Complex> buf;
    if (buf.size() < n) buf.resize(n);
    return buf;
}

// Column pass over a row-major 2D buffer, blocked to keep the strided
// accesses cache-resident.
template <bool Forward>
inline void fft_columns(const SpectralGrid& g, Complex* data) {
    constexpr int kBlock = 16;
    thread_local std::vector<Complex> cols;
    if (cols.size() < static_cast<std::size_t>(g.ny) * kBlock)
        cols.resize(static_cast<std::size_t>(g.ny) * kBlock);
    for (int i0 = 0; i0 < g.nx; i0 += kBlock) {
        const int w = std::min(kBlock, g.nx - i0);
        for (int j = 0; j < g.ny; ++j)
            for (int b = 0; b < w; ++b)
                cols[static_cast<std::size_t>(b) * g.ny + j] = data[static_cast<long>(j) * g.nx + i0 + b];
        for (int b = 0; b < w; ++b) {
            if constexpr (Forward) g.fft_y.forward(cols.data() + static_cast<long>(b) * g.ny);
            else g.fft_y.inverse(cols.data() + static_cast<long>(b) * g.ny);
        }
        for (int j = 0; j < g.ny; ++j)
            for (int b = 0; b < w; ++b)
                data[static_cast<long>(j) * g.nx + i0 + b] = cols[static_cast<std::size_t>(b) * g.ny + j];
    }
}
}  // namespace detail

inline void fft_forward(const SpectralGrid& g, const double* real, Complex* hat) {
    for (long i = 0; i < g.modes(); ++i) hat[i] = real[i];
    for (int j = 0; j < g.ny; ++j) g.fft_x.forward(hat + static_cast<long>(j) * g.nx);
    if (g.ny > 1) detail::fft_columns<true>(g, hat);
}

inline void fft_inverse(const SpectralGrid& g, const Complex* hat, double* real) {
    auto& tmp = detail::fft_scratch(static_cast<std::size_t>(g.modes()));
    std::copy(hat, hat + g.modes(), tmp.begin());
    if (g.ny > 1) detail::fft_columns<false>(g, tmp.data());
    for (int j = 0; j < g.ny; ++j) g.fft_x.inverse(tmp.data() + static_cast<long>(j) * g.nx);
    for (long i = 0; i < g.modes(); ++i) real[i] = tmp[static_cast<std::size_t>(i)].real();
}

// 2/3-rule: zero every mode with |f_x| >= nx/3 or |f_y| >= ny/3.
inline void dealias(const SpectralGrid& g, Complex* hat) {
    const double cx = g.nx / 3.0;
    const double cy = g.ny / 3.0;
    for (int my = 0; my < g.ny; ++my) {
        const int fy = SpectralGrid::freq(my, g.ny);
        const bool kill_y = g.ny > 1 && std::abs(fy) >= cy;
        for (int mx = 0; mx < g.nx; ++mx) {
            const int fx = SpectralGrid::freq(mx, g.nx);
            if (kill_y || std::abs(fx) >= cx) hat[static_cast<long>(my) * g.nx + mx] = 0.0;
        }
    }
}

// d/dx and d/dy symbols (i*k, Nyquist zeroed as required for odd operators).
inline void deriv_x(const SpectralGrid& g, Complex* hat) {
    for (int my = 0; my < g.ny; ++my)
        for (int mx = 0; mx < g.nx; ++mx) {
            auto& c = hat[static_cast<long>(my) * g.nx + mx];
            c = g.nyquist_x(mx) ? 0.0 : c * Complex(0.0, g.kx[static_cast<std::size_t>(mx)]);
        }
}

inline void deriv_y(const SpectralGrid& g, Complex* hat) {
    for (int my = 0; my < g.ny; ++my)
        for (int mx = 0; mx < g.nx; ++mx) {
            auto& c = hat[static_cast<long>(my) * g.nx + mx];
            c = g.nyquist_y(my) ? 0.0 : c * Complex(0.0, g.ky[static_cast<std::size_t>(my)]);
        }
}

inline void laplacian(const SpectralGrid& g, Complex* hat) {
    for (int my = 0; my < g.ny; ++my)
        for (int mx = 0; mx < g.nx; ++mx) hat[static_cast<long>(my) * g.nx + mx] *= -g.k2(mx, my);
}

// Real-space spatial gradient of one snapshot component, via i*k.
inline void spectral_gradient(const SpectralGrid& g, const double* u, double* ux, double* uy) {
    std::vector<Complex> hat(static_cast<std::size_t>(g.modes()));
    std::vector<Complex> work(static_cast<std::size_t>(g.modes()));
    fft_forward(g, u, hat.data());
    work = hat;
    deriv_x(g, work.data());
    fft_inverse(g, work.data(), ux);
    if (uy) {
        work = hat;
        deriv_y(g, work.data());
        fft_inverse(g, work.data(), uy);
    }
}

// Field values with a transform-state tag; thin wrapper used where a module
// hands spectra across an interface.
class SpectralField {
public:
    enum class State { Real, Spectral };

    explicit SpectralField(const SpectralGrid& g)
        : grid_(&g), real_(static_cast<std::size_t>(g.modes()), 0.0),
          hat_(static_cast<std::size_t>(g.modes()), Complex(0, 0)) {}

    std::vector<double>& real_values() { sync_real(); return real_; }
    std::vector<Complex>& coefficients() { sync_hat(); return hat_; }
    State state() const { return state_; }

    void set_real(std::vector<double> v) {
        real_ = std::move(v);
        state_ = State::Real;
    }
    void mark_spectral() { state_ = State::Spectral; }

private:
    void sync_hat() {
        if (state_ == State::Real) {
            fft_forward(*grid_, real_.data(), hat_.data());
            state_ = State::Spectral;
        }
    }
    void sync_real() {
        if (state_ == State::Spectral) {
            fft_inverse(*grid_, hat_.data(), real_.data());
            state_ = State::Real;
        }
    }

    const SpectralGrid* grid_;
    std::vector<double> real_;
    std::vector<Complex> hat_;
    State state_ = State::Real;
};

// Downsample by spectral truncation onto a coarser cell-centered grid of the
// same domain. Exact for band-limited fields; the half-cell offset between
// the two grids is carried by a per-mode phase. Coarse Nyquist modes are
// dropped (strict |f| < n'/2) so the result stays real.
inline FieldSnapshot downsample_spectral(const FieldSnapshot& fine, int nx2, int ny2) {
    if (nx2 > fine.nx || (fine.ny > 1) != (ny2 > 1) || (ny2 > fine.ny))
        throw invalid_argument("downsample_spectral: target grid must be coarser, same dim");
    if (nx2 == fine.nx && ny2 == fine.ny) return fine;
    const SpectralGrid gf(fine.nx, fine.ny);
    const SpectralGrid gc(nx2, ny2);
    FieldSnapshot out = make_snapshot(nx2, ny2, fine.components, fine.time);
    const double dx = (out.hx() - fine.hx()) / 2.0;
    const double dy = fine.ny > 1 ? (out.hy() - fine.hy()) / 2.0 : 0.0;
    std::vector<Complex> hat(static_cast<std::size_t>(gf.modes()));
    std::vector<Complex> chat(static_cast<std::size_t>(gc.modes()));
    const double scale = static_cast<double>(gc.modes()) / static_cast<double>(gf.modes());
    for (int c = 0; c < fine.components; ++c) {
        fft_forward(gf, fine.component(c), hat.data());
        std::fill(chat.begin(), chat.end(), Complex(0, 0));
        for (int my = 0; my < gc.ny; ++my) {
            const int fy = SpectralGrid::freq(my, gc.ny);
            if (gc.ny > 1 && my == gc.ny / 2) continue;
            const int fmy = gf.ny > 1 ? (fy >= 0 ? fy : fy + gf.ny) : 0;
            for (int mx = 0; mx < gc.nx; ++mx) {
                if (mx == gc.nx / 2) continue;
                const int fx = SpectralGrid::freq(mx, gc.nx);
                const int fmx = fx >= 0 ? fx : fx + gf.nx;
                const double phase = kPi * (fx * dx + fy * dy);
                const Complex ph(std::cos(phase), std::sin(phase));
                chat[static_cast<std::size_t>(static_cast<long>(my) * gc.nx + mx)] =
                    hat[static_cast<std::size_t>(static_cast<long>(fmy) * gf.nx + fmx)] * ph * scale;
            }
        }
        fft_inverse(gc, chat.data(), out.component(c));
    }
    return out;
}

// Downsample by nearest-node decimation. Cell-centered grids are not
// nested, so each coarse node takes the closest fine sample; for fields the
// fine grid resolves, the error is bounded by max|grad u| * h_fine / 2.
// This is the right reduction for sharp-interface fields, where spectral
// truncation would ring.
inline FieldSnapshot downsample_decimate(const FieldSnapshot& fine, int nx2, int ny2) {
    if (nx2 > fine.nx || (fine.ny > 1) != (ny2 > 1) || (ny2 > fine.ny))
        throw invalid_argument("downsample_decimate: target grid must be coarser, same dim");
    if (nx2 == fine.nx && ny2 == fine.ny) return fine;
    FieldSnapshot out = make_snapshot(nx2, ny2, fine.components, fine.time);
    auto nearest = [](int j, int nc, int nf) {
        const double pos = (j + 0.5) * (static_cast<double>(nf) / nc) - 0.5;
        int i = static_cast<int>(std::floor(pos + 0.5));
        if (i < 0) i = 0;
        if (i >= nf) i = nf - 1;
        return i;
    };
    for (int c = 0; c < fine.components; ++c)
        for (int j = 0; j < ny2; ++j) {
            const int fj = fine.ny > 1 ? nearest(j, ny2, fine.ny) : 0;
            for (int i = 0; i < nx2; ++i)
                out.at(c, j, i) = fine.at(c, fj, nearest(i, nx2, fine.nx));
        }
    return out;
}

}  // namespace evokan
