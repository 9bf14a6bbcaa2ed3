#pragma once

#include <complex>
#include <vector>

#include "evokan/common.hpp"

namespace evokan {

// Iterative radix-2 complex FFT with precomputed twiddles. The spectral
// grids in this project are powers of two by construction, so this covers
// every transform the solvers need.
class Fft {
public:
    explicit Fft(int n) : n_(n) {
        if (n < 2 || (n & (n - 1)) != 0)
            throw invalid_argument("Fft: size must be a power of two >= 2");
        rev_.resize(static_cast<std::size_t>(n));
        int log2n = 0;
        while ((1 << log2n) < n) ++log2n;
        for (int i = 0; i < n; ++i) {
            int r = 0;
            for (int b = 0; b < log2n; ++b)
                if (i & (1 << b)) r |= 1 << (log2n - 1 - b);
            rev_[static_cast<std::size_t>(i)] = r;
        }
        tw_.resize(static_cast<std::size_t>(n / 2));
        for (int k = 0; k < n / 2; ++k) {
            const double a = -2.0 * kPi * k / n;
            tw_[static_cast<std::size_t>(k)] = {std::cos(a), std::sin(a)};
        }
    }

    int size() const { return n_; }

    void forward(std::complex<double>* a) const { transform(a); }

    void inverse(std::complex<double>* a) const {
        for (int i = 0; i < n_; ++i) a[i] = std::conj(a[i]);
        transform(a);
        const double s = 1.0 / n_;
        for (int i = 0; i < n_; ++i) a[i] = std::conj(a[i]) * s;
    }

private:
    void transform(std::complex<double>* a) const {
        for (int i = 0; i < n_; ++i) {
            const int r = rev_[static_cast<std::size_t>(i)];
            if (i < r) std::swap(a[i], a[r]);
        }
        for (int len = 2; len <= n_; len <<= 1) {
            const int half = len >> 1;
            const int step = n_ / len;
            for (int base = 0; base < n_; base += len) {
                for (int k = 0; k < half; ++k) {
                    const std::complex<double> w = tw_[static_cast<std::size_t>(k * step)];
                    const std::complex<double> u = a[base + k];
                    const std::complex<double> v = a[base + k + half] * w;
                    a[base + k] = u + v;
                    a[base + k + half] = u - v;
                }
            }
        }
    }

    int n_;
    std::vector<int> rev_;
    std::vector<std::complex<double>> tw_;
};

}  // namespace evokan
