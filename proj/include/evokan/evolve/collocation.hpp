#pragma once

#include <Eigen/Dense>

#include "evokan/common.hpp"

namespace evokan {

enum class CollocKind { UniformGrid, UniformRandom };

// Where the residual and Jacobian are evaluated. UniformGrid is the
// cell-centered periodic grid (no duplicate endpoint), row-major in 2D to
// match FieldSnapshot layout; UniformRandom draws seeded points.
struct CollocationSet {
    CollocKind kind = CollocKind::UniformGrid;
    int dim = 1;
    int n = 256;              // per-dimension grid size (UniformGrid)
    long count = 0;           // point count (UniformRandom)
    std::uint64_t seed = 0;   // UniformRandom
    bool resample_per_step = false;

    long size() const {
        if (kind == CollocKind::UniformGrid)
            return dim == 2 ? static_cast<long>(n) * n : n;
        return count;
    }

    void validate() const {
        if (dim != 1 && dim != 2) throw invalid_argument("collocation: dim must be 1 or 2");
        if (kind == CollocKind::UniformGrid && n < 2)
            throw invalid_argument("collocation: grid size must be >= 2");
        if (kind == CollocKind::UniformRandom && count < 1)
            throw invalid_argument("collocation: point count must be >= 1");
    }

    // Rectangle-rule weight per point (Monte Carlo weight for random sets).
    double quad_weight() const {
        const double vol = dim == 2 ? 4.0 : 2.0;
        return vol / static_cast<double>(size());
    }

    Eigen::MatrixXd points(long step = 0) const {
        validate();
        if (kind == CollocKind::UniformGrid) {
            const double h = 2.0 / n;
            if (dim == 1) {
                Eigen::MatrixXd pts(n, 1);
                for (int i = 0; i < n; ++i) pts(i, 0) = -1.0 + (i + 0.5) * h;
                return pts;
            }
            Eigen::MatrixXd pts(static_cast<long>(n) * n, 2);
            long q = 0;
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i, ++q) {
                    pts(q, 0) = -1.0 + (i + 0.5) * h;
                    pts(q, 1) = -1.0 + (j + 0.5) * h;
                }
            return pts;
        }
        Rng rng(seed + (resample_per_step ? 0x5bd1e995ull * static_cast<std::uint64_t>(step) : 0));
        Eigen::MatrixXd pts(count, dim);
        for (long q = 0; q < count; ++q)
            for (int c = 0; c < dim; ++c) pts(q, c) = rng.uniform(-1.0, 1.0);
        return pts;
    }
};

}  // namespace evokan
