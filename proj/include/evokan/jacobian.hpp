#pragma once

#include <Eigen/Dense>
#include <vector>

#include "evokan/network.hpp"

namespace evokan {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Taped forward state for one point, reused across points and steps.
struct JacobianWorkspace {
    std::vector<std::vector<double>> acts;        // acts[l]: inputs to layer l; acts[L]: outputs
    std::vector<std::vector<BasisWindow>> wins;   // KAN: per (l, i)
    std::vector<std::vector<double>> silu_f;      // KAN: per (l, i)
    std::vector<std::vector<double>> silu_fp;     // KAN: per (l, i)
    std::vector<std::vector<double>> dphi;        // KAN: per (l, j*n_in+i)
    std::vector<std::vector<double>> spline_v;    // KAN: per (l, j*n_in+i)
    std::vector<std::vector<double>> tanh_p;      // MLP: per hidden (l, j)
    std::vector<double> adj_a, adj_b;

    void prepare(const Network& net) {
        const auto L = static_cast<std::size_t>(net.layer_count());
        acts.resize(L + 1);
        wins.resize(L);
        silu_f.resize(L);
        silu_fp.resize(L);
        dphi.resize(L);
        spline_v.resize(L);
        tanh_p.resize(L);
        for (int l = 0; l < net.layer_count(); ++l) {
            const auto li = static_cast<std::size_t>(l);
            const auto n_in = static_cast<std::size_t>(net.layer_in(l));
            const auto n_out = static_cast<std::size_t>(net.layer_out(l));
            acts[li].resize(n_in);
            wins[li].resize(n_in);
            silu_f[li].resize(n_in);
            silu_fp[li].resize(n_in);
            dphi[li].resize(n_in * n_out);
            spline_v[li].resize(n_in * n_out);
            tanh_p[li].resize(n_out);
        }
        acts[L].resize(static_cast<std::size_t>(net.out_dim()));
        adj_a.resize(static_cast<std::size_t>(net.max_width()));
        adj_b.resize(static_cast<std::size_t>(net.max_width()));
    }
};

namespace detail {

inline void jacobian_forward(const Network& net, const double* p, const double* x,
                             JacobianWorkspace& w) {
    const int d = net.dim();
    if (net.embedding() == Embedding::PeriodicSinCos) {
        const double om = kPi / net.half_period();
        for (int c = 0; c < d; ++c) {
            w.acts[0][static_cast<std::size_t>(2 * c)] = std::sin(om * x[c]);
            w.acts[0][static_cast<std::size_t>(2 * c + 1)] = std::cos(om * x[c]);
        }
    } else {
        for (int c = 0; c < d; ++c) w.acts[0][static_cast<std::size_t>(c)] = x[c];
    }

    const KnotVector& kv = net.knots();
    const int k = kv.order;
    const int nb = kv.basis_count();
    for (int l = 0; l < net.layer_count(); ++l) {
        const auto li = static_cast<std::size_t>(l);
        const int n_in = net.layer_in(l);
        const int n_out = net.layer_out(l);
        if (net.backend() == Backend::Kan) {
            for (int i = 0; i < n_in; ++i) {
                const double xi = w.acts[li][static_cast<std::size_t>(i)];
                basis_window<true>(kv, xi, w.wins[li][static_cast<std::size_t>(i)]);
                double f, fp, fpp;
                silu_jet(xi, f, fp, fpp);
                w.silu_f[li][static_cast<std::size_t>(i)] = f;
                w.silu_fp[li][static_cast<std::size_t>(i)] = fp;
            }
            for (int j = 0; j < n_out; ++j) {
                double acc = 0.0;
                for (int i = 0; i < n_in; ++i) {
                    const double* c = p + net.edge_offset(l, j, i);
                    const double wb = net.trainable_scales() ? c[nb] : net.fixed_wb();
                    const double ws = net.trainable_scales() ? c[nb + 1] : net.fixed_ws();
                    const BasisWindow& bw = w.wins[li][static_cast<std::size_t>(i)];
                    const int base = bw.first_basis(k);
                    const double xi = w.acts[li][static_cast<std::size_t>(i)];
                    const bool inside = (xi >= kv.lo && xi <= kv.hi);
                    double sv = 0.0, sd1 = 0.0;
                    for (int r = 0; r <= k; ++r) {
                        sv += c[base + r] * bw.value[static_cast<std::size_t>(r)];
                        sd1 += c[base + r] * bw.d1[static_cast<std::size_t>(r)];
                    }
                    if (!inside) sd1 = 0.0;
                    const auto e = static_cast<std::size_t>(j * n_in + i);
                    w.spline_v[li][e] = sv;
                    w.dphi[li][e] = wb * w.silu_fp[li][static_cast<std::size_t>(i)] + ws * sd1;
                    acc += wb * w.silu_f[li][static_cast<std::size_t>(i)] + ws * sv;
                }
                w.acts[li + 1][static_cast<std::size_t>(j)] = acc;
            }
        } else {
            const bool last = (l == net.layer_count() - 1);
            for (int j = 0; j < n_out; ++j) {
                double z = p[net.mlp_b_offset(l, j)];
                for (int i = 0; i < n_in; ++i)
                    z += p[net.mlp_w_offset(l, j, i)] * w.acts[li][static_cast<std::size_t>(i)];
                if (last) {
                    w.acts[li + 1][static_cast<std::size_t>(j)] = z;
                    w.tanh_p[li][static_cast<std::size_t>(j)] = 1.0;
                } else {
                    const double t = std::tanh(z);
                    w.acts[li + 1][static_cast<std::size_t>(j)] = t;
                    w.tanh_p[li][static_cast<std::size_t>(j)] = 1.0 - t * t;
                }
            }
        }
    }
}

// Fills one Jacobian row (length net.param_count(), pre-zeroed) with
// d out[o] / d params using the taped forward state.
inline void jacobian_backward(const Network& net, const double* p, int o, JacobianWorkspace& w,
                              double* row) {
    const KnotVector& kv = net.knots();
    const int k = kv.order;
    const int nb = kv.basis_count();
    const int L = net.layer_count();

    auto& adj = w.adj_a;
    auto& adj_lo = w.adj_b;
    std::fill(adj.begin(), adj.end(), 0.0);
    adj[static_cast<std::size_t>(o)] = 1.0;

    for (int l = L - 1; l >= 0; --l) {
        const auto li = static_cast<std::size_t>(l);
        const int n_in = net.layer_in(l);
        const int n_out = net.layer_out(l);
        std::fill(adj_lo.begin(), adj_lo.begin() + n_in, 0.0);
        if (net.backend() == Backend::Kan) {
            for (int j = 0; j < n_out; ++j) {
                const double a = adj[static_cast<std::size_t>(j)];
                if (a == 0.0) continue;
                for (int i = 0; i < n_in; ++i) {
                    const long off = net.edge_offset(l, j, i);
                    const double* c = p + off;
                    const double ws = net.trainable_scales() ? c[nb + 1] : net.fixed_ws();
                    const BasisWindow& bw = w.wins[li][static_cast<std::size_t>(i)];
                    const int base = bw.first_basis(k);
                    const double aw = a * ws;
                    for (int r = 0; r <= k; ++r)
                        row[off + base + r] = aw * bw.value[static_cast<std::size_t>(r)];
                    const auto e = static_cast<std::size_t>(j * n_in + i);
                    if (net.trainable_scales()) {
                        row[off + nb] = a * w.silu_f[li][static_cast<std::size_t>(i)];
                        row[off + nb + 1] = a * w.spline_v[li][e];
                    }
                    adj_lo[static_cast<std::size_t>(i)] += a * w.dphi[li][e];
                }
            }
        } else {
            for (int j = 0; j < n_out; ++j) {
                const double a = adj[static_cast<std::size_t>(j)];
                if (a == 0.0) continue;
                row[net.mlp_b_offset(l, j)] = a;
                for (int i = 0; i < n_in; ++i) {
                    row[net.mlp_w_offset(l, j, i)] = a * w.acts[li][static_cast<std::size_t>(i)];
                    adj_lo[static_cast<std::size_t>(i)] +=
                        a * p[net.mlp_w_offset(l, j, i)];
                }
            }
            if (l > 0)
                for (int i = 0; i < n_in; ++i)
                    adj_lo[static_cast<std::size_t>(i)] *=
                        w.tanh_p[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(i)];
        }
        std::swap(adj, adj_lo);
    }
}

}  // namespace detail

// Jacobian of network output values with respect to every parameter, one
// row per (point, output) in row-major order. Also hands back the forward
// values when wanted (rows of `values`, one per point).
inline void param_jacobian_into(const Network& net, const ParamVector& p,
                                const Eigen::MatrixXd& points, RowMajorMatrix& J,
                                Eigen::MatrixXd* values, JacobianWorkspace& w) {
    const long n_pts = points.rows();
    const int m = net.out_dim();
    if (points.cols() != net.dim())
        throw invalid_argument("param_jacobian: point dimension mismatch");
    J.setZero(n_pts * m, net.param_count());
    if (values) values->resize(n_pts, m);
    w.prepare(net);
    double x[2] = {0.0, 0.0};
    for (long q = 0; q < n_pts; ++q) {
        for (int c = 0; c < net.dim(); ++c) x[c] = points(q, c);
        detail::jacobian_forward(net, p.data(), x, w);
        if (values)
            for (int o = 0; o < m; ++o)
                (*values)(q, o) = w.acts[static_cast<std::size_t>(net.layer_count())]
                                        [static_cast<std::size_t>(o)];
        for (int o = 0; o < m; ++o)
            detail::jacobian_backward(net, p.data(), o, w, J.row(q * m + o).data());
    }
}

inline RowMajorMatrix param_jacobian(const Network& net, const ParamVector& p,
                                     const Eigen::MatrixXd& points) {
    if (points.rows() == 0)
        throw invalid_argument("param_jacobian: empty collocation set");
    net.check_params(p);
    RowMajorMatrix J;
    JacobianWorkspace w;
    param_jacobian_into(net, p, points, J, nullptr, w);
    return J;
}

}  // namespace evokan
