#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "evokan/edge.hpp"
#include "evokan/jet.hpp"
#include "evokan/knots.hpp"

namespace evokan {

enum class Backend { Kan, Mlp };
enum class Embedding { Identity, PeriodicSinCos };

using ParamVector = Eigen::VectorXd;

// Solution ansatz: a KAN (spline edges) or an MLP (tanh, linear output
// layer), behind a shared periodic/identity input embedding. The network
// object holds structure only; parameters always travel as a flat vector
// in a fixed layout, so the evolution can treat them as an ODE state.
class Network {
public:
    static Network kan(std::vector<int> widths, int order, int grid,
                       Embedding emb = Embedding::PeriodicSinCos, double half_period = 1.0,
                       double spline_halfwidth = 1.0) {
        Network n;
        n.backend_ = Backend::Kan;
        n.widths_ = std::move(widths);
        n.embedding_ = emb;
        n.half_period_ = half_period;
        n.knots_ = make_knots(-spline_halfwidth, spline_halfwidth, grid, order);
        n.validate_widths();
        n.build_layout();
        return n;
    }

    static Network mlp(std::vector<int> widths,
                       Embedding emb = Embedding::PeriodicSinCos, double half_period = 1.0) {
        Network n;
        n.backend_ = Backend::Mlp;
        n.widths_ = std::move(widths);
        n.embedding_ = emb;
        n.half_period_ = half_period;
        n.validate_widths();
        n.build_layout();
        return n;
    }

    Backend backend() const { return backend_; }
    Embedding embedding() const { return embedding_; }
    double half_period() const { return half_period_; }
    const std::vector<int>& widths() const { return widths_; }
    const KnotVector& knots() const { return knots_; }
    int dim() const { return widths_.front(); }
    int out_dim() const { return widths_.back(); }
    int layer_count() const { return static_cast<int>(widths_.size()) - 1; }
    int embed_dim() const {
        return embedding_ == Embedding::PeriodicSinCos ? 2 * dim() : dim();
    }
    int layer_in(int l) const { return l == 0 ? embed_dim() : widths_[static_cast<std::size_t>(l)]; }
    int layer_out(int l) const { return widths_[static_cast<std::size_t>(l) + 1]; }
    int max_width() const {
        int w = embed_dim();
        for (int l = 0; l < layer_count(); ++l) w = std::max(w, layer_out(l));
        return w;
    }

    long param_count() const { return param_count_; }
    long layer_base(int l) const { return layer_base_[static_cast<std::size_t>(l)]; }

    // Scales w_b, w_s can be frozen out of the parameter vector, leaving a
    // model that is exactly linear in the spline coefficients.
    Network& set_trainable_scales(bool on, double fixed_wb = 0.0, double fixed_ws = 1.0) {
        trainable_scales_ = on;
        fixed_wb_ = fixed_wb;
        fixed_ws_ = fixed_ws;
        build_layout();
        return *this;
    }
    bool trainable_scales() const { return trainable_scales_; }
    double fixed_wb() const { return fixed_wb_; }
    double fixed_ws() const { return fixed_ws_; }

    Network& set_cross_jets(bool on) {
        cross_jets_ = on;
        return *this;
    }
    bool cross_jets() const { return cross_jets_; }

    // KAN layout: per layer, edges in (out, in) row-major order, each edge
    // holding [c_0 .. c_{nb-1}, w_b, w_s] (scales only when trainable).
    int edge_stride() const {
        return knots_.basis_count() + (trainable_scales_ ? 2 : 0);
    }
    long edge_offset(int l, int j, int i) const {
        return layer_base(l) + static_cast<long>(j * layer_in(l) + i) * edge_stride();
    }
    // MLP layout: per layer, W row-major then b.
    long mlp_w_offset(int l, int j, int i) const {
        return layer_base(l) + static_cast<long>(j) * layer_in(l) + i;
    }
    long mlp_b_offset(int l, int j) const {
        return layer_base(l) + static_cast<long>(layer_out(l)) * layer_in(l) + j;
    }

    ParamVector init_params(std::uint64_t seed) const {
        ParamVector p = ParamVector::Zero(param_count_);
        Rng rng(seed);
        if (backend_ == Backend::Kan) {
            const int nb = knots_.basis_count();
            const double scale = 0.1 / std::sqrt(static_cast<double>(nb));
            for (int l = 0; l < layer_count(); ++l)
                for (int j = 0; j < layer_out(l); ++j)
                    for (int i = 0; i < layer_in(l); ++i) {
                        const long off = edge_offset(l, j, i);
                        for (int r = 0; r < nb; ++r) p[off + r] = rng.uniform(-scale, scale);
                        if (trainable_scales_) {
                            p[off + nb] = 1.0;      // w_b
                            p[off + nb + 1] = 1.0;  // w_s
                        }
                    }
        } else {
            for (int l = 0; l < layer_count(); ++l) {
                const double a = std::sqrt(6.0 / (layer_in(l) + layer_out(l)));
                for (int j = 0; j < layer_out(l); ++j)
                    for (int i = 0; i < layer_in(l); ++i)
                        p[mlp_w_offset(l, j, i)] = rng.uniform(-a, a);
                // biases stay zero
            }
        }
        return p;
    }

    void check_params(const ParamVector& p) const {
        if (p.size() != param_count_)
            throw invalid_argument("network: parameter vector length " + std::to_string(p.size()) +
                                   " does not match layout size " + std::to_string(param_count_));
    }

private:
    void validate_widths() {
        if (widths_.size() < 2) throw invalid_argument("network: need at least one layer");
        for (int w : widths_)
            if (w < 1) throw invalid_argument("network: layer widths must be positive");
        if (dim() > 2) throw invalid_argument("network: spatial dimension must be 1 or 2");
    }

    void build_layout() {
        layer_base_.assign(static_cast<std::size_t>(layer_count()), 0);
        long off = 0;
        for (int l = 0; l < layer_count(); ++l) {
            layer_base_[static_cast<std::size_t>(l)] = off;
            if (backend_ == Backend::Kan)
                off += static_cast<long>(layer_out(l)) * layer_in(l) * edge_stride();
            else
                off += static_cast<long>(layer_out(l)) * layer_in(l) + layer_out(l);
        }
        param_count_ = off;
    }

    Backend backend_ = Backend::Kan;
    Embedding embedding_ = Embedding::PeriodicSinCos;
    double half_period_ = 1.0;
    std::vector<int> widths_;
    KnotVector knots_ = make_knots(-1.0, 1.0, 2, 1);
    bool trainable_scales_ = true;
    double fixed_wb_ = 0.0;
    double fixed_ws_ = 1.0;
    bool cross_jets_ = false;
    long param_count_ = 0;
    std::vector<long> layer_base_;
};

namespace detail {

struct EvalScratch {
    std::vector<double> a, b;          // value buffers
    std::vector<JetValue> ja, jb;      // jet buffers
    std::vector<BasisWindow> windows;  // per input of current layer
    std::vector<double> silu_f, silu_fp, silu_fpp;

    void prepare(const Network& net) {
        const auto w = static_cast<std::size_t>(net.max_width());
        a.resize(w);
        b.resize(w);
        ja.resize(w);
        jb.resize(w);
        windows.resize(w);
        silu_f.resize(w);
        silu_fp.resize(w);
        silu_fpp.resize(w);
    }
};

inline EvalScratch& tls_scratch() {
    thread_local EvalScratch s;
    return s;
}

// Shared evaluation engine. The value arithmetic is the same source for
// both instantiations, so the jet value slot reproduces plain forward
// bit-for-bit.
template <bool Jets>
inline void eval_network(const Network& net, const double* p, const double* x, void* out_ptr,
                         EvalScratch& s) {
    const int d = net.dim();
    const bool cross = net.cross_jets();
    const int ed = net.embed_dim();

    // embedding
    if (net.embedding() == Embedding::PeriodicSinCos) {
        const double w = kPi / net.half_period();
        for (int c = 0; c < d; ++c) {
            const double sv = std::sin(w * x[c]);
            const double cv = std::cos(w * x[c]);
            s.a[static_cast<std::size_t>(2 * c)] = sv;
            s.a[static_cast<std::size_t>(2 * c + 1)] = cv;
            if constexpr (Jets) {
                JetValue js = JetValue::constant(sv, d, cross);
                js.dx[static_cast<std::size_t>(c)] = w * cv;
                js.dxx[static_cast<std::size_t>(c)] = -w * w * sv;
                JetValue jc = JetValue::constant(cv, d, cross);
                jc.dx[static_cast<std::size_t>(c)] = -w * sv;
                jc.dxx[static_cast<std::size_t>(c)] = -w * w * cv;
                s.ja[static_cast<std::size_t>(2 * c)] = js;
                s.ja[static_cast<std::size_t>(2 * c + 1)] = jc;
            }
        }
    } else {
        for (int c = 0; c < d; ++c) {
            s.a[static_cast<std::size_t>(c)] = x[c];
            if constexpr (Jets) s.ja[static_cast<std::size_t>(c)] = JetValue::seed(x[c], c, d, cross);
        }
    }

    const KnotVector& kv = net.knots();
    const int k = kv.order;
    const int nb = kv.basis_count();

    for (int l = 0; l < net.layer_count(); ++l) {
        const int n_in = net.layer_in(l);
        const int n_out = net.layer_out(l);
        if (net.backend() == Backend::Kan) {
            for (int i = 0; i < n_in; ++i) {
                const double xi = s.a[static_cast<std::size_t>(i)];
                basis_window<Jets>(kv, xi, s.windows[static_cast<std::size_t>(i)]);
                if constexpr (Jets) {
                    silu_jet(xi, s.silu_f[static_cast<std::size_t>(i)],
                             s.silu_fp[static_cast<std::size_t>(i)],
                             s.silu_fpp[static_cast<std::size_t>(i)]);
                } else {
                    s.silu_f[static_cast<std::size_t>(i)] = silu(xi);
                }
            }
            for (int j = 0; j < n_out; ++j) {
                double acc_v = 0.0;
                JetValue acc_j;
                if constexpr (Jets) acc_j = JetValue::constant(0.0, d, cross);
                for (int i = 0; i < n_in; ++i) {
                    const long off = net.edge_offset(l, j, i);
                    const double* c = p + off;
                    const double wb = net.trainable_scales() ? c[nb] : net.fixed_wb();
                    const double ws = net.trainable_scales() ? c[nb + 1] : net.fixed_ws();
                    const BasisWindow& w = s.windows[static_cast<std::size_t>(i)];
                    const int base = w.first_basis(k);
                    double sv = 0.0;
                    for (int r = 0; r <= k; ++r)
                        sv += c[base + r] * w.value[static_cast<std::size_t>(r)];
                    const double f = wb * s.silu_f[static_cast<std::size_t>(i)] + ws * sv;
                    acc_v += f;
                    if constexpr (Jets) {
                        const double xi = s.a[static_cast<std::size_t>(i)];
                        const bool inside = (xi >= kv.lo && xi <= kv.hi);
                        double sd1 = 0.0, sd2 = 0.0;
                        if (inside) {
                            for (int r = 0; r <= k; ++r) {
                                sd1 += c[base + r] * w.d1[static_cast<std::size_t>(r)];
                                sd2 += c[base + r] * w.d2[static_cast<std::size_t>(r)];
                            }
                        }
                        const double fp = wb * s.silu_fp[static_cast<std::size_t>(i)] + ws * sd1;
                        const double fpp = wb * s.silu_fpp[static_cast<std::size_t>(i)] + ws * sd2;
                        JetValue e = compose_univariate(s.ja[static_cast<std::size_t>(i)], f, fp, fpp);
                        acc_j = acc_j + e;
                        acc_j.v = acc_v;  // keep the value slot on the shared arithmetic
                    }
                }
                s.b[static_cast<std::size_t>(j)] = acc_v;
                if constexpr (Jets) s.jb[static_cast<std::size_t>(j)] = acc_j;
            }
        } else {
            const bool last = (l == net.layer_count() - 1);
            for (int j = 0; j < n_out; ++j) {
                double z = p[net.mlp_b_offset(l, j)];
                JetValue zj;
                if constexpr (Jets) zj = JetValue::constant(z, d, cross);
                for (int i = 0; i < n_in; ++i) {
                    const double wji = p[net.mlp_w_offset(l, j, i)];
                    z += wji * s.a[static_cast<std::size_t>(i)];
                    if constexpr (Jets) {
                        const JetValue& u = s.ja[static_cast<std::size_t>(i)];
                        zj.v = z;
                        for (int c = 0; c < d; ++c) {
                            zj.dx[static_cast<std::size_t>(c)] += wji * u.dx[static_cast<std::size_t>(c)];
                            zj.dxx[static_cast<std::size_t>(c)] += wji * u.dxx[static_cast<std::size_t>(c)];
                        }
                        if (cross) zj.dxy += wji * u.dxy;
                    }
                }
                if (last) {
                    s.b[static_cast<std::size_t>(j)] = z;
                    if constexpr (Jets) s.jb[static_cast<std::size_t>(j)] = zj;
                } else {
                    const double t = std::tanh(z);
                    s.b[static_cast<std::size_t>(j)] = t;
                    if constexpr (Jets) {
                        const double tp = 1.0 - t * t;
                        s.jb[static_cast<std::size_t>(j)] = compose_univariate(zj, t, tp, -2.0 * t * tp);
                    }
                }
            }
        }
        std::swap(s.a, s.b);
        if constexpr (Jets) std::swap(s.ja, s.jb);
    }

    const int m = net.out_dim();
    if constexpr (Jets) {
        auto* out = static_cast<JetValue*>(out_ptr);
        for (int j = 0; j < m; ++j) out[j] = s.ja[static_cast<std::size_t>(j)];
    } else {
        auto* out = static_cast<double*>(out_ptr);
        for (int j = 0; j < m; ++j) out[j] = s.a[static_cast<std::size_t>(j)];
    }
}

}  // namespace detail

inline void network_forward(const Network& net, const ParamVector& p, const double* x,
                            double* out) {
    net.check_params(p);
    auto& s = detail::tls_scratch();
    s.prepare(net);
    detail::eval_network<false>(net, p.data(), x, out, s);
}

inline void network_forward_jet(const Network& net, const ParamVector& p, const double* x,
                                JetValue* out) {
    net.check_params(p);
    auto& s = detail::tls_scratch();
    s.prepare(net);
    detail::eval_network<true>(net, p.data(), x, out, s);
}

inline Eigen::VectorXd network_forward(const Network& net, const ParamVector& p,
                                       const Eigen::VectorXd& x) {
    if (x.size() != net.dim())
        throw invalid_argument("network_forward: point dimension mismatch");
    Eigen::VectorXd out(net.out_dim());
    network_forward(net, p, x.data(), out.data());
    return out;
}

}  // namespace evokan
