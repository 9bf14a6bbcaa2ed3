#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "evokan/evolve/engine.hpp"
#include "evokan/problems/allen_cahn.hpp"
#include "evokan/problems/navier_stokes.hpp"

namespace evokan {

using Json = nlohmann::json;

// Fully-resolved run description: problem, ansatz, solver settings, and the
// benchmark counterpart. Parsed from strict JSON (unknown keys rejected)
// over per-problem defaults.
struct RunConfig {
    std::string problem;  // ac1d | ac2d | nse2d
    AllenCahnSpec ac;
    NavierStokesSpec nse;

    // network
    std::string backend = "kan";
    std::vector<int> widths;
    int order = 3;
    int grid = 8;
    double spline_halfwidth = 1.0;  // hidden activations are clamped outside
    std::string embedding = "periodic";
    std::uint64_t seed = 1;
    bool trainable_scales = true;

    EvolutionConfig evo;
    FitConfig fit;
    CollocationSet colloc;

    // benchmark
    int bench_n = 256;
    double bench_dt = 1e-4;
    std::string bench_scheme = "imex";       // imex | sav (allen-cahn only)
    std::string bench_downsample = "spectral";  // spectral | decimate

    int metrics_nx = 0;  // 0: collocation grid
    int metrics_ny = 1;

    std::string output = "runs/out";
    std::vector<double> sweep;  // optional eps/nu sweep

    int dim() const { return problem == "ac1d" ? 1 : 2; }
    bool is_ac() const { return problem == "ac1d" || problem == "ac2d"; }
};

namespace detail {

inline void reject_unknown(const Json& j, const std::vector<std::string>& known,
                           const std::string& scope) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const auto& k : known)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw invalid_argument("config: unknown key \"" + scope + it.key() + "\"");
    }
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

inline Json default_config_json(const std::string& problem) {
    Json j;
    j["problem"] = problem;
    Json net, evo, fit, colloc, bench, metrics;
    net["backend"] = "kan";
    net["order"] = 3;
    net["grid"] = 8;
    net["spline_halfwidth"] = 1.0;
    net["embedding"] = "periodic";
    net["seed"] = 1;
    net["trainable_scales"] = true;
    fit["max_iterations"] = 200;
    fit["rms_tolerance"] = 5e-5;
    fit["lm_init"] = 1e-3;
    fit["lm_up"] = 5.0;
    fit["lm_down"] = 0.2;
    colloc["kind"] = "uniform_grid";
    colloc["seed"] = 0;
    colloc["count"] = 0;
    colloc["resample"] = false;
    evo["lambda"] = 1e-8;
    evo["sav"] = false;
    evo["snapshot_cadence"] = 10;
    evo["blowup_max"] = 10.0;
    metrics["nx"] = 0;
    metrics["ny"] = 1;

    if (problem == "ac1d") {
        j["eps"] = 0.02;
        j["amplitude"] = 0.25;
        j["c0"] = 1.0;
        net["widths"] = std::vector<int>{1, 6, 6, 1};
        colloc["n"] = 256;
        evo["dt"] = 2e-4;
        evo["T"] = 1.0;
        evo["integrator"] = "rk4";
        evo["lambda"] = 1e-8;
        bench["n"] = 16384;
        bench["dt"] = 1e-4;
        bench["scheme"] = "imex";
        bench["downsample"] = "decimate";
    } else if (problem == "ac2d") {
        j["eps"] = 0.05;
        j["alpha"] = 1;
        j["c0"] = 1.0;
        net["widths"] = std::vector<int>{2, 6, 6, 1};
        colloc["n"] = 64;
        evo["dt"] = 5e-4;
        evo["T"] = 0.5;
        evo["integrator"] = "rk4";
        evo["lambda"] = 1e-6;
        evo["snapshot_cadence"] = 50;
        bench["n"] = 1024;
        bench["dt"] = 2.5e-4;
        bench["scheme"] = "imex";
        bench["downsample"] = "decimate";
    } else if (problem == "nse2d") {
        j["nu"] = 0.05;
        j["nse_ic"] = "divergence_free";
        net["widths"] = std::vector<int>{2, 8, 8, 2};
        colloc["n"] = 32;
        evo["dt"] = 2e-3;
        evo["T"] = 0.2;
        evo["integrator"] = "rk4";
        evo["lambda"] = 1e-6;
        bench["n"] = 128;
        bench["dt"] = 2e-4;
        bench["scheme"] = "imex";
        bench["downsample"] = "spectral";
    } else {
        throw invalid_argument("config: problem must be ac1d, ac2d, or nse2d");
    }
    j["network"] = net;
    j["evolution"] = evo;
    j["fit"] = fit;
    j["collocation"] = colloc;
    j["benchmark"] = bench;
    j["metrics"] = metrics;
    j["output"] = "runs/" + problem;
    return j;
}

inline Json merge_config(Json base, const Json& user) {
    for (auto it = user.begin(); it != user.end(); ++it) {
        if (it->is_object() && base.contains(it.key()) && base[it.key()].is_object()) {
            base[it.key()] = merge_config(base[it.key()], *it);
        } else {
            base[it.key()] = *it;
        }
    }
    return base;
}

inline RunConfig parse_config(const Json& user) {
    if (!user.is_object()) throw invalid_argument("config: top level must be an object");
    if (!user.contains("problem")) throw invalid_argument("config: missing \"problem\"");
    const std::string problem = user.at("problem").get<std::string>();
    const Json j = merge_config(default_config_json(problem), user);

    detail::reject_unknown(j, {"problem", "eps", "amplitude", "alpha", "c0", "nu", "nse_ic",
                               "network", "evolution", "fit", "collocation", "benchmark",
                               "metrics", "output", "sweep"},
                           "");
    RunConfig c;
    c.problem = problem;
    if (c.is_ac()) {
        c.ac.dim = c.dim();
        detail::read(j, "eps", c.ac.eps);
        detail::read(j, "amplitude", c.ac.amp);
        detail::read(j, "alpha", c.ac.alpha);
        detail::read(j, "c0", c.ac.c0);
        c.ac.validate();
        if (j.contains("nu") || j.contains("nse_ic"))
            throw invalid_argument("config: nu/nse_ic apply only to nse2d");
    } else {
        detail::read(j, "nu", c.nse.nu);
        std::string ic = "divergence_free";
        detail::read(j, "nse_ic", ic);
        if (ic == "divergence_free") c.nse.ic = NseIc::DivergenceFree;
        else if (ic == "paper_literal") c.nse.ic = NseIc::PaperLiteral;
        else throw invalid_argument("config: nse_ic must be divergence_free or paper_literal");
        c.nse.validate();
        if (j.contains("eps") || j.contains("alpha") || j.contains("amplitude"))
            throw invalid_argument("config: eps/alpha/amplitude apply only to Allen-Cahn");
    }

    const Json& net = j.at("network");
    detail::reject_unknown(net, {"backend", "widths", "order", "grid", "spline_halfwidth",
                                 "embedding", "seed", "trainable_scales"},
                           "network.");
    c.backend = net.at("backend").get<std::string>();
    if (c.backend != "kan" && c.backend != "mlp")
        throw invalid_argument("config: network.backend must be kan or mlp");
    c.widths = net.at("widths").get<std::vector<int>>();
    if (c.widths.empty() || c.widths.front() != c.dim())
        throw invalid_argument("config: network.widths[0] must equal the spatial dimension");
    if (c.widths.back() != (c.problem == "nse2d" ? 2 : 1))
        throw invalid_argument("config: network.widths must end with the component count");
    c.order = net.at("order").get<int>();
    c.grid = net.at("grid").get<int>();
    c.spline_halfwidth = net.at("spline_halfwidth").get<double>();
    if (!(c.spline_halfwidth > 0))
        throw invalid_argument("config: network.spline_halfwidth must be > 0");
    c.embedding = net.at("embedding").get<std::string>();
    if (c.embedding != "periodic" && c.embedding != "identity")
        throw invalid_argument("config: network.embedding must be periodic or identity");
    c.seed = net.at("seed").get<std::uint64_t>();
    c.trainable_scales = net.at("trainable_scales").get<bool>();

    const Json& evo = j.at("evolution");
    detail::reject_unknown(evo, {"dt", "T", "integrator", "lambda", "sav", "snapshot_cadence",
                                 "blowup_max"},
                           "evolution.");
    c.evo.dt = evo.at("dt").get<double>();
    c.evo.T = evo.at("T").get<double>();
    const std::string integ = evo.at("integrator").get<std::string>();
    if (integ == "euler") c.evo.integrator = Integrator::Euler;
    else if (integ == "rk4") c.evo.integrator = Integrator::Rk4;
    else throw invalid_argument("config: evolution.integrator must be euler or rk4");
    c.evo.lambda = evo.at("lambda").get<double>();
    c.evo.sav = evo.at("sav").get<bool>();
    c.evo.snapshot_cadence = evo.at("snapshot_cadence").get<int>();
    c.evo.blowup_max = evo.at("blowup_max").get<double>();
    if (!(c.evo.dt > 0)) throw invalid_argument("config: evolution.dt must be > 0");
    if (!(c.evo.T >= c.evo.dt))
        throw invalid_argument("config: evolution.T must be >= evolution.dt");
    c.evo.validate();
    if (c.evo.sav && !c.is_ac())
        throw invalid_argument("config: evolution.sav applies only to gradient flows");

    const Json& fit = j.at("fit");
    detail::reject_unknown(fit, {"max_iterations", "rms_tolerance", "lm_init", "lm_up", "lm_down"},
                           "fit.");
    c.fit.max_iterations = fit.at("max_iterations").get<int>();
    c.fit.rms_tolerance = fit.at("rms_tolerance").get<double>();
    c.fit.lm_init = fit.at("lm_init").get<double>();
    c.fit.lm_up = fit.at("lm_up").get<double>();
    c.fit.lm_down = fit.at("lm_down").get<double>();
    c.fit.seed = c.seed;
    c.fit.validate();

    const Json& colloc = j.at("collocation");
    detail::reject_unknown(colloc, {"kind", "n", "count", "seed", "resample"}, "collocation.");
    const std::string kind = colloc.at("kind").get<std::string>();
    if (kind == "uniform_grid") c.colloc.kind = CollocKind::UniformGrid;
    else if (kind == "uniform_random") c.colloc.kind = CollocKind::UniformRandom;
    else throw invalid_argument("config: collocation.kind must be uniform_grid or uniform_random");
    c.colloc.dim = c.dim();
    c.colloc.n = colloc.at("n").get<int>();
    c.colloc.count = colloc.at("count").get<long>();
    c.colloc.seed = colloc.at("seed").get<std::uint64_t>();
    c.colloc.resample_per_step = colloc.at("resample").get<bool>();
    c.colloc.validate();
    if (c.problem == "nse2d") {
        if (c.colloc.kind != CollocKind::UniformGrid || (c.colloc.n & (c.colloc.n - 1)) != 0)
            throw invalid_argument(
                "config: nse2d needs uniform power-of-two collocation (pressure solve)");
    }

    const Json& bench = j.at("benchmark");
    detail::reject_unknown(bench, {"n", "dt", "scheme", "downsample"}, "benchmark.");
    c.bench_n = bench.at("n").get<int>();
    c.bench_dt = bench.at("dt").get<double>();
    c.bench_scheme = bench.at("scheme").get<std::string>();
    if (c.bench_scheme != "imex" && c.bench_scheme != "sav")
        throw invalid_argument("config: benchmark.scheme must be imex or sav");
    if (c.bench_scheme == "sav" && !c.is_ac())
        throw invalid_argument("config: benchmark.scheme sav applies only to Allen-Cahn");
    c.bench_downsample = bench.at("downsample").get<std::string>();
    if (c.bench_downsample != "spectral" && c.bench_downsample != "decimate")
        throw invalid_argument("config: benchmark.downsample must be spectral or decimate");
    if (!(c.bench_dt > 0)) throw invalid_argument("config: benchmark.dt must be > 0");
    if (c.bench_n < 16 || (c.bench_n & (c.bench_n - 1)) != 0)
        throw invalid_argument("config: benchmark.n must be a power of two >= 16");

    const Json& metrics = j.at("metrics");
    detail::reject_unknown(metrics, {"nx", "ny"}, "metrics.");
    c.metrics_nx = metrics.at("nx").get<int>();
    c.metrics_ny = metrics.at("ny").get<int>();

    c.output = j.at("output").get<std::string>();
    if (j.contains("sweep")) {
        c.sweep = j.at("sweep").get<std::vector<double>>();
        for (double v : c.sweep)
            if (!(v > 0)) throw invalid_argument("config: sweep values must be positive");
    }
    return c;
}

inline Json normalized_json(const std::string& problem, const Json& user) {
    Json j = merge_config(default_config_json(problem), user);
    return j;
}

// Builds the network described by the config.
inline Network build_network(const RunConfig& c) {
    const Embedding emb =
        c.embedding == "periodic" ? Embedding::PeriodicSinCos : Embedding::Identity;
    Network net = c.backend == "kan"
                      ? Network::kan(c.widths, c.order, c.grid, emb, 1.0, c.spline_halfwidth)
                      : Network::mlp(c.widths, emb);
    if (!c.trainable_scales) net.set_trainable_scales(false);
    return net;
}

inline std::shared_ptr<ResidualOperator> build_residual_op(const RunConfig& c) {
    if (c.is_ac()) return std::make_shared<AcResidualOp>(c.ac);
    return std::make_shared<NseResidualOp>(c.nse, c.colloc.n);
}

inline TargetFn build_ic(const RunConfig& c) {
    if (c.is_ac()) {
        auto f = ac_initial_condition(c.ac);
        return [f](double x, double y, double* out) { out[0] = f(x, y); };
    }
    auto f = nse_initial_condition(c.nse);
    return [f](double x, double y, double* out) { f(x, y, out[0], out[1]); };
}

}  // namespace evokan
