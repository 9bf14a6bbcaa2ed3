#include <cmath>

#include "doctest.h"
#include "evokan/evolve/engine.hpp"

using namespace evokan;

namespace {

struct HeatOp final : ResidualOperator {
    int components() const override { return 1; }
    ResidualInfo eval(const Network& net, const ParamVector& p, const Eigen::MatrixXd& pts,
                      const SavContext&, Eigen::VectorXd& rows, Eigen::VectorXd& values) override {
        rows.resize(pts.rows());
        values.resize(pts.rows());
        for (long q = 0; q < pts.rows(); ++q) {
            double x[2] = {pts(q, 0), 0.0};
            JetValue jet;
            network_forward_jet(net, p, x, &jet);
            rows[q] = jet.dxx[0];
            values[q] = jet.v;
        }
        return {};
    }
};

// Textbook Cox-de Boor recursion on an explicit knot array, written
// independently of the library's windowed evaluation. Used as the Galerkin
// oracle's basis.
double cdb(const std::vector<double>& t, int i, int k, double x) {
    if (k == 0) return (x >= t[static_cast<std::size_t>(i)] && x < t[static_cast<std::size_t>(i + 1)]) ? 1.0 : 0.0;
    double a = 0.0, b = 0.0;
    const double d1 = t[static_cast<std::size_t>(i + k)] - t[static_cast<std::size_t>(i)];
    const double d2 = t[static_cast<std::size_t>(i + k + 1)] - t[static_cast<std::size_t>(i + 1)];
    if (d1 > 0) a = (x - t[static_cast<std::size_t>(i)]) / d1 * cdb(t, i, k - 1, x);
    if (d2 > 0) b = (t[static_cast<std::size_t>(i + k + 1)] - x) / d2 * cdb(t, i + 1, k - 1, x);
    return a + b;
}

double cdb_d1(const std::vector<double>& t, int i, int k, double x) {
    const double d1 = t[static_cast<std::size_t>(i + k)] - t[static_cast<std::size_t>(i)];
    const double d2 = t[static_cast<std::size_t>(i + k + 1)] - t[static_cast<std::size_t>(i + 1)];
    double r = 0.0;
    if (d1 > 0) r += cdb(t, i, k - 1, x) / d1;
    if (d2 > 0) r -= cdb(t, i + 1, k - 1, x) / d2;
    return k * r;
}

double cdb_d2(const std::vector<double>& t, int i, int k, double x) {
    const double d1 = t[static_cast<std::size_t>(i + k)] - t[static_cast<std::size_t>(i)];
    const double d2 = t[static_cast<std::size_t>(i + k + 1)] - t[static_cast<std::size_t>(i + 1)];
    double r = 0.0;
    if (d1 > 0) r += cdb_d1(t, i, k - 1, x) / d1;
    if (d2 > 0) r -= cdb_d1(t, i + 1, k - 1, x) / d2;
    return k * r;
}

}  // namespace

TEST_CASE("rk4 combinator reproduces the exponential on F(K) = -K") {
    ParamVector k(3);
    k << 1.0, -2.0, 0.5;
    const ParamVector k0 = k;
    double r = 0.0;
    for (int s = 0; s < 10; ++s)
        rk4_combined(k, r, 0.1, [](const ParamVector& kk, double) {
            return std::pair<Eigen::VectorXd, double>(-kk, 0.0);
        });
    // classical RK4 one-step factor differs from e^{-dt} by dt^5/120, so
    // ten steps of dt = 0.1 land within ~4e-7 of e^{-1}
    const double decay = std::exp(-1.0);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(k[i] - k0[i] * decay) <= 5e-7 * std::abs(k0[i]));
}

TEST_CASE("zero-residual states are exactly stationary") {
    Network net = Network::kan({1, 3, 1}, 3, 5);
    const ParamVector p = ParamVector::Zero(net.param_count());  // u == 0 identically
    AllenCahnSpec spec;
    spec.dim = 1;
    spec.eps = 0.1;
    AcResidualOp op(spec);
    CollocationSet colloc;
    colloc.n = 64;
    EvolutionConfig cfg;
    cfg.dt = 1e-2;
    cfg.T = 0.1;
    cfg.integrator = Integrator::Euler;
    Evolver evolver(net, op, colloc, cfg);
    EvolutionState state;
    state.params = p;
    const EvolutionState next = evolver.step(state);
    CHECK((next.params - p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a network fitted exactly to +1 stays put") {
    // Partition of unity: all spline coefficients 1 with w_s = 1, w_b = 0
    // represents u == 1 exactly.
    Network net = Network::kan({1, 1}, 3, 8, Embedding::Identity);
    net.set_trainable_scales(false, 0.0, 1.0);
    ParamVector p = ParamVector::Ones(net.param_count());
    AllenCahnSpec spec;
    spec.dim = 1;
    spec.eps = 0.1;
    AcResidualOp op(spec);
    CollocationSet colloc;
    colloc.n = 64;
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.T = 1e-3;
    cfg.integrator = Integrator::Euler;
    cfg.lambda = 1e-8;
    Evolver evolver(net, op, colloc, cfg);
    EvolutionState state;
    state.params = p;
    const EvolutionState next = evolver.step(state);
    CHECK((next.params - p).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("one Euler step equals the dense Galerkin step for a linear model") {
    // u(x) = sum_i c_i B_i(x); heat equation u_t = u_xx. The Galerkin ODE
    // c' = (Phi^T Phi)^{-1} Phi^T Phi'' c is built from the independent
    // recursion above and compared against evolve_step.
    const int G = 8, k = 3;
    Network net = Network::kan({1, 1}, k, G, Embedding::Identity);
    net.set_trainable_scales(false, 0.0, 1.0);
    const int nb = net.knots().basis_count();
    REQUIRE(nb <= 20);
    REQUIRE(net.param_count() == nb);

    Rng rng(21);
    ParamVector c(nb);
    for (int i = 0; i < nb; ++i) c[i] = rng.uniform(-1, 1);

    const int npts = 64;
    CollocationSet colloc;
    colloc.n = npts;
    const Eigen::MatrixXd pts = colloc.points();

    // oracle matrices from the textbook recursion
    const std::vector<double>& knots = net.knots().knots;
    Eigen::MatrixXd Phi(npts, nb), Phi2(npts, nb);
    for (int q = 0; q < npts; ++q)
        for (int i = 0; i < nb; ++i) {
            Phi(q, i) = cdb(knots, i, k, pts(q, 0));
            Phi2(q, i) = cdb_d2(knots, i, k, pts(q, 0));
        }
    const Eigen::VectorXd cdot = (Phi.transpose() * Phi).ldlt().solve(Phi.transpose() * Phi2 * c);
    const double dt = 1e-3;
    const Eigen::VectorXd c_oracle = c + dt * cdot;

    HeatOp op;
    EvolutionConfig cfg;
    cfg.dt = dt;
    cfg.T = dt;
    cfg.integrator = Integrator::Euler;
    cfg.lambda = 0.0;
    cfg.blowup_max = 100.0;
    Evolver evolver(net, op, colloc, cfg);
    EvolutionState state;
    state.params = c;
    const EvolutionState next = evolver.step(state);
    CHECK((next.params - c_oracle).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("blow-up guard trips on oversized fields") {
    Network net = Network::kan({1, 1}, 3, 5, Embedding::Identity);
    net.set_trainable_scales(false, 0.0, 1.0);
    ParamVector p = ParamVector::Ones(net.param_count()) * 50.0;  // u == 50
    AllenCahnSpec spec;
    spec.dim = 1;
    spec.eps = 0.1;
    AcResidualOp op(spec);
    CollocationSet colloc;
    colloc.n = 32;
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.T = 1e-3;
    Evolver evolver(net, op, colloc, cfg);
    EvolutionState state;
    state.params = p;
    CHECK_THROWS_AS(evolver.step(state), numerical_error);
}

TEST_CASE("run_evolution produces the expected snapshot count and stays sane") {
    AllenCahnSpec spec;
    spec.dim = 1;
    spec.eps = 0.25;
    spec.amp = 0.25;
    RunSetup setup{
        Network::kan({1, 4, 4, 1}, 3, 5),
        std::make_shared<AcResidualOp>(spec),
        [&spec](double x, double, double* out) { out[0] = spec.amp * std::sin(kPi * x); },
        CollocationSet{},
        EvolutionConfig{},
        FitConfig{},
    };
    setup.colloc.n = 64;
    setup.evo.dt = 1e-3;
    setup.evo.T = 1e-3;
    setup.evo.snapshot_cadence = 1;
    setup.evo.integrator = Integrator::Euler;
    setup.fit.max_iterations = 60;
    setup.fit.rms_tolerance = 1e-5;
    const RunResult res = run_evolution(setup);
    CHECK(res.completed);
    CHECK(res.snapshots.size() == 2);  // t = 0 and t = dt
    CHECK(res.snapshots.front().time == 0.0);
    CHECK(res.snapshots.back().time == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(res.diagnostics.size() == 1);
}

TEST_CASE("sav evolution dissipates the modified energy on a resolved run") {
    AllenCahnSpec spec;
    spec.dim = 1;
    spec.eps = 0.25;
    spec.amp = 0.5;
    RunSetup setup{
        Network::kan({1, 6, 6, 1}, 3, 6),
        std::make_shared<AcResidualOp>(spec),
        [&spec](double x, double, double* out) { out[0] = spec.amp * std::sin(kPi * x); },
        CollocationSet{},
        EvolutionConfig{},
        FitConfig{},
    };
    setup.colloc.n = 64;
    setup.evo.dt = 1e-3;
    setup.evo.T = 0.05;
    setup.evo.sav = true;
    setup.evo.integrator = Integrator::Rk4;
    setup.evo.snapshot_cadence = 5;
    setup.fit.max_iterations = 80;
    setup.fit.rms_tolerance = 1e-6;
    const RunResult res = run_evolution(setup);
    REQUIRE(res.completed);
    REQUIRE(res.diagnostics.size() >= 5);
    for (std::size_t i = 1; i < res.diagnostics.size(); ++i) {
        const double prev = res.diagnostics[i - 1].modified_energy;
        const double cur = res.diagnostics[i].modified_energy;
        CHECK(cur <= prev + 1e-3 * std::max(1.0, std::abs(prev)));
    }
    // r stays consistent with sqrt(E1) on this smooth resolved run
    CHECK(res.final_r > 0.0);
}

TEST_CASE("evolution is deterministic") {
    auto once = [] {
        AllenCahnSpec spec;
        spec.dim = 1;
        spec.eps = 0.25;
        RunSetup setup{
            Network::kan({1, 4, 4, 1}, 3, 5),
            std::make_shared<AcResidualOp>(spec),
            [](double x, double, double* out) { out[0] = 0.25 * std::sin(kPi * x); },
            CollocationSet{},
            EvolutionConfig{},
            FitConfig{},
        };
        setup.colloc.n = 64;
        setup.evo.dt = 1e-3;
        setup.evo.T = 0.01;
        setup.evo.integrator = Integrator::Rk4;
        setup.fit.max_iterations = 40;
        return run_evolution(setup);
    };
    const RunResult a = once();
    const RunResult b = once();
    REQUIRE(a.completed);
    REQUIRE(b.completed);
    CHECK((a.final_params - b.final_params).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(a.diagnostics.size() == b.diagnostics.size());
    for (std::size_t i = 0; i < a.diagnostics.size(); ++i) {
        CHECK(a.diagnostics[i].residual_norm == b.diagnostics[i].residual_norm);
        CHECK(a.diagnostics[i].gamma_norm == b.diagnostics[i].gamma_norm);
    }
}

TEST_CASE("random collocation resampling is seeded and deterministic") {
    CollocationSet c;
    c.kind = CollocKind::UniformRandom;
    c.count = 50;
    c.seed = 9;
    c.resample_per_step = true;
    const Eigen::MatrixXd p0 = c.points(0);
    const Eigen::MatrixXd p1 = c.points(1);
    CHECK((c.points(0) - p0).cwiseAbs().maxCoeff() == 0.0);
    CHECK((p0 - p1).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("sav mode rejects non-gradient-flow problems and random grids") {
    Network net = Network::kan({1, 3, 1}, 3, 5);
    HeatOp heat;
    CollocationSet colloc;
    colloc.n = 32;
    EvolutionConfig cfg;
    cfg.sav = true;
    CHECK_THROWS_AS(Evolver(net, heat, colloc, cfg), invalid_argument);

    AllenCahnSpec spec;
    spec.dim = 1;
    AcResidualOp ac(spec);
    CollocationSet random;
    random.kind = CollocKind::UniformRandom;
    random.count = 64;
    CHECK_THROWS_AS(Evolver(net, ac, random, cfg), invalid_argument);
}

TEST_CASE("evolution config validation") {
    EvolutionConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), invalid_argument);
    cfg = EvolutionConfig{};
    cfg.T = 1e-4;
    cfg.dt = 1e-3;
    CHECK_THROWS_AS(cfg.validate(), invalid_argument);
}
