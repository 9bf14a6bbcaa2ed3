// evokan: solve time-dependent PDEs by evolving a Kolmogorov-Arnold (or MLP)
// network through a per-step least-squares projection of the residual, with
// pseudo-spectral reference solvers and comparison tooling.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "evokan/bench/driver.hpp"
#include "evokan/evolve/engine.hpp"
#include "evokan/io/csv.hpp"
#include "evokan/io/manifest.hpp"
#include "evokan/io/pgm.hpp"
#include "evokan/metrics.hpp"
#include "evokan/runconfig.hpp"
#include "evokan/serialize.hpp"

namespace fs = std::filesystem;
using namespace evokan;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

bool g_quiet = false;

void say(const std::string& msg) {
    if (!g_quiet) std::cout << msg << "\n";
}

// Accepts either a raw config or a manifest produced by a previous run.
Json load_config_json(const std::string& path) {
    Json j = load_json_file(path);
    if (j.contains("command") && j.contains("config")) return j.at("config");
    return j;
}

Json apply_overrides(Json user, const std::string& out_override, long seed_override) {
    if (!out_override.empty()) user["output"] = out_override;
    if (seed_override >= 0) {
        if (!user.contains("network")) user["network"] = Json::object();
        user["network"]["seed"] = static_cast<std::uint64_t>(seed_override);
    }
    return user;
}

std::string sweep_dir(const RunConfig& cfg, double value) {
    const char* tag = cfg.is_ac() ? "eps_" : "nu_";
    return cfg.output + "/" + tag + format_double(value);
}

Json with_sweep_value(Json user, const RunConfig& cfg, double value, const std::string& dir) {
    user.erase("sweep");
    user[cfg.is_ac() ? "eps" : "nu"] = value;
    user["output"] = dir;
    return user;
}

void write_snapshots(const std::string& dir, const std::vector<FieldSnapshot>& snaps) {
    fs::create_directories(dir);
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "snap_%06zu.evks", i);
        save_snapshot(dir + "/" + name, snaps[i]);
    }
}

// Accepts a run directory or the snapshots directory itself.
std::vector<FieldSnapshot> read_snapshots(const std::string& run_dir) {
    std::string dir = run_dir + "/snapshots";
    if (!fs::is_directory(dir)) dir = run_dir;
    std::vector<std::string> files;
    if (!fs::is_directory(dir)) throw io_error(dir + ": no snapshot directory");
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".evks") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    std::vector<FieldSnapshot> out;
    out.reserve(files.size());
    for (const auto& f : files) out.push_back(load_snapshot(f));
    return out;
}

void write_diagnostics(const std::string& path, const std::vector<DiagRow>& rows) {
    CsvWriter csv(path);
    csv.header({"step", "t", "residual_norm", "gamma_norm", "energy", "modified_energy"});
    for (const auto& r : rows)
        csv.row({static_cast<double>(r.step), r.t, r.residual_norm, r.gamma_norm, r.energy,
                 r.modified_energy});
}

void write_fit_log(const std::string& path, const FitReport& rep) {
    CsvWriter csv(path);
    csv.header({"iteration", "rms"});
    for (std::size_t i = 0; i < rep.rms_history.size(); ++i)
        csv.row({static_cast<double>(i), rep.rms_history[i]});
}

void write_energy_trace(const std::string& path, const RunConfig& cfg,
                        const std::vector<FieldSnapshot>& snaps) {
    CsvWriter csv(path);
    if (cfg.is_ac()) {
        csv.header({"t", "energy", "e1", "increased"});
        auto trace = energy_trace(snaps, [&](const FieldSnapshot& s) {
            return ac_energy(cfg.ac, s);
        });
        for (const auto& p : trace)
            csv.row({p.time, p.total, p.nonlinear, p.increased ? 1.0 : 0.0});
    } else {
        csv.header({"t", "kinetic_energy", "enstrophy"});
        for (const auto& s : snaps) {
            double ke = 0.0;
            for (double v : s.values) ke += v * v;
            ke = 0.5 * ke * s.cell_volume();
            const FieldSnapshot w = vorticity(s);
            double en = 0.0;
            for (double v : w.values) en += v * v;
            en = 0.5 * en * s.cell_volume();
            csv.row({s.time, ke, en});
        }
    }
}

RunSetup make_setup(const RunConfig& cfg) {
    RunSetup setup{build_network(cfg), build_residual_op(cfg), build_ic(cfg), cfg.colloc,
                   cfg.evo,            cfg.fit};
    setup.metrics_nx = cfg.metrics_nx;
    setup.metrics_ny = cfg.metrics_ny;
    return setup;
}

int cmd_fit_ic(const Json& user) {
    const RunConfig cfg = parse_config(user);
    fs::create_directories(cfg.output);
    Network net = build_network(cfg);
    ParamVector params = net.init_params(cfg.fit.seed);
    const FitReport rep =
        fit_initial(net, build_ic(cfg), cfg.colloc.points(0), cfg.fit, params);
    save_network(cfg.output + "/network.evkn", net, params);
    write_fit_log(cfg.output + "/fit_log.csv", rep);
    Json manifest = make_manifest("fit-ic", normalized_json(cfg.problem, user));
    manifest["fit"] = {{"iterations", rep.iterations}, {"rms", rep.rms},
                       {"converged", rep.converged}};
    write_json_file(cfg.output + "/manifest.json", manifest);
    say("fit-ic: rms " + format_double(rep.rms) + " after " + std::to_string(rep.iterations) +
        " iterations -> " + cfg.output);
    return 0;
}

int run_single_evolve(const RunConfig& cfg, const Json& user) {
    fs::create_directories(cfg.output);
    RunSetup setup = make_setup(cfg);
    const RunResult res = run_evolution(setup);

    save_network(cfg.output + "/network.evkn", setup.net, res.fitted_params);
    write_fit_log(cfg.output + "/fit_log.csv", res.fit);
    write_diagnostics(cfg.output + "/diagnostics.csv", res.diagnostics);
    {
        CsvWriter timing(cfg.output + "/timing.csv");
        timing.header({"step", "wall_ms"});
        for (std::size_t i = 0; i < res.wall_ms.size(); ++i)
            timing.row({static_cast<double>(i + 1), res.wall_ms[i]});
    }
    write_snapshots(cfg.output + "/snapshots", res.snapshots);
    write_energy_trace(cfg.output + "/energy.csv", cfg, res.snapshots);

    Json manifest = make_manifest("evolve", normalized_json(cfg.problem, user));
    manifest["fit"] = {{"iterations", res.fit.iterations}, {"rms", res.fit.rms},
                       {"converged", res.fit.converged}};
    manifest["status"] = res.completed ? "completed" : ("error: " + res.error);
    if (cfg.evo.sav) manifest["final_r"] = res.final_r;
    write_json_file(cfg.output + "/manifest.json", manifest);

    if (!res.completed) {
        std::cerr << "evolve aborted: " << res.error << " (partial trajectory written to "
                  << cfg.output << ")\n";
        return kExitNumerical;
    }
    say("evolve: " + std::to_string(res.snapshots.size()) + " snapshots, fit rms " +
        format_double(res.fit.rms) + " -> " + cfg.output);
    return 0;
}

int cmd_evolve(const Json& user) {
    const RunConfig cfg = parse_config(user);
    if (cfg.sweep.empty()) return run_single_evolve(cfg, user);
    Json parent = make_manifest("evolve-sweep", normalized_json(cfg.problem, user));
    Json children = Json::array();
    int rc = 0;
    for (double v : cfg.sweep) {
        const std::string dir = sweep_dir(cfg, v);
        const Json child_user = with_sweep_value(user, cfg, v, dir);
        const RunConfig child = parse_config(child_user);
        children.push_back({{"value", v}, {"dir", dir}});
        const int r = run_single_evolve(child, child_user);
        rc = std::max(rc, r);
    }
    parent["children"] = children;
    fs::create_directories(cfg.output);
    write_json_file(cfg.output + "/manifest.json", parent);
    return rc;
}

int run_single_benchmark(const RunConfig& cfg, const Json& user) {
    fs::create_directories(cfg.output);
    const BenchResult res = run_benchmark(cfg, evolution_snapshot_times(cfg.evo));
    write_snapshots(cfg.output + "/snapshots", res.snapshots);
    write_energy_trace(cfg.output + "/energy.csv", cfg, res.snapshots);
    Json manifest = make_manifest("benchmark", normalized_json(cfg.problem, user));
    if (cfg.bench_scheme == "sav") manifest["final_r"] = res.final_r;
    manifest["status"] = "completed";
    write_json_file(cfg.output + "/manifest.json", manifest);
    say("benchmark: " + std::to_string(res.snapshots.size()) + " snapshots -> " + cfg.output);
    return 0;
}

int cmd_benchmark(const Json& user) {
    const RunConfig cfg = parse_config(user);
    if (cfg.sweep.empty()) return run_single_benchmark(cfg, user);
    Json parent = make_manifest("benchmark-sweep", normalized_json(cfg.problem, user));
    Json children = Json::array();
    int rc = 0;
    for (double v : cfg.sweep) {
        const std::string dir = sweep_dir(cfg, v);
        const Json child_user = with_sweep_value(user, cfg, v, dir);
        const RunConfig child = parse_config(child_user);
        children.push_back({{"value", v}, {"dir", dir}});
        rc = std::max(rc, run_single_benchmark(child, child_user));
    }
    parent["children"] = children;
    fs::create_directories(cfg.output);
    write_json_file(cfg.output + "/manifest.json", parent);
    return rc;
}

ErrorReport compare_run_dirs(const std::string& a, const std::string& b) {
    const std::vector<FieldSnapshot> ta = read_snapshots(a);
    const std::vector<FieldSnapshot> tb = read_snapshots(b);
    if (ta.empty() || ta.size() != tb.size())
        throw invalid_argument("compare: trajectories have different snapshot counts");
    return compare_trajectories(ta, tb, ta.back().time);
}

void write_report(const std::string& out, const ErrorReport& rep) {
    fs::create_directories(out);
    CsvWriter csv(out + "/report.csv");
    csv.header({"t", "abs_l2", "rel_l2"});
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        csv.row({rep.times[i], rep.abs_error[i], rep.rel_error[i]});
    std::ofstream txt(out + "/report.txt");
    txt << "time-averaged L2 error  " << format_double(rep.time_averaged) << "\n"
        << "max-over-time L2 error  " << format_double(rep.max_over_time) << "\n"
        << "final relative L2 error " << format_double(rep.rel_error.back()) << "\n";
}

std::vector<std::pair<double, std::string>> sweep_children(const std::string& dir) {
    std::vector<std::pair<double, std::string>> out;
    if (!fs::exists(dir + "/manifest.json")) return out;
    const Json m = load_json_file(dir + "/manifest.json");
    if (m.contains("children"))
        for (const auto& c : m.at("children"))
            out.push_back({c.at("value").get<double>(), c.at("dir").get<std::string>()});
    return out;
}

// Rows: one per method directory; columns: sweep values (Table-1 layout).
void write_table(const std::string& path, const std::vector<double>& values,
                 const std::vector<std::string>& methods,
                 const std::vector<std::vector<double>>& errors, const std::string& param_name) {
    std::ofstream txt(path);
    txt << "Parameter";
    for (double v : values) txt << "\t" << param_name << " = " << format_double(v);
    txt << "\n";
    for (std::size_t r = 0; r < methods.size(); ++r) {
        txt << methods[r] << " E(u)";
        for (double e : errors[r]) txt << "\t" << format_double(e);
        txt << "\n";
    }
}

int cmd_compare(const std::string& a, const std::string& b, std::string out) {
    if (out.empty()) out = a + "/compare";
    const auto ca = sweep_children(a);
    const auto cb = sweep_children(b);
    if (!ca.empty() && !cb.empty()) {
        if (ca.size() != cb.size()) throw invalid_argument("compare: sweeps differ in size");
        std::vector<double> values;
        std::vector<double> errs;
        for (std::size_t i = 0; i < ca.size(); ++i) {
            if (ca[i].first != cb[i].first)
                throw invalid_argument("compare: sweep values do not match");
            const ErrorReport rep = compare_run_dirs(ca[i].second, cb[i].second);
            write_report(out + "/" + fs::path(ca[i].second).filename().string(), rep);
            values.push_back(ca[i].first);
            errs.push_back(rep.time_averaged);
            say("compare " + ca[i].second + ": E = " + format_double(rep.time_averaged));
        }
        const Json ma = load_json_file(a + "/manifest.json");
        const std::string method =
            ma.at("config").at("network").at("backend").get<std::string>() == "kan" ? "EvoKAN"
                                                                                    : "EDNN";
        fs::create_directories(out);
        write_table(out + "/table.txt", values, {method}, {errs},
                    ma.at("config").at("problem").get<std::string>() == "nse2d" ? "nu" : "eps");
        return 0;
    }
    const ErrorReport rep = compare_run_dirs(a, b);
    write_report(out, rep);
    say("compare: time-averaged L2 " + format_double(rep.time_averaged) + ", final rel " +
        format_double(rep.rel_error.back()) + " -> " + out);
    return 0;
}

int cmd_table(const std::string& bench_dir, const std::vector<std::string>& method_dirs,
              std::string out_path) {
    if (out_path.empty()) out_path = "table.txt";
    const auto cb = sweep_children(bench_dir);
    if (cb.empty()) throw invalid_argument("table: benchmark directory is not a sweep");
    std::vector<double> values;
    for (const auto& [v, d] : cb) values.push_back(v);
    std::vector<std::string> methods;
    std::vector<std::vector<double>> errors;
    for (const auto& mdir : method_dirs) {
        const auto cm = sweep_children(mdir);
        if (cm.size() != cb.size()) throw invalid_argument("table: sweep sizes differ");
        const Json mm = load_json_file(mdir + "/manifest.json");
        methods.push_back(
            mm.at("config").at("network").at("backend").get<std::string>() == "kan" ? "EvoKAN"
                                                                                    : "EDNN");
        std::vector<double> errs;
        for (std::size_t i = 0; i < cm.size(); ++i)
            errs.push_back(compare_run_dirs(cm[i].second, cb[i].second).time_averaged);
        errors.push_back(errs);
    }
    const Json mb = load_json_file(bench_dir + "/manifest.json");
    write_table(out_path, values, methods, errors,
                mb.at("config").at("problem").get<std::string>() == "nse2d" ? "nu" : "eps");
    say("table -> " + out_path);
    return 0;
}

int cmd_render(const std::string& input, std::string out) {
    if (fs::is_directory(input)) {
        const std::vector<FieldSnapshot> traj = read_snapshots(input);
        if (traj.empty()) throw io_error(input + ": no snapshots");
        if (out.empty()) out = input + "/render";
        if (traj.front().ny == 1) {
            say("render strip -> " + render_strip(out, traj));
        } else {
            for (std::size_t i = 0; i < traj.size(); ++i) {
                char name[32];
                std::snprintf(name, sizeof(name), "_%06zu", i);
                render_snapshot(out + name, traj[i]);
            }
            say("render: " + std::to_string(traj.size()) + " frames -> " + out + "_*.pgm");
        }
        return 0;
    }
    const FieldSnapshot snap = load_snapshot(input);
    if (out.empty()) out = input.substr(0, input.rfind('.'));
    for (const auto& f : render_snapshot(out, snap)) say("render -> " + f);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (const char* env = std::getenv("EVOKAN_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) omp_set_num_threads(t);
    }
#endif
    CLI::App app{"evolutionary Kolmogorov-Arnold network PDE laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir, cmp_a, cmp_b, render_in, bench_dir, table_out;
    std::vector<std::string> method_dirs;
    long seed_override = -1;
    app.add_flag("--quiet,-q", g_quiet, "suppress progress output");

    auto add_common = [&](CLI::App* sub) {
        sub->add_flag("--quiet,-q", g_quiet, "suppress progress output");
    };
    auto add_config_opts = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory override");
        sub->add_option("--seed", seed_override, "network seed override");
        add_common(sub);
    };
    CLI::App* fit = app.add_subcommand("fit-ic", "fit the network to the initial condition");
    add_config_opts(fit);
    CLI::App* evolve = app.add_subcommand("evolve", "run the network evolution");
    add_config_opts(evolve);
    CLI::App* bench = app.add_subcommand("benchmark", "run the pseudo-spectral reference");
    add_config_opts(bench);

    CLI::App* cmp = app.add_subcommand("compare", "compare two run directories");
    cmp->add_option("run_a", cmp_a, "test run directory")->required();
    cmp->add_option("run_b", cmp_b, "reference run directory")->required();
    cmp->add_option("--out", out_dir, "report directory");
    add_common(cmp);

    CLI::App* render = app.add_subcommand("render", "render snapshots to grayscale PGM");
    render->add_option("input", render_in, "EVKS file or run snapshot directory")->required();
    render->add_option("--out", out_dir, "output base path");
    add_common(render);

    CLI::App* table = app.add_subcommand("table", "error table across a sweep");
    table->add_option("--bench", bench_dir, "benchmark sweep directory")->required();
    table->add_option("methods", method_dirs, "method sweep directories")->required();
    table->add_option("--out", table_out, "table output path");
    add_common(table);

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed() || evolve->parsed() || bench->parsed()) {
            const Json user =
                apply_overrides(load_config_json(config_path), out_dir, seed_override);
            if (fit->parsed()) return cmd_fit_ic(user);
            if (evolve->parsed()) return cmd_evolve(user);
            return cmd_benchmark(user);
        }
        if (cmp->parsed()) return cmd_compare(cmp_a, cmp_b, out_dir);
        if (render->parsed()) return cmd_render(render_in, out_dir);
        if (table->parsed()) return cmd_table(bench_dir, method_dirs, table_out);
    } catch (const invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const contract_error& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return kExitValidation;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const io_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
