// netchemo command-line front end.
//
// Exit codes: 0 success, 1 network validation failure, 2 argument or
// configuration error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "netchemo/config.hpp"
#include "netchemo/diagnostics.hpp"
#include "netchemo/errors.hpp"
#include "netchemo/harness.hpp"
#include "netchemo/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace netchemo;

namespace {

constexpr int exit_ok = 0, exit_invalid = 1, exit_usage = 2, exit_numerical = 3;

struct Overrides {
    std::optional<double> t_final, cfl;
    std::optional<std::size_t> cells;
};

void apply(const Overrides& o, RunConfig& rc) {
    if (o.t_final) rc.sim.t_final = *o.t_final;
    if (o.cfl) rc.sim.cfl = *o.cfl;
    if (o.cells) rc.sim.n_cells.assign(rc.spec.arcs.size(), *o.cells);
    rc.sim.check();
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot open '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_validate(const std::string& path) {
    const std::string text = read_file(path);
    json out;
    out["file"] = path;
    try {
        const auto report = inspect_network(text);
        out["valid"] = report.valid();
        out["issues"] = json::array();
        for (const auto& i : report.issues) out["issues"].push_back({{"code", i.code}, {"message", i.message}});
        out["nodes"] = json::array();
        for (const auto& n : report.nodes) {
            json jn = {{"node", n.node}, {"degree", n.degree}};
            jn["global_condition"] = n.global_condition ? json(*n.global_condition) : json(nullptr);
            jn["hub_arc"] = n.hub_arc ? json(*n.hub_arc) : json(nullptr);
            out["nodes"].push_back(jn);
        }
        std::cout << out.dump(2) << '\n';
        return report.valid() ? exit_ok : exit_invalid;
    } catch (const NetworkSyntaxError& e) {
        out["valid"] = false;
        out["issues"] = json::array({{{"code", "SYNTAX"}, {"message", e.what()}}});
        out["nodes"] = json::array();
        std::cout << out.dump(2) << '\n';
        return exit_invalid;
    }
}

void write_snapshot_file(const fs::path& dir, std::size_t index, const RunConfig& rc, const Grids& grids,
                         const NetworkState& s, std::ofstream& manifest) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%06zu.csv", index);
    std::ofstream f(dir / name);
    if (!f) throw ConfigError("cannot write snapshot in '" + dir.string() + "'");
    write_snapshot(f, rc.spec, grids, s);
    manifest << index << ',' << json(s.time).dump() << ',' << name << '\n';
}

int cmd_run(const std::string& config_path, const Overrides& o, const std::optional<std::string>& out_dir) {
    RunConfig rc = load_run_config(config_path);
    apply(o, rc);

    std::optional<fs::path> csv_path = rc.csv_path, snap_dir = rc.snapshots_dir;
    if (out_dir) {
        csv_path = fs::path(*out_dir) / "diagnostics.csv";
        if (snap_dir) snap_dir = fs::path(*out_dir) / "snapshots";
    }
    std::ofstream csv_file;
    if (csv_path) {
        if (csv_path->has_parent_path()) fs::create_directories(csv_path->parent_path());
        csv_file.open(*csv_path);
        if (!csv_file) throw ConfigError("cannot write '" + csv_path->string() + "'");
    }
    std::ostream& csv = csv_path ? static_cast<std::ostream&>(csv_file) : std::cout;

    std::ofstream manifest;
    if (snap_dir) {
        fs::create_directories(*snap_dir);
        manifest.open(*snap_dir / "index.csv");
        manifest << "sample,time,file\n";
    }

    const Grids grids = make_grids(rc.spec, rc.sim.n_cells);
    std::size_t sample = 0;
    csv << csv_header(rc.spec.nodes) << '\n';
    const auto result = run(rc.spec, rc.sim, rc.ic, [&](const NetworkState& s, const DiagnosticsRecord& r) {
        write_csv_row(csv, r);
        if (snap_dir) write_snapshot_file(*snap_dir, sample, rc, grids, s, manifest);
        ++sample;
    });
    csv.flush();
    print_warnings(result.warnings);
    std::cerr << "steps: " << result.wall_steps << ", samples: " << result.records.size() << '\n';
    return exit_ok;
}

json order_json(const ConvergenceRow& r, int f) {
    if (r.exact) return "exact";
    return r.order[f] ? json(*r.order[f]) : json(nullptr);
}

int cmd_converge(const std::string& config_path, const Overrides& o, std::size_t levels,
                 std::optional<double> diffusive_dt0) {
    RunConfig rc = load_run_config(config_path);
    apply(o, rc);
    ConvergenceOptions opt;
    opt.levels = levels;
    opt.base_cells = o.cells ? *o.cells : rc.sim.n_cells.front();
    opt.t_final = rc.sim.t_final;
    opt.cfl = rc.sim.cfl;
    opt.toggles = rc.sim.toggles;
    opt.diffusive_dt0 = diffusive_dt0;
    const auto table = convergence_study(rc.spec, rc.ic, opt);

    json out;
    out["mode"] = "richardson";
    out["levels"] = levels;
    out["t_final"] = opt.t_final;
    out["rows"] = json::array();
    const char* names[3] = {"u", "v", "phi"};
    for (const auto& r : table.rows) {
        json row = {{"n_cells", r.n_cells}, {"h", r.h}, {"dt", r.dt}, {"exact", r.exact}};
        for (int f = 0; f < 3; ++f) {
            row["l2_error"][names[f]] = r.error[f];
            row["order"][names[f]] = order_json(r, f);
        }
        out["rows"].push_back(row);
    }
    std::cout << out.dump(2) << '\n';
    return exit_ok;
}

int cmd_oracle(const std::string& config_path, const Overrides& o, double dt_oracle) {
    RunConfig rc = load_run_config(config_path);
    apply(o, rc);
    const Grids grids = make_grids(rc.spec, rc.sim.n_cells);
    const auto init = build_initial_state(rc.spec, grids, rc.ic, rc.sim.compat_check);
    print_warnings(init.warnings);
    std::size_t total = 0;
    for (const auto& g : grids) total += g.n_cells;
    if (total > 64) std::cerr << "warning: oracle on " << total << " cells may be slow\n";

    SimConfig cfg = rc.sim;
    cfg.output_every = std::numeric_limits<std::size_t>::max();
    const auto main = run_from(rc.spec, cfg, init.state);
    const auto ref = oracle_run(rc.spec, grids, init.state, rc.sim.t_final, dt_oracle, rc.sim.toggles);

    json out = {{"t_final", rc.sim.t_final},
                {"cfl", rc.sim.cfl},
                {"dt", compute_dt(rc.spec, grids, rc.sim.cfl)},
                {"dt_oracle", dt_oracle},
                {"cells", rc.sim.n_cells},
                {"linf_gap", linf_gap(main.final_state, ref)}};
    out["l2_gap"] = {{"u", l2_difference(grids, main.final_state, ref, FieldId::u)},
                     {"v", l2_difference(grids, main.final_state, ref, FieldId::v)},
                     {"phi", l2_difference(grids, main.final_state, ref, FieldId::phi)}};
    std::cout << out.dump(2) << '\n';
    return exit_ok;
}

void add_overrides(CLI::App* app, Overrides& o) {
    app->add_option("--t-final", o.t_final, "Final time (overrides the config file)")->check(CLI::PositiveNumber);
    app->add_option("--cfl", o.cfl, "CFL number in (0, 1] (overrides the config file)");
    app->add_option("--cells", o.cells, "Cells on every arc (overrides the config file)")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chemotaxis on oriented networks: hyperbolic transport, parabolic chemoattractant."};
    app.footer(
        "Settings precedence: command-line flags > configuration file > built-in defaults.\n"
        "Exit codes: 0 ok, 1 network validation failure, 2 argument/configuration error, 3 numerical failure.\n"
        "NETCHEMO_THREADS caps worker threads (0 = auto).");
    app.require_subcommand(1);

    std::string network_path, config_path;
    Overrides o;
    std::optional<std::string> out_dir;
    std::size_t levels = 4;
    std::optional<double> diffusive_dt0;
    double dt_oracle = 0.0;

    auto* validate = app.add_subcommand("validate", "Check a network description and report every invariant");
    validate->add_option("network", network_path, "Network JSON")->required();

    auto* run_cmd = app.add_subcommand("run", "Run a simulation and write diagnostics CSV");
    run_cmd->add_option("config", config_path, "Run configuration JSON")->required();
    add_overrides(run_cmd, o);
    run_cmd->add_option("--out", out_dir, "Output directory (diagnostics.csv, snapshots/)");

    auto* converge = app.add_subcommand("converge", "Refinement study; prints observed orders as JSON");
    converge->add_option("config", config_path, "Run configuration JSON")->required();
    add_overrides(converge, o);
    converge->add_option("--levels", levels, "Refinement levels (>= 3)")->check(CLI::Range(3, 12));
    converge->add_option("--diffusive-dt0", diffusive_dt0, "Use dt = X (h/h0)^2 instead of the CFL step");

    auto* oracle = app.add_subcommand("oracle-compare", "Compare the split solver against the RK4 oracle");
    oracle->add_option("config", config_path, "Run configuration JSON")->required();
    add_overrides(oracle, o);
    oracle->add_option("--dt-oracle", dt_oracle, "Oracle time step")->required()->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*validate) return cmd_validate(network_path);
        if (*run_cmd) return cmd_run(config_path, o, out_dir);
        if (*converge) return cmd_converge(config_path, o, levels, diffusive_dt0);
        if (*oracle) return cmd_oracle(config_path, o, dt_oracle);
    } catch (const NetworkValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_invalid;
    } catch (const NetworkSyntaxError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_invalid;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
