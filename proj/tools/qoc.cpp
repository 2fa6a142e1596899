#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qoc/config.hpp"
#include "qoc/propagator.hpp"
#include "qoc/results.hpp"

namespace {

using namespace qoc;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int default_threads() {
    if (const char* env = std::getenv("QOC_THREADS")) {
        const int t = std::atoi(env);
        if (t >= 1) return t;
    }
    return 0; // 0 = not set, fall back to config
}

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    int threads = 0;
};

RunConfig load_with_overrides(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts.config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.threads > 0) {
        cfg.opt.threads = opts.threads;
    } else if (const int env_t = default_threads(); env_t > 0 &&
               cfg.opt.threads == 1) {
        cfg.opt.threads = env_t;
    }
    return cfg;
}

int cmd_optimize(const CommonOpts& opts) {
    const auto start = Clock::now();
    const RunConfig cfg = load_with_overrides(opts);
    const QuantumModel model = cfg.build_model();
    const SystemParams a =
        map_scale(model, ScaleVector{cfg.base_s}, cfg.base_c);
    const TimeGrid grid = cfg.build_time_grid();
    const std::uint64_t props_before = forward_propagation_count();
    const OptResult res =
        multistart(model, a, ControlParams::from_vector(cfg.b_init), grid,
                   cfg.weights, cfg.build_settings());
    const std::uint64_t props = forward_propagation_count() - props_before;
    atomic_write(opts.out_path, optimize_result_to_json(
                                    cfg, res, seconds_since(start), props));
    return res.converged ? 0 : 2;
}

int cmd_sweep(const CommonOpts& opts) {
    const auto start = Clock::now();
    const RunConfig cfg = load_with_overrides(opts);
    if (!cfg.has_sweep) {
        throw Error("bad_config", "sweep: config has no sweep section");
    }
    const QuantumModel model = cfg.build_model();
    SweepOptions sw;
    sw.b_init = cfg.b_init;
    sw.base_c = cfg.base_c;
    sw.warm_start = cfg.warm_start;
    sw.continuity_threshold = cfg.continuity_threshold;
    const SolutionSheet sheet =
        sweep(model, cfg.sweep_grid, cfg.build_time_grid(), cfg.weights,
              cfg.build_settings(), sw);
    atomic_write(opts.out_path,
                 sheet_result_to_json(cfg, sheet, seconds_since(start)));
    for (const SheetEntry& e : sheet.entries) {
        if (!e.converged) return 2;
    }
    return 0;
}

struct PredictOpts {
    std::string sheet_path;
    std::string out_path;
    std::vector<double> s_values;
    std::vector<double> c_values;
    int branch = 0;
    bool extrapolate = false;
    bool refine = false;
};

int cmd_predict(const PredictOpts& opts) {
    const auto start = Clock::now();
    const SolutionSheet sheet = sheet_from_json(read_file(opts.sheet_path));
    const SheetInterpolant interp = SheetInterpolant::fit(sheet);

    const auto ps = static_cast<int>(sheet.grid.s_axes.size());
    const auto pc = static_cast<int>(sheet.grid.c_axes.size());
    if (static_cast<int>(opts.s_values.size()) != ps) {
        throw Error("bad_query", "expected " + std::to_string(ps) +
                                     " --s values, got " +
                                     std::to_string(opts.s_values.size()));
    }
    if (static_cast<int>(opts.c_values.size()) != pc) {
        throw Error("bad_query", "expected " + std::to_string(pc) +
                                     " --c values, got " +
                                     std::to_string(opts.c_values.size()));
    }
    Eigen::VectorXd at(ps + pc);
    for (int i = 0; i < ps; ++i) at[i] = opts.s_values[i];
    for (int j = 0; j < pc; ++j) at[ps + j] = opts.c_values[j];

    PredictReport report;
    report.at = at;
    report.branch = opts.branch;
    report.prediction = predict(interp, at, opts.branch, opts.extrapolate);
    if (interp.in_hull(opts.branch, at)) {
        report.geo = geometry(interp, at, opts.branch);
    } else {
        const int m = interp.param_count();
        report.geo.tangents.resize(m, 0);
        report.geo.velocities.resize(m, 0);
        report.geo.normal_speeds.resize(m, 0);
    }

    if (opts.refine) {
        RunConfig cfg = parse_config(sheet.config_text);
        const QuantumModel model = cfg.build_model();
        Eigen::VectorXd c = cfg.base_c;
        for (int j = 0; j < pc; ++j) c[j] = opts.c_values[j];
        Eigen::VectorXd s(ps);
        for (int i = 0; i < ps; ++i) s[i] = opts.s_values[i];
        const SystemParams a = map_scale(model, ScaleVector{s}, c);
        OptSettings st = cfg.build_settings();
        st.max_iters = 5;
        st.restarts = 0;
        const std::uint64_t props_before = forward_propagation_count();
        const OptResult res = optimize(
            model, a, ControlParams::from_vector(report.prediction.b),
            cfg.build_time_grid(), cfg.weights, st);
        report.refined = true;
        report.refined_total = res.cost.total;
        report.refine_iterations = res.iterations;
        report.refine_propagations = forward_propagation_count() - props_before;
    }

    atomic_write(opts.out_path,
                 predict_result_to_json(sheet, report, seconds_since(start)));
    return 0;
}

int cmd_validate(const std::string& config_path) {
    load_config(config_path);
    std::cout << "ok\n";
    return 0;
}

int cmd_export_plot(const std::string& result_path, const std::string& kind,
                    const std::string& out_path) {
    const std::string text = read_file(result_path);
    if (kind == "trace") {
        atomic_write(out_path, trace_to_csv(text));
        return 0;
    }
    if (kind == "sheet") {
        atomic_write(out_path, sheet_to_csv(text));
        return 0;
    }
    if (kind == "trajectory") {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw Error("bad_result_document", e.what());
        }
        if (!doc.contains("result") || !doc.contains("config_text")) {
            throw Error("bad_result_document",
                        "trajectory export needs an optimize result");
        }
        const RunConfig cfg =
            parse_config(doc["config_text"].get<std::string>());
        const QuantumModel model = cfg.build_model();
        const SystemParams a =
            map_scale(model, ScaleVector{cfg.base_s}, cfg.base_c);
        const auto b_json = doc["result"]["b_opt"];
        Eigen::VectorXd b(b_json.size());
        for (std::size_t i = 0; i < b_json.size(); ++i) {
            b[i] = b_json[i].get<double>();
        }
        const Trajectory traj =
            propagate_forward(model, a, ControlParams::from_vector(b),
                              cfg.build_time_grid());
        std::ostringstream csv;
        write_trajectory_csv(traj, model, csv);
        atomic_write(out_path, csv.str());
        return 0;
    }
    throw Error("bad_kind", "unknown export kind '" + kind + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adjoint-gradient quantum optimal control with level-set "
                 "tracking of optimal control parameters"};
    app.require_subcommand(1);

    CommonOpts opt_opts, sweep_opts;
    PredictOpts pred_opts;
    std::string validate_config;
    std::string export_result, export_kind, export_out;

    auto add_common = [](CLI::App* sub, CommonOpts& o) {
        sub->add_option("--config", o.config_path, "config file (JSON)")
            ->required();
        sub->add_option("--out", o.out_path, "output document path")
            ->required();
        sub->add_option("--seed", o.seed, "override the config seed");
        sub->add_option("--threads", o.threads, "worker thread count");
    };

    add_common(app.add_subcommand("optimize",
                                  "optimize the control parameters once"),
               opt_opts);
    add_common(app.add_subcommand(
                   "sweep", "optimize across the configured (s, c) grid"),
               sweep_opts);

    CLI::App* pred = app.add_subcommand(
        "predict", "interpolate controls from a stored sheet");
    pred->add_option("--sheet", pred_opts.sheet_path, "sheet document")
        ->required();
    pred->add_option("--out", pred_opts.out_path, "output document path")
        ->required();
    pred->add_option("--s", pred_opts.s_values, "scale query values");
    pred->add_option("--c", pred_opts.c_values, "unscaled query values");
    pred->add_option("--branch", pred_opts.branch, "branch id (default 0)");
    pred->add_flag("--extrapolate", pred_opts.extrapolate,
                   "allow out-of-hull queries");
    pred->add_flag("--refine", pred_opts.refine,
                   "polish the prediction with up to 5 descent iterations");

    CLI::App* val = app.add_subcommand("validate", "check a config file");
    val->add_option("--config", validate_config, "config file (JSON)")
        ->required();

    CLI::App* exp =
        app.add_subcommand("export-plot", "CSV export for plotting");
    exp->add_option("--result", export_result, "result/sheet document")
        ->required();
    exp->add_option("--kind", export_kind, "trajectory | trace | sheet")
        ->required();
    exp->add_option("--out", export_out, "CSV output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("optimize")) return cmd_optimize(opt_opts);
        if (app.got_subcommand("sweep")) return cmd_sweep(sweep_opts);
        if (app.got_subcommand("predict")) return cmd_predict(pred_opts);
        if (app.got_subcommand("validate")) return cmd_validate(validate_config);
        if (app.got_subcommand("export-plot")) {
            return cmd_export_plot(export_result, export_kind, export_out);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
