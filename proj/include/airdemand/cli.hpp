#pragma once

// Command line front end. Subcommands: synth (generate a dataset), train
// (single model), grid (full training grid + reports + plots), eval (stored
// model vs dataset), plot (re-emit plot files from a stored manifest).
// Each subcommand accepts --config; explicit flags override config values.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "airdemand/harness.hpp"
#include "airdemand/model_io.hpp"

namespace airdemand {

namespace cli_detail {

struct CommonOpts {
    std::string config_path;
    std::string data_path;
    std::string dam = "safarood";
    std::size_t n = 110;
    double noise_rel = 0.0;
    std::uint64_t synth_seed = 42;
    double train_fraction = 0.7;
    std::uint64_t split_seed = 7;
    int iters = 300;
};

inline bool flag_given(const CLI::App* cmd, const std::string& name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

// Config file first, then explicit flags on top.
inline ExperimentConfig resolve_experiment(const CLI::App* cmd, const CommonOpts& o) {
    ExperimentConfig cfg;
    if (!o.config_path.empty()) cfg = experiment_from_config(ConfigFile::load(o.config_path));
    if (flag_given(cmd, "--data")) cfg.csv_path = o.data_path;
    if (flag_given(cmd, "--dam")) cfg.dam = dam_preset(o.dam);
    if (flag_given(cmd, "--n")) cfg.synth.n = o.n;
    if (flag_given(cmd, "--noise")) cfg.synth.noise_rel = o.noise_rel;
    if (flag_given(cmd, "--synth-seed")) cfg.synth.seed = o.synth_seed;
    if (flag_given(cmd, "--train-fraction")) cfg.train_fraction = o.train_fraction;
    if (flag_given(cmd, "--split-seed")) cfg.split_seed = o.split_seed;
    if (flag_given(cmd, "--iters")) cfg.max_iters = o.iters;
    return cfg;
}

inline void add_dataset_flags(CLI::App* cmd, CommonOpts& o,
                              const std::string& seed_names = "--synth-seed",
                              bool with_csv_source = true) {
    cmd->add_option("--config", o.config_path, "configuration file (key = value sections)");
    if (with_csv_source) {
        cmd->add_option("--data", o.data_path,
                        "dataset CSV (header flow_m3s,opening_pct,air_velocity_ms)");
    }
    cmd->add_option("--dam", o.dam, "dam preset for the synthetic generator")
        ->default_str("safarood");
    cmd->add_option("--n", o.n, "synthetic sample count")->default_str("110");
    cmd->add_option("--noise", o.noise_rel, "relative Gaussian noise on the synthetic target")
        ->default_str("0");
    cmd->add_option(seed_names, o.synth_seed, "synthetic generator seed")->default_str("42");
}

inline void add_split_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--train-fraction", o.train_fraction, "training partition fraction")
        ->default_str("0.7");
    cmd->add_option("--split-seed", o.split_seed, "train/test shuffle seed")->default_str("7");
}

inline void print_metric_row(std::ostream& out, const MetricRow& row) {
    using detail::format_double;
    out << "family=" << row.family;
    if (!row.hyper.empty()) out << " model=" << row.hyper;
    if (row.pop_size > 0) out << " pop=" << row.pop_size;
    out << " rmse=" << format_double(row.rmse) << " mse=" << format_double(row.mse)
        << " cc=" << format_double(row.cc) << " si=" << format_double(row.si) << "\n";
}

}  // namespace cli_detail

inline int cli_main(int argc, const char* const* argv) {
    using cli_detail::CommonOpts;
    CLI::App app{"Air-demand modeling for dam bottom outlets: hybrid ANN-GA, ANN-PSO and "
                 "ANFIS-PSO regressors over (water volume rate, gate opening)"};
    app.require_subcommand(1);

    // ---- synth ----
    CommonOpts synth_opts;
    std::string synth_out = "synth.csv";
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset CSV");
    cli_detail::add_dataset_flags(synth_cmd, synth_opts, "--seed,--synth-seed", false);
    synth_cmd->add_option("--out", synth_out, "output CSV path")->default_str("synth.csv");

    // ---- train ----
    CommonOpts train_opts;
    std::string train_family = "ann-pso";
    int train_neurons = 8;
    std::string train_mf = "triangular";
    int train_pop = 50;
    std::optional<std::uint64_t> train_seed;
    std::string train_out = "model.json";
    std::string trace_csv;
    auto* train_cmd = app.add_subcommand("train", "train a single model and save it");
    cli_detail::add_dataset_flags(train_cmd, train_opts);
    cli_detail::add_split_flags(train_cmd, train_opts);
    train_cmd->add_option("--family", train_family, "ann-ga | ann-pso | anfis-pso")
        ->default_str("ann-pso");
    train_cmd->add_option("--neurons", train_neurons, "hidden neurons (ann families)")
        ->default_str("8");
    train_cmd->add_option("--mf-type", train_mf, "triangular | gbell | gaussian (anfis-pso)")
        ->default_str("triangular");
    train_cmd->add_option("--pop", train_pop, "population size")->default_str("50");
    train_cmd->add_option("--iters", train_opts.iters, "optimizer iterations")->default_str("300");
    train_cmd->add_option("--seed", train_seed,
                          "optimizer seed (default: derived from the master seed)");
    train_cmd->add_option("--out", train_out, "model artifact path")->default_str("model.json");
    train_cmd->add_option("--trace-csv", trace_csv, "write the convergence trace CSV here");

    // ---- grid ----
    CommonOpts grid_opts;
    std::string grid_out;
    std::optional<std::uint64_t> grid_seed;
    auto* grid_cmd = app.add_subcommand(
        "grid", "train the full hyperparameter grid, emit reports and plots");
    cli_detail::add_dataset_flags(grid_cmd, grid_opts);
    cli_detail::add_split_flags(grid_cmd, grid_opts);
    grid_cmd->add_option("--iters", grid_opts.iters, "optimizer iterations per cell")
        ->default_str("300");
    grid_cmd->add_option("--seed", grid_seed, "master seed for per-cell seed derivation");
    grid_cmd->add_option("--out", grid_out, "output directory (default: config [grid] out)");

    // ---- eval ----
    std::string eval_model, eval_data;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a stored model against a dataset");
    eval_cmd->add_option("--model", eval_model, "model artifact path")->required();
    eval_cmd->add_option("--data", eval_data, "dataset CSV path")->required();

    // ---- plot ----
    std::string plot_manifest, plot_out;
    auto* plot_cmd = app.add_subcommand("plot", "re-emit plot files from a stored manifest");
    plot_cmd->add_option("--manifest", plot_manifest, "manifest.json from a grid run")->required();
    plot_cmd->add_option("--out", plot_out, "output directory (default: manifest's directory)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*synth_cmd) {
            ExperimentConfig cfg = cli_detail::resolve_experiment(synth_cmd, synth_opts);
            const Dataset d = generate(cfg.dam, cfg.synth);
            save_csv(d, synth_out);
            std::cout << "wrote " << d.size() << " samples to " << synth_out << " ("
                      << d.source_tag << ")\n";
            return 0;
        }

        if (*train_cmd) {
            ExperimentConfig cfg = cli_detail::resolve_experiment(train_cmd, train_opts);
            const Family family = family_from_string(train_family);
            const std::string hyper = family == Family::AnfisPso
                                          ? std::string(to_string(mf_type_from_string(train_mf)))
                                          : std::to_string(train_neurons);
            const std::uint64_t seed =
                train_seed ? *train_seed : cell_seed(cfg.master_seed, family, hyper, train_pop);

            const Dataset data = resolve_dataset(cfg);
            const SplitDataset sp = split(data, cfg.train_fraction, cfg.split_seed);
            const Normalizer norm = Normalizer::fit(sp.train);
            const auto run = harness_detail::run_cell_optimizer(cfg, family, hyper, train_pop,
                                                                seed, sp.train, norm);

            ModelArtifact artifact;
            artifact.kind = family == Family::AnfisPso ? ModelKind::Anfis : ModelKind::Ann;
            if (artifact.kind == ModelKind::Anfis) {
                artifact.anfis.mf_type = mf_type_from_string(hyper);
            } else {
                artifact.ann.hidden_neurons = train_neurons;
            }
            artifact.params = run.opt.best_position;
            artifact.norm = norm;
            artifact.family = std::string(to_string(family));
            artifact.optimizer = family == Family::AnnGa ? "ga" : "pso";
            artifact.optimizer_seed = seed;
            artifact.split_seed = cfg.split_seed;
            artifact.train_fraction = cfg.train_fraction;
            artifact.dataset_tag = data.source_tag;
            artifact.initial_best_fitness = run.opt.initial_best_fitness;
            artifact.best_fitness = run.opt.best_fitness;
            artifact.evaluations = run.opt.evaluations;
            artifact.trace = run.opt.trace;
            save_model(artifact, train_out);

            if (!trace_csv.empty()) {
                std::string csv = "iteration,best_fitness\n";
                for (std::size_t i = 0; i < artifact.trace.size(); ++i) {
                    csv += std::to_string(i + 1) + "," + detail::format_double(artifact.trace[i]) +
                           "\n";
                }
                harness_detail::write_file(trace_csv, csv);
            }

            const MetricRow row =
                evaluate(EvalPair{harness_detail::observed(sp.train), run.train_predictions},
                         std::string(to_string(family)), hyper, train_pop);
            cli_detail::print_metric_row(std::cout, row);
            std::cout << "saved model to " << train_out << "\n";
            return 0;
        }

        if (*grid_cmd) {
            ExperimentConfig cfg = cli_detail::resolve_experiment(grid_cmd, grid_opts);
            if (grid_seed) cfg.master_seed = *grid_seed;
            if (grid_cmd->count("--out")) cfg.output_dir = grid_out;
            const GridReport rep = run_grid(cfg);
            emit_report(rep, cfg.output_dir);
            emit_plots(rep, cfg.output_dir);
            std::size_t failed = 0;
            for (const CellResult& c : rep.cells) {
                if (!c.ok) {
                    ++failed;
                    std::cerr << "cell " << to_string(c.family) << "/" << c.hyper << "/pop"
                              << c.pop_size << " failed: " << c.error << "\n";
                }
            }
            std::cout << "trained " << rep.cells.size() - failed << "/" << rep.cells.size()
                      << " grid cells; reports in " << cfg.output_dir << "\n";
            for (const ChampionResult& c : rep.champions) cli_detail::print_metric_row(std::cout, c.test);
            return failed == 0 ? 0 : 1;
        }

        if (*eval_cmd) {
            const ModelArtifact m = load_model(eval_model);
            const Dataset d = load_csv(eval_data);
            const EvalPair pairs{harness_detail::observed(d), predict(m, d)};
            cli_detail::print_metric_row(
                std::cout, evaluate(pairs, m.family,
                                    m.kind == ModelKind::Anfis
                                        ? std::string(to_string(m.anfis.mf_type))
                                        : std::to_string(m.ann.hidden_neurons),
                                    0));
            return 0;
        }

        if (*plot_cmd) {
            const GridReport rep = report_from_manifest(plot_manifest);
            const std::filesystem::path out_dir =
                plot_cmd->count("--out") ? std::filesystem::path(plot_out)
                                         : std::filesystem::path(plot_manifest).parent_path();
            emit_plots(rep, out_dir.empty() ? "." : out_dir);
            std::cout << "plots written to " << (out_dir.empty() ? "." : out_dir.string()) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

inline int cli_main(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const std::string& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace airdemand
