#pragma once

// Experiment orchestration: the training grid (ANN-GA and ANN-PSO over
// hidden-neuron count x population size, ANFIS-PSO over membership-function
// family x population size), champion selection per family by training RMSE,
// test-phase evaluation of the champions, and report/plot emission.
//
// Every grid cell gets its own seed derived by hashing the master seed with
// the cell's identity, so runs are reproducible cell by cell and identical
// configurations produce byte-identical outputs.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "airdemand/anfis.hpp"
#include "airdemand/ann.hpp"
#include "airdemand/config.hpp"
#include "airdemand/dataset.hpp"
#include "airdemand/detail/rng.hpp"
#include "airdemand/metrics.hpp"
#include "airdemand/optimize.hpp"
#include "airdemand/svg.hpp"
#include "airdemand/synth.hpp"

namespace airdemand {

enum class Family { AnnGa, AnnPso, AnfisPso };

inline constexpr Family kFamilies[3] = {Family::AnnGa, Family::AnnPso, Family::AnfisPso};

inline constexpr std::string_view to_string(Family f) {
    switch (f) {
        case Family::AnnGa: return "ANN-GA";
        case Family::AnnPso: return "ANN-PSO";
        case Family::AnfisPso: return "ANFIS-PSO";
    }
    return "?";
}

inline Family family_from_string(std::string_view s) {
    std::string lowered(s);
    for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lowered == "ann-ga") return Family::AnnGa;
    if (lowered == "ann-pso") return Family::AnnPso;
    if (lowered == "anfis-pso") return Family::AnfisPso;
    throw std::invalid_argument("unknown model family '" + std::string(s) +
                                "'; known: ann-ga, ann-pso, anfis-pso");
}

struct GridSpec {
    std::vector<int> neurons{8, 12, 16};
    std::vector<MfType> mf_types{MfType::Triangular, MfType::GBell, MfType::Gaussian};
    std::vector<int> pop_sizes{50, 100, 150};
};

struct ExperimentConfig {
    // dataset source: a CSV path wins over the synthetic generator
    std::optional<std::string> csv_path;
    DamSpec dam = dam_preset("safarood");
    SynthConfig synth{110, 0.0, 42};

    double train_fraction = 0.7;
    std::uint64_t split_seed = 7;

    int max_iters = 300;
    double pso_inertia = 0.729;
    double pso_cognitive = 1.49445;
    double pso_social = 1.49445;
    double pso_velocity_clamp = 0.5;
    double ga_crossover_rate = 0.9;
    std::optional<double> ga_mutation_rate;  // default 1/dims
    double ga_mutation_scale = 0.1;
    int ga_tournament = 3;
    int ga_elitism = 2;

    GridSpec grid;
    std::uint64_t master_seed = 1;
    std::string output_dir = "out";
};

inline ExperimentConfig experiment_from_config(const ConfigFile& f) {
    ExperimentConfig c;
    if (const auto p = f.get("dataset", "path")) c.csv_path = *p;
    if (f.has("dam", "q_min")) {
        DamSpec custom;
        custom.name = f.get_string("dam", "name", "custom");
        custom.q_min = f.get_double("dam", "q_min", 0.0);
        custom.q_max = f.get_double("dam", "q_max", 0.0);
        custom.gate_height = f.get_double("dam", "gate_height", 0.0);
        custom.gate_width = f.get_double("dam", "gate_width", 0.0);
        custom.opening_min = f.get_double("dam", "opening_min", 0.0);
        custom.opening_max = f.get_double("dam", "opening_max", 0.0);
        custom.g = f.get_double("dam", "g", 9.81);
        if (f.has("dam", "head_max")) custom.head_max = f.get_double("dam", "head_max", 0.0);
        if (f.has("dam", "downstream_min"))
            custom.downstream_min = f.get_double("dam", "downstream_min", 0.0);
        if (f.has("dam", "downstream_max"))
            custom.downstream_max = f.get_double("dam", "downstream_max", 0.0);
        validate(custom);
        c.dam = custom;
    } else {
        c.dam = dam_preset(f.get_string("synth", "dam", "safarood"));
    }
    c.synth.n = static_cast<std::size_t>(f.get_int("synth", "n", 110));
    c.synth.noise_rel = f.get_double("synth", "noise_rel", 0.0);
    c.synth.seed = f.get_uint("synth", "seed", 42);

    c.train_fraction = f.get_double("split", "train_fraction", 0.7);
    c.split_seed = f.get_uint("split", "seed", 7);

    c.max_iters = static_cast<int>(f.get_int("optimize", "iters", 300));
    c.pso_inertia = f.get_double("optimize", "pso_inertia", 0.729);
    c.pso_cognitive = f.get_double("optimize", "pso_cognitive", 1.49445);
    c.pso_social = f.get_double("optimize", "pso_social", 1.49445);
    c.pso_velocity_clamp = f.get_double("optimize", "pso_velocity_clamp", 0.5);
    c.ga_crossover_rate = f.get_double("optimize", "ga_crossover_rate", 0.9);
    if (f.has("optimize", "ga_mutation_rate"))
        c.ga_mutation_rate = f.get_double("optimize", "ga_mutation_rate", 0.0);
    c.ga_mutation_scale = f.get_double("optimize", "ga_mutation_scale", 0.1);
    c.ga_tournament = static_cast<int>(f.get_int("optimize", "ga_tournament", 3));
    c.ga_elitism = static_cast<int>(f.get_int("optimize", "ga_elitism", 2));

    const auto parse_int = [](const std::string& s, const char* what) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(s, &used);
            if (used != s.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw std::runtime_error(std::string("config [grid] ") + what +
                                     ": expected an integer, got '" + s + "'");
        }
    };
    if (f.has("grid", "neurons")) {
        c.grid.neurons.clear();
        for (const auto& s : f.get_list("grid", "neurons", {}))
            c.grid.neurons.push_back(parse_int(s, "neurons"));
    }
    if (f.has("grid", "pop_sizes")) {
        c.grid.pop_sizes.clear();
        for (const auto& s : f.get_list("grid", "pop_sizes", {}))
            c.grid.pop_sizes.push_back(parse_int(s, "pop_sizes"));
    }
    if (f.has("grid", "mf_types")) {
        c.grid.mf_types.clear();
        for (const auto& s : f.get_list("grid", "mf_types", {}))
            c.grid.mf_types.push_back(mf_type_from_string(s));
    }
    c.master_seed = f.get_uint("grid", "seed", 1);
    c.output_dir = f.get_string("grid", "out", "out");
    return c;
}

// Training search space: ANN weights in [-1, 1]; ANFIS premise centers in
// [-0.2, 1.2] with widths in [1e-3, 1] and the gbell exponent in [0.5, 4];
// consequent coefficients in [-5, 5].
inline Bounds ann_bounds(const AnnConfig& cfg) {
    return uniform_bounds(param_count(cfg), -1.0, 1.0);
}

inline Bounds anfis_bounds(const AnfisConfig& cfg) {
    Bounds b;
    b.lower.reserve(param_count(cfg));
    b.upper.reserve(param_count(cfg));
    const auto push = [&](double lo, double hi) {
        b.lower.push_back(lo);
        b.upper.push_back(hi);
    };
    for (std::size_t input = 0; input < AnfisConfig::input_dim; ++input) {
        for (std::size_t mf = 0; mf < AnfisConfig::mfs_per_input; ++mf) {
            switch (cfg.mf_type) {
                case MfType::Triangular:
                    push(-0.2, 1.2);
                    push(-0.2, 1.2);
                    push(-0.2, 1.2);
                    break;
                case MfType::GBell:
                    push(1e-3, 1.0);  // width a
                    push(0.5, 4.0);   // exponent b
                    push(-0.2, 1.2);  // center c
                    break;
                case MfType::Gaussian:
                    push(1e-3, 1.0);  // sigma
                    push(-0.2, 1.2);  // center c
                    break;
            }
        }
    }
    for (std::size_t rule = 0; rule < AnfisConfig::rule_count; ++rule) {
        push(-5.0, 5.0);
        push(-5.0, 5.0);
        push(-5.0, 5.0);
    }
    return b;
}

struct CellResult {
    Family family = Family::AnnGa;
    std::string hyper;  // neuron count or membership function family
    int pop_size = 0;
    std::uint64_t cell_seed = 0;
    bool ok = false;
    std::string error;

    MetricRow train;  // metrics in m/s on the training partition
    double initial_best_mse = 0.0;  // normalized-space fitness, initial population best
    double final_mse = 0.0;         // normalized-space fitness after training
    std::size_t evaluations = 0;
    std::vector<double> trace;
    std::vector<double> params;
};

struct ChampionResult {
    Family family = Family::AnnGa;
    std::size_t cell_index = 0;  // into GridReport::cells
    MetricRow test;
    TaylorStats taylor;
    EvalPair pairs;  // test-partition observed/predicted, m/s
};

struct GridReport {
    std::string dataset_tag;
    std::size_t n_total = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    double train_fraction = 0.0;
    std::uint64_t split_seed = 0;
    std::uint64_t master_seed = 0;
    int max_iters = 0;
    std::vector<CellResult> cells;
    std::vector<ChampionResult> champions;
};

// Champion = minimum training RMSE; ties broken by higher CC, then lower SI,
// then first position. Returns an index into `rows`.
inline std::size_t select_champion(const std::vector<MetricRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("select_champion requires at least one row");
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const MetricRow& a = rows[i];
        const MetricRow& b = rows[best];
        const bool wins = a.rmse < b.rmse ||
                          (a.rmse == b.rmse &&
                           (a.cc > b.cc || (a.cc == b.cc && a.si < b.si)));
        if (wins) best = i;
    }
    return best;
}

inline std::uint64_t cell_seed(std::uint64_t master_seed, Family family, const std::string& hyper,
                               int pop_size) {
    return detail::fnv1a(std::to_string(master_seed) + "|" + std::string(to_string(family)) + "|" +
                         hyper + "|" + std::to_string(pop_size));
}

namespace harness_detail {

inline std::vector<double> observed(const Dataset& d) {
    std::vector<double> out;
    out.reserve(d.samples.size());
    for (const Sample& s : d.samples) out.push_back(s.air_velocity);
    return out;
}

struct CellRun {
    OptResult opt;
    std::vector<double> train_predictions;
};

inline CellRun run_cell_optimizer(const ExperimentConfig& cfg, Family family,
                                  const std::string& hyper, int pop_size, std::uint64_t seed,
                                  const Dataset& train, const Normalizer& norm) {
    CellRun run;
    if (family == Family::AnfisPso) {
        const AnfisConfig model_cfg{mf_type_from_string(hyper)};
        const auto compile = [model_cfg](const std::vector<double>& p) {
            return [m = decode(model_cfg, p)](double x1, double x2) { return forward(m, x1, x2); };
        };
        PsoConfig pso{pop_size, cfg.max_iters, cfg.pso_inertia, cfg.pso_cognitive,
                      cfg.pso_social, cfg.pso_velocity_clamp, seed};
        run.opt = pso_run(fitness_mse(compile, train, norm), anfis_bounds(model_cfg), pso,
                          {grid_init(model_cfg)});
        run.train_predictions = predict_batch(model_cfg, run.opt.best_position, train, norm);
        return run;
    }

    AnnConfig model_cfg;
    try {
        std::size_t used = 0;
        model_cfg.hidden_neurons = std::stoi(hyper, &used);
        if (used != hyper.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
        throw std::invalid_argument("hidden neuron count must be an integer, got '" + hyper + "'");
    }
    validate(model_cfg);
    const auto compile = [model_cfg](const std::vector<double>& p) {
        return [model_cfg, &p](double x1, double x2) { return forward(model_cfg, p, x1, x2); };
    };
    auto fitness = fitness_mse(compile, train, norm);
    if (family == Family::AnnGa) {
        GaConfig ga{pop_size,          cfg.max_iters,       cfg.ga_crossover_rate,
                    cfg.ga_mutation_rate, cfg.ga_mutation_scale, cfg.ga_tournament,
                    cfg.ga_elitism,    seed};
        run.opt = ga_run(fitness, ann_bounds(model_cfg), ga);
    } else {
        PsoConfig pso{pop_size, cfg.max_iters, cfg.pso_inertia, cfg.pso_cognitive,
                      cfg.pso_social, cfg.pso_velocity_clamp, seed};
        run.opt = pso_run(fitness, ann_bounds(model_cfg), pso);
    }
    run.train_predictions = predict_batch(model_cfg, run.opt.best_position, train, norm);
    return run;
}

inline std::vector<double> predict_cell(const CellResult& cell, const Dataset& d,
                                        const Normalizer& norm) {
    if (cell.family == Family::AnfisPso) {
        return predict_batch(AnfisConfig{mf_type_from_string(cell.hyper)}, cell.params, d, norm);
    }
    AnnConfig model_cfg;
    model_cfg.hidden_neurons = std::stoi(cell.hyper);
    return predict_batch(model_cfg, cell.params, d, norm);
}

}  // namespace harness_detail

// Resolves the dataset named by the config: CSV when a path is set, the
// synthetic generator otherwise.
inline Dataset resolve_dataset(const ExperimentConfig& cfg) {
    if (cfg.csv_path) return load_csv(*cfg.csv_path);
    return generate(cfg.dam, cfg.synth);
}

// Trains every grid cell on the training partition with MSE fitness, selects
// one champion per family by training RMSE, and evaluates the champions on
// the test partition. A failing cell is recorded and does not abort its
// siblings.
inline GridReport run_grid(const ExperimentConfig& cfg) {
    const Dataset data = resolve_dataset(cfg);
    const SplitDataset sp = split(data, cfg.train_fraction, cfg.split_seed);
    const Normalizer norm = Normalizer::fit(sp.train);
    const std::vector<double> train_observed = harness_detail::observed(sp.train);
    const std::vector<double> test_observed = harness_detail::observed(sp.test);

    GridReport rep;
    rep.dataset_tag = data.source_tag;
    rep.n_total = data.size();
    rep.n_train = sp.train.size();
    rep.n_test = sp.test.size();
    rep.train_fraction = cfg.train_fraction;
    rep.split_seed = cfg.split_seed;
    rep.master_seed = cfg.master_seed;
    rep.max_iters = cfg.max_iters;

    for (Family family : kFamilies) {
        std::vector<std::string> hypers;
        if (family == Family::AnfisPso) {
            for (MfType t : cfg.grid.mf_types) hypers.emplace_back(to_string(t));
        } else {
            for (int n : cfg.grid.neurons) hypers.push_back(std::to_string(n));
        }

        std::vector<MetricRow> family_rows;
        std::vector<std::size_t> family_cells;
        for (int pop : cfg.grid.pop_sizes) {
            for (const std::string& hyper : hypers) {
                CellResult cell;
                cell.family = family;
                cell.hyper = hyper;
                cell.pop_size = pop;
                cell.cell_seed = cell_seed(cfg.master_seed, family, hyper, pop);
                try {
                    auto run = harness_detail::run_cell_optimizer(cfg, family, hyper, pop,
                                                                  cell.cell_seed, sp.train, norm);
                    cell.train = evaluate(EvalPair{train_observed, run.train_predictions},
                                          std::string(to_string(family)), hyper, pop);
                    cell.initial_best_mse = run.opt.initial_best_fitness;
                    cell.final_mse = run.opt.best_fitness;
                    cell.evaluations = run.opt.evaluations;
                    cell.trace = std::move(run.opt.trace);
                    cell.params = std::move(run.opt.best_position);
                    cell.ok = true;
                } catch (const std::exception& e) {
                    cell.ok = false;
                    cell.error = e.what();
                }
                if (cell.ok) {
                    family_rows.push_back(cell.train);
                    family_cells.push_back(rep.cells.size());
                }
                rep.cells.push_back(std::move(cell));
            }
        }

        if (!family_rows.empty()) {
            const std::size_t cell_index = family_cells[select_champion(family_rows)];
            const CellResult& winner = rep.cells[cell_index];
            ChampionResult champ;
            champ.family = family;
            champ.cell_index = cell_index;
            champ.pairs.observed = test_observed;
            champ.pairs.predicted = harness_detail::predict_cell(winner, sp.test, norm);
            champ.test = evaluate(champ.pairs, std::string(to_string(family)), winner.hyper,
                                  winner.pop_size);
            champ.taylor = taylor_stats(champ.pairs);
            rep.champions.push_back(std::move(champ));
        }
    }
    return rep;
}

namespace harness_detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace harness_detail

inline nlohmann::json manifest_json(const GridReport& rep) {
    nlohmann::json j;
    j["dataset"] = {
        {"source_tag", rep.dataset_tag},   {"n_total", rep.n_total},
        {"n_train", rep.n_train},          {"n_test", rep.n_test},
        {"train_fraction", rep.train_fraction}, {"split_seed", rep.split_seed},
    };
    j["run"] = {{"master_seed", rep.master_seed}, {"max_iters", rep.max_iters}};
    j["cells"] = nlohmann::json::array();
    for (const CellResult& c : rep.cells) {
        nlohmann::json jc = {
            {"family", std::string(to_string(c.family))},
            {"hyper", c.hyper},
            {"pop_size", c.pop_size},
            {"cell_seed", c.cell_seed},
            {"ok", c.ok},
        };
        if (c.ok) {
            jc["train"] = {{"rmse", c.train.rmse}, {"mse", c.train.mse},
                           {"cc", c.train.cc},     {"si", c.train.si}};
            jc["initial_best_mse"] = c.initial_best_mse;
            jc["final_mse"] = c.final_mse;
            jc["evaluations"] = c.evaluations;
            jc["trace"] = c.trace;
        } else {
            jc["error"] = c.error;
        }
        j["cells"].push_back(std::move(jc));
    }
    j["champions"] = nlohmann::json::array();
    for (const ChampionResult& c : rep.champions) {
        const CellResult& cell = rep.cells[c.cell_index];
        j["champions"].push_back({
            {"family", std::string(to_string(c.family))},
            {"hyper", cell.hyper},
            {"pop_size", cell.pop_size},
            {"cell_index", c.cell_index},
            {"test", {{"rmse", c.test.rmse}, {"mse", c.test.mse}, {"cc", c.test.cc},
                      {"si", c.test.si}}},
            {"taylor", {{"std_observed", c.taylor.std_observed},
                        {"std_predicted", c.taylor.std_predicted},
                        {"cc", c.taylor.cc}}},
            {"observed", c.pairs.observed},
            {"predicted", c.pairs.predicted},
            {"params", cell.params},
        });
    }
    return j;
}

// Rebuilds a report from a stored manifest; carries everything the report
// and plot emitters need.
inline GridReport report_from_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open manifest: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("invalid manifest " + path.string() + ": " + e.what());
    }
    GridReport rep;
    const auto& ds = j.at("dataset");
    rep.dataset_tag = ds.at("source_tag").get<std::string>();
    rep.n_total = ds.at("n_total").get<std::size_t>();
    rep.n_train = ds.at("n_train").get<std::size_t>();
    rep.n_test = ds.at("n_test").get<std::size_t>();
    rep.train_fraction = ds.at("train_fraction").get<double>();
    rep.split_seed = ds.at("split_seed").get<std::uint64_t>();
    rep.master_seed = j.at("run").at("master_seed").get<std::uint64_t>();
    rep.max_iters = j.at("run").at("max_iters").get<int>();
    for (const auto& jc : j.at("cells")) {
        CellResult c;
        c.family = family_from_string(jc.at("family").get<std::string>());
        c.hyper = jc.at("hyper").get<std::string>();
        c.pop_size = jc.at("pop_size").get<int>();
        c.cell_seed = jc.at("cell_seed").get<std::uint64_t>();
        c.ok = jc.at("ok").get<bool>();
        if (c.ok) {
            c.train.family = std::string(to_string(c.family));
            c.train.hyper = c.hyper;
            c.train.pop_size = c.pop_size;
            c.train.rmse = jc.at("train").at("rmse").get<double>();
            c.train.mse = jc.at("train").at("mse").get<double>();
            c.train.cc = jc.at("train").at("cc").get<double>();
            c.train.si = jc.at("train").at("si").get<double>();
            c.initial_best_mse = jc.at("initial_best_mse").get<double>();
            c.final_mse = jc.at("final_mse").get<double>();
            c.evaluations = jc.at("evaluations").get<std::size_t>();
            c.trace = jc.at("trace").get<std::vector<double>>();
        } else {
            c.error = jc.at("error").get<std::string>();
        }
        rep.cells.push_back(std::move(c));
    }
    for (const auto& jc : j.at("champions")) {
        ChampionResult c;
        c.family = family_from_string(jc.at("family").get<std::string>());
        c.cell_index = jc.at("cell_index").get<std::size_t>();
        if (c.cell_index >= rep.cells.size())
            throw std::runtime_error("manifest champion cell_index out of range");
        rep.cells[c.cell_index].params = jc.at("params").get<std::vector<double>>();
        c.test.family = std::string(to_string(c.family));
        c.test.hyper = rep.cells[c.cell_index].hyper;
        c.test.pop_size = rep.cells[c.cell_index].pop_size;
        c.test.rmse = jc.at("test").at("rmse").get<double>();
        c.test.mse = jc.at("test").at("mse").get<double>();
        c.test.cc = jc.at("test").at("cc").get<double>();
        c.test.si = jc.at("test").at("si").get<double>();
        c.taylor.std_observed = jc.at("taylor").at("std_observed").get<double>();
        c.taylor.std_predicted = jc.at("taylor").at("std_predicted").get<double>();
        c.taylor.cc = jc.at("taylor").at("cc").get<double>();
        c.pairs.observed = jc.at("observed").get<std::vector<double>>();
        c.pairs.predicted = jc.at("predicted").get<std::vector<double>>();
        rep.champions.push_back(std::move(c));
    }
    return rep;
}

// report_train.csv, report_test.csv and manifest.json. Errored cells keep
// their identity columns with empty metric cells; details sit in the
// manifest.
inline void emit_report(const GridReport& rep, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    using detail::format_double;

    std::string train_csv = "family,neurons_or_mftype,pop_size,rmse,cc,si\n";
    for (const CellResult& c : rep.cells) {
        train_csv += std::string(to_string(c.family)) + "," + c.hyper + "," +
                     std::to_string(c.pop_size) + ",";
        if (c.ok) {
            train_csv += format_double(c.train.rmse) + "," + format_double(c.train.cc) + "," +
                         format_double(c.train.si);
        } else {
            train_csv += ",,";
        }
        train_csv += "\n";
    }
    harness_detail::write_file(out_dir / "report_train.csv", train_csv);

    std::string test_csv = "family,rmse,cc,si\n";
    for (const ChampionResult& c : rep.champions) {
        test_csv += std::string(to_string(c.family)) + "," + format_double(c.test.rmse) + "," +
                    format_double(c.test.cc) + "," + format_double(c.test.si) + "\n";
    }
    harness_detail::write_file(out_dir / "report_test.csv", test_csv);

    harness_detail::write_file(out_dir / "manifest.json", manifest_json(rep).dump(2) + "\n");
}

namespace harness_detail {

inline std::string family_color(Family f) {
    switch (f) {
        case Family::AnnGa: return "#d62728";
        case Family::AnnPso: return "#1f77b4";
        case Family::AnfisPso: return "#2ca02c";
    }
    return "#000000";
}

// largest of 1/2/5 * 10^k not above v
inline double nice_step(double v) {
    if (!(v > 0.0)) return 1.0;
    const double k = std::floor(std::log10(v));
    const double base = std::pow(10.0, k);
    const double f = v / base;
    if (f >= 5.0) return 5.0 * base;
    if (f >= 2.0) return 2.0 * base;
    return base;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

inline std::string render_scatter_svg(const ChampionResult& champ) {
    const double size = 480.0, margin = 60.0;
    const double plot = size - 2.0 * margin;
    double vmax = 0.0;
    for (double v : champ.pairs.observed) vmax = std::max(vmax, v);
    for (double v : champ.pairs.predicted) vmax = std::max(vmax, v);
    if (vmax <= 0.0) vmax = 1.0;
    vmax *= 1.05;
    const auto px = [&](double v) { return margin + plot * (v / vmax); };
    const auto py = [&](double v) { return size - margin - plot * (v / vmax); };

    SvgDocument svg(size, size);
    svg.line(margin, size - margin, size - margin, size - margin, "#000000");
    svg.line(margin, margin, margin, size - margin, "#000000");
    const double step = nice_step(vmax / 5.0);
    for (double t = 0.0; t <= vmax; t += step) {
        svg.line(px(t), size - margin, px(t), size - margin + 5.0, "#000000");
        svg.text(px(t), size - margin + 18.0, tick_label(t), 10.0, "middle");
        svg.line(margin - 5.0, py(t), margin, py(t), "#000000");
        svg.text(margin - 8.0, py(t) + 3.0, tick_label(t), 10.0, "end");
    }
    svg.line(px(0.0), py(0.0), px(vmax), py(vmax), "#888888", 1.0, "6,4");
    for (std::size_t i = 0; i < champ.pairs.observed.size(); ++i) {
        svg.circle(px(champ.pairs.observed[i]), py(champ.pairs.predicted[i]), 3.0,
                   family_color(champ.family));
    }
    svg.text(size / 2.0, size - 14.0, "observed air velocity (m/s)", 12.0, "middle");
    svg.text(14.0, size / 2.0, "predicted (m/s)", 12.0, "middle");
    svg.text(size / 2.0, 28.0, std::string(to_string(champ.family)) + " test predictions", 14.0,
             "middle");
    return svg.str();
}

inline std::string render_taylor_svg(const GridReport& rep) {
    const double size = 560.0, margin = 70.0;
    const double plot = size - 2.0 * margin;
    double rmax = 0.0;
    for (const ChampionResult& c : rep.champions) {
        rmax = std::max(rmax, c.taylor.std_predicted);
        rmax = std::max(rmax, c.taylor.std_observed);
    }
    if (rmax <= 0.0) rmax = 1.0;
    rmax *= 1.1;
    const double ox = margin, oy = size - margin;  // polar origin, bottom left
    const double scale = plot / rmax;

    SvgDocument svg(size, size);
    svg.line(ox, oy, ox + plot, oy, "#000000");
    svg.line(ox, oy, ox, oy - plot, "#000000");

    const double step = nice_step(rmax / 4.0);
    for (double r = step; r <= rmax; r += step) {
        svg.arc(ox, oy, r * scale, 0.0, std::numbers::pi / 2.0, "#cccccc");
        svg.text(ox + r * scale, oy + 16.0, tick_label(r), 10.0, "middle");
    }
    for (double c : {0.2, 0.4, 0.6, 0.8, 0.9, 0.95, 0.99}) {
        const double a = std::acos(c);
        svg.line(ox, oy, ox + rmax * scale * std::cos(a), oy - rmax * scale * std::sin(a),
                 "#dddddd", 1.0, "2,3");
        svg.text(ox + (rmax * scale + 12.0) * std::cos(a), oy - (rmax * scale + 12.0) * std::sin(a),
                 tick_label(c), 10.0, "middle");
    }
    svg.text(ox + plot / 2.0, oy + 40.0, "standard deviation (m/s)", 12.0, "middle");
    svg.text(ox + plot * 0.75, oy - plot * 0.85, "correlation", 12.0, "middle");

    double legend_y = margin;
    if (!rep.champions.empty()) {
        const double r_obs = rep.champions.front().taylor.std_observed * scale;
        svg.arc(ox, oy, r_obs, 0.0, std::numbers::pi / 2.0, "#888888", 1.0, "6,4");
        svg.circle(ox + r_obs, oy, 5.0, "#000000");
        svg.text(ox + r_obs, oy - 10.0, "observed", 10.0, "middle");
    }
    for (const ChampionResult& c : rep.champions) {
        const double a = std::acos(std::clamp(c.taylor.cc, -1.0, 1.0));
        const double r = c.taylor.std_predicted * scale;
        svg.circle(ox + r * std::cos(a), oy - r * std::sin(a), 5.0, family_color(c.family));
        svg.circle(size - margin - 150.0, legend_y, 5.0, family_color(c.family));
        svg.text(size - margin - 138.0, legend_y + 4.0, std::string(to_string(c.family)), 11.0);
        legend_y += 18.0;
    }
    svg.text(size / 2.0, 24.0, "Taylor diagram, test phase", 14.0, "middle");
    return svg.str();
}

}  // namespace harness_detail

// Per champion: scatter/deviation/taylor CSVs and a scatter SVG, plus one
// Taylor diagram over all champions.
inline void emit_plots(const GridReport& rep, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    using detail::format_double;

    for (const ChampionResult& c : rep.champions) {
        const std::string fam(to_string(c.family));

        std::string scatter = "observed_ms,predicted_ms\n";
        for (std::size_t i = 0; i < c.pairs.observed.size(); ++i) {
            scatter += format_double(c.pairs.observed[i]) + "," +
                       format_double(c.pairs.predicted[i]) + "\n";
        }
        harness_detail::write_file(out_dir / ("scatter_" + fam + ".csv"), scatter);

        std::string deviation = "index,deviation_ms\n";
        for (const auto& [index, delta] : deviation_series(c.pairs)) {
            deviation += std::to_string(index) + "," + format_double(delta) + "\n";
        }
        harness_detail::write_file(out_dir / ("deviation_" + fam + ".csv"), deviation);

        std::string taylor = "std_observed,std_predicted,cc\n";
        taylor += format_double(c.taylor.std_observed) + "," +
                  format_double(c.taylor.std_predicted) + "," + format_double(c.taylor.cc) + "\n";
        harness_detail::write_file(out_dir / ("taylor_" + fam + ".csv"), taylor);

        harness_detail::write_file(out_dir / ("scatter_" + fam + ".svg"),
                                   harness_detail::render_scatter_svg(c));
    }
    harness_detail::write_file(out_dir / "taylor.svg", harness_detail::render_taylor_svg(rep));
}

}  // namespace airdemand
