#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "airdemand/cli.hpp"
#include "airdemand/harness.hpp"

using namespace airdemand;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("airdemand_harness_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// Small grid that runs in well under a second. The iteration budget is large
// enough for the ANFIS swarm to leave the zero-consequent seed, whose constant
// predictions have no defined correlation.
ExperimentConfig tiny_config(const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.synth = {48, 0.0, 5};
    cfg.max_iters = 60;
    cfg.grid.neurons = {2, 3};
    cfg.grid.mf_types = {MfType::Triangular};
    cfg.grid.pop_sizes = {10};
    cfg.master_seed = 3;
    cfg.output_dir = out_dir;
    return cfg;
}

MetricRow row(const std::string& hyper, int pop, double rmse_v, double cc_v, double si_v) {
    MetricRow r;
    r.family = "ANN-GA";
    r.hyper = hyper;
    r.pop_size = pop;
    r.rmse = rmse_v;
    r.mse = rmse_v * rmse_v;
    r.cc = cc_v;
    r.si = si_v;
    return r;
}

}  // namespace

TEST_CASE("select_champion picks the published training winner") {
    // the nine ANN-GA training rows
    const std::vector<MetricRow> rows = {
        row("8", 50, 5.958, 0.581, 0.495),  row("12", 50, 5.835, 0.604, 0.490),
        row("16", 50, 5.938, 0.609, 0.522), row("8", 100, 6.146, 0.554, 0.480),
        row("12", 100, 7.595, 0.466, 0.593), row("16", 100, 6.250, 0.524, 0.525),
        row("8", 150, 6.459, 0.485, 0.555), row("12", 150, 5.898, 0.599, 0.486),
        row("16", 150, 6.333, 0.511, 0.522),
    };
    const std::size_t champ = select_champion(rows);
    CHECK(rows[champ].hyper == "12");
    CHECK(rows[champ].pop_size == 50);
    CHECK(rows[champ].rmse == 5.835);
}

TEST_CASE("select_champion tie-breaks") {
    CHECK(select_champion({row("8", 50, 1.0, 0.5, 0.4)}) == 0);

    // equal RMSE: higher CC wins
    CHECK(select_champion({row("8", 50, 1.0, 0.5, 0.4), row("12", 50, 1.0, 0.6, 0.4)}) == 1);
    // equal RMSE and CC: lower SI wins
    CHECK(select_champion({row("8", 50, 1.0, 0.5, 0.4), row("12", 50, 1.0, 0.5, 0.3)}) == 1);
    // full tie: first in grid order wins
    CHECK(select_champion({row("8", 50, 1.0, 0.5, 0.4), row("12", 50, 1.0, 0.5, 0.4)}) == 0);

    CHECK_THROWS_AS(select_champion({}), std::invalid_argument);
}

TEST_CASE("cell seeds differ across the grid and are stable") {
    std::set<std::uint64_t> seeds;
    for (Family f : kFamilies) {
        for (const std::string hyper : {"8", "12", "triangular"}) {
            for (int pop : {50, 100, 150}) {
                seeds.insert(cell_seed(1, f, hyper, pop));
            }
        }
    }
    CHECK(seeds.size() == 27);
    CHECK(cell_seed(1, Family::AnnGa, "8", 50) == cell_seed(1, Family::AnnGa, "8", 50));
    CHECK(cell_seed(1, Family::AnnGa, "8", 50) != cell_seed(2, Family::AnnGa, "8", 50));
}

TEST_CASE("run_grid covers every cell and selects champions per family") {
    const fs::path out = fresh_dir("grid");
    const ExperimentConfig cfg = tiny_config(out.string());
    const GridReport rep = run_grid(cfg);

    // 2 neuron counts x 1 pop for each ANN family, 1 mf x 1 pop for anfis
    REQUIRE(rep.cells.size() == 5);
    std::map<std::string, int> per_family;
    for (const CellResult& c : rep.cells) {
        CHECK(c.ok);
        per_family[std::string(to_string(c.family))]++;
        CHECK(c.evaluations > 0);
        CHECK(c.trace.size() == 60);
    }
    CHECK(per_family["ANN-GA"] == 2);
    CHECK(per_family["ANN-PSO"] == 2);
    CHECK(per_family["ANFIS-PSO"] == 1);

    // every cell appears exactly once with its hyperparameters echoed
    std::set<std::string> identities;
    for (const CellResult& c : rep.cells) {
        identities.insert(std::string(to_string(c.family)) + "/" + c.hyper + "/" +
                          std::to_string(c.pop_size));
    }
    CHECK(identities.size() == rep.cells.size());

    REQUIRE(rep.champions.size() == 3);
    for (const ChampionResult& champ : rep.champions) {
        // champion optimality within its family
        for (const CellResult& c : rep.cells) {
            if (c.family == champ.family && c.ok) {
                CHECK(rep.cells[champ.cell_index].train.rmse <= c.train.rmse);
            }
        }
        CHECK(champ.pairs.observed.size() == rep.n_test);
        CHECK(champ.pairs.predicted.size() == rep.n_test);
    }

    CHECK(rep.n_train + rep.n_test == rep.n_total);
    CHECK(rep.n_train == 34);  // round(0.7 * 48)
}

TEST_CASE("run_grid records failing cells without aborting siblings") {
    ExperimentConfig cfg = tiny_config(fresh_dir("gridfail").string());
    cfg.grid.neurons = {0, 2};  // zero neurons is invalid
    const GridReport rep = run_grid(cfg);
    REQUIRE(rep.cells.size() == 5);
    int failed = 0, ok = 0;
    for (const CellResult& c : rep.cells) {
        if (c.ok) {
            ++ok;
        } else {
            ++failed;
            CHECK(c.hyper == "0");
            CHECK_FALSE(c.error.empty());
        }
    }
    CHECK(failed == 2);  // one per ANN family
    CHECK(ok == 3);
    CHECK(rep.champions.size() == 3);  // every family still has a champion
}

TEST_CASE("emit_report and emit_plots write the documented files") {
    const fs::path out = fresh_dir("emit");
    const ExperimentConfig cfg = tiny_config(out.string());
    const GridReport rep = run_grid(cfg);
    emit_report(rep, out);
    emit_plots(rep, out);

    for (const char* name :
         {"report_train.csv", "report_test.csv", "manifest.json", "taylor.svg",
          "scatter_ANN-GA.csv", "scatter_ANN-PSO.csv", "scatter_ANFIS-PSO.csv",
          "deviation_ANN-GA.csv", "taylor_ANN-GA.csv", "scatter_ANN-GA.svg"}) {
        INFO(name);
        CHECK(fs::exists(out / name));
    }

    const std::string train_csv = slurp(out / "report_train.csv");
    CHECK(train_csv.starts_with("family,neurons_or_mftype,pop_size,rmse,cc,si\n"));
    CHECK(std::count(train_csv.begin(), train_csv.end(), '\n') == 6);  // header + 5 cells
    CHECK(train_csv.find('\r') == std::string::npos);

    const std::string test_csv = slurp(out / "report_test.csv");
    CHECK(test_csv.starts_with("family,rmse,cc,si\n"));
    CHECK(std::count(test_csv.begin(), test_csv.end(), '\n') == 4);  // header + 3 champions

    // deviation row count matches the test partition
    const std::string dev = slurp(out / "deviation_ANN-GA.csv");
    CHECK(std::count(dev.begin(), dev.end(), '\n') == 1 + static_cast<long>(rep.n_test));
}

TEST_CASE("taylor csv reproduces taylor_stats exactly") {
    const fs::path out = fresh_dir("taylorcsv");
    const ExperimentConfig cfg = tiny_config(out.string());
    const GridReport rep = run_grid(cfg);
    emit_plots(rep, out);
    for (const ChampionResult& c : rep.champions) {
        const TaylorStats expected = taylor_stats(c.pairs);
        const std::string content =
            slurp(out / ("taylor_" + std::string(to_string(c.family)) + ".csv"));
        const std::string expected_row = detail::format_double(expected.std_observed) + "," +
                                         detail::format_double(expected.std_predicted) + "," +
                                         detail::format_double(expected.cc) + "\n";
        CHECK(content == "std_observed,std_predicted,cc\n" + expected_row);
    }
}

TEST_CASE("identical configs give byte-identical artifacts") {
    const fs::path out1 = fresh_dir("det1");
    const fs::path out2 = fresh_dir("det2");
    ExperimentConfig cfg = tiny_config(out1.string());
    const GridReport rep1 = run_grid(cfg);
    emit_report(rep1, out1);
    emit_plots(rep1, out1);
    cfg.output_dir = out2.string();
    const GridReport rep2 = run_grid(cfg);
    emit_report(rep2, out2);
    emit_plots(rep2, out2);

    for (const auto& entry : fs::directory_iterator(out1)) {
        const fs::path other = out2 / entry.path().filename();
        INFO(entry.path().filename().string());
        REQUIRE(fs::exists(other));
        CHECK(slurp(entry.path()) == slurp(other));
    }
}

TEST_CASE("manifest round-trips through report_from_manifest") {
    const fs::path out = fresh_dir("manifest");
    const ExperimentConfig cfg = tiny_config(out.string());
    const GridReport rep = run_grid(cfg);
    emit_report(rep, out);
    emit_plots(rep, out);

    const GridReport back = report_from_manifest(out / "manifest.json");
    const fs::path out2 = fresh_dir("manifest2");
    emit_report(back, out2);
    emit_plots(back, out2);
    for (const char* name : {"report_train.csv", "report_test.csv", "manifest.json", "taylor.svg",
                             "scatter_ANN-PSO.svg"}) {
        INFO(name);
        CHECK(slurp(out / name) == slurp(out2 / name));
    }
}

TEST_CASE("experiment configuration parses sections, defaults and overrides") {
    const ConfigFile f = ConfigFile::parse(
        "# comment\n"
        "[synth]\n"
        "dam = balarood\n"
        "n = 65\n"
        "seed = 17   # inline comment\n"
        "[split]\n"
        "train_fraction = 0.8\n"
        "[optimize]\n"
        "iters = 12\n"
        "ga_mutation_rate = 0.25\n"
        "[grid]\n"
        "neurons = \"4,6\"\n"
        "pop_sizes = 10\n"
        "mf_types = gaussian\n"
        "out = \"results\"\n");
    const ExperimentConfig cfg = experiment_from_config(f);
    CHECK(cfg.dam.name == "balarood");
    CHECK(cfg.synth.n == 65);
    CHECK(cfg.synth.seed == 17);
    CHECK(cfg.train_fraction == 0.8);
    CHECK(cfg.split_seed == 7);  // untouched default
    CHECK(cfg.max_iters == 12);
    REQUIRE(cfg.ga_mutation_rate.has_value());
    CHECK(*cfg.ga_mutation_rate == 0.25);
    CHECK(cfg.grid.neurons == std::vector<int>{4, 6});
    CHECK(cfg.grid.pop_sizes == std::vector<int>{10});
    REQUIRE(cfg.grid.mf_types.size() == 1);
    CHECK(cfg.grid.mf_types[0] == MfType::Gaussian);
    CHECK(cfg.output_dir == "results");

    CHECK(experiment_from_config(ConfigFile::parse("")).synth.n == 110);
    CHECK(experiment_from_config(ConfigFile::parse("")).grid.neurons ==
          std::vector<int>{8, 12, 16});
}

TEST_CASE("custom dam section overrides the preset") {
    const ConfigFile f = ConfigFile::parse(
        "[dam]\n"
        "name = testdam\n"
        "q_min = 1\n"
        "q_max = 9\n"
        "gate_height = 1.5\n"
        "gate_width = 1.1\n"
        "opening_min = 15\n"
        "opening_max = 95\n"
        "head_max = 33\n");
    const ExperimentConfig cfg = experiment_from_config(f);
    CHECK(cfg.dam.name == "testdam");
    CHECK(cfg.dam.q_max == 9.0);
    REQUIRE(cfg.dam.head_max.has_value());
    CHECK(*cfg.dam.head_max == 33.0);

    CHECK_THROWS_AS(experiment_from_config(ConfigFile::parse("[dam]\nq_min = 5\n")),
                    std::invalid_argument);
    CHECK_THROWS_AS(experiment_from_config(ConfigFile::parse("[synth]\ndam = unknown\n")),
                    std::invalid_argument);
}

TEST_CASE("config file parse errors carry line numbers") {
    CHECK_THROWS_WITH(ConfigFile::parse("[synth\n"), Catch::Matchers::ContainsSubstring(":1"));
    CHECK_THROWS_WITH(ConfigFile::parse("[a]\nvalue\n"), Catch::Matchers::ContainsSubstring(":2"));
    CHECK_THROWS_WITH(ConfigFile::parse("[a]\n= 3\n"),
                      Catch::Matchers::ContainsSubstring("empty key"));
    CHECK_THROWS_WITH(ConfigFile::parse("[synth]\nn = ten\n").get_int("synth", "n", 0),
                      Catch::Matchers::ContainsSubstring("integer"));
}

TEST_CASE("cli synth writes a dataset inside the requested envelope") {
    const fs::path out = fresh_dir("cli_synth") / "data.csv";
    const int rc = cli_main({"airdemand", "synth", "--dam", "safarood", "--n", "110", "--synth-seed",
                             "7", "--out", out.string()});
    REQUIRE(rc == 0);
    const Dataset d = load_csv(out);
    REQUIRE(d.size() == 110);
    for (const Sample& s : d.samples) {
        CHECK(s.flow >= 8.7);
        CHECK(s.flow <= 48.2);
        CHECK(s.opening >= 20.0);
        CHECK(s.opening <= 100.0);
    }
}

TEST_CASE("cli rejects unknown subcommands and missing files") {
    CHECK(cli_main({"airdemand", "frobnicate"}) != 0);
    CHECK(cli_main({"airdemand"}) != 0);
    const int rc = cli_main({"airdemand", "grid", "--data", "/nonexistent/path.csv", "--out",
                             fresh_dir("cli_missing").string()});
    CHECK(rc != 0);
}

TEST_CASE("cli train, eval and plot round trip") {
    const fs::path dir = fresh_dir("cli_roundtrip");
    const fs::path data = dir / "data.csv";
    const fs::path model = dir / "model.json";
    const fs::path trace = dir / "trace.csv";

    REQUIRE(cli_main({"airdemand", "synth", "--dam", "balarood", "--n", "40", "--synth-seed", "3",
                      "--out", data.string()}) == 0);
    REQUIRE(cli_main({"airdemand", "train", "--family", "ann-pso", "--neurons", "3", "--pop", "8",
                      "--iters", "5", "--data", data.string(), "--out", model.string(),
                      "--trace-csv", trace.string()}) == 0);

    const ModelArtifact m = load_model(model);
    CHECK(m.kind == ModelKind::Ann);
    CHECK(m.ann.hidden_neurons == 3);
    CHECK(m.params.size() == param_count(AnnConfig{3}));
    CHECK(m.trace.size() == 5);
    CHECK(m.optimizer == "pso");

    const std::string trace_csv = slurp(trace);
    CHECK(trace_csv.starts_with("iteration,best_fitness\n"));
    CHECK(std::count(trace_csv.begin(), trace_csv.end(), '\n') == 6);

    CHECK(cli_main({"airdemand", "eval", "--model", model.string(), "--data", data.string()}) == 0);

    // anfis family persists and reloads too
    const fs::path anfis_model = dir / "anfis.json";
    REQUIRE(cli_main({"airdemand", "train", "--family", "anfis-pso", "--mf-type", "gaussian",
                      "--pop", "10", "--iters", "100", "--data", data.string(), "--out",
                      anfis_model.string()}) == 0);
    const ModelArtifact a = load_model(anfis_model);
    CHECK(a.kind == ModelKind::Anfis);
    CHECK(a.anfis.mf_type == MfType::Gaussian);
    CHECK(a.params.size() == 175);

    // model artifacts round-trip exactly
    const fs::path copy = dir / "copy.json";
    save_model(a, copy);
    const ModelArtifact b = load_model(copy);
    CHECK(b.params == a.params);
    CHECK(b.norm.flow_range() == a.norm.flow_range());
    CHECK(b.trace == a.trace);
}

TEST_CASE("cli grid and plot re-emission are byte-identical") {
    const fs::path dir = fresh_dir("cli_grid");
    const fs::path cfg_path = dir / "exp.conf";
    {
        std::ofstream out(cfg_path, std::ios::binary);
        out << "[synth]\ndam = safarood\nn = 40\nseed = 5\n"
            << "[optimize]\niters = 100\n"
            << "[grid]\nneurons = 2\npop_sizes = 10\nmf_types = triangular\nseed = 11\n";
    }
    const fs::path out1 = dir / "out1";
    REQUIRE(cli_main({"airdemand", "grid", "--config", cfg_path.string(), "--out",
                      out1.string()}) == 0);
    REQUIRE(fs::exists(out1 / "manifest.json"));

    // re-emit the plots elsewhere from the stored manifest
    const fs::path out2 = dir / "out2";
    REQUIRE(cli_main({"airdemand", "plot", "--manifest", (out1 / "manifest.json").string(),
                      "--out", out2.string()}) == 0);
    for (const char* name : {"taylor.svg", "scatter_ANN-GA.csv", "scatter_ANN-GA.svg",
                             "deviation_ANFIS-PSO.csv", "taylor_ANN-PSO.csv"}) {
        INFO(name);
        REQUIRE(fs::exists(out2 / name));
        CHECK(slurp(out1 / name) == slurp(out2 / name));
    }
}
