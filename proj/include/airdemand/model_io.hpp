#pragma once

// JSON persistence for trained models: architecture, flat parameter vector,
// the normalizer it was trained with, and the training metadata (seeds,
// optimizer, convergence trace). Doubles are written in shortest round-trip
// form, so save/load is lossless.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "airdemand/anfis.hpp"
#include "airdemand/ann.hpp"
#include "airdemand/dataset.hpp"

namespace airdemand {

enum class ModelKind { Ann, Anfis };

inline constexpr std::string_view to_string(ModelKind k) {
    return k == ModelKind::Ann ? "ann" : "anfis";
}

struct ModelArtifact {
    ModelKind kind = ModelKind::Ann;
    AnnConfig ann{};      // used when kind == Ann
    AnfisConfig anfis{};  // used when kind == Anfis
    std::vector<double> params;
    Normalizer norm;

    // training metadata
    std::string family;  // "ANN-GA", "ANN-PSO", "ANFIS-PSO"
    std::string optimizer;  // "ga" | "pso"
    std::uint64_t optimizer_seed = 0;
    std::uint64_t split_seed = 0;
    double train_fraction = 0.0;
    std::string dataset_tag;
    double initial_best_fitness = 0.0;
    double best_fitness = 0.0;
    std::size_t evaluations = 0;
    std::vector<double> trace;
};

inline std::vector<double> predict(const ModelArtifact& m, const Dataset& d) {
    if (m.kind == ModelKind::Ann) return predict_batch(m.ann, m.params, d, m.norm);
    return predict_batch(m.anfis, m.params, d, m.norm);
}

namespace model_io_detail {

inline nlohmann::json range_json(const Normalizer::Range& r) {
    return nlohmann::json::array({r.min, r.max});
}

inline Normalizer::Range range_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw std::runtime_error("normalizer range must be [min, max]");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace model_io_detail

inline nlohmann::json to_json(const ModelArtifact& m) {
    nlohmann::json j;
    j["kind"] = std::string(to_string(m.kind));
    if (m.kind == ModelKind::Ann) {
        j["ann"] = {{"hidden_neurons", m.ann.hidden_neurons}};
    } else {
        j["anfis"] = {{"mf_type", std::string(to_string(m.anfis.mf_type))}};
    }
    j["params"] = m.params;
    j["normalizer"] = {
        {"flow", model_io_detail::range_json(m.norm.flow_range())},
        {"opening", model_io_detail::range_json(m.norm.opening_range())},
        {"air_velocity", model_io_detail::range_json(m.norm.air_velocity_range())},
    };
    j["meta"] = {
        {"family", m.family},
        {"optimizer", m.optimizer},
        {"optimizer_seed", m.optimizer_seed},
        {"split_seed", m.split_seed},
        {"train_fraction", m.train_fraction},
        {"dataset_tag", m.dataset_tag},
        {"initial_best_fitness", m.initial_best_fitness},
        {"best_fitness", m.best_fitness},
        {"evaluations", m.evaluations},
        {"trace", m.trace},
    };
    return j;
}

inline ModelArtifact model_from_json(const nlohmann::json& j) {
    ModelArtifact m;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "ann") {
        m.kind = ModelKind::Ann;
        m.ann.hidden_neurons = j.at("ann").at("hidden_neurons").get<int>();
        validate(m.ann);
    } else if (kind == "anfis") {
        m.kind = ModelKind::Anfis;
        m.anfis.mf_type = mf_type_from_string(j.at("anfis").at("mf_type").get<std::string>());
    } else {
        throw std::runtime_error("unknown model kind '" + kind + "'");
    }
    m.params = j.at("params").get<std::vector<double>>();
    const std::size_t expected =
        m.kind == ModelKind::Ann ? param_count(m.ann) : param_count(m.anfis);
    if (m.params.size() != expected)
        throw std::runtime_error("model parameter vector has length " +
                                 std::to_string(m.params.size()) + ", expected " +
                                 std::to_string(expected));
    const auto& n = j.at("normalizer");
    m.norm = Normalizer::from_ranges(model_io_detail::range_from_json(n.at("flow")),
                                     model_io_detail::range_from_json(n.at("opening")),
                                     model_io_detail::range_from_json(n.at("air_velocity")));
    const auto& meta = j.at("meta");
    m.family = meta.at("family").get<std::string>();
    m.optimizer = meta.at("optimizer").get<std::string>();
    m.optimizer_seed = meta.at("optimizer_seed").get<std::uint64_t>();
    m.split_seed = meta.at("split_seed").get<std::uint64_t>();
    m.train_fraction = meta.at("train_fraction").get<double>();
    m.dataset_tag = meta.at("dataset_tag").get<std::string>();
    m.initial_best_fitness = meta.at("initial_best_fitness").get<double>();
    m.best_fitness = meta.at("best_fitness").get<double>();
    m.evaluations = meta.at("evaluations").get<std::size_t>();
    m.trace = meta.at("trace").get<std::vector<double>>();
    return m;
}

inline void save_model(const ModelArtifact& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model file: " + path.string());
    out << to_json(m).dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline ModelArtifact load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("invalid model file " + path.string() + ": " + e.what());
    }
    return model_from_json(j);
}

}  // namespace airdemand
