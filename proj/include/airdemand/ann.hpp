#pragma once

// A 2-input, single-hidden-layer, 1-output feedforward network evaluated as a
// pure function of a flat parameter vector, so population optimizers can
// train it without gradient machinery. Hidden units are tanh, the output is
// linear.
//
// Parameter layout, length 4H + 1:
//   [0, 2H)        input->hidden weights, neuron-major: w[2j] scales flow,
//                  w[2j + 1] scales opening for hidden unit j
//   [2H, 3H)       hidden biases
//   [3H, 4H)       hidden->output weights
//   [4H]           output bias

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "airdemand/dataset.hpp"

namespace airdemand {

struct AnnConfig {
    int hidden_neurons = 8;  // swept over {8, 12, 16}; any count >= 1 accepted
    static constexpr int input_dim = 2;
    static constexpr int output_dim = 1;
};

inline void validate(const AnnConfig& cfg) {
    if (cfg.hidden_neurons < 1)
        throw std::invalid_argument("hidden_neurons must be >= 1, got " +
                                    std::to_string(cfg.hidden_neurons));
}

inline std::size_t param_count(const AnnConfig& cfg) {
    validate(cfg);
    return 4 * static_cast<std::size_t>(cfg.hidden_neurons) + 1;
}

namespace ann_detail {

inline void check_length(const AnnConfig& cfg, std::span<const double> params) {
    const std::size_t expected = param_count(cfg);
    if (params.size() != expected)
        throw std::invalid_argument("ann parameter vector has length " +
                                    std::to_string(params.size()) + ", expected " +
                                    std::to_string(expected));
}

}  // namespace ann_detail

inline double forward(const AnnConfig& cfg, std::span<const double> params, double x1, double x2) {
    ann_detail::check_length(cfg, params);
    const auto h = static_cast<std::size_t>(cfg.hidden_neurons);
    const double* w_in = params.data();
    const double* b_hidden = params.data() + 2 * h;
    const double* w_out = params.data() + 3 * h;
    const double b_out = params[4 * h];

    double y = b_out;
    for (std::size_t j = 0; j < h; ++j) {
        y += w_out[j] * std::tanh(b_hidden[j] + w_in[2 * j] * x1 + w_in[2 * j + 1] * x2);
    }
    return y;
}

// Normalizes the features, runs the network per sample and maps the output
// back to m/s through the target column's range. Order preserved.
inline std::vector<double> predict_batch(const AnnConfig& cfg, std::span<const double> params,
                                         const Dataset& d, const Normalizer& norm) {
    ann_detail::check_length(cfg, params);
    if (!norm.fitted()) throw std::logic_error("predict_batch requires a fitted normalizer");
    std::vector<double> out;
    out.reserve(d.samples.size());
    for (const Sample& s : d.samples) {
        const double y = forward(cfg, params, norm.normalize_flow(s.flow),
                                 norm.normalize_opening(s.opening));
        out.push_back(norm.denormalize_air_velocity(y));
    }
    return out;
}

}  // namespace airdemand
