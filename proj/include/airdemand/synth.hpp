#pragma once

// Synthetic dataset generation from Kalinske's air-demand relation
// beta = Q_air/Q_water = 0.0066 (Fr - 1)^1.4, driven by the operating
// envelope of a dam's bottom-outlet gate.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "airdemand/dataset.hpp"
#include "airdemand/detail/rng.hpp"

namespace airdemand {

// Operating envelope of one dam's bottom outlet. The exit cross section at a
// given opening is gate_height * gate_width * (opening / 100); head and
// downstream length are descriptive and unused by the generator.
struct DamSpec {
    std::string name;
    double q_min = 0.0;  // water volume rate bounds, m^3/s
    double q_max = 0.0;
    std::optional<double> head_max;  // maximum water head, m
    double gate_height = 0.0;        // gate section H, m
    double gate_width = 0.0;         // gate section W, m
    std::optional<double> downstream_min;  // downstream length L, m (range when it
    std::optional<double> downstream_max;  // varies with operating condition)
    double opening_min = 0.0;  // gate opening bounds, percent
    double opening_max = 0.0;
    double g = 9.81;  // gravitational acceleration, m/s^2
};

inline void validate(const DamSpec& s) {
    for (double v : {s.q_min, s.q_max, s.gate_height, s.gate_width, s.opening_min, s.opening_max,
                     s.g, s.head_max.value_or(0.0), s.downstream_min.value_or(0.0),
                     s.downstream_max.value_or(0.0)}) {
        if (!std::isfinite(v))
            throw std::invalid_argument("dam '" + s.name + "': non-finite field");
    }
    if (!(s.q_max > s.q_min && s.q_min > 0.0))
        throw std::invalid_argument("dam '" + s.name + "': require q_max > q_min > 0");
    if (!(s.gate_height > 0.0 && s.gate_width > 0.0))
        throw std::invalid_argument("dam '" + s.name + "': gate dimensions must be > 0");
    if (!(s.opening_min > 0.0 && s.opening_min <= s.opening_max && s.opening_max <= 100.0))
        throw std::invalid_argument("dam '" + s.name +
                                    "': require 0 < opening_min <= opening_max <= 100");
    if (!(s.g > 0.0)) throw std::invalid_argument("dam '" + s.name + "': g must be > 0");
}

struct SynthConfig {
    std::size_t n = 110;     // sample count
    double noise_rel = 0.0;  // relative Gaussian noise sigma on the target
    std::uint64_t seed = 0;
};

inline void validate(const SynthConfig& c) {
    if (c.n < 1) throw std::invalid_argument("synth sample count must be >= 1");
    if (!(c.noise_rel >= 0.0) || !std::isfinite(c.noise_rel))
        throw std::invalid_argument("noise_rel must be finite and >= 0");
}

// Air/water volume ratio at a hydraulic jump in a closed conduit. Entrainment
// vanishes at and below the incipient-jump Froude number, so Fr <= 1 maps to
// zero rather than an error.
inline double kalinske_beta(double fr) {
    if (!std::isfinite(fr)) throw std::invalid_argument("Froude number must be finite");
    if (fr <= 1.0) return 0.0;
    return 0.0066 * std::pow(fr - 1.0, 1.4);
}

// Froude number of the contracted jet at the gate, using the contracted
// opening as hydraulic depth: y = gate_height * opening/100,
// V = q / (gate_width * y), Fr = V / sqrt(g * y).
inline double froude_at_gate(double q, const DamSpec& spec, double opening) {
    validate(spec);
    if (!(q > 0.0) || !std::isfinite(q))
        throw std::invalid_argument("water volume rate must be > 0");
    if (!(opening >= spec.opening_min && opening <= spec.opening_max))
        throw std::invalid_argument("opening " + detail::format_double(opening) +
                                    " outside dam '" + spec.name + "' bounds [" +
                                    detail::format_double(spec.opening_min) + ", " +
                                    detail::format_double(spec.opening_max) + "]");
    const double y = spec.gate_height * (opening / 100.0);
    const double v = q / (spec.gate_width * y);
    return v / std::sqrt(spec.g * y);
}

// Nominal vent cross section used to express the entrained air volume rate as
// an air velocity. Any constant area gives the same learning problem up to
// scale; the value is echoed in the dataset's source tag.
inline constexpr double kVentArea = 0.25;  // m^2

// Draws (flow, opening) uniformly over the envelope rectangle and sets the
// target to beta(Fr) * flow / kVentArea, optionally perturbed by relative
// Gaussian noise. Deterministic under cfg.seed; noisy negatives clamp to 0.
inline Dataset generate(const DamSpec& spec, const SynthConfig& cfg) {
    validate(spec);
    validate(cfg);
    detail::Rng rng(cfg.seed);
    Dataset d;
    d.source_tag = "synth:" + spec.name + ":n=" + std::to_string(cfg.n) +
                   ":seed=" + std::to_string(cfg.seed) +
                   ":noise_rel=" + detail::format_double(cfg.noise_rel) +
                   ":vent_area=" + detail::format_double(kVentArea);
    d.samples.reserve(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        Sample s;
        s.flow = rng.uniform(spec.q_min, spec.q_max);
        s.opening = rng.uniform(spec.opening_min, spec.opening_max);
        const double fr = froude_at_gate(s.flow, spec, s.opening);
        double v_air = kalinske_beta(fr) * s.flow / kVentArea;
        v_air *= 1.0 + cfg.noise_rel * rng.gaussian();
        s.air_velocity = std::max(v_air, 0.0);
        validate_sample(s);
        d.samples.push_back(s);
    }
    return d;
}

// Built-in envelopes for the six dams. Missing head values are recorded as
// absent; Safarood's downstream length varies with operating condition and is
// kept as a range.
inline const std::vector<DamSpec>& dam_presets() {
    static const std::vector<DamSpec> presets = {
        {"safarood", 8.7, 48.2, 59.4, 1.47, 1.19, 12.0, 60.0, 20.0, 100.0, 9.81},
        {"balarood", 2.2, 44.8, 69.0, 1.39, 1.17, 40.0, 40.0, 10.0, 100.0, 9.81},
        {"sardasht", 14.1, 225.0, 95.2, 2.80, 2.23, 60.0, 60.0, 10.0, 100.0, 9.81},
        {"silve", 4.6, 96.3, 56.4, 2.00, 1.89, 40.0, 40.0, 10.0, 100.0, 9.81},
        {"talvar", 15.1, 179.4, std::nullopt, 3.12, 2.14, 60.0, 60.0, 10.0, 100.0, 9.81},
        {"kucheri", 27.7, 243.2, std::nullopt, 2.79, 2.29, 30.0, 30.0, 10.0, 100.0, 9.81},
    };
    return presets;
}

inline const DamSpec& dam_preset(std::string_view name) {
    std::string lowered(name);
    for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (const DamSpec& s : dam_presets()) {
        if (s.name == lowered) return s;
    }
    std::string known;
    for (const DamSpec& s : dam_presets()) {
        if (!known.empty()) known += ", ";
        known += s.name;
    }
    throw std::invalid_argument("unknown dam preset '" + std::string(name) + "'; known: " + known);
}

}  // namespace airdemand
