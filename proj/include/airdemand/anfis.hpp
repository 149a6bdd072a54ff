#pragma once

// Grid-partition first-order Takagi-Sugeno fuzzy system: 2 inputs, 7
// membership functions per input, the full 7x7 = 49 rule grid in row-major
// order, and linear consequents f_k = p_k*x1 + q_k*x2 + r_k. Rule firing
// strengths use the product t-norm and are normalized to sum to 1; when every
// rule fires at exactly zero the weights fall back to uniform 1/49 so the
// output stays defined wherever a swarm wanders.
//
// Flat parameter layout:
//   premise block    per input (2), per MF (7), the MF's parameters
//                    Triangular (a, b, c)   a <= b <= c
//                    GBell      (a, b, c)   width a > 0, exponent b > 0, center c
//                    Gaussian   (sigma, c)  sigma > 0
//   consequent block per rule k = i*7 + j, the triple (p, q, r)
//
// decode() repairs arbitrary vectors into valid models: widths are clamped
// positive, triangular triples sorted ascending, and each input's MFs ordered
// by center. encode(decode(v)) is the canonical form of v and decode is the
// identity on canonical vectors.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "airdemand/dataset.hpp"

namespace airdemand {

enum class MfType { Triangular, GBell, Gaussian };

inline constexpr std::string_view to_string(MfType t) {
    switch (t) {
        case MfType::Triangular: return "triangular";
        case MfType::GBell: return "gbell";
        case MfType::Gaussian: return "gaussian";
    }
    return "?";
}

inline MfType mf_type_from_string(std::string_view s) {
    if (s == "triangular") return MfType::Triangular;
    if (s == "gbell" || s == "g.bell" || s == "g. bell") return MfType::GBell;
    if (s == "gaussian") return MfType::Gaussian;
    throw std::invalid_argument("unknown membership function type '" + std::string(s) +
                                "'; known: triangular, gbell, gaussian");
}

inline constexpr std::size_t mf_arity(MfType t) { return t == MfType::Gaussian ? 2 : 3; }

struct AnfisConfig {
    MfType mf_type = MfType::Triangular;
    static constexpr std::size_t mfs_per_input = 7;
    static constexpr std::size_t input_dim = 2;
    static constexpr std::size_t rule_count = mfs_per_input * mfs_per_input;
};

inline std::size_t param_count(const AnfisConfig& cfg) {
    return AnfisConfig::input_dim * AnfisConfig::mfs_per_input * mf_arity(cfg.mf_type) +
           AnfisConfig::rule_count * 3;
}

// Membership degree in [0, 1]. `p` holds mf_arity(t) values.
inline double mf_eval(MfType t, std::span<const double> p, double x) {
    if (p.size() != mf_arity(t))
        throw std::invalid_argument("membership function expects " +
                                    std::to_string(mf_arity(t)) + " parameters, got " +
                                    std::to_string(p.size()));
    for (double v : p)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite membership parameter");
    switch (t) {
        case MfType::Triangular: {
            const double a = p[0], b = p[1], c = p[2];
            if (!(a <= b && b <= c))
                throw std::invalid_argument("triangular parameters must satisfy a <= b <= c");
            if (x == b) return 1.0;  // resolves the 0/0 plateau of degenerate feet
            if (x <= a || x >= c) return 0.0;
            return x < b ? (x - a) / (b - a) : (c - x) / (c - b);
        }
        case MfType::GBell: {
            const double a = p[0], b = p[1], c = p[2];
            if (!(a > 0.0 && b > 0.0))
                throw std::invalid_argument("gbell parameters require a > 0 and b > 0");
            return 1.0 / (1.0 + std::pow(std::abs((x - c) / a), 2.0 * b));
        }
        case MfType::Gaussian: {
            const double sigma = p[0], c = p[1];
            if (!(sigma > 0.0)) throw std::invalid_argument("gaussian sigma must be > 0");
            const double d = x - c;
            return std::exp(-(d * d) / (2.0 * sigma * sigma));
        }
    }
    throw std::invalid_argument("unknown membership function type");
}

// Decoded, repaired model. premise[input][mf] stores mf_arity values.
struct AnfisModel {
    AnfisConfig cfg;
    std::array<std::array<std::array<double, 3>, AnfisConfig::mfs_per_input>,
               AnfisConfig::input_dim>
        premise{};
    std::array<std::array<double, 3>, AnfisConfig::rule_count> consequent{};
};

namespace anfis_detail {

inline constexpr double kMinWidth = 1e-6;

inline double mf_center(MfType t, const std::array<double, 3>& p) {
    return t == MfType::GBell ? p[2] : p[1];  // triangular peak b, gbell/gaussian center c
}

inline void repair_mf(MfType t, std::array<double, 3>& p) {
    switch (t) {
        case MfType::Triangular:
            std::sort(p.begin(), p.begin() + 3);
            break;
        case MfType::GBell:
            p[0] = std::max(p[0], kMinWidth);
            p[1] = std::max(p[1], kMinWidth);
            break;
        case MfType::Gaussian:
            p[0] = std::max(p[0], kMinWidth);
            break;
    }
}

inline void check_length(const AnfisConfig& cfg, std::span<const double> params) {
    const std::size_t expected = param_count(cfg);
    if (params.size() != expected)
        throw std::invalid_argument("anfis parameter vector has length " +
                                    std::to_string(params.size()) + ", expected " +
                                    std::to_string(expected));
}

}  // namespace anfis_detail

inline AnfisModel decode(const AnfisConfig& cfg, std::span<const double> params) {
    anfis_detail::check_length(cfg, params);
    for (double v : params)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite anfis parameter");

    AnfisModel m;
    m.cfg = cfg;
    const std::size_t arity = mf_arity(cfg.mf_type);
    std::size_t pos = 0;
    for (std::size_t input = 0; input < AnfisConfig::input_dim; ++input) {
        auto& mfs = m.premise[input];
        for (std::size_t mf = 0; mf < AnfisConfig::mfs_per_input; ++mf) {
            for (std::size_t k = 0; k < arity; ++k) mfs[mf][k] = params[pos++];
            anfis_detail::repair_mf(cfg.mf_type, mfs[mf]);
        }
        std::stable_sort(mfs.begin(), mfs.end(),
                         [&](const auto& lhs, const auto& rhs) {
                             return anfis_detail::mf_center(cfg.mf_type, lhs) <
                                    anfis_detail::mf_center(cfg.mf_type, rhs);
                         });
    }
    for (auto& rule : m.consequent) {
        for (std::size_t k = 0; k < 3; ++k) rule[k] = params[pos++];
    }
    return m;
}

inline std::vector<double> encode(const AnfisModel& m) {
    std::vector<double> out;
    out.reserve(param_count(m.cfg));
    const std::size_t arity = mf_arity(m.cfg.mf_type);
    for (const auto& mfs : m.premise) {
        for (const auto& mf : mfs) {
            for (std::size_t k = 0; k < arity; ++k) out.push_back(mf[k]);
        }
    }
    for (const auto& rule : m.consequent) {
        for (double v : rule) out.push_back(v);
    }
    return out;
}

// Normalized firing strengths over the 7x7 grid, row-major: rule k = i*7 + j
// pairs MF i of input 1 with MF j of input 2.
inline std::array<double, AnfisConfig::rule_count> firing_strengths(const AnfisModel& m,
                                                                    double x1, double x2) {
    std::array<double, AnfisConfig::mfs_per_input> mu1{}, mu2{};
    for (std::size_t i = 0; i < AnfisConfig::mfs_per_input; ++i) {
        mu1[i] = mf_eval(m.cfg.mf_type, std::span(m.premise[0][i]).first(mf_arity(m.cfg.mf_type)), x1);
        mu2[i] = mf_eval(m.cfg.mf_type, std::span(m.premise[1][i]).first(mf_arity(m.cfg.mf_type)), x2);
    }
    std::array<double, AnfisConfig::rule_count> w{};
    double total = 0.0;
    for (std::size_t i = 0; i < AnfisConfig::mfs_per_input; ++i) {
        for (std::size_t j = 0; j < AnfisConfig::mfs_per_input; ++j) {
            const double wk = mu1[i] * mu2[j];
            w[i * AnfisConfig::mfs_per_input + j] = wk;
            total += wk;
        }
    }
    if (total == 0.0) {
        w.fill(1.0 / static_cast<double>(AnfisConfig::rule_count));
    } else {
        for (double& wk : w) wk /= total;
    }
    return w;
}

inline std::array<double, AnfisConfig::rule_count> firing_strengths(
    const AnfisConfig& cfg, std::span<const double> params, double x1, double x2) {
    return firing_strengths(decode(cfg, params), x1, x2);
}

inline double forward(const AnfisModel& m, double x1, double x2) {
    const auto w = firing_strengths(m, x1, x2);
    double y = 0.0;
    for (std::size_t k = 0; k < AnfisConfig::rule_count; ++k) {
        y += w[k] * (m.consequent[k][0] * x1 + m.consequent[k][1] * x2 + m.consequent[k][2]);
    }
    return y;
}

inline double forward(const AnfisConfig& cfg, std::span<const double> params, double x1,
                      double x2) {
    return forward(decode(cfg, params), x1, x2);
}

// Evenly partitioned premise over [0, 1] with zero consequents; used to seed
// the swarm. Centers sit at m/6; triangular feet extend one step to the
// virtual neighbors at -1/6 and 7/6, gaussian sigma puts the half-maximum at
// the adjacent center, gbell matches with half-width 1/12 and exponent 2.
inline std::vector<double> grid_init(const AnfisConfig& cfg) {
    constexpr double step = 1.0 / 6.0;
    AnfisModel m;
    m.cfg = cfg;
    const double sigma = step / std::sqrt(2.0 * std::log(2.0));
    for (std::size_t input = 0; input < AnfisConfig::input_dim; ++input) {
        for (std::size_t mf = 0; mf < AnfisConfig::mfs_per_input; ++mf) {
            const double center = static_cast<double>(mf) * step;
            switch (cfg.mf_type) {
                case MfType::Triangular:
                    m.premise[input][mf] = {center - step, center, center + step};
                    break;
                case MfType::GBell:
                    m.premise[input][mf] = {1.0 / 12.0, 2.0, center};
                    break;
                case MfType::Gaussian:
                    m.premise[input][mf] = {sigma, center, 0.0};
                    break;
            }
        }
    }
    // consequents already zero
    return encode(m);
}

// Normalizes the features, evaluates the decoded model per sample and maps
// the output back to m/s. Order preserved.
inline std::vector<double> predict_batch(const AnfisConfig& cfg, std::span<const double> params,
                                         const Dataset& d, const Normalizer& norm) {
    if (!norm.fitted()) throw std::logic_error("predict_batch requires a fitted normalizer");
    const AnfisModel m = decode(cfg, params);
    std::vector<double> out;
    out.reserve(d.samples.size());
    for (const Sample& s : d.samples) {
        const double y =
            forward(m, norm.normalize_flow(s.flow), norm.normalize_opening(s.opening));
        out.push_back(norm.denormalize_air_velocity(y));
    }
    return out;
}

}  // namespace airdemand
