#pragma once

// Population metaheuristics over a bounded flat parameter space: a global-best
// PSO and a real-coded GA (tournament selection, BLX-0.5 crossover, Gaussian
// mutation, elitism). Both minimize an arbitrary fitness callable, are
// deterministic under their seed, and record a non-increasing best-fitness
// trace with one entry per iteration.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "airdemand/detail/rng.hpp"

namespace airdemand {

struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dims() const { return lower.size(); }
};

inline Bounds uniform_bounds(std::size_t dims, double lo, double hi) {
    return {std::vector<double>(dims, lo), std::vector<double>(dims, hi)};
}

inline void validate(const Bounds& b) {
    if (b.lower.empty() || b.lower.size() != b.upper.size())
        throw std::invalid_argument("bounds must be non-empty vectors of equal length");
    for (std::size_t d = 0; d < b.lower.size(); ++d) {
        if (!std::isfinite(b.lower[d]) || !std::isfinite(b.upper[d]) ||
            !(b.upper[d] > b.lower[d]))
            throw std::invalid_argument("bounds require finite upper > lower in every dimension");
    }
}

struct PsoConfig {
    int pop_size = 50;  // swept over {50, 100, 150}; any count >= 2 accepted
    int max_iters = 300;
    double inertia = 0.729;
    double cognitive = 1.49445;
    double social = 1.49445;
    double velocity_clamp = 0.5;  // fraction of the per-dimension bound range
    std::uint64_t seed = 0;
};

struct GaConfig {
    int pop_size = 50;
    int max_iters = 300;  // generations
    double crossover_rate = 0.9;
    std::optional<double> mutation_rate;  // per-gene probability; default 1/dims
    double mutation_scale = 0.1;          // Gaussian sigma as a fraction of the bound range
    int tournament_size = 3;
    int elitism_count = 2;
    std::uint64_t seed = 0;
};

inline void validate(const PsoConfig& c) {
    if (c.pop_size < 2) throw std::invalid_argument("pso pop_size must be >= 2");
    if (c.max_iters < 1) throw std::invalid_argument("pso max_iters must be >= 1");
    if (!(c.inertia >= 0.0 && c.inertia <= 1.0))
        throw std::invalid_argument("pso inertia must be in [0, 1]");
    if (!(c.cognitive >= 0.0) || !(c.social >= 0.0))
        throw std::invalid_argument("pso cognitive/social coefficients must be >= 0");
    if (!(c.velocity_clamp > 0.0)) throw std::invalid_argument("pso velocity_clamp must be > 0");
}

inline void validate(const GaConfig& c) {
    if (c.pop_size < 2) throw std::invalid_argument("ga pop_size must be >= 2");
    if (c.max_iters < 1) throw std::invalid_argument("ga max_iters must be >= 1");
    if (!(c.crossover_rate >= 0.0 && c.crossover_rate <= 1.0))
        throw std::invalid_argument("ga crossover_rate must be in [0, 1]");
    if (c.mutation_rate && !(*c.mutation_rate >= 0.0 && *c.mutation_rate <= 1.0))
        throw std::invalid_argument("ga mutation_rate must be in [0, 1]");
    if (!(c.mutation_scale >= 0.0)) throw std::invalid_argument("ga mutation_scale must be >= 0");
    if (c.tournament_size < 1) throw std::invalid_argument("ga tournament_size must be >= 1");
    if (c.elitism_count < 1 || c.elitism_count >= c.pop_size)
        throw std::invalid_argument("ga elitism_count must satisfy 1 <= elitism < pop_size");
}

struct OptResult {
    std::vector<double> best_position;
    double best_fitness = std::numeric_limits<double>::infinity();
    double initial_best_fitness = std::numeric_limits<double>::infinity();
    std::vector<double> trace;  // best fitness after each iteration, non-increasing
    std::size_t evaluations = 0;
    std::uint64_t seed = 0;
};

namespace opt_detail {

template <typename F>
double checked_eval(F& fitness, const std::vector<double>& x) {
    const double f = fitness(x);
    if (!std::isfinite(f)) {
        std::string pos = "[";
        for (std::size_t d = 0; d < x.size(); ++d) {
            if (d) pos += ", ";
            pos += detail::format_double(x[d]);
        }
        pos += "]";
        throw std::runtime_error("fitness returned non-finite value " + detail::format_double(f) +
                                 " at position " + pos);
    }
    return f;
}

inline double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace opt_detail

// Training-set MSE in normalized space, as a fitness over flat parameter
// vectors. `model_forward(params)` maps a parameter vector to a prediction
// function (x1n, x2n) -> normalized output, which lets models that decode
// their vector do it once per candidate. Features and targets are normalized
// once up front.
template <typename ModelForward>
auto fitness_mse(ModelForward model_forward, const Dataset& train, const Normalizer& norm) {
    if (train.samples.empty()) throw std::invalid_argument("fitness_mse needs a non-empty dataset");
    if (!norm.fitted()) throw std::logic_error("fitness_mse requires a fitted normalizer");
    std::vector<double> x1, x2, t;
    x1.reserve(train.samples.size());
    x2.reserve(train.samples.size());
    t.reserve(train.samples.size());
    for (const Sample& s : train.samples) {
        x1.push_back(norm.normalize_flow(s.flow));
        x2.push_back(norm.normalize_opening(s.opening));
        t.push_back(norm.normalize_air_velocity(s.air_velocity));
    }
    return [model_forward, x1 = std::move(x1), x2 = std::move(x2),
            t = std::move(t)](const std::vector<double>& params) {
        const auto predict = model_forward(params);
        double sum = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double d = predict(x1[i], x2[i]) - t[i];
            sum += d * d;
        }
        return sum / static_cast<double>(t.size());
    };
}

// Global-best PSO: v <- w v + c1 r1 (pbest - x) + c2 r2 (gbest - x), with
// per-dimension velocity clamping and position clamping to the bounds.
// `initial_guesses` replace the first particles of the random population.
template <typename F>
OptResult pso_run(F&& fitness, const Bounds& bounds, const PsoConfig& cfg,
                  const std::vector<std::vector<double>>& initial_guesses = {}) {
    validate(bounds);
    validate(cfg);
    const std::size_t dims = bounds.dims();
    const auto pop = static_cast<std::size_t>(cfg.pop_size);
    detail::Rng rng(cfg.seed);

    std::vector<double> vmax(dims);
    for (std::size_t d = 0; d < dims; ++d)
        vmax[d] = cfg.velocity_clamp * (bounds.upper[d] - bounds.lower[d]);

    std::vector<std::vector<double>> x(pop, std::vector<double>(dims));
    std::vector<std::vector<double>> v(pop, std::vector<double>(dims, 0.0));
    for (std::size_t i = 0; i < pop; ++i) {
        if (i < initial_guesses.size()) {
            if (initial_guesses[i].size() != dims)
                throw std::invalid_argument("initial guess dimension mismatch");
            for (std::size_t d = 0; d < dims; ++d)
                x[i][d] = opt_detail::clamp(initial_guesses[i][d], bounds.lower[d], bounds.upper[d]);
        } else {
            for (std::size_t d = 0; d < dims; ++d)
                x[i][d] = rng.uniform(bounds.lower[d], bounds.upper[d]);
        }
    }

    OptResult res;
    res.seed = cfg.seed;
    std::vector<std::vector<double>> pbest = x;
    std::vector<double> pbest_f(pop);
    std::size_t g = 0;
    for (std::size_t i = 0; i < pop; ++i) {
        pbest_f[i] = opt_detail::checked_eval(fitness, x[i]);
        if (pbest_f[i] < pbest_f[g]) g = i;
    }
    std::vector<double> gbest = pbest[g];
    double gbest_f = pbest_f[g];
    res.initial_best_fitness = gbest_f;
    res.evaluations = pop;

    res.trace.reserve(static_cast<std::size_t>(cfg.max_iters));
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        for (std::size_t i = 0; i < pop; ++i) {
            for (std::size_t d = 0; d < dims; ++d) {
                const double r1 = rng.uniform01();
                const double r2 = rng.uniform01();
                double vd = cfg.inertia * v[i][d] + cfg.cognitive * r1 * (pbest[i][d] - x[i][d]) +
                            cfg.social * r2 * (gbest[d] - x[i][d]);
                vd = opt_detail::clamp(vd, -vmax[d], vmax[d]);
                v[i][d] = vd;
                x[i][d] = opt_detail::clamp(x[i][d] + vd, bounds.lower[d], bounds.upper[d]);
            }
        }
        for (std::size_t i = 0; i < pop; ++i) {
            const double f = opt_detail::checked_eval(fitness, x[i]);
            if (f < pbest_f[i]) {
                pbest_f[i] = f;
                pbest[i] = x[i];
            }
            if (f < gbest_f) {
                gbest_f = f;
                gbest = x[i];
            }
        }
        res.evaluations += pop;
        res.trace.push_back(gbest_f);
    }
    res.best_position = std::move(gbest);
    res.best_fitness = gbest_f;
    return res;
}

// Real-coded GA. Each generation copies the elitism_count best individuals
// unchanged and fills the rest with tournament-selected, BLX-0.5-blended,
// Gaussian-mutated offspring clamped to the bounds. The whole population is
// re-evaluated each generation, so evaluations = pop_size * (generations + 1).
template <typename F>
OptResult ga_run(F&& fitness, const Bounds& bounds, const GaConfig& cfg) {
    validate(bounds);
    validate(cfg);
    const std::size_t dims = bounds.dims();
    const auto pop = static_cast<std::size_t>(cfg.pop_size);
    const double mutation_rate =
        cfg.mutation_rate ? *cfg.mutation_rate : 1.0 / static_cast<double>(dims);
    detail::Rng rng(cfg.seed);

    std::vector<double> sigma(dims);
    for (std::size_t d = 0; d < dims; ++d)
        sigma[d] = cfg.mutation_scale * (bounds.upper[d] - bounds.lower[d]);

    std::vector<std::vector<double>> x(pop, std::vector<double>(dims));
    for (auto& xi : x)
        for (std::size_t d = 0; d < dims; ++d) xi[d] = rng.uniform(bounds.lower[d], bounds.upper[d]);

    std::vector<double> f(pop);
    for (std::size_t i = 0; i < pop; ++i) f[i] = opt_detail::checked_eval(fitness, x[i]);

    OptResult res;
    res.seed = cfg.seed;
    res.evaluations = pop;

    std::size_t best_i = 0;
    for (std::size_t i = 1; i < pop; ++i)
        if (f[i] < f[best_i]) best_i = i;
    std::vector<double> best = x[best_i];
    double best_f = f[best_i];
    res.initial_best_fitness = best_f;

    const auto tournament = [&]() -> const std::vector<double>& {
        std::size_t winner = rng.bounded(pop);
        for (int k = 1; k < cfg.tournament_size; ++k) {
            const std::size_t challenger = rng.bounded(pop);
            if (f[challenger] < f[winner]) winner = challenger;
        }
        return x[winner];
    };

    res.trace.reserve(static_cast<std::size_t>(cfg.max_iters));
    for (int gen = 0; gen < cfg.max_iters; ++gen) {
        std::vector<std::size_t> order(pop);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });

        std::vector<std::vector<double>> next;
        next.reserve(pop);
        for (int e = 0; e < cfg.elitism_count; ++e)
            next.push_back(x[order[static_cast<std::size_t>(e)]]);

        while (next.size() < pop) {
            const std::vector<double>& p1 = tournament();
            const std::vector<double>& p2 = tournament();
            std::vector<double> child(dims);
            if (rng.uniform01() < cfg.crossover_rate) {
                for (std::size_t d = 0; d < dims; ++d) {
                    const double lo = std::min(p1[d], p2[d]);
                    const double hi = std::max(p1[d], p2[d]);
                    const double span = hi - lo;
                    child[d] = rng.uniform(lo - 0.5 * span, hi + 0.5 * span);
                }
            } else {
                child = p1;
            }
            for (std::size_t d = 0; d < dims; ++d) {
                if (rng.uniform01() < mutation_rate) child[d] += rng.gaussian() * sigma[d];
                child[d] = opt_detail::clamp(child[d], bounds.lower[d], bounds.upper[d]);
            }
            next.push_back(std::move(child));
        }

        x = std::move(next);
        for (std::size_t i = 0; i < pop; ++i) {
            f[i] = opt_detail::checked_eval(fitness, x[i]);
            if (f[i] < best_f) {
                best_f = f[i];
                best = x[i];
            }
        }
        res.evaluations += pop;
        res.trace.push_back(best_f);
    }
    res.best_position = std::move(best);
    res.best_fitness = best_f;
    return res;
}

}  // namespace airdemand
