#pragma once

// Performance factors for observed-vs-predicted series: RMSE, MSE, Pearson
// correlation and the scatter/sustainability index RMSE/mean(observed), plus
// the standard-deviation/correlation coordinates used by Taylor diagrams.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace airdemand {

struct EvalPair {
    std::vector<double> observed;   // target series, m/s
    std::vector<double> predicted;  // model series, m/s
};

inline void validate(const EvalPair& e) {
    if (e.observed.size() != e.predicted.size())
        throw std::invalid_argument("observed/predicted length mismatch: " +
                                    std::to_string(e.observed.size()) + " vs " +
                                    std::to_string(e.predicted.size()));
    if (e.observed.empty()) throw std::invalid_argument("empty series");
    for (double v : e.observed)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite observed value");
    for (double v : e.predicted)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite predicted value");
}

namespace detail {

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline bool is_constant(const std::vector<double>& v) {
    for (double x : v)
        if (x != v.front()) return false;
    return true;
}

}  // namespace detail

inline double mse(const EvalPair& e) {
    validate(e);
    double s = 0.0;
    for (std::size_t i = 0; i < e.observed.size(); ++i) {
        const double d = e.observed[i] - e.predicted[i];
        s += d * d;
    }
    return s / static_cast<double>(e.observed.size());
}

inline double rmse(const EvalPair& e) { return std::sqrt(mse(e)); }

// Pearson correlation: covariance over the square root of the variance
// product. Requires both series non-constant.
inline double cc(const EvalPair& e) {
    validate(e);
    if (detail::is_constant(e.observed) || detail::is_constant(e.predicted))
        throw std::invalid_argument("correlation undefined for a constant series");
    const double mo = detail::mean(e.observed);
    const double mp = detail::mean(e.predicted);
    double cov = 0.0, vo = 0.0, vp = 0.0;
    for (std::size_t i = 0; i < e.observed.size(); ++i) {
        const double po = e.observed[i] - mo;
        const double pp = e.predicted[i] - mp;
        cov += po * pp;
        vo += po * po;
        vp += pp * pp;
    }
    return cov / std::sqrt(vo * vp);
}

// Scatter index: RMSE over the observed mean.
inline double si(const EvalPair& e) {
    const double r = rmse(e);
    const double mo = detail::mean(e.observed);
    if (mo == 0.0) throw std::invalid_argument("scatter index undefined: observed mean is zero");
    return r / mo;
}

struct TaylorStats {
    double std_observed = 0.0;   // population standard deviation of the targets
    double std_predicted = 0.0;  // radius of the model's Taylor point
    double cc = 0.0;             // cos of the Taylor point's angle
};

inline TaylorStats taylor_stats(const EvalPair& e) {
    TaylorStats t;
    t.cc = cc(e);  // validates and rejects constant series
    const double mo = detail::mean(e.observed);
    const double mp = detail::mean(e.predicted);
    double vo = 0.0, vp = 0.0;
    for (std::size_t i = 0; i < e.observed.size(); ++i) {
        vo += (e.observed[i] - mo) * (e.observed[i] - mo);
        vp += (e.predicted[i] - mp) * (e.predicted[i] - mp);
    }
    const auto n = static_cast<double>(e.observed.size());
    t.std_observed = std::sqrt(vo / n);
    t.std_predicted = std::sqrt(vp / n);
    return t;
}

// Signed per-sample differences (index, predicted - observed), input order.
inline std::vector<std::pair<std::size_t, double>> deviation_series(const EvalPair& e) {
    validate(e);
    std::vector<std::pair<std::size_t, double>> out;
    out.reserve(e.observed.size());
    for (std::size_t i = 0; i < e.observed.size(); ++i) {
        out.emplace_back(i, e.predicted[i] - e.observed[i]);
    }
    return out;
}

// One table row: the four performance factors plus the model identity that
// produced them.
struct MetricRow {
    std::string family;  // "ANN-GA", "ANN-PSO", "ANFIS-PSO"
    std::string hyper;   // neuron count or membership function family
    int pop_size = 0;
    double rmse = 0.0;
    double mse = 0.0;
    double cc = 0.0;
    double si = 0.0;
};

inline MetricRow evaluate(const EvalPair& e, std::string family, std::string hyper, int pop_size) {
    MetricRow row;
    row.family = std::move(family);
    row.hyper = std::move(hyper);
    row.pop_size = pop_size;
    row.mse = mse(e);
    row.rmse = std::sqrt(row.mse);
    row.cc = cc(e);
    row.si = si(e);
    return row;
}

}  // namespace airdemand
