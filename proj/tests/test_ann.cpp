#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "airdemand/ann.hpp"
#include "airdemand/detail/rng.hpp"

using namespace airdemand;

namespace {

std::vector<double> random_params(const AnnConfig& cfg, std::uint64_t seed) {
    detail::Rng rng(seed);
    std::vector<double> p(param_count(cfg));
    for (double& v : p) v = rng.uniform(-1.0, 1.0);
    return p;
}

}  // namespace

TEST_CASE("param_count for the swept architectures") {
    CHECK(param_count(AnnConfig{8}) == 33);
    CHECK(param_count(AnnConfig{12}) == 49);
    CHECK(param_count(AnnConfig{16}) == 65);
    CHECK(param_count(AnnConfig{1}) == 5);
    CHECK_THROWS_AS(param_count(AnnConfig{0}), std::invalid_argument);
}

TEST_CASE("zero parameters give the zero function") {
    const AnnConfig cfg{8};
    const std::vector<double> p(param_count(cfg), 0.0);
    CHECK(forward(cfg, p, 0.0, 0.0) == 0.0);
    CHECK(forward(cfg, p, 0.3, -0.7) == 0.0);
    CHECK(forward(cfg, p, 1.0, 1.0) == 0.0);
}

TEST_CASE("output bias alone gives a constant network") {
    const AnnConfig cfg{12};
    std::vector<double> p(param_count(cfg), 0.0);
    p.back() = 2.75;
    CHECK(forward(cfg, p, 0.0, 0.9) == 2.75);
    CHECK(forward(cfg, p, -5.0, 5.0) == 2.75);
}

TEST_CASE("single-neuron network evaluates tanh of the active input") {
    const AnnConfig cfg{1};
    // layout: [w11, w21, b1, wout1, bout]
    const std::vector<double> p = {1.0, 0.0, 0.0, 1.0, 0.0};
    // tanh(0.5), computed independently
    CHECK_THAT(forward(cfg, p, 0.5, 0.9),
               Catch::Matchers::WithinAbs(0.46211715726000974, 1e-15));
}

TEST_CASE("forward rejects mismatched parameter lengths") {
    const AnnConfig cfg{8};
    const std::vector<double> short_p(param_count(cfg) - 1, 0.0);
    const std::vector<double> long_p(param_count(cfg) + 1, 0.0);
    CHECK_THROWS_AS(forward(cfg, short_p, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(forward(cfg, long_p, 0.0, 0.0), std::invalid_argument);
    CHECK_NOTHROW(forward(cfg, std::vector<double>(param_count(cfg), 0.0), 0.0, 0.0));
}

TEST_CASE("permuting hidden neurons leaves the output unchanged") {
    const AnnConfig cfg{12};
    const auto h = static_cast<std::size_t>(cfg.hidden_neurons);
    detail::Rng rng(404);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<double> p = random_params(cfg, 1000 + trial);
        std::vector<std::size_t> perm(h);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        rng.shuffle(perm);

        std::vector<double> q(p.size());
        for (std::size_t j = 0; j < h; ++j) {
            const std::size_t s = perm[j];
            q[2 * j] = p[2 * s];
            q[2 * j + 1] = p[2 * s + 1];
            q[2 * h + j] = p[2 * h + s];
            q[3 * h + j] = p[3 * h + s];
        }
        q[4 * h] = p[4 * h];

        const double x1 = rng.uniform(-1.0, 2.0);
        const double x2 = rng.uniform(-1.0, 2.0);
        CHECK_THAT(forward(cfg, q, x1, x2),
                   Catch::Matchers::WithinAbs(forward(cfg, p, x1, x2), 1e-12));
    }
}

TEST_CASE("forward is empirically continuous in the parameters") {
    const AnnConfig cfg{8};
    detail::Rng rng(777);
    for (int trial = 0; trial < 100; ++trial) {
        const std::vector<double> p = random_params(cfg, 2000 + trial);
        std::vector<double> q = p;
        double l1 = 0.0;
        for (double& v : q) {
            const double d = rng.uniform(-1e-6, 1e-6);
            v += d;
            l1 += std::abs(d);
        }
        const double x1 = rng.uniform(0.0, 1.0);
        const double x2 = rng.uniform(0.0, 1.0);
        // every partial derivative is bounded by 1 in this parameter box
        CHECK(std::abs(forward(cfg, q, x1, x2) - forward(cfg, p, x1, x2)) <= 2.0 * l1);
    }
}

TEST_CASE("predict_batch composes normalization, forward and denormalization") {
    Dataset d;
    d.samples = {{10.0, 20.0, 1.0}, {20.0, 60.0, 3.0}, {30.0, 100.0, 9.0}};
    const Normalizer norm = fit_normalizer(d);
    const AnnConfig cfg{8};

    SECTION("constant network maps to the denormalized constant") {
        std::vector<double> p(param_count(cfg), 0.0);
        p.back() = 0.5;
        const auto pred = predict_batch(cfg, p, d, norm);
        REQUIRE(pred.size() == 3);
        for (double v : pred) CHECK(v == norm.denormalize_air_velocity(0.5));
    }

    SECTION("element-wise agreement with the per-sample composition") {
        for (int trial = 0; trial < 20; ++trial) {
            const std::vector<double> p = random_params(cfg, 3000 + trial);
            const auto pred = predict_batch(cfg, p, d, norm);
            REQUIRE(pred.size() == d.size());
            for (std::size_t i = 0; i < d.size(); ++i) {
                const Sample& s = d.samples[i];
                const double y = forward(cfg, p, norm.normalize_flow(s.flow),
                                         norm.normalize_opening(s.opening));
                CHECK(pred[i] == norm.denormalize_air_velocity(y));
            }
        }
    }

    SECTION("unfitted normalizer is rejected") {
        const std::vector<double> p(param_count(cfg), 0.0);
        CHECK_THROWS_AS(predict_batch(cfg, p, d, Normalizer{}), std::logic_error);
    }
}
