#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "skewstream/error.hpp"
#include "skewstream/gamma.hpp"

using namespace skewstream;

namespace {

constexpr GammaPrior kNegligible{1e-12, 1e-12, 0.0};

struct Stats {
    double count = 0.0, sum = 0.0, sum_logs = 0.0;
};

Stats draw(double shape, double rate, std::size_t n, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> dist(shape, 1.0 / rate);
    Stats s;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = dist(rng) * scale;
        s.count += 1.0;
        s.sum += x;
        s.sum_logs += std::log(x);
    }
    return s;
}

double s_statistic(const Stats& st, const GammaPrior& p) {
    const double n = st.count + p.count;
    return std::log((st.sum + p.sum) / n) - (st.sum_logs + p.sum_logs) / n;
}

}  // namespace

TEST_CASE("prior-only fit with the default prior is clamped") {
    const GammaParams p = fit_gamma_shape_rate(0.0, 0.0, 0.0, GammaPrior{});
    CHECK(p.shape == kMaxGammaShape);
    CHECK(p.rate == kMaxGammaShape);
}

TEST_CASE("identical samples clamp the shape") {
    const GammaParams p = fit_gamma_shape_rate(10.0, 30.0, 10.0 * std::log(3.0), kNegligible);
    CHECK(p.shape == kMaxGammaShape);
    CHECK(p.rate == doctest::Approx(kMaxGammaShape / 3.0));
}

TEST_CASE("invalid statistics are rejected") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(fit_gamma_shape_rate(nan, 1.0, 0.0, GammaPrior{}), InvalidParameter);
    CHECK_THROWS_AS(fit_gamma_shape_rate(1.0, std::numeric_limits<double>::infinity(), 0.0, GammaPrior{}),
                    InvalidParameter);
    CHECK_THROWS_AS(fit_gamma_shape_rate(0.0, 0.0, 0.0, GammaPrior{0.0, 0.0, 0.0}), InvalidParameter);
}

TEST_CASE("recovers generating parameters from 10^5 draws") {
    struct Case {
        double shape, rate;
    };
    for (const Case c : {Case{0.5, 2.0}, Case{1.0, 1.0}, Case{4.0, 0.5}}) {
        CAPTURE(c.shape);
        CAPTURE(c.rate);
        const Stats st = draw(c.shape, c.rate, 100000, 42);
        const GammaParams p = fit_gamma_shape_rate(st.count, st.sum, st.sum_logs, kNegligible);
        CHECK(std::abs(p.shape / c.shape - 1.0) < 0.05);
        CHECK(std::abs(p.rate / c.rate - 1.0) < 0.05);
        CHECK(std::abs(gamma_shape_residual(p.shape, s_statistic(st, kNegligible))) < 1e-6);
    }
}

TEST_CASE("exponential draws give shape and rate near one") {
    const Stats st = draw(1.0, 1.0, 100000, 7);
    const GammaParams p = fit_gamma_shape_rate(st.count, st.sum, st.sum_logs, kNegligible);
    CHECK(p.shape >= 0.95);
    CHECK(p.shape <= 1.05);
    CHECK(p.rate >= 0.95);
    CHECK(p.rate <= 1.05);
}

TEST_CASE("fixed point residual holds across random inputs") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> shape(0.05, 50.0);
    std::uniform_int_distribution<int> n(3, 400);
    for (int trial = 0; trial < 200; ++trial) {
        const Stats st = draw(shape(rng), 1.0, static_cast<std::size_t>(n(rng)), 1000 + trial);
        const GammaPrior prior{0.5, 0.7, -0.1};
        const GammaParams p = fit_gamma_shape_rate(st.count, st.sum, st.sum_logs, prior);
        if (p.shape >= kMaxGammaShape) continue;
        REQUIRE(std::abs(gamma_shape_residual(p.shape, s_statistic(st, prior))) < 1e-6);
        REQUIRE(p.rate > 0.0);
    }
}

TEST_CASE("shape is scale invariant and rate scales inversely") {
    for (double c : {0.001, 0.5, 3.0, 1e4}) {
        CAPTURE(c);
        const Stats base = draw(0.7, 1.3, 5000, 17);
        const Stats scaled = draw(0.7, 1.3, 5000, 17, c);
        const GammaParams p = fit_gamma_shape_rate(base.count, base.sum, base.sum_logs, kNegligible);
        const GammaParams q = fit_gamma_shape_rate(scaled.count, scaled.sum, scaled.sum_logs, kNegligible);
        CHECK(std::abs(q.shape - p.shape) < 1e-6);
        CHECK(std::abs((q.rate * c) / p.rate - 1.0) < 1e-6);
    }
}

TEST_CASE("prior built from parameters reproduces them") {
    for (double shape : {0.3, 1.0, 2.5, 40.0}) {
        const GammaPrior prior = gamma_prior_from_params({shape, 0.25}, 3.0);
        const GammaParams p = fit_gamma_shape_rate(0.0, 0.0, 0.0, prior);
        CHECK(p.shape == doctest::Approx(shape).epsilon(1e-7));
        CHECK(p.rate == doctest::Approx(0.25).epsilon(1e-7));
    }
}

TEST_CASE("log density agrees with Boost") {
    for (double x : {1e-4, 0.3, 1.0, 7.5, 120.0})
        for (double shape : {0.3, 1.0, 4.0})
            CHECK(gamma_log_pdf(x, shape, 0.7) == doctest::Approx(std::log(oracle::gamma_pdf(x, shape, 0.7))).epsilon(1e-10));
}
