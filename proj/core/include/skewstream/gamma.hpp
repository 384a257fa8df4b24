#pragma once

#include <cmath>

namespace skewstream {

/// Prior knowledge about one Gamma component, as pseudo sufficient statistics
/// merged additively with observed ones.
struct GammaPrior {
    double count = 1.0;     // pseudo-count
    double sum = 1.0;       // pseudo-sum of values
    double sum_logs = 0.0;  // pseudo-sum of log values

    bool operator==(const GammaPrior&) const = default;
};

struct GammaParams {
    double shape = 1.0;
    double rate = 1.0;
};

inline constexpr double kMaxGammaShape = 1e4;

/// Sufficient statistics whose penalized fit reproduces `params` with weight `count`.
GammaPrior gamma_prior_from_params(GammaParams params, double count);

/// Shape/rate maximizing the likelihood of the observed plus pseudo statistics.
/// Shape solves log(a) - digamma(a) = log(mean) - mean_log by Newton iteration
/// from the Minka initializer; rate = shape / mean. Degenerate log-variance
/// clamps the shape to kMaxGammaShape.
GammaParams fit_gamma_shape_rate(double count, double sum, double sum_logs, const GammaPrior& prior);

/// Residual log(a) - digamma(a) - s of the shape equation.
double gamma_shape_residual(double shape, double s);

inline double gamma_log_pdf(double x, double shape, double rate) {
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

}  // namespace skewstream
