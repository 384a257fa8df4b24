#include "skewstream/gamma.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "skewstream/error.hpp"

namespace skewstream {

using boost::math::digamma;
using boost::math::trigamma;

GammaPrior gamma_prior_from_params(GammaParams params, double count) {
    const double mean = params.shape / params.rate;
    const double mean_log = digamma(params.shape) - std::log(params.rate);
    return {count, count * mean, count * mean_log};
}

double gamma_shape_residual(double shape, double s) { return std::log(shape) - digamma(shape) - s; }

GammaParams fit_gamma_shape_rate(double count, double sum, double sum_logs, const GammaPrior& prior) {
    if (!std::isfinite(count) || !std::isfinite(sum) || !std::isfinite(sum_logs) || !std::isfinite(prior.count) ||
        !std::isfinite(prior.sum) || !std::isfinite(prior.sum_logs))
        throw InvalidParameter("gamma fit: non-finite sufficient statistics");
    const double n = count + prior.count;
    if (!(n > 0.0)) throw InvalidParameter("gamma fit: total count must be positive");
    const double mean = (sum + prior.sum) / n;
    if (!(mean > 0.0)) throw InvalidParameter("gamma fit: mean must be positive");

    const double s = std::log(mean) - (sum_logs + prior.sum_logs) / n;
    if (!(s > 0.0)) return {kMaxGammaShape, kMaxGammaShape / mean};

    double a = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    for (int iter = 0; iter < 50; ++iter) {
        const double step = (std::log(a) - digamma(a) - s) / (1.0 / a - trigamma(a));
        double next = a - step;
        if (!(next > 0.0)) next = a / 2.0;
        const double rel = std::abs(next - a) / a;
        a = next;
        if (rel < 1e-8 || a > kMaxGammaShape) break;
    }
    a = std::min(a, kMaxGammaShape);
    return {a, a / mean};
}

}  // namespace skewstream
