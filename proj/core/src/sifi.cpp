#include "skewstream/sifi.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "skewstream/error.hpp"
#include "skewstream/log.hpp"

namespace skewstream {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<std::size_t> vocab_of(const PriorMatrices& priors) {
    std::vector<std::size_t> vocab;
    for (const Matrix& m : priors.cat_priors) vocab.push_back(m.cols());
    return vocab;
}

// Row sums of each categorical prior matrix: [m1][k].
std::vector<std::vector<double>> prior_row_sums(const PriorMatrices& priors) {
    std::vector<std::vector<double>> out(priors.cat_priors.size(), std::vector<double>(priors.K, 0.0));
    for (std::size_t m = 0; m < priors.cat_priors.size(); ++m)
        for (std::size_t k = 0; k < priors.K; ++k) {
            const auto row = priors.cat_priors[m].row(k);
            out[m][k] = std::accumulate(row.begin(), row.end(), 0.0);
        }
    return out;
}

void check_window_shape(const CurrentTensor& window, const PriorMatrices& priors) {
    if (window.num_ticks() != priors.time_priors.rows())
        throw InvalidParameter("window tick count differs from prior time matrix");
    for (const Event& e : window.events) {
        if (e.cat_values.size() != priors.cat_priors.size() || e.cont_values.size() != priors.gamma_priors.size())
            throw InvalidParameter("event arity differs from schema");
        for (std::size_t m = 0; m < e.cat_values.size(); ++m)
            if (e.cat_values[m] >= priors.cat_priors[m].cols())
                throw InvalidParameter("categorical unit outside prior vocabulary");
        for (double x : e.cont_values)
            if (!(x > 0.0) || !std::isfinite(x)) throw InvalidParameter("continuous values must be positive");
    }
}

// log C_k = a log b - lgamma(a), per m2 per k.
std::vector<std::vector<double>> gamma_log_norms(const std::vector<Matrix>& gamma_params) {
    std::vector<std::vector<double>> out(gamma_params.size());
    for (std::size_t m = 0; m < gamma_params.size(); ++m) {
        const Matrix& g = gamma_params[m];
        out[m].resize(g.rows());
        for (std::size_t k = 0; k < g.rows(); ++k)
            out[m][k] = g(k, 0) * std::log(g(k, 1)) - std::lgamma(g(k, 0));
    }
    return out;
}

// N x K Gamma log density for every event under the given parameters.
Matrix gamma_term(const CurrentTensor& window, const std::vector<Matrix>& gamma_params, std::size_t K) {
    Matrix out(window.events.size(), K, 0.0);
    const auto norms = gamma_log_norms(gamma_params);
    for (std::size_t j = 0; j < window.events.size(); ++j) {
        auto row = out.row(j);
        for (std::size_t m = 0; m < gamma_params.size(); ++m) {
            const double x = window.events[j].cont_values[m];
            const double lx = std::log(x);
            const Matrix& g = gamma_params[m];
            for (std::size_t k = 0; k < K; ++k) row[k] += norms[m][k] + (g(k, 0) - 1.0) * lx - g(k, 1) * x;
        }
    }
    return out;
}

// Log weight of each component for event `e` at `tick`, given counts that exclude it.
void categorical_time_weights(const Event& e, std::size_t tick, const GibbsState& state, const PriorMatrices& priors,
                              const std::vector<std::vector<double>>& prior_sums, std::span<double> out) {
    const std::size_t K = priors.K;
    for (std::size_t k = 0; k < K; ++k) out[k] = std::log(state.tick_counts(tick, k) + priors.time_priors(tick, k));
    for (std::size_t m = 0; m < e.cat_values.size(); ++m) {
        const std::uint32_t u = e.cat_values[m];
        const Matrix& counts = state.unit_counts[m];
        const Matrix& prior = priors.cat_priors[m];
        for (std::size_t k = 0; k < K; ++k)
            out[k] += std::log(counts(k, u) + prior(k, u)) - std::log(state.component_counts[k] + prior_sums[m][k]);
    }
}

}  // namespace

GibbsState GibbsState::zeros(std::size_t K, std::size_t ticks, std::span<const std::size_t> vocab,
                             std::size_t num_continuous) {
    GibbsState s;
    s.tick_counts = Matrix(ticks, K, 0.0);
    for (std::size_t U : vocab) s.unit_counts.emplace_back(K, U, 0.0);
    s.component_counts.assign(K, 0.0);
    s.cont_stats.assign(num_continuous, std::vector<ContinuousStats>(K));
    s.gamma_params.assign(num_continuous, Matrix(K, 2, 1.0));
    return s;
}

void GibbsState::add(const CurrentTensor& window, std::size_t j, std::uint32_t k) {
    const Event& e = window.events[j];
    assignments[j] = k;
    tick_counts(window.event_ticks[j], k) += 1.0;
    component_counts[k] += 1.0;
    for (std::size_t m = 0; m < e.cat_values.size(); ++m) unit_counts[m](k, e.cat_values[m]) += 1.0;
    for (std::size_t m = 0; m < e.cont_values.size(); ++m) {
        ContinuousStats& st = cont_stats[m][k];
        st.count += 1.0;
        st.sum += e.cont_values[m];
        st.sum_logs += std::log(e.cont_values[m]);
    }
}

void GibbsState::remove(const CurrentTensor& window, std::size_t j) {
    const Event& e = window.events[j];
    const std::uint32_t k = assignments[j];
    tick_counts(window.event_ticks[j], k) -= 1.0;
    component_counts[k] -= 1.0;
    for (std::size_t m = 0; m < e.cat_values.size(); ++m) unit_counts[m](k, e.cat_values[m]) -= 1.0;
    for (std::size_t m = 0; m < e.cont_values.size(); ++m) {
        ContinuousStats& st = cont_stats[m][k];
        st.count -= 1.0;
        st.sum -= e.cont_values[m];
        st.sum_logs -= std::log(e.cont_values[m]);
    }
}

GibbsState rebuild_counts(const CurrentTensor& window, const GibbsState& state) {
    std::vector<std::size_t> vocab;
    for (const Matrix& m : state.unit_counts) vocab.push_back(m.cols());
    GibbsState fresh =
        GibbsState::zeros(state.component_counts.size(), state.tick_counts.rows(), vocab, state.cont_stats.size());
    fresh.assignments.assign(window.events.size(), 0);
    for (std::size_t j = 0; j < window.events.size(); ++j) fresh.add(window, j, state.assignments[j]);
    fresh.gamma_params = state.gamma_params;
    return fresh;
}

bool counts_consistent(const CurrentTensor& window, const GibbsState& state) {
    if (state.assignments.size() != window.events.size()) return false;
    const GibbsState fresh = rebuild_counts(window, state);
    if (fresh.tick_counts != state.tick_counts || fresh.unit_counts != state.unit_counts ||
        fresh.component_counts != state.component_counts)
        return false;
    for (std::size_t m = 0; m < fresh.cont_stats.size(); ++m)
        for (std::size_t k = 0; k < fresh.cont_stats[m].size(); ++k) {
            const ContinuousStats& a = fresh.cont_stats[m][k];
            const ContinuousStats& b = state.cont_stats[m][k];
            const double scale = 1.0 + std::abs(a.sum) + std::abs(a.sum_logs);
            if (a.count != b.count || std::abs(a.sum - b.sum) > 1e-9 * scale ||
                std::abs(a.sum_logs - b.sum_logs) > 1e-9 * scale)
                return false;
        }
    return true;
}

PriorMatrices initial_priors(const AttributeSchema& schema, std::size_t K, std::size_t ticks) {
    if (K == 0) throw InvalidParameter("number of components must be at least 1");
    if (ticks == 0) throw InvalidParameter("tick count must be at least 1");
    const double uniform = 1.0 / static_cast<double>(K);
    PriorMatrices p;
    p.K = K;
    for (std::size_t m = 0; m < schema.num_categorical(); ++m) {
        const std::size_t U = m < schema.vocab_sizes.size() ? std::max<std::size_t>(schema.vocab_sizes[m], 1) : 1;
        p.cat_priors.emplace_back(K, U, uniform);
    }
    p.gamma_priors.assign(schema.num_continuous(), std::vector<GammaPrior>(K, GammaPrior{1.0, 1.0, 0.0}));
    p.time_priors = Matrix(ticks, K, uniform);
    return p;
}

void extend_vocabulary(Regime& regime, const AttributeSchema& schema) {
    ComponentMatrices& mats = regime.matrices;
    const std::size_t K = mats.K;
    const double unit_mass = 1.0 / static_cast<double>(K);
    regime.cat_row_mass.resize(mats.cat_dists.size());
    for (std::size_t m = 0; m < mats.cat_dists.size(); ++m) {
        Matrix& A = mats.cat_dists[m];
        const std::size_t target = schema.vocab_sizes.at(m);
        if (target <= A.cols()) continue;
        const std::size_t extra = target - A.cols();
        auto& mass = regime.cat_row_mass[m];
        if (mass.size() != K) {
            mass.assign(K, 1.0);
            for (std::size_t k = 0; k < K && k < regime.component_events.size(); ++k)
                mass[k] += regime.component_events[k];
        }
        const std::size_t old_cols = A.cols();
        A.append_cols(extra, 0.0);
        for (std::size_t k = 0; k < K; ++k) {
            const double grown = mass[k] + unit_mass * static_cast<double>(extra);
            const double scale = mass[k] / grown;
            auto row = A.row(k);
            for (std::size_t u = 0; u < old_cols; ++u) row[u] *= scale;
            for (std::size_t u = old_cols; u < target; ++u) row[u] = unit_mass / grown;
            mass[k] = grown;
        }
    }
}

PriorMatrices priors_from_regime(const Regime& regime, const AttributeSchema& schema, const SifiConfig& config) {
    Regime widened = regime;
    extend_vocabulary(widened, schema);
    const ComponentMatrices& mats = widened.matrices;
    const std::size_t K = mats.K;
    const double floor = config.prior_floor;
    const double beta = config.prior_strength;

    std::vector<double> weight(K, 0.0);
    double total_events = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const double n_k = k < widened.component_events.size() ? widened.component_events[k] : 0.0;
        weight[k] = beta * n_k;
        total_events += n_k;
    }

    PriorMatrices p;
    p.K = K;
    for (std::size_t m = 0; m < mats.cat_dists.size(); ++m) {
        const Matrix& A = mats.cat_dists[m];
        Matrix prior(K, A.cols());
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t u = 0; u < A.cols(); ++u) prior(k, u) = std::max(floor, weight[k] * A(k, u));
        p.cat_priors.push_back(std::move(prior));
    }
    for (const Matrix& g : mats.gamma_params) {
        std::vector<GammaPrior> priors(K);
        for (std::size_t k = 0; k < K; ++k)
            priors[k] = gamma_prior_from_params({g(k, 0), g(k, 1)}, std::max(floor, weight[k]));
        p.gamma_priors.push_back(std::move(priors));
    }
    const Matrix& B = mats.time_mix;
    const double per_tick = beta * total_events / static_cast<double>(std::max<std::size_t>(B.rows(), 1));
    p.time_priors = Matrix(B.rows(), K);
    for (std::size_t t = 0; t < B.rows(); ++t)
        for (std::size_t k = 0; k < K; ++k) p.time_priors(t, k) = std::max(floor, per_tick * B(t, k));
    return p;
}

Matrix prior_gamma_params(const std::vector<GammaPrior>& priors) {
    Matrix out(priors.size(), 2);
    for (std::size_t k = 0; k < priors.size(); ++k) {
        const GammaParams p = fit_gamma_shape_rate(0.0, 0.0, 0.0, priors[k]);
        out(k, 0) = p.shape;
        out(k, 1) = p.rate;
    }
    return out;
}

std::uint32_t draw_from_log_weights(std::span<double> log_weights, Rng& rng) {
    const std::size_t K = log_weights.size();
    if (K == 1) return 0;
    const double max = *std::max_element(log_weights.begin(), log_weights.end());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (!std::isfinite(max)) {
        // Warn on the first occurrence and then on powers of two so a bad stream cannot flood stderr.
        static std::atomic<std::uint64_t> fallbacks{0};
        const std::uint64_t n = ++fallbacks;
        if ((n & (n - 1)) == 0)
            log::warn("component weights vanished or are non-finite; sampling uniformly (occurrence " +
                      std::to_string(n) + ")");
        std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(K - 1));
        return pick(rng);
    }
    double total = 0.0;
    for (double& w : log_weights) {
        w = std::exp(w - max);
        total += w;
    }
    double target = unit(rng) * total;
    for (std::size_t k = 0; k < K; ++k) {
        target -= log_weights[k];
        if (target < 0.0) return static_cast<std::uint32_t>(k);
    }
    // Rounding left a sliver of mass; return the last component with weight.
    for (std::size_t k = K; k-- > 0;)
        if (log_weights[k] > 0.0) return static_cast<std::uint32_t>(k);
    return static_cast<std::uint32_t>(K - 1);
}

std::uint32_t sample_assignment(const Event& event, std::size_t tick, const GibbsState& state,
                                const PriorMatrices& priors, Rng& rng) {
    const std::size_t K = priors.K;
    if (K == 1) return 0;
    std::vector<double> weights(K);
    categorical_time_weights(event, tick, state, priors, prior_row_sums(priors), weights);
    for (std::size_t m = 0; m < event.cont_values.size(); ++m) {
        const Matrix& g = state.gamma_params[m];
        for (std::size_t k = 0; k < K; ++k) weights[k] += gamma_log_pdf(event.cont_values[m], g(k, 0), g(k, 1));
    }
    return draw_from_log_weights(weights, rng);
}

void refresh_gamma(const CurrentTensor& window, GibbsState& state, const PriorMatrices& priors) {
    const std::size_t K = priors.K;
    for (std::size_t m = 0; m < state.cont_stats.size(); ++m) {
        auto& stats = state.cont_stats[m];
        std::fill(stats.begin(), stats.end(), ContinuousStats{});
        for (std::size_t j = 0; j < window.events.size(); ++j) {
            const double x = window.events[j].cont_values[m];
            ContinuousStats& st = stats[state.assignments[j]];
            st.count += 1.0;
            st.sum += x;
            st.sum_logs += std::log(x);
        }
        Matrix& g = state.gamma_params[m];
        for (std::size_t k = 0; k < K; ++k) {
            const GammaPrior& prior = priors.gamma_priors[m][k];
            const GammaParams fit = stats[k].count < 2.0
                                        ? fit_gamma_shape_rate(0.0, 0.0, 0.0, prior)
                                        : fit_gamma_shape_rate(stats[k].count, stats[k].sum, stats[k].sum_logs, prior);
            g(k, 0) = fit.shape;
            g(k, 1) = fit.rate;
        }
    }
}

GibbsState initialize_state(const CurrentTensor& window, const PriorMatrices& priors, Rng& rng) {
    check_window_shape(window, priors);
    const std::size_t K = priors.K;
    const auto vocab = vocab_of(priors);
    GibbsState state = GibbsState::zeros(K, priors.time_priors.rows(), vocab, priors.gamma_priors.size());
    for (std::size_t m = 0; m < priors.gamma_priors.size(); ++m)
        state.gamma_params[m] = prior_gamma_params(priors.gamma_priors[m]);
    state.assignments.assign(window.events.size(), 0);

    const auto sums = prior_row_sums(priors);
    const Matrix gamma = gamma_term(window, state.gamma_params, K);
    std::vector<double> weights(K);
    for (std::size_t j = 0; j < window.events.size(); ++j) {
        std::uint32_t k = 0;
        if (K > 1) {
            categorical_time_weights(window.events[j], window.event_ticks[j], state, priors, sums, weights);
            const auto g = gamma.row(j);
            for (std::size_t c = 0; c < K; ++c) weights[c] += g[c];
            k = draw_from_log_weights(weights, rng);
        }
        state.add(window, j, k);
    }
    refresh_gamma(window, state, priors);
    return state;
}

void gibbs_sweep(const CurrentTensor& window, GibbsState& state, const PriorMatrices& priors, Rng& rng) {
    if (window.events.empty()) return;
    const std::size_t K = priors.K;
    if (K > 1) {
        const auto sums = prior_row_sums(priors);
        const Matrix gamma = gamma_term(window, state.gamma_params, K);
        std::vector<double> weights(K);
        for (std::size_t j = 0; j < window.events.size(); ++j) {
            state.remove(window, j);
            categorical_time_weights(window.events[j], window.event_ticks[j], state, priors, sums, weights);
            const auto g = gamma.row(j);
            for (std::size_t c = 0; c < K; ++c) weights[c] += g[c];
            state.add(window, j, draw_from_log_weights(weights, rng));
        }
    }
    refresh_gamma(window, state, priors);
}

Decomposition decompose(const CurrentTensor& window, const PriorMatrices& priors, const SifiConfig& config, Rng& rng) {
    if (window.empty()) throw EmptyWindowError();
    const std::size_t K = priors.K;
    const std::size_t M1 = priors.cat_priors.size();
    const std::size_t ticks = priors.time_priors.rows();

    GibbsState state = initialize_state(window, priors, rng);
    const auto sums = prior_row_sums(priors);

    Decomposition out;
    out.matrices.K = K;
    for (const Matrix& p : priors.cat_priors) out.matrices.cat_dists.emplace_back(K, p.cols(), 0.0);
    out.matrices.time_mix = Matrix(ticks, K, 0.0);
    out.component_events.assign(K, 0.0);
    out.cat_row_mass.assign(M1, std::vector<double>(K, 0.0));

    std::vector<double> tick_prior_sum(ticks, 0.0);
    for (std::size_t t = 0; t < ticks; ++t) {
        const auto row = priors.time_priors.row(t);
        tick_prior_sum[t] = std::accumulate(row.begin(), row.end(), 0.0);
    }

    const std::size_t averaged = std::max<std::size_t>(config.samples, 1);
    const std::size_t total_sweeps = config.burn_in + config.samples;
    auto accumulate_estimate = [&]() {
        for (std::size_t m = 0; m < M1; ++m) {
            const Matrix& counts = state.unit_counts[m];
            const Matrix& prior = priors.cat_priors[m];
            Matrix& A = out.matrices.cat_dists[m];
            for (std::size_t k = 0; k < K; ++k) {
                const double denom = state.component_counts[k] + sums[m][k];
                for (std::size_t u = 0; u < A.cols(); ++u) A(k, u) += (counts(k, u) + prior(k, u)) / denom;
                out.cat_row_mass[m][k] += denom;
            }
        }
        for (std::size_t t = 0; t < ticks; ++t) {
            const double denom = static_cast<double>(window.per_tick_counts[t]) + tick_prior_sum[t];
            for (std::size_t k = 0; k < K; ++k)
                out.matrices.time_mix(t, k) += (state.tick_counts(t, k) + priors.time_priors(t, k)) / denom;
        }
        for (std::size_t k = 0; k < K; ++k) out.component_events[k] += state.component_counts[k];
    };

    for (std::size_t sweep = 0; sweep < total_sweeps; ++sweep) {
        gibbs_sweep(window, state, priors, rng);
        if (sweep >= config.burn_in) accumulate_estimate();
    }
    if (config.samples == 0) accumulate_estimate();

    const double inv = 1.0 / static_cast<double>(averaged);
    for (Matrix& A : out.matrices.cat_dists)
        for (double& v : A.data()) v *= inv;
    for (double& v : out.matrices.time_mix.data()) v *= inv;
    for (double& v : out.component_events) v *= inv;
    for (auto& row : out.cat_row_mass)
        for (double& v : row) v *= inv;
    out.matrices.gamma_params = state.gamma_params;
    out.state = std::move(state);
    return out;
}

Decomposition decompose_cold(const CurrentTensor& window, const AttributeSchema& schema, const SifiConfig& config,
                             Rng& rng) {
    const PriorMatrices priors = initial_priors(schema, config.K, window.num_ticks());
    SifiConfig cold = config;
    cold.burn_in = std::max(config.burn_in, config.cold_start_burn_in);
    std::optional<Decomposition> best;
    double best_ll = kNegInf;
    for (std::size_t r = 0; r < std::max<std::size_t>(config.cold_start_restarts, 1); ++r) {
        Decomposition d = decompose(window, priors, cold, rng);
        const double ll = log_likelihood(window, d.matrices);
        if (!best || ll > best_ll) {
            best_ll = ll;
            best = std::move(d);
        }
    }
    return std::move(*best);
}

Matrix component_log_densities(const CurrentTensor& window, const ComponentMatrices& matrices) {
    const std::size_t K = matrices.K;
    Matrix out = gamma_term(window, matrices.gamma_params, K);
    for (std::size_t m = 0; m < matrices.cat_dists.size(); ++m) {
        const Matrix& A = matrices.cat_dists[m];
        for (std::size_t j = 0; j < window.events.size(); ++j) {
            const std::uint32_t u = window.events[j].cat_values[m];
            if (u >= A.cols()) throw InvalidParameter("categorical unit outside regime vocabulary");
            auto row = out.row(j);
            for (std::size_t k = 0; k < K; ++k) row[k] += std::log(A(k, u));
        }
    }
    return out;
}

TimeMixtureFit refit_time_mixture(const CurrentTensor& window, const ComponentMatrices& matrices,
                                  const SifiConfig& config, Rng& rng) {
    if (window.empty()) throw EmptyWindowError();
    const std::size_t K = matrices.K;
    const std::size_t ticks = window.num_ticks();
    const Matrix densities = component_log_densities(window, matrices);

    // Weak prior: the regime's average mixture, one pseudo-event per tick.
    std::vector<double> average(K, 0.0);
    const Matrix& B = matrices.time_mix;
    for (std::size_t t = 0; t < B.rows(); ++t)
        for (std::size_t k = 0; k < K; ++k) average[k] += B(t, k) / static_cast<double>(B.rows());
    std::vector<double> prior(K);
    for (std::size_t k = 0; k < K; ++k) prior[k] = std::max(config.prior_floor, average[k]);
    const double prior_sum = std::accumulate(prior.begin(), prior.end(), 0.0);

    std::vector<std::size_t> vocab;
    for (const Matrix& A : matrices.cat_dists) vocab.push_back(A.cols());
    TimeMixtureFit out;
    GibbsState& state = out.state;
    state = GibbsState::zeros(K, ticks, vocab, matrices.gamma_params.size());
    state.gamma_params = matrices.gamma_params;
    state.assignments.assign(window.events.size(), 0);

    std::vector<double> weights(K);
    auto draw = [&](std::size_t j) -> std::uint32_t {
        if (K == 1) return 0;
        const std::size_t t = window.event_ticks[j];
        const auto d = densities.row(j);
        for (std::size_t k = 0; k < K; ++k) weights[k] = std::log(state.tick_counts(t, k) + prior[k]) + d[k];
        return draw_from_log_weights(weights, rng);
    };
    for (std::size_t j = 0; j < window.events.size(); ++j) state.add(window, j, draw(j));

    Matrix mix(ticks, K, 0.0);
    auto accumulate_mix = [&]() {
        for (std::size_t t = 0; t < ticks; ++t) {
            const double denom = static_cast<double>(window.per_tick_counts[t]) + prior_sum;
            for (std::size_t k = 0; k < K; ++k) mix(t, k) += (state.tick_counts(t, k) + prior[k]) / denom;
        }
    };
    const std::size_t total = config.refit_burn_in + config.refit_samples;
    for (std::size_t sweep = 0; sweep < total && K > 1; ++sweep) {
        for (std::size_t j = 0; j < window.events.size(); ++j) {
            state.remove(window, j);
            state.add(window, j, draw(j));
        }
        if (sweep >= config.refit_burn_in) accumulate_mix();
    }
    if (config.refit_samples == 0 || K == 1) accumulate_mix();
    const double inv = 1.0 / static_cast<double>(K == 1 ? 1 : std::max<std::size_t>(config.refit_samples, 1));
    for (double& v : mix.data()) v *= inv;

    out.matrices = matrices;
    out.matrices.time_mix = std::move(mix);
    return out;
}

double log_likelihood(const CurrentTensor& window, const ComponentMatrices& matrices) {
    if (window.empty()) return 0.0;
    if (matrices.time_mix.rows() != window.num_ticks())
        throw InvalidParameter("time mixture tick count differs from window");
    const Matrix densities = component_log_densities(window, matrices);
    const std::size_t K = matrices.K;
    double total = 0.0;
    for (std::size_t j = 0; j < window.events.size(); ++j) {
        const auto d = densities.row(j);
        const auto b = matrices.time_mix.row(window.event_ticks[j]);
        double max = kNegInf;
        for (std::size_t k = 0; k < K; ++k) max = std::max(max, std::log(b[k]) + d[k]);
        double acc = 0.0;
        if (std::isfinite(max))
            for (std::size_t k = 0; k < K; ++k) acc += std::exp(std::log(b[k]) + d[k] - max);
        const double term = max + std::log(acc);
        if (!std::isfinite(term)) throw NumericalError("non-finite event log-likelihood", j);
        total += term;
    }
    return total;
}

}  // namespace skewstream
