#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "skewstream/gamma.hpp"
#include "skewstream/matrix.hpp"
#include "skewstream/types.hpp"

namespace skewstream {

using Rng = std::mt19937_64;

struct SifiConfig {
    std::size_t K = 48;
    std::size_t burn_in = 10;
    std::size_t samples = 5;
    std::size_t refit_burn_in = 5;
    std::size_t refit_samples = 3;
    /// Total pseudo-count of carried priors, as a fraction of the previous window's events.
    double prior_strength = 0.1;
    double prior_floor = 1e-3;
    /// Independent chains for a decomposition without carried priors (the first
    /// window of a stream); the most likely one is kept.
    std::size_t cold_start_restarts = 5;
    std::size_t cold_start_burn_in = 50;
};

/// Dirichlet / Gamma hyperparameters for one decomposition.
struct PriorMatrices {
    std::size_t K = 0;
    std::vector<Matrix> cat_priors;                   // per m1: K x U pseudo-counts
    std::vector<std::vector<GammaPrior>> gamma_priors;  // per m2, per component
    Matrix time_priors;                               // ticks x K pseudo-counts
};

struct ContinuousStats {
    double count = 0.0;
    double sum = 0.0;
    double sum_logs = 0.0;

    bool operator==(const ContinuousStats&) const = default;
};

/// Latent assignments plus the count tables they imply.
struct GibbsState {
    std::vector<std::uint32_t> assignments;
    Matrix tick_counts;               // ticks x K
    std::vector<Matrix> unit_counts;  // per m1: K x U
    std::vector<double> component_counts;
    std::vector<std::vector<ContinuousStats>> cont_stats;  // per m2, per component
    std::vector<Matrix> gamma_params;                      // per m2: K x 2 current estimates

    /// Zeroed tables for K components over `ticks` ticks.
    static GibbsState zeros(std::size_t K, std::size_t ticks, std::span<const std::size_t> vocab,
                            std::size_t num_continuous);

    void add(const CurrentTensor& window, std::size_t j, std::uint32_t k);
    void remove(const CurrentTensor& window, std::size_t j);
};

/// Count tables recomputed from scratch from assignments.
GibbsState rebuild_counts(const CurrentTensor& window, const GibbsState& state);

bool counts_consistent(const CurrentTensor& window, const GibbsState& state);

/// Priors used before any regime exists: 1/K pseudo-counts and unit Gamma statistics.
PriorMatrices initial_priors(const AttributeSchema& schema, std::size_t K, std::size_t ticks);

/// Priors carried from a regime's matrices, scaled by the configured prior strength.
/// Units added to the schema since the regime was fitted get 1/K pseudo-counts.
PriorMatrices priors_from_regime(const Regime& regime, const AttributeSchema& schema, const SifiConfig& config);

/// Shape/rate implied by prior statistics alone.
Matrix prior_gamma_params(const std::vector<GammaPrior>& priors);

/// Draws a component for event `event` at `tick`; its old assignment must already be removed.
std::uint32_t sample_assignment(const Event& event, std::size_t tick, const GibbsState& state,
                                const PriorMatrices& priors, Rng& rng);

/// One pass reassigning every event, followed by a Gamma refresh per component.
void gibbs_sweep(const CurrentTensor& window, GibbsState& state, const PriorMatrices& priors, Rng& rng);

/// Recomputes the continuous statistics from assignments and re-estimates each
/// component's Gamma parameters. Components with fewer than two events keep the
/// prior-derived parameters.
void refresh_gamma(const CurrentTensor& window, GibbsState& state, const PriorMatrices& priors);

/// Sequential initialization: each event sampled given the events placed before it.
GibbsState initialize_state(const CurrentTensor& window, const PriorMatrices& priors, Rng& rng);

struct Decomposition {
    ComponentMatrices matrices;
    std::vector<double> component_events;
    std::vector<std::vector<double>> cat_row_mass;
    GibbsState state;
};

/// Fits component matrices to a window. Throws EmptyWindowError on an empty window.
Decomposition decompose(const CurrentTensor& window, const PriorMatrices& priors, const SifiConfig& config, Rng& rng);

/// Cold start from uninformative priors: `cold_start_restarts` chains with the longer
/// cold burn-in, keeping the one whose posterior means give the highest likelihood.
Decomposition decompose_cold(const CurrentTensor& window, const AttributeSchema& schema, const SifiConfig& config,
                             Rng& rng);

struct TimeMixtureFit {
    ComponentMatrices matrices;
    GibbsState state;
};

/// Holds the categorical and Gamma parameters of `matrices` fixed and re-estimates
/// only the per-tick mixture for this window.
TimeMixtureFit refit_time_mixture(const CurrentTensor& window, const ComponentMatrices& matrices,
                                  const SifiConfig& config, Rng& rng);

/// Natural-log likelihood of the window under the mixture.
double log_likelihood(const CurrentTensor& window, const ComponentMatrices& matrices);

/// Widens the regime's categorical matrices to the schema's vocabulary. Each new
/// unit receives 1/K pseudo-mass and rows are renormalized.
void extend_vocabulary(Regime& regime, const AttributeSchema& schema);

/// N x K matrix of per-event log densities log prod_m A^(m)_{k, e^(m)}, excluding the
/// time mixture.
Matrix component_log_densities(const CurrentTensor& window, const ComponentMatrices& matrices);

/// Distribution over components given unnormalized log-weights; uniform fallback on
/// non-finite input.
std::uint32_t draw_from_log_weights(std::span<double> log_weights, Rng& rng);

}  // namespace skewstream
