#include "skewstream/mdl.hpp"

#include <cmath>

#include "skewstream/error.hpp"

namespace skewstream {

double log_star(std::uint64_t n) {
    if (n == 0) throw InvalidParameter("log* is defined for positive integers");
    double bits = std::log2(kLogStarConstant);
    double x = static_cast<double>(n);
    while (true) {
        x = std::log2(x);
        if (!(x > 0.0)) break;
        bits += x;
    }
    return bits;
}

const char* to_string(CostCase c) {
    switch (c) {
        case CostCase::same_regime: return "same_regime";
        case CostCase::switch_existing: return "switch_existing";
        case CostCase::new_regime: return "new_regime";
    }
    return "unknown";
}

std::size_t free_parameter_count(std::size_t K, std::span<const std::size_t> vocab, std::size_t num_continuous,
                                 std::size_t ticks) {
    std::size_t params = 2 * K * num_continuous + ticks * (K - 1);
    for (std::size_t U : vocab) params += K * (U - 1);
    return params;
}

double model_cost_regime(const ComponentMatrices& matrices, const AttributeSchema& schema, const MdlConfig& config) {
    const std::size_t K = matrices.K;
    std::vector<std::size_t> vocab;
    double bits = log_star(K);
    for (std::size_t m = 0; m < schema.num_categorical(); ++m) {
        const std::size_t U = std::max<std::size_t>(schema.vocab_sizes.at(m), 1);
        vocab.push_back(U);
        bits += log_star(U);
    }
    const auto params = free_parameter_count(K, vocab, schema.num_continuous(), matrices.time_mix.rows());
    return bits + config.bits_per_parameter * static_cast<double>(params);
}

double model_cost_switch(std::uint64_t position, std::size_t regime_count) {
    if (regime_count == 0) throw InvalidParameter("switch cost needs at least one regime");
    return log_star(position) + std::log2(static_cast<double>(regime_count));
}

namespace {

// log*(n+1) - log*(n), with log*(0) taken as 0 for the very first regime/segment.
double log_star_increment(std::size_t n) { return log_star(n + 1) - (n == 0 ? 0.0 : log_star(n)); }

}  // namespace

double delta_model_cost(CostCase cost_case, const ComponentMatrices& regime_matrices, const AttributeSchema& schema,
                        const CompactDescription& c, std::uint64_t position, const MdlConfig& config) {
    const std::size_t R = c.R();
    const std::size_t G = c.G();
    switch (cost_case) {
        case CostCase::same_regime: return 0.0;
        case CostCase::switch_existing: return log_star_increment(G) + model_cost_switch(position, R);
        case CostCase::new_regime:
            return log_star_increment(R) + model_cost_regime(regime_matrices, schema, config) + log_star_increment(G) +
                   model_cost_switch(position, R + 1);
    }
    return 0.0;
}

const CostBreakdown& Selection::chosen() const {
    for (const CostBreakdown& row : considered)
        if (row.cost_case == cost_case && row.regime_id == regime_id) return row;
    throw InvalidState("selection has no row for the chosen option");
}

double existing_regime_data_cost(const CurrentTensor& window, const Regime& regime, const SifiConfig& config,
                                 Rng& rng) {
    if (window.empty()) return 0.0;
    const TimeMixtureFit fit = refit_time_mixture(window, regime.matrices, config, rng);
    return -nats_to_bits(log_likelihood(window, fit.matrices));
}

Selection select_regime(const CurrentTensor& window, const ComponentMatrices& candidate, const CompactDescription& c,
                        const AttributeSchema& schema, const SifiConfig& sifi, const MdlConfig& mdl, Rng& rng) {
    Selection sel;
    const int active = c.active_regime_id();
    if (window.empty()) {
        sel.cost_case = CostCase::same_regime;
        sel.regime_id = active;
        sel.considered.push_back({CostCase::same_regime, active, 0.0, 0.0, 0.0});
        return sel;
    }
    const std::uint64_t position = window.window_index + 1;

    auto consider = [&](CostBreakdown row) {
        row.total = row.delta_model_cost + row.data_cost;
        const bool better = sel.considered.empty() || row.total < sel.chosen().total;
        sel.considered.push_back(row);
        if (better) {
            sel.cost_case = row.cost_case;
            sel.regime_id = row.regime_id;
        }
    };

    if (const Regime* current = c.find(active)) {
        const double data = existing_regime_data_cost(window, *current, sifi, rng);
        sel.existing_data_cost[current->id] = data;
        consider({CostCase::same_regime, current->id, 0.0, data, 0.0});
    }
    for (const Regime& r : c.regimes) {
        if (r.id == active) continue;
        const double data = existing_regime_data_cost(window, r, sifi, rng);
        sel.existing_data_cost[r.id] = data;
        const double model = delta_model_cost(CostCase::switch_existing, r.matrices, schema, c, position, mdl);
        consider({CostCase::switch_existing, r.id, model, data, 0.0});
    }
    const double candidate_data = -nats_to_bits(log_likelihood(window, candidate));
    const double candidate_model = delta_model_cost(CostCase::new_regime, candidate, schema, c, position, mdl);
    consider({CostCase::new_regime, -1, candidate_model, candidate_data, 0.0});
    return sel;
}

}  // namespace skewstream
