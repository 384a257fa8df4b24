#include "skewstream/engine.hpp"

#include <sstream>

#include "skewstream/error.hpp"
#include "skewstream/log.hpp"

namespace skewstream {

bool EngineConfig::operator==(const EngineConfig& o) const {
    const SifiConfig& a = sifi;
    const SifiConfig& b = o.sifi;
    return a.K == b.K && a.burn_in == b.burn_in && a.samples == b.samples && a.refit_burn_in == b.refit_burn_in &&
           a.refit_samples == b.refit_samples && a.prior_strength == b.prior_strength &&
           a.prior_floor == b.prior_floor && a.cold_start_restarts == b.cold_start_restarts &&
           a.cold_start_burn_in == b.cold_start_burn_in && mdl.bits_per_parameter == o.mdl.bits_per_parameter &&
           window_seconds == o.window_seconds && tick_seconds == o.tick_seconds &&
           per_event_normalization == o.per_event_normalization && refresh_regimes == o.refresh_regimes;
}

const Regime& majority_regime(const CompactDescription& c) {
    if (c.regimes.empty()) throw InvalidState("no regimes to choose a majority from");
    const Regime* best = &c.regimes.front();
    for (const Regime& r : c.regimes)
        if (r.total_segment_length > best->total_segment_length ||
            (r.total_segment_length == best->total_segment_length && r.id < best->id))
            best = &r;
    return *best;
}

namespace {

double normalize_score(double bits, std::size_t events, const EngineConfig& config) {
    if (events == 0) return 0.0;
    return config.per_event_normalization ? bits / static_cast<double>(events) : bits;
}

void install_matrices(Regime& regime, Decomposition&& fit) {
    regime.matrices = std::move(fit.matrices);
    regime.component_events = std::move(fit.component_events);
    regime.cat_row_mass = std::move(fit.cat_row_mass);
}

}  // namespace

double anomaly_score(const CurrentTensor& window, const CompactDescription& c, const EngineConfig& config, Rng& rng) {
    if (window.empty()) return 0.0;
    const Regime& norm = majority_regime(c);
    return normalize_score(existing_regime_data_cost(window, norm, config.sifi, rng), window.events.size(), config);
}

WindowOutcome process_window(const CurrentTensor& window, const AttributeSchema& schema, CompactDescription& c,
                             const EngineConfig& config, Rng& rng) {
    WindowOutcome out;
    ScoredWindow& sw = out.scored;
    sw.window_index = window.window_index;
    sw.start_time = window.start_time;
    sw.num_events = window.events.size();
    sw.chosen_regime_id = c.active_regime_id();
    if (window.empty()) {
        out.selection.regime_id = sw.chosen_regime_id;
        return out;
    }

    for (Regime& r : c.regimes) extend_vocabulary(r, schema);

    const Regime* active = c.find(c.active_regime_id());
    Decomposition candidate = active != nullptr
                                  ? decompose(window, priors_from_regime(*active, schema, config.sifi), config.sifi, rng)
                                  : decompose_cold(window, schema, config.sifi, rng);

    // Baseline for scoring is fixed before this window updates the description.
    const int norm_id = c.regimes.empty() ? -1 : majority_regime(c).id;

    if (c.regimes.empty()) {
        out.selection.cost_case = CostCase::new_regime;
        out.selection.regime_id = -1;
        CostBreakdown row{CostCase::new_regime, -1, 0.0, 0.0, 0.0};
        row.delta_model_cost =
            delta_model_cost(CostCase::new_regime, candidate.matrices, schema, c, window.window_index + 1, config.mdl);
        row.data_cost = -nats_to_bits(log_likelihood(window, candidate.matrices));
        row.total = row.delta_model_cost + row.data_cost;
        out.selection.considered.push_back(row);
    } else {
        out.selection = select_regime(window, candidate.matrices, c, schema, config.sifi, config.mdl, rng);
    }
    const CostBreakdown chosen = out.selection.chosen();

    int chosen_id = out.selection.regime_id;
    switch (out.selection.cost_case) {
        case CostCase::new_regime: {
            Regime fresh;
            fresh.id = static_cast<int>(c.regimes.size());
            install_matrices(fresh, std::move(candidate));
            c.regimes.push_back(std::move(fresh));
            chosen_id = c.regimes.back().id;
            c.switches.push_back({window.window_index, chosen_id});
            sw.is_new_regime = true;
            break;
        }
        case CostCase::switch_existing: {
            c.switches.push_back({window.window_index, chosen_id});
            if (config.refresh_regimes) {
                Regime& target = *c.find(chosen_id);
                const PriorMatrices own = priors_from_regime(target, schema, config.sifi);
                install_matrices(target, decompose(window, own, config.sifi, rng));
            }
            break;
        }
        case CostCase::same_regime: {
            if (config.refresh_regimes) install_matrices(*c.find(chosen_id), std::move(candidate));
            break;
        }
    }
    c.find(chosen_id)->total_segment_length += 1;
    c.windows_described += 1;

    sw.chosen_regime_id = chosen_id;
    sw.delta_model_cost = chosen.delta_model_cost;
    sw.data_cost = chosen.data_cost;

    double bits = 0.0;
    if (norm_id >= 0) {
        bits = out.selection.existing_data_cost.at(norm_id);
    } else {
        bits = existing_regime_data_cost(window, majority_regime(c), config.sifi, rng);
    }
    sw.anomaly_score = normalize_score(bits, window.events.size(), config);
    return out;
}

Engine::Engine(EngineConfig config, std::uint64_t seed) : config_(std::move(config)), rng_(seed) {
    if (config_.sifi.K == 0) throw InvalidParameter("number of components must be at least 1");
}

ScoredWindow Engine::process(const CurrentTensor& window, const AttributeSchema& schema) {
    if (window.window_index != next_window_index_) {
        std::ostringstream msg;
        msg << "expected window " << next_window_index_ << " but got " << window.window_index;
        throw InvalidState(msg.str());
    }
    WindowOutcome outcome = process_window(window, schema, description_, config_, rng_);
    ++next_window_index_;
    last_selection_ = std::move(outcome.selection);
    return outcome.scored;
}

std::string Engine::rng_state() const {
    std::ostringstream os;
    os << rng_;
    return os.str();
}

Engine Engine::restore(EngineConfig config, CompactDescription description, const std::string& rng_state,
                       std::size_t next_window_index) {
    Engine e(std::move(config), 0);
    e.description_ = std::move(description);
    std::istringstream is(rng_state);
    is >> e.rng_;
    if (!is) throw FormatError("malformed RNG state in snapshot");
    e.next_window_index_ = next_window_index;
    return e;
}

}  // namespace skewstream
