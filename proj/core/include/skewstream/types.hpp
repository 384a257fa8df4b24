#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "skewstream/matrix.hpp"

namespace skewstream {

struct AttributeSchema {
    std::vector<std::string> categorical_names;
    std::vector<std::string> continuous_names;
    /// Current dictionary size per categorical attribute; grows as new units appear.
    std::vector<std::size_t> vocab_sizes;

    std::size_t num_categorical() const noexcept { return categorical_names.size(); }
    std::size_t num_continuous() const noexcept { return continuous_names.size(); }

    bool operator==(const AttributeSchema&) const = default;
};

struct Event {
    double time = 0.0;
    std::vector<std::uint32_t> cat_values;
    std::vector<double> cont_values;

    bool operator==(const Event&) const = default;
};

/// All events of one window [start_time, start_time + duration).
struct CurrentTensor {
    std::size_t window_index = 0;
    double start_time = 0.0;
    double duration = 0.0;
    double tick_seconds = 1.0;
    std::vector<Event> events;
    /// Tick index of each event, parallel to `events`.
    std::vector<std::uint32_t> event_ticks;
    std::vector<std::size_t> per_tick_counts;

    std::size_t num_ticks() const noexcept { return per_tick_counts.size(); }
    bool empty() const noexcept { return events.empty(); }
};

/// Number of ticks in a window: ceil(duration / tick_seconds), at least 1.
std::size_t ticks_per_window(double duration, double tick_seconds);

/// Builds a window and its tick bookkeeping. Events outside the window are rejected.
CurrentTensor make_window(std::size_t window_index, double start_time, double duration, double tick_seconds,
                          std::vector<Event> events);

struct ComponentMatrices {
    std::size_t K = 0;
    /// Per categorical attribute: K x U row-stochastic.
    std::vector<Matrix> cat_dists;
    /// Per continuous attribute: K x 2, columns (shape, rate).
    std::vector<Matrix> gamma_params;
    /// ticks x K row-stochastic.
    Matrix time_mix;

    bool operator==(const ComponentMatrices&) const = default;
};

struct Regime {
    int id = 0;
    ComponentMatrices matrices;
    std::size_t total_segment_length = 0;
    /// Expected events per component in the window the matrices were last fitted on.
    std::vector<double> component_events;
    /// Per categorical attribute and component: total posterior mass of the row (counts + prior).
    std::vector<std::vector<double>> cat_row_mass;

    bool operator==(const Regime&) const = default;
};

struct SwitchRecord {
    std::size_t switch_time = 0;
    int regime_id = 0;

    bool operator==(const SwitchRecord&) const = default;
};

struct CompactDescription {
    std::vector<Regime> regimes;
    std::vector<SwitchRecord> switches;
    /// Non-empty windows summarized so far.
    std::size_t windows_described = 0;

    std::size_t R() const noexcept { return regimes.size(); }
    std::size_t G() const noexcept { return switches.size(); }
    const Regime* find(int id) const;
    Regime* find(int id);
    /// Regime of the most recent switch, or -1 when no window has been described.
    int active_regime_id() const noexcept { return switches.empty() ? -1 : switches.back().regime_id; }

    bool operator==(const CompactDescription&) const = default;
};

struct ScoredWindow {
    std::size_t window_index = 0;
    double start_time = 0.0;
    std::size_t num_events = 0;
    int chosen_regime_id = -1;
    bool is_new_regime = false;
    double delta_model_cost = 0.0;
    double data_cost = 0.0;
    double anomaly_score = 0.0;

    bool operator==(const ScoredWindow&) const = default;
};

/// Empty result iff all CompactDescription invariants hold.
std::vector<std::string> validate_description(const CompactDescription& c);

/// Violations of the ComponentMatrices invariants (row sums within `tol`, positivity).
std::vector<std::string> validate_matrices(const ComponentMatrices& m, double tol = 1e-9);

}  // namespace skewstream
