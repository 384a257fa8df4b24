#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skewstream/gamma.hpp"
#include "skewstream/sifi.hpp"
#include "skewstream/types.hpp"

namespace skewstream {

struct SampledWindow {
    CurrentTensor window;
    /// Generating component of each event.
    std::vector<std::uint32_t> components;
};

/// Forward-samples one window: per tick, `events_per_tick[t]` events, each with a
/// component drawn from B_t and attribute values from that component's distributions.
/// `duration` defaults to ticks * tick_seconds.
SampledWindow sample_window(const ComponentMatrices& matrices, std::span<const std::size_t> events_per_tick,
                            std::size_t window_index, double start_time, double tick_seconds, Rng& rng,
                            double duration = 0.0);

/// Even split of `events` over `ticks` (earlier ticks take the remainder).
std::vector<std::size_t> spread_events(std::size_t events, std::size_t ticks);

struct ComponentSpec {
    double weight = 1.0;
    /// One probability vector per categorical attribute.
    std::vector<std::vector<double>> categorical;
    /// One (shape, rate) per continuous attribute.
    std::vector<GammaParams> gamma;
};

struct RegimeSpec {
    std::string name;
    std::vector<ComponentSpec> components;
};

/// Stationary component matrices for a regime (identical mixture on every tick).
ComponentMatrices regime_matrices(const RegimeSpec& spec, std::size_t ticks);

/// Random regime with K components: categorical rows concentrated on distinct unit
/// blocks, Gamma shapes drawn from [shape_min, shape_max] (right-skewed by default).
RegimeSpec random_regime_spec(std::string name, std::size_t K, std::span<const std::size_t> vocab,
                              std::size_t num_continuous, Rng& rng, double shape_min = 0.3, double shape_max = 2.0);

struct SegmentSpec {
    std::string regime;
    std::size_t windows = 0;
};

struct AnomalySpec {
    std::string regime;
    double fraction = 0.1;
    /// Leading windows that never receive anomalies.
    std::size_t skip_first = 1;
};

struct Scenario {
    std::vector<std::string> categorical_names;
    std::vector<std::string> continuous_names;
    double window_seconds = 60.0;
    double tick_seconds = 1.0;
    std::size_t events_per_window = 1000;
    double start_time = 0.0;
    std::vector<RegimeSpec> regimes;
    std::vector<SegmentSpec> segments;
    std::optional<AnomalySpec> anomaly;

    std::size_t total_windows() const;
    std::size_t regime_index(std::string_view name) const;
};

/// Scenario from JSON. Regimes are either spelled out ("components") or generated
/// ("random": {"components": K, "vocab": [...], "seed": s}).
Scenario parse_scenario(std::string_view json_text);

struct TruthRow {
    std::size_t window_index = 0;
    int regime_id = 0;
    bool is_anomaly = false;

    bool operator==(const TruthRow&) const = default;
};

struct GeneratedStream {
    AttributeSchema schema;
    std::vector<SampledWindow> windows;
    /// Label written per event (regime name of the generating window, or "BENIGN").
    std::vector<std::string> window_labels;
    std::vector<TruthRow> truth;
};

/// Samples the whole scenario. Categorical units are the generating indices.
GeneratedStream sample_stream(const Scenario& scenario, Rng& rng);

/// Delimited event file: time, categorical columns, continuous columns, label.
void write_events_csv(const GeneratedStream& stream, std::ostream& out);
/// window_index,regime_id,is_anomaly
void write_truth_csv(const GeneratedStream& stream, std::ostream& out);
std::vector<TruthRow> read_truth_csv(std::istream& in);

/// Run config (JSON) binding the generated columns, for end-to-end use.
std::string run_config_for(const Scenario& scenario);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace skewstream
