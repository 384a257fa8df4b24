#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skewstream/mdl.hpp"
#include "skewstream/sifi.hpp"
#include "skewstream/types.hpp"

namespace skewstream {

struct EngineConfig {
    SifiConfig sifi;
    MdlConfig mdl;
    double window_seconds = 30.0;
    double tick_seconds = 1.0;
    /// Report bits per event rather than total bits per window.
    bool per_event_normalization = true;
    /// Replace a reused regime's matrices with the window posterior.
    bool refresh_regimes = true;

    std::size_t ticks() const { return ticks_per_window(window_seconds, tick_seconds); }

    bool operator==(const EngineConfig&) const;
};

/// Regime with the greatest total segment length; ties go to the lowest id.
const Regime& majority_regime(const CompactDescription& c);

/// Bits of the window under the majority regime (mixture refit), per event when
/// normalization is on. Zero for an empty window.
double anomaly_score(const CurrentTensor& window, const CompactDescription& c, const EngineConfig& config, Rng& rng);

struct WindowOutcome {
    ScoredWindow scored;
    Selection selection;
};

/// One step of the streaming loop: decompose, select a regime by MDL, update the
/// description and score the window against the majority regime.
WindowOutcome process_window(const CurrentTensor& window, const AttributeSchema& schema, CompactDescription& c,
                             const EngineConfig& config, Rng& rng);

/// Owns the description and RNG across windows.
class Engine {
public:
    Engine(EngineConfig config, std::uint64_t seed);

    ScoredWindow process(const CurrentTensor& window, const AttributeSchema& schema);

    const EngineConfig& config() const noexcept { return config_; }
    const CompactDescription& description() const noexcept { return description_; }
    std::size_t next_window_index() const noexcept { return next_window_index_; }
    const Selection& last_selection() const noexcept { return last_selection_; }

    std::string rng_state() const;

    /// Rebuilds an engine mid-stream from persisted pieces.
    static Engine restore(EngineConfig config, CompactDescription description, const std::string& rng_state,
                          std::size_t next_window_index);

private:
    EngineConfig config_;
    CompactDescription description_;
    Rng rng_;
    std::size_t next_window_index_ = 0;
    Selection last_selection_;
};

}  // namespace skewstream
