#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "skewstream/engine.hpp"
#include "skewstream/ingestion.hpp"

namespace skewstream {

/// Everything one `run` needs: stream layout, engine settings, and run controls.
struct RunConfig {
    StreamSchema schema;
    EngineConfig engine;
    /// Origin of window 0; defaults to the first accepted event's time.
    std::optional<double> stream_start;
    std::uint64_t seed = 1;
    /// Write a snapshot every N windows (0 = only at the end).
    std::size_t snapshot_every = 0;
    double min_attack_fraction = 0.0;
};

RunConfig parse_run_config(std::string_view json_text);

/// Effective configuration as JSON text, suitable for echoing into output metadata
/// and for parsing back.
std::string run_config_to_json(const RunConfig& config);

}  // namespace skewstream
