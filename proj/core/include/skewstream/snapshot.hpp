#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skewstream/engine.hpp"
#include "skewstream/types.hpp"

namespace skewstream {

/// Everything needed to resume a stream bit-exactly.
struct Snapshot {
    static constexpr int kVersion = 1;

    EngineConfig config;
    AttributeSchema schema;
    CompactDescription description;
    std::string rng_state;
    std::size_t next_window_index = 0;
    /// Start time of window 0.
    std::optional<double> stream_origin;
    /// Categorical dictionaries, one list of unit strings per attribute, in index order.
    std::vector<std::vector<std::string>> dictionaries;
};

Snapshot capture(const Engine& engine, const AttributeSchema& schema, std::optional<double> origin,
                 std::vector<std::vector<std::string>> dictionaries);

Engine restore_engine(const Snapshot& snapshot);

/// Versioned JSON text. Doubles are written in shortest round-trip form.
std::string write_snapshot(const Snapshot& snapshot);
/// Throws FormatError on malformed or unsupported input.
Snapshot read_snapshot(std::string_view text);

std::string write_description(const CompactDescription& c);
CompactDescription read_description(std::string_view text);

}  // namespace skewstream
