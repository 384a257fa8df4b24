#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "skewstream/types.hpp"

namespace skewstream {

enum class AttributeKind { categorical, continuous };

struct AttributeBinding {
    std::string name;
    std::string column;
    AttributeKind kind = AttributeKind::categorical;
};

/// Declared stream layout: which columns feed which attributes.
struct StreamSchema {
    std::string timestamp_column;
    /// "auto", "epoch", or a strftime-style pattern such as "%d/%m/%Y %H:%M:%S".
    std::string timestamp_format = "auto";
    std::vector<AttributeBinding> attributes;
    char delimiter = ',';
    std::optional<std::string> label_column;
    std::vector<std::string> benign_labels{"BENIGN", "Benign", "benign", "normal"};
    /// Continuous values at or below zero are replaced by this.
    double clamp_epsilon = 1e-6;

    /// Schema in stable order: categorical attributes first, then continuous, each in
    /// declaration order. Vocabulary sizes start at zero.
    AttributeSchema attribute_schema() const;
};

/// Parses the "schema" object of a JSON config. Errors name the offending field.
StreamSchema parse_schema(std::string_view json_text);

/// Bijection between seen strings and 0..U-1, in first-seen order.
class Dictionary {
public:
    std::uint32_t index(std::string_view key);
    std::optional<std::uint32_t> find(std::string_view key) const;
    std::size_t size() const noexcept { return strings_.size(); }
    const std::vector<std::string>& strings() const noexcept { return strings_; }

    static Dictionary from_strings(std::vector<std::string> strings);

private:
    std::vector<std::string> strings_;
    std::unordered_map<std::string, std::uint32_t> lookup_;
};

/// Column positions resolved against a header row.
struct ColumnBindings {
    std::size_t timestamp = 0;
    std::vector<std::size_t> categorical;
    std::vector<std::size_t> continuous;
    std::optional<std::size_t> label;

    static ColumnBindings resolve(const StreamSchema& schema, const std::vector<std::string>& header);
};

/// Splits one delimited line; double quotes group fields and surrounding blanks are trimmed.
std::vector<std::string> split_row(std::string_view line, char delimiter);

/// Epoch seconds (UTC) from a timestamp field. Throws FormatError.
double parse_timestamp(std::string_view text, std::string_view format);

struct ParsedRow {
    Event event;
    bool is_attack = false;
};

/// Converts one row. Numeric fields are validated before any dictionary is touched,
/// so rejected rows never grow the vocabulary. Throws FormatError on rejection.
ParsedRow parse_event(const std::vector<std::string>& row, const StreamSchema& schema, const ColumnBindings& columns,
                      std::vector<Dictionary>& dictionaries, AttributeSchema& attributes);

/// Streaming reader over a delimited file with a header row.
class EventReader {
public:
    EventReader(std::istream& in, StreamSchema schema, std::vector<Dictionary> dictionaries = {});

    /// Next accepted row, or nullopt at end of input.
    std::optional<ParsedRow> next();

    const StreamSchema& schema() const noexcept { return schema_; }
    const AttributeSchema& attributes() const noexcept { return attributes_; }
    const std::vector<Dictionary>& dictionaries() const noexcept { return dictionaries_; }

    std::size_t rows_read() const noexcept { return rows_read_; }
    std::size_t rows_rejected() const noexcept { return rows_rejected_; }
    std::size_t rows_skipped() const noexcept { return rows_skipped_; }
    double rejection_rate() const noexcept;

    /// Rows with a timestamp before `t` are skipped without parsing other fields.
    void skip_before(double t) { skip_before_ = t; }

private:
    std::istream& in_;
    StreamSchema schema_;
    ColumnBindings columns_;
    std::vector<Dictionary> dictionaries_;
    AttributeSchema attributes_;
    std::size_t rows_read_ = 0;
    std::size_t rows_rejected_ = 0;
    std::size_t rows_skipped_ = 0;
    std::optional<double> skip_before_;
    std::string line_;
};

struct LabeledWindow {
    CurrentTensor tensor;
    std::size_t attack_events = 0;
};

/// Cuts a time-ordered event stream into consecutive half-open windows
/// [start + i*duration, start + (i+1)*duration), emitting empty windows too.
class WindowStream {
public:
    WindowStream(double duration, double tick_seconds, double start, std::size_t first_index = 0);

    /// Windows completed by this event. Events earlier than the previous one, or
    /// earlier than the stream start, are rejected and counted.
    std::vector<LabeledWindow> push(Event event, bool is_attack = false);

    /// Emits the open window if it holds events.
    std::optional<LabeledWindow> flush();

    std::size_t out_of_order() const noexcept { return out_of_order_; }
    std::size_t accepted() const noexcept { return accepted_; }
    std::size_t next_index() const noexcept { return index_; }
    double current_start() const noexcept;

private:
    LabeledWindow close();

    double duration_;
    double tick_;
    double start_;
    std::size_t index_;
    std::vector<Event> pending_;
    std::size_t pending_attacks_ = 0;
    std::optional<double> last_time_;
    std::size_t out_of_order_ = 0;
    std::size_t accepted_ = 0;
};

/// Whole-sequence convenience over WindowStream; includes the trailing partial window.
std::vector<CurrentTensor> window_stream(const std::vector<Event>& events, double duration, double start,
                                         double tick_seconds = 1.0);

}  // namespace skewstream
