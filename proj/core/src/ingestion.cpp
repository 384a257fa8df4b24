#include "skewstream/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <set>

#include "json_util.hpp"
#include "skewstream/error.hpp"

namespace skewstream {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_real(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

std::optional<double> parse_with_pattern(std::string_view text, const std::string& pattern) {
    std::tm tm{};
    const std::string owned(text);
    const char* end = ::strptime(owned.c_str(), pattern.c_str(), &tm);
    if (end == nullptr || !trim(std::string_view(end)).empty()) return std::nullopt;
    return static_cast<double>(::timegm(&tm));
}

}  // namespace

AttributeSchema StreamSchema::attribute_schema() const {
    AttributeSchema s;
    for (const AttributeBinding& a : attributes) {
        if (a.kind == AttributeKind::categorical) {
            s.categorical_names.push_back(a.name);
            s.vocab_sizes.push_back(0);
        } else {
            s.continuous_names.push_back(a.name);
        }
    }
    return s;
}

StreamSchema parse_schema(std::string_view json_text) {
    using detail::field_as;
    using detail::field_or;
    const nlohmann::json root = detail::parse_json(json_text, "schema config");
    if (!root.is_object()) throw ConfigError("config must be a JSON object");
    const bool nested = root.contains("schema");
    const nlohmann::json& obj = nested ? root.at("schema") : root;
    const std::string prefix = nested ? "schema." : "";
    if (!obj.is_object()) throw ConfigError("field 'schema' must be an object");

    StreamSchema s;
    if (!obj.contains("timestamp")) throw ConfigError("missing timestamp column (field '" + prefix + "timestamp')");
    const nlohmann::json& ts = obj.at("timestamp");
    if (ts.is_string()) {
        s.timestamp_column = ts.get<std::string>();
    } else if (ts.is_object()) {
        s.timestamp_column = field_as<std::string>(ts, "column", prefix + "timestamp.");
        s.timestamp_format = field_or<std::string>(ts, "format", "auto", prefix + "timestamp.");
    } else {
        throw ConfigError("field '" + prefix + "timestamp' must be a column name or an object");
    }
    if (s.timestamp_column.empty()) throw ConfigError("missing timestamp column (field '" + prefix + "timestamp')");

    if (!obj.contains("attributes") || !obj.at("attributes").is_array())
        throw ConfigError("field '" + prefix + "attributes' must be an array");
    std::set<std::string> names;
    std::set<std::string> columns{s.timestamp_column};
    std::size_t i = 0;
    for (const nlohmann::json& a : obj.at("attributes")) {
        const std::string path = prefix + "attributes[" + std::to_string(i++) + "].";
        AttributeBinding b;
        b.column = field_as<std::string>(a, "column", path);
        b.name = field_or<std::string>(a, "name", b.column, path);
        const auto type = field_as<std::string>(a, "type", path);
        if (type == "categorical") {
            b.kind = AttributeKind::categorical;
        } else if (type == "continuous") {
            b.kind = AttributeKind::continuous;
        } else {
            throw ConfigError("field '" + path + "type' must be 'categorical' or 'continuous'");
        }
        if (!names.insert(b.name).second) throw ConfigError("duplicate attribute name '" + b.name + "' at " + path);
        if (!columns.insert(b.column).second)
            throw ConfigError("column '" + b.column + "' bound more than once at " + path);
        s.attributes.push_back(std::move(b));
    }
    if (s.attributes.empty()) throw ConfigError("field '" + prefix + "attributes' declares no attributes");

    const auto delim = field_or<std::string>(obj, "delimiter", ",", prefix);
    if (delim == "\\t" || delim == "tab") {
        s.delimiter = '\t';
    } else if (delim.size() == 1) {
        s.delimiter = delim.front();
    } else {
        throw ConfigError("field '" + prefix + "delimiter' must be a single character");
    }
    if (obj.contains("label_column") && !obj.at("label_column").is_null())
        s.label_column = field_as<std::string>(obj, "label_column", prefix);
    s.benign_labels = field_or<std::vector<std::string>>(obj, "benign_labels", s.benign_labels, prefix);
    s.clamp_epsilon = field_or<double>(obj, "clamp_epsilon", s.clamp_epsilon, prefix);
    if (!(s.clamp_epsilon > 0.0)) throw ConfigError("field '" + prefix + "clamp_epsilon' must be positive");
    return s;
}

std::uint32_t Dictionary::index(std::string_view key) {
    if (auto hit = find(key)) return *hit;
    const auto id = static_cast<std::uint32_t>(strings_.size());
    strings_.emplace_back(key);
    lookup_.emplace(strings_.back(), id);
    return id;
}

std::optional<std::uint32_t> Dictionary::find(std::string_view key) const {
    const auto it = lookup_.find(std::string(key));
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

Dictionary Dictionary::from_strings(std::vector<std::string> strings) {
    Dictionary d;
    for (std::string& s : strings) {
        if (d.find(s)) throw FormatError("dictionary contains duplicate unit '" + s + "'");
        d.index(s);
    }
    return d;
}

ColumnBindings ColumnBindings::resolve(const StreamSchema& schema, const std::vector<std::string>& header) {
    auto position = [&](const std::string& column) -> std::size_t {
        const auto it = std::find(header.begin(), header.end(), column);
        if (it == header.end()) throw ConfigError("input has no column named '" + column + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    ColumnBindings b;
    b.timestamp = position(schema.timestamp_column);
    for (const AttributeBinding& a : schema.attributes) {
        if (a.kind == AttributeKind::categorical) {
            b.categorical.push_back(position(a.column));
        } else {
            b.continuous.push_back(position(a.column));
        }
    }
    if (schema.label_column) b.label = position(*schema.label_column);
    return b;
}

std::vector<std::string> split_row(std::string_view line, char delimiter) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delimiter) {
            out.emplace_back(trim(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    out.emplace_back(trim(field));
    return out;
}

double parse_timestamp(std::string_view text, std::string_view format) {
    text = trim(text);
    if (format == "epoch") {
        if (auto v = parse_real(text)) return *v;
        throw FormatError("unparsable epoch timestamp '" + std::string(text) + "'");
    }
    if (format == "auto") {
        if (auto v = parse_real(text)) return *v;
        static const std::string patterns[] = {"%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M:%S", "%d/%m/%Y %H:%M:%S",
                                               "%d/%m/%Y %I:%M:%S %p", "%d/%m/%Y %H:%M"};
        for (const std::string& p : patterns)
            if (auto v = parse_with_pattern(text, p)) return *v;
        throw FormatError("unparsable timestamp '" + std::string(text) + "'");
    }
    if (auto v = parse_with_pattern(text, std::string(format))) return *v;
    throw FormatError("timestamp '" + std::string(text) + "' does not match '" + std::string(format) + "'");
}

ParsedRow parse_event(const std::vector<std::string>& row, const StreamSchema& schema, const ColumnBindings& columns,
                      std::vector<Dictionary>& dictionaries, AttributeSchema& attributes) {
    auto cell = [&](std::size_t pos) -> const std::string& {
        if (pos >= row.size()) throw FormatError("row has too few columns");
        return row[pos];
    };
    ParsedRow out;
    out.event.time = parse_timestamp(cell(columns.timestamp), schema.timestamp_format);
    if (out.event.time < 0.0) throw FormatError("negative timestamp");
    out.event.cont_values.reserve(columns.continuous.size());
    for (std::size_t pos : columns.continuous) {
        const auto v = parse_real(cell(pos));
        if (!v) throw FormatError("unparsable number '" + cell(pos) + "'");
        out.event.cont_values.push_back(*v > 0.0 ? *v : schema.clamp_epsilon);
    }
    if (columns.label) {
        const std::string& label = cell(*columns.label);
        out.is_attack = std::find(schema.benign_labels.begin(), schema.benign_labels.end(), label) ==
                        schema.benign_labels.end();
    }
    for (std::size_t m = 0; m < columns.categorical.size(); ++m) cell(columns.categorical[m]);

    if (dictionaries.size() < columns.categorical.size()) dictionaries.resize(columns.categorical.size());
    if (attributes.vocab_sizes.size() < columns.categorical.size())
        attributes.vocab_sizes.resize(columns.categorical.size(), 0);
    out.event.cat_values.reserve(columns.categorical.size());
    for (std::size_t m = 0; m < columns.categorical.size(); ++m) {
        out.event.cat_values.push_back(dictionaries[m].index(row[columns.categorical[m]]));
        attributes.vocab_sizes[m] = dictionaries[m].size();
    }
    return out;
}

EventReader::EventReader(std::istream& in, StreamSchema schema, std::vector<Dictionary> dictionaries)
    : in_(in), schema_(std::move(schema)), dictionaries_(std::move(dictionaries)) {
    attributes_ = schema_.attribute_schema();
    dictionaries_.resize(attributes_.num_categorical());
    for (std::size_t m = 0; m < dictionaries_.size(); ++m) attributes_.vocab_sizes[m] = dictionaries_[m].size();
    if (!std::getline(in_, line_)) throw FormatError("input is empty; expected a header row");
    columns_ = ColumnBindings::resolve(schema_, split_row(line_, schema_.delimiter));
}

std::optional<ParsedRow> EventReader::next() {
    while (std::getline(in_, line_)) {
        if (trim(line_).empty()) continue;
        ++rows_read_;
        const auto row = split_row(line_, schema_.delimiter);
        try {
            if (skip_before_) {
                if (columns_.timestamp >= row.size()) throw FormatError("row has too few columns");
                if (parse_timestamp(row[columns_.timestamp], schema_.timestamp_format) < *skip_before_) {
                    ++rows_skipped_;
                    continue;
                }
            }
            return parse_event(row, schema_, columns_, dictionaries_, attributes_);
        } catch (const FormatError&) {
            ++rows_rejected_;
        }
    }
    return std::nullopt;
}

double EventReader::rejection_rate() const noexcept {
    return rows_read_ == 0 ? 0.0 : static_cast<double>(rows_rejected_) / static_cast<double>(rows_read_);
}

WindowStream::WindowStream(double duration, double tick_seconds, double start, std::size_t first_index)
    : duration_(duration), tick_(tick_seconds), start_(start), index_(first_index) {
    if (!(duration > 0.0) || !std::isfinite(duration)) throw ConfigError("window duration must be positive");
    if (!(tick_seconds > 0.0)) throw ConfigError("tick length must be positive");
}

double WindowStream::current_start() const noexcept { return start_ + static_cast<double>(index_) * duration_; }

LabeledWindow WindowStream::close() {
    LabeledWindow w;
    w.tensor = make_window(index_, current_start(), duration_, tick_, std::move(pending_));
    w.attack_events = pending_attacks_;
    pending_.clear();
    pending_attacks_ = 0;
    ++index_;
    return w;
}

std::vector<LabeledWindow> WindowStream::push(Event event, bool is_attack) {
    std::vector<LabeledWindow> done;
    if ((last_time_ && event.time < *last_time_) || event.time < current_start()) {
        ++out_of_order_;
        return done;
    }
    while (event.time >= current_start() + duration_) done.push_back(close());
    last_time_ = event.time;
    pending_.push_back(std::move(event));
    if (is_attack) ++pending_attacks_;
    ++accepted_;
    return done;
}

std::optional<LabeledWindow> WindowStream::flush() {
    if (pending_.empty()) return std::nullopt;
    return close();
}

std::vector<CurrentTensor> window_stream(const std::vector<Event>& events, double duration, double start,
                                         double tick_seconds) {
    WindowStream stream(duration, tick_seconds, start);
    std::vector<CurrentTensor> out;
    for (const Event& e : events)
        for (LabeledWindow& w : stream.push(e)) out.push_back(std::move(w.tensor));
    if (auto last = stream.flush()) out.push_back(std::move(last->tensor));
    return out;
}

}  // namespace skewstream
