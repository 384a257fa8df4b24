#include "skewstream/snapshot.hpp"

#include "json_util.hpp"
#include "skewstream/error.hpp"

namespace skewstream {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "skewstream-snapshot";

json matrix_to_json(const Matrix& m) { return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}}; }

Matrix matrix_from_json(const json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != m.rows() * m.cols()) throw FormatError("matrix data length does not match its shape");
    m.data() = std::move(data);
    return m;
}

json matrices_to_json(const ComponentMatrices& m) {
    json cat = json::array();
    for (const Matrix& a : m.cat_dists) cat.push_back(matrix_to_json(a));
    json gam = json::array();
    for (const Matrix& g : m.gamma_params) gam.push_back(matrix_to_json(g));
    return {{"K", m.K}, {"cat_dists", cat}, {"gamma_params", gam}, {"time_mix", matrix_to_json(m.time_mix)}};
}

ComponentMatrices matrices_from_json(const json& j) {
    ComponentMatrices m;
    m.K = j.at("K").get<std::size_t>();
    for (const json& a : j.at("cat_dists")) m.cat_dists.push_back(matrix_from_json(a));
    for (const json& g : j.at("gamma_params")) m.gamma_params.push_back(matrix_from_json(g));
    m.time_mix = matrix_from_json(j.at("time_mix"));
    return m;
}

json description_to_json(const CompactDescription& c) {
    json regimes = json::array();
    for (const Regime& r : c.regimes)
        regimes.push_back({{"id", r.id},
                           {"total_segment_length", r.total_segment_length},
                           {"component_events", r.component_events},
                           {"cat_row_mass", r.cat_row_mass},
                           {"matrices", matrices_to_json(r.matrices)}});
    json switches = json::array();
    for (const SwitchRecord& s : c.switches) switches.push_back({s.switch_time, s.regime_id});
    return {{"regimes", regimes}, {"switches", switches}, {"windows_described", c.windows_described}};
}

CompactDescription description_from_json(const json& j) {
    CompactDescription c;
    for (const json& r : j.at("regimes")) {
        Regime reg;
        reg.id = r.at("id").get<int>();
        reg.total_segment_length = r.at("total_segment_length").get<std::size_t>();
        reg.component_events = r.at("component_events").get<std::vector<double>>();
        reg.cat_row_mass = r.at("cat_row_mass").get<std::vector<std::vector<double>>>();
        reg.matrices = matrices_from_json(r.at("matrices"));
        c.regimes.push_back(std::move(reg));
    }
    for (const json& s : j.at("switches"))
        c.switches.push_back({s.at(0).get<std::size_t>(), s.at(1).get<int>()});
    c.windows_described = j.at("windows_described").get<std::size_t>();
    return c;
}

json schema_to_json(const AttributeSchema& s) {
    return {{"categorical_names", s.categorical_names},
            {"continuous_names", s.continuous_names},
            {"vocab_sizes", s.vocab_sizes}};
}

AttributeSchema schema_from_json(const json& j) {
    AttributeSchema s;
    s.categorical_names = j.at("categorical_names").get<std::vector<std::string>>();
    s.continuous_names = j.at("continuous_names").get<std::vector<std::string>>();
    s.vocab_sizes = j.at("vocab_sizes").get<std::vector<std::size_t>>();
    return s;
}

template <typename F>
auto guarded(F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed snapshot: ") + e.what());
    }
}

}  // namespace

Snapshot capture(const Engine& engine, const AttributeSchema& schema, std::optional<double> origin,
                 std::vector<std::vector<std::string>> dictionaries) {
    Snapshot s;
    s.config = engine.config();
    s.schema = schema;
    s.description = engine.description();
    s.rng_state = engine.rng_state();
    s.next_window_index = engine.next_window_index();
    s.stream_origin = origin;
    s.dictionaries = std::move(dictionaries);
    return s;
}

Engine restore_engine(const Snapshot& snapshot) {
    return Engine::restore(snapshot.config, snapshot.description, snapshot.rng_state, snapshot.next_window_index);
}

std::string write_snapshot(const Snapshot& s) {
    json j = {
        {"format", kFormat},
        {"version", Snapshot::kVersion},
        {"config", detail::engine_config_to_json(s.config)},
        {"schema", schema_to_json(s.schema)},
        {"description", description_to_json(s.description)},
        {"rng_state", s.rng_state},
        {"next_window_index", s.next_window_index},
        {"stream_origin", s.stream_origin ? json(*s.stream_origin) : json(nullptr)},
        {"dictionaries", s.dictionaries},
    };
    return j.dump() + "\n";
}

Snapshot read_snapshot(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("snapshot is not valid JSON: ") + e.what());
    }
    return guarded([&] {
        if (j.value("format", std::string{}) != kFormat) throw FormatError("not a snapshot file");
        const int version = j.at("version").get<int>();
        if (version != Snapshot::kVersion)
            throw FormatError("unsupported snapshot version " + std::to_string(version));
        Snapshot s;
        try {
            s.config = detail::engine_config_from_json(j.at("config"), EngineConfig{});
        } catch (const ConfigError& e) {
            throw FormatError(std::string("snapshot config: ") + e.what());
        }
        s.schema = schema_from_json(j.at("schema"));
        s.description = description_from_json(j.at("description"));
        s.rng_state = j.at("rng_state").get<std::string>();
        s.next_window_index = j.at("next_window_index").get<std::size_t>();
        if (!j.at("stream_origin").is_null()) s.stream_origin = j.at("stream_origin").get<double>();
        s.dictionaries = j.at("dictionaries").get<std::vector<std::vector<std::string>>>();
        return s;
    });
}

std::string write_description(const CompactDescription& c) { return description_to_json(c).dump() + "\n"; }

CompactDescription read_description(std::string_view text) {
    return guarded([&] {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw FormatError(std::string("description is not valid JSON: ") + e.what());
        }
        return description_from_json(j);
    });
}

}  // namespace skewstream
