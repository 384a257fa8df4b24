#include "skewstream/config.hpp"

#include "json_util.hpp"

namespace skewstream {

namespace detail {

nlohmann::json engine_config_to_json(const EngineConfig& c) {
    return {
        {"components", c.sifi.K},
        {"burn_in", c.sifi.burn_in},
        {"samples", c.sifi.samples},
        {"refit_burn_in", c.sifi.refit_burn_in},
        {"refit_samples", c.sifi.refit_samples},
        {"prior_strength", c.sifi.prior_strength},
        {"prior_floor", c.sifi.prior_floor},
        {"cold_start_restarts", c.sifi.cold_start_restarts},
        {"cold_start_burn_in", c.sifi.cold_start_burn_in},
        {"bits_per_parameter", c.mdl.bits_per_parameter},
        {"window_seconds", c.window_seconds},
        {"tick_seconds", c.tick_seconds},
        {"per_event_normalization", c.per_event_normalization},
        {"refresh_regimes", c.refresh_regimes},
    };
}

EngineConfig engine_config_from_json(const nlohmann::json& obj, EngineConfig c) {
    c.sifi.K = field_or<std::size_t>(obj, "components", c.sifi.K, "");
    c.sifi.burn_in = field_or<std::size_t>(obj, "burn_in", c.sifi.burn_in, "");
    c.sifi.samples = field_or<std::size_t>(obj, "samples", c.sifi.samples, "");
    c.sifi.refit_burn_in = field_or<std::size_t>(obj, "refit_burn_in", c.sifi.refit_burn_in, "");
    c.sifi.refit_samples = field_or<std::size_t>(obj, "refit_samples", c.sifi.refit_samples, "");
    c.sifi.prior_strength = field_or<double>(obj, "prior_strength", c.sifi.prior_strength, "");
    c.sifi.prior_floor = field_or<double>(obj, "prior_floor", c.sifi.prior_floor, "");
    c.sifi.cold_start_restarts =
        field_or<std::size_t>(obj, "cold_start_restarts", c.sifi.cold_start_restarts, "");
    c.sifi.cold_start_burn_in = field_or<std::size_t>(obj, "cold_start_burn_in", c.sifi.cold_start_burn_in, "");
    c.mdl.bits_per_parameter = field_or<double>(obj, "bits_per_parameter", c.mdl.bits_per_parameter, "");
    c.window_seconds = field_or<double>(obj, "window_seconds", c.window_seconds, "");
    c.tick_seconds = field_or<double>(obj, "tick_seconds", c.tick_seconds, "");
    c.per_event_normalization = field_or<bool>(obj, "per_event_normalization", c.per_event_normalization, "");
    c.refresh_regimes = field_or<bool>(obj, "refresh_regimes", c.refresh_regimes, "");
    if (c.sifi.K == 0) throw ConfigError("field 'components' must be at least 1");
    if (!(c.window_seconds > 0.0)) throw ConfigError("field 'window_seconds' must be positive");
    if (!(c.tick_seconds > 0.0)) throw ConfigError("field 'tick_seconds' must be positive");
    if (!(c.sifi.prior_strength >= 0.0)) throw ConfigError("field 'prior_strength' must be non-negative");
    if (!(c.sifi.prior_floor > 0.0)) throw ConfigError("field 'prior_floor' must be positive");
    if (!(c.mdl.bits_per_parameter >= 0.0)) throw ConfigError("field 'bits_per_parameter' must be non-negative");
    return c;
}

}  // namespace detail

RunConfig parse_run_config(std::string_view json_text) {
    const nlohmann::json root = detail::parse_json(json_text, "run config");
    if (!root.is_object()) throw ConfigError("run config must be a JSON object");
    if (!root.contains("schema")) throw ConfigError("run config needs a 'schema' object");
    RunConfig rc;
    rc.schema = parse_schema(json_text);
    rc.engine = detail::engine_config_from_json(root, rc.engine);
    if (root.contains("stream_start") && !root.at("stream_start").is_null())
        rc.stream_start = detail::field_as<double>(root, "stream_start", "");
    rc.seed = detail::field_or<std::uint64_t>(root, "seed", rc.seed, "");
    rc.snapshot_every = detail::field_or<std::size_t>(root, "snapshot_every", rc.snapshot_every, "");
    rc.min_attack_fraction = detail::field_or<double>(root, "min_attack_fraction", rc.min_attack_fraction, "");
    return rc;
}

std::string run_config_to_json(const RunConfig& rc) {
    nlohmann::json attrs = nlohmann::json::array();
    for (const AttributeBinding& a : rc.schema.attributes)
        attrs.push_back({{"name", a.name},
                         {"column", a.column},
                         {"type", a.kind == AttributeKind::categorical ? "categorical" : "continuous"}});
    nlohmann::json schema = {
        {"timestamp", {{"column", rc.schema.timestamp_column}, {"format", rc.schema.timestamp_format}}},
        {"attributes", attrs},
        {"delimiter", rc.schema.delimiter == '\t' ? std::string("\\t") : std::string(1, rc.schema.delimiter)},
        {"benign_labels", rc.schema.benign_labels},
        {"clamp_epsilon", rc.schema.clamp_epsilon},
    };
    if (rc.schema.label_column) schema["label_column"] = *rc.schema.label_column;
    nlohmann::json out = detail::engine_config_to_json(rc.engine);
    out["schema"] = schema;
    out["stream_start"] = rc.stream_start ? nlohmann::json(*rc.stream_start) : nlohmann::json(nullptr);
    out["seed"] = rc.seed;
    out["snapshot_every"] = rc.snapshot_every;
    out["min_attack_fraction"] = rc.min_attack_fraction;
    return out.dump(2) + "\n";
}

}  // namespace skewstream
