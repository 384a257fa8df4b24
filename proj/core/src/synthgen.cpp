#include "skewstream/synthgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <random>

#include "json_util.hpp"
#include "skewstream/error.hpp"
#include "skewstream/ingestion.hpp"

namespace skewstream {

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw FormatError("cannot format number");
    return std::string(buf, ptr);
}

std::vector<std::size_t> spread_events(std::size_t events, std::size_t ticks) {
    std::vector<std::size_t> out(ticks, events / std::max<std::size_t>(ticks, 1));
    for (std::size_t t = 0; t < events % std::max<std::size_t>(ticks, 1); ++t) ++out[t];
    return out;
}

SampledWindow sample_window(const ComponentMatrices& matrices, std::span<const std::size_t> events_per_tick,
                            std::size_t window_index, double start_time, double tick_seconds, Rng& rng,
                            double duration) {
    const std::size_t K = matrices.K;
    const std::size_t ticks = events_per_tick.size();
    if (duration <= 0.0) duration = static_cast<double>(ticks) * tick_seconds;
    if (matrices.time_mix.rows() != ticks) throw InvalidParameter("events_per_tick length differs from time mixture");

    std::vector<std::vector<std::discrete_distribution<std::uint32_t>>> units(matrices.cat_dists.size());
    for (std::size_t m = 0; m < matrices.cat_dists.size(); ++m)
        for (std::size_t k = 0; k < K; ++k) {
            const auto row = matrices.cat_dists[m].row(k);
            units[m].emplace_back(row.begin(), row.end());
        }
    std::vector<std::vector<std::gamma_distribution<double>>> values(matrices.gamma_params.size());
    for (std::size_t m = 0; m < matrices.gamma_params.size(); ++m)
        for (std::size_t k = 0; k < K; ++k) {
            const Matrix& g = matrices.gamma_params[m];
            values[m].emplace_back(g(k, 0), 1.0 / g(k, 1));
        }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double end = std::nextafter(start_time + duration, start_time);
    std::vector<Event> events;
    std::vector<std::uint32_t> components;
    for (std::size_t t = 0; t < ticks; ++t) {
        const auto mix = matrices.time_mix.row(t);
        std::discrete_distribution<std::uint32_t> pick(mix.begin(), mix.end());
        std::vector<double> offsets(events_per_tick[t]);
        for (double& o : offsets) o = unit(rng);
        std::sort(offsets.begin(), offsets.end());
        for (double o : offsets) {
            Event e;
            e.time = std::min(start_time + (static_cast<double>(t) + o) * tick_seconds, end);
            const std::uint32_t z = pick(rng);
            for (auto& dists : units) e.cat_values.push_back(dists[z](rng));
            for (auto& dists : values) {
                // Gamma draws can underflow to zero for small shapes.
                e.cont_values.push_back(std::max(dists[z](rng), std::numeric_limits<double>::min()));
            }
            events.push_back(std::move(e));
            components.push_back(z);
        }
    }
    SampledWindow out;
    out.window = make_window(window_index, start_time, duration, tick_seconds, std::move(events));
    out.components = std::move(components);
    return out;
}

ComponentMatrices regime_matrices(const RegimeSpec& spec, std::size_t ticks) {
    const std::size_t K = spec.components.size();
    if (K == 0) throw InvalidParameter("regime '" + spec.name + "' has no components");
    ComponentMatrices m;
    m.K = K;
    const std::size_t M1 = spec.components.front().categorical.size();
    const std::size_t M2 = spec.components.front().gamma.size();
    for (std::size_t a = 0; a < M1; ++a) {
        const std::size_t U = spec.components.front().categorical[a].size();
        Matrix A(K, U, 0.0);
        for (std::size_t k = 0; k < K; ++k) {
            const auto& probs = spec.components[k].categorical.at(a);
            if (probs.size() != U) throw InvalidParameter("categorical vectors differ in length");
            const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
            if (!(total > 0.0)) throw InvalidParameter("categorical vector has no mass");
            for (std::size_t u = 0; u < U; ++u) A(k, u) = probs[u] / total;
        }
        m.cat_dists.push_back(std::move(A));
    }
    for (std::size_t a = 0; a < M2; ++a) {
        Matrix g(K, 2);
        for (std::size_t k = 0; k < K; ++k) {
            const GammaParams p = spec.components[k].gamma.at(a);
            if (!(p.shape > 0.0) || !(p.rate > 0.0)) throw InvalidParameter("gamma parameters must be positive");
            g(k, 0) = p.shape;
            g(k, 1) = p.rate;
        }
        m.gamma_params.push_back(std::move(g));
    }
    double total = 0.0;
    for (const ComponentSpec& c : spec.components) total += c.weight;
    if (!(total > 0.0)) throw InvalidParameter("component weights must sum to a positive value");
    m.time_mix = Matrix(ticks, K);
    for (std::size_t t = 0; t < ticks; ++t)
        for (std::size_t k = 0; k < K; ++k) m.time_mix(t, k) = spec.components[k].weight / total;
    return m;
}

RegimeSpec random_regime_spec(std::string name, std::size_t K, std::span<const std::size_t> vocab,
                              std::size_t num_continuous, Rng& rng, double shape_min, double shape_max) {
    RegimeSpec spec;
    spec.name = std::move(name);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> log_mean(0.0, 1.5);
    if (K == 0) throw InvalidParameter("a regime needs at least one component");
    for (std::size_t U : vocab)
        if (U == 0) throw InvalidParameter("vocabulary sizes must be at least 1");
    // Random placement of the unit blocks so independently drawn regimes differ in profile.
    std::vector<std::size_t> offsets;
    for (std::size_t U : vocab) offsets.push_back(std::uniform_int_distribution<std::size_t>(0, U - 1)(rng));
    for (std::size_t k = 0; k < K; ++k) {
        ComponentSpec c;
        c.weight = 0.5 + unit(rng);
        for (std::size_t m = 0; m < vocab.size(); ++m) {
            const std::size_t U = vocab[m];
            // 90% of the mass on this component's block of units, the rest spread thin.
            std::vector<double> probs(U, 0.1 / static_cast<double>(U));
            const std::size_t block = std::max<std::size_t>(U / K, 1);
            const std::size_t first = (offsets[m] + k * block) % U;
            std::vector<double> w(block);
            for (double& x : w) x = 0.2 + unit(rng);
            const double sum = std::accumulate(w.begin(), w.end(), 0.0);
            for (std::size_t b = 0; b < block; ++b) probs[(first + b) % U] += 0.9 * w[b] / sum;
            c.categorical.push_back(std::move(probs));
        }
        for (std::size_t a = 0; a < num_continuous; ++a) {
            const double shape = shape_min + (shape_max - shape_min) * unit(rng);
            const double mean = std::exp(log_mean(rng));
            c.gamma.push_back({shape, shape / mean});
        }
        spec.components.push_back(std::move(c));
    }
    return spec;
}

std::size_t Scenario::total_windows() const {
    std::size_t n = 0;
    for (const SegmentSpec& s : segments) n += s.windows;
    return n;
}

std::size_t Scenario::regime_index(std::string_view name) const {
    for (std::size_t i = 0; i < regimes.size(); ++i)
        if (regimes[i].name == name) return i;
    throw ConfigError("scenario references unknown regime '" + std::string(name) + "'");
}

Scenario parse_scenario(std::string_view json_text) {
    using detail::field_as;
    using detail::field_or;
    const nlohmann::json j = detail::parse_json(json_text, "scenario");
    if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
    Scenario s;
    s.categorical_names = field_or<std::vector<std::string>>(j, "categorical", {}, "");
    s.continuous_names = field_or<std::vector<std::string>>(j, "continuous", {}, "");
    if (s.categorical_names.empty() && s.continuous_names.empty())
        throw ConfigError("scenario declares no attributes ('categorical' / 'continuous')");
    s.window_seconds = field_or<double>(j, "window_seconds", s.window_seconds, "");
    s.tick_seconds = field_or<double>(j, "tick_seconds", s.tick_seconds, "");
    s.events_per_window = field_or<std::size_t>(j, "events_per_window", s.events_per_window, "");
    s.start_time = field_or<double>(j, "start_time", s.start_time, "");
    if (!(s.window_seconds > 0.0) || !(s.tick_seconds > 0.0))
        throw ConfigError("'window_seconds' and 'tick_seconds' must be positive");

    if (!j.contains("regimes") || !j.at("regimes").is_array() || j.at("regimes").empty())
        throw ConfigError("scenario needs a non-empty 'regimes' array");
    std::size_t i = 0;
    for (const nlohmann::json& r : j.at("regimes")) {
        const std::string path = "regimes[" + std::to_string(i++) + "].";
        const auto name = field_as<std::string>(r, "name", path);
        if (r.contains("random")) {
            const nlohmann::json& rnd = r.at("random");
            const auto K = field_as<std::size_t>(rnd, "components", path + "random.");
            const auto vocab = field_or<std::vector<std::size_t>>(
                rnd, "vocab", std::vector<std::size_t>(s.categorical_names.size(), 10), path + "random.");
            if (vocab.size() != s.categorical_names.size())
                throw ConfigError("field '" + path + "random.vocab' must list one size per categorical attribute");
            Rng local(field_or<std::uint64_t>(rnd, "seed", 1, path + "random."));
            s.regimes.push_back(random_regime_spec(name, K, vocab, s.continuous_names.size(), local,
                                                   field_or<double>(rnd, "shape_min", 0.3, path + "random."),
                                                   field_or<double>(rnd, "shape_max", 2.0, path + "random.")));
            continue;
        }
        RegimeSpec spec;
        spec.name = name;
        if (!r.contains("components") || !r.at("components").is_array() || r.at("components").empty())
            throw ConfigError("field '" + path + "components' must be a non-empty array");
        std::size_t c = 0;
        for (const nlohmann::json& comp : r.at("components")) {
            const std::string cpath = path + "components[" + std::to_string(c++) + "].";
            ComponentSpec cs;
            cs.weight = field_or<double>(comp, "weight", 1.0, cpath);
            cs.categorical = field_or<std::vector<std::vector<double>>>(comp, "categorical", {}, cpath);
            for (const auto& pair : field_or<std::vector<std::vector<double>>>(comp, "gamma", {}, cpath)) {
                if (pair.size() != 2) throw ConfigError("field '" + cpath + "gamma' entries must be [shape, rate]");
                cs.gamma.push_back({pair[0], pair[1]});
            }
            if (cs.categorical.size() != s.categorical_names.size() || cs.gamma.size() != s.continuous_names.size())
                throw ConfigError("component at '" + cpath + "' does not match the declared attributes");
            spec.components.push_back(std::move(cs));
        }
        s.regimes.push_back(std::move(spec));
    }

    if (!j.contains("segments") || !j.at("segments").is_array() || j.at("segments").empty())
        throw ConfigError("scenario needs a non-empty 'segments' array");
    i = 0;
    for (const nlohmann::json& seg : j.at("segments")) {
        const std::string path = "segments[" + std::to_string(i++) + "].";
        SegmentSpec spec{field_as<std::string>(seg, "regime", path), field_as<std::size_t>(seg, "windows", path)};
        s.regime_index(spec.regime);
        s.segments.push_back(std::move(spec));
    }
    if (j.contains("anomaly") && !j.at("anomaly").is_null()) {
        const nlohmann::json& a = j.at("anomaly");
        AnomalySpec spec;
        spec.regime = field_as<std::string>(a, "regime", "anomaly.");
        spec.fraction = field_or<double>(a, "fraction", spec.fraction, "anomaly.");
        spec.skip_first = field_or<std::size_t>(a, "skip_first", spec.skip_first, "anomaly.");
        if (!(spec.fraction >= 0.0 && spec.fraction <= 1.0))
            throw ConfigError("field 'anomaly.fraction' must lie in [0, 1]");
        s.regime_index(spec.regime);
        s.anomaly = spec;
    }
    return s;
}

GeneratedStream sample_stream(const Scenario& scenario, Rng& rng) {
    if (scenario.segments.empty()) throw InvalidParameter("scenario has no segments");
    const std::size_t ticks = ticks_per_window(scenario.window_seconds, scenario.tick_seconds);
    std::vector<ComponentMatrices> matrices;
    for (const RegimeSpec& r : scenario.regimes) {
        matrices.push_back(regime_matrices(r, ticks));
        if (matrices.back().cat_dists.size() != scenario.categorical_names.size() ||
            matrices.back().gamma_params.size() != scenario.continuous_names.size())
            throw InvalidParameter("regime '" + r.name + "' does not match the scenario attributes");
    }

    GeneratedStream out;
    out.schema.categorical_names = scenario.categorical_names;
    out.schema.continuous_names = scenario.continuous_names;
    for (const ComponentMatrices& m : matrices)
        for (std::size_t a = 0; a < m.cat_dists.size(); ++a) {
            out.schema.vocab_sizes.resize(m.cat_dists.size(), 0);
            out.schema.vocab_sizes[a] = std::max(out.schema.vocab_sizes[a], m.cat_dists[a].cols());
        }

    std::vector<std::size_t> regime_of;
    for (const SegmentSpec& seg : scenario.segments)
        regime_of.insert(regime_of.end(), seg.windows, scenario.regime_index(seg.regime));
    const std::size_t total = regime_of.size();
    std::vector<bool> anomalous(total, false);
    if (scenario.anomaly) {
        const std::size_t anomaly_regime = scenario.regime_index(scenario.anomaly->regime);
        std::vector<std::size_t> eligible;
        for (std::size_t w = scenario.anomaly->skip_first; w < total; ++w) eligible.push_back(w);
        const auto count = std::min(
            eligible.size(), static_cast<std::size_t>(std::llround(scenario.anomaly->fraction * static_cast<double>(total))));
        // Partial Fisher-Yates keeps the choice independent of library shuffle details.
        for (std::size_t c = 0; c < count; ++c) {
            std::uniform_int_distribution<std::size_t> pick(c, eligible.size() - 1);
            std::swap(eligible[c], eligible[pick(rng)]);
            anomalous[eligible[c]] = true;
            regime_of[eligible[c]] = anomaly_regime;
        }
    }

    const auto per_tick = spread_events(scenario.events_per_window, ticks);
    for (std::size_t w = 0; w < total; ++w) {
        const double start = scenario.start_time + static_cast<double>(w) * scenario.window_seconds;
        out.windows.push_back(sample_window(matrices[regime_of[w]], per_tick, w, start, scenario.tick_seconds, rng,
                                            scenario.window_seconds));
        out.window_labels.push_back(anomalous[w] ? scenario.regimes[regime_of[w]].name : "BENIGN");
        out.truth.push_back({w, static_cast<int>(regime_of[w]), anomalous[w]});
    }
    return out;
}

void write_events_csv(const GeneratedStream& stream, std::ostream& out) {
    out << "time";
    for (const auto& n : stream.schema.categorical_names) out << ',' << n;
    for (const auto& n : stream.schema.continuous_names) out << ',' << n;
    out << ",label\n";
    for (std::size_t w = 0; w < stream.windows.size(); ++w) {
        for (const Event& e : stream.windows[w].window.events) {
            out << format_double(e.time);
            for (std::uint32_t u : e.cat_values) out << ',' << u;
            for (double x : e.cont_values) out << ',' << format_double(x);
            out << ',' << stream.window_labels[w] << '\n';
        }
    }
}

void write_truth_csv(const GeneratedStream& stream, std::ostream& out) {
    out << "window_index,regime_id,is_anomaly\n";
    for (const TruthRow& t : stream.truth) out << t.window_index << ',' << t.regime_id << ',' << (t.is_anomaly ? 1 : 0) << '\n';
}

std::vector<TruthRow> read_truth_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("truth file is empty");
    const auto header = split_row(line, ',');
    if (header.size() < 3 || header[0] != "window_index" || header[1] != "regime_id" || header[2] != "is_anomaly")
        throw FormatError("truth file header must be window_index,regime_id,is_anomaly");
    std::vector<TruthRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_row(line, ',');
        if (f.size() < 3) throw FormatError("truth row has too few fields");
        try {
            rows.push_back({static_cast<std::size_t>(std::stoull(f[0])), std::stoi(f[1]), std::stoi(f[2]) != 0});
        } catch (const std::exception&) {
            throw FormatError("unparsable truth row '" + line + "'");
        }
    }
    return rows;
}

std::string run_config_for(const Scenario& scenario) {
    nlohmann::json attrs = nlohmann::json::array();
    for (const auto& n : scenario.categorical_names) attrs.push_back({{"column", n}, {"type", "categorical"}});
    for (const auto& n : scenario.continuous_names) attrs.push_back({{"column", n}, {"type", "continuous"}});
    nlohmann::json cfg = {
        {"schema",
         {{"timestamp", {{"column", "time"}, {"format", "epoch"}}},
          {"attributes", attrs},
          {"label_column", "label"},
          {"benign_labels", {"BENIGN"}}}},
        {"window_seconds", scenario.window_seconds},
        {"tick_seconds", scenario.tick_seconds},
        {"stream_start", scenario.start_time},
    };
    return cfg.dump(2) + "\n";
}

}  // namespace skewstream
