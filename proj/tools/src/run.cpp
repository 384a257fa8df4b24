#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>

#include "commands.hpp"
#include "io.hpp"
#include "skewstream/config.hpp"
#include "skewstream/engine.hpp"
#include "skewstream/ingestion.hpp"
#include "skewstream/log.hpp"
#include "skewstream/snapshot.hpp"
#include "skewstream/synthgen.hpp"

namespace skewstream::cli {

namespace {

struct RunOptions {
    std::string config;
    std::string input = "-";
    std::string output;
    std::string snapshot_in;
    std::string snapshot_out;
    std::string latency_out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> components;
    std::optional<double> window_seconds;
    std::optional<std::size_t> snapshot_every;
    std::optional<double> min_attack_fraction;
    std::size_t max_windows = 0;
};

constexpr const char* kScoreHeader =
    "window_index,start_time,num_events,chosen_regime_id,is_new_regime,delta_model_cost,data_cost,anomaly_score\n";

void write_score(std::ostream& out, const ScoredWindow& w) {
    out << w.window_index << ',' << format_double(w.start_time) << ',' << w.num_events << ',' << w.chosen_regime_id
        << ',' << (w.is_new_regime ? 1 : 0) << ',' << format_double(w.delta_model_cost) << ','
        << format_double(w.data_cost) << ',' << format_double(w.anomaly_score) << '\n';
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

std::vector<std::vector<std::string>> dictionary_strings(const std::vector<Dictionary>& dicts) {
    std::vector<std::vector<std::string>> out;
    for (const Dictionary& d : dicts) out.push_back(d.strings());
    return out;
}

void execute(const RunOptions& opt) {
    RunConfig rc = parse_run_config(read_file(opt.config));
    if (opt.seed) rc.seed = *opt.seed;
    if (opt.components) rc.engine.sifi.K = *opt.components;
    if (opt.window_seconds) rc.engine.window_seconds = *opt.window_seconds;
    if (opt.snapshot_every) rc.snapshot_every = *opt.snapshot_every;
    if (opt.min_attack_fraction) rc.min_attack_fraction = *opt.min_attack_fraction;
    if (rc.engine.sifi.K == 0) throw std::runtime_error("--components must be at least 1");
    if (!(rc.engine.window_seconds > 0.0)) throw std::runtime_error("--window-seconds must be positive");

    std::optional<Engine> engine;
    std::vector<Dictionary> dictionaries;
    std::optional<double> origin = rc.stream_start;
    if (!opt.snapshot_in.empty()) {
        const Snapshot snap = read_snapshot(read_file(opt.snapshot_in));
        if (!(snap.config == rc.engine))
            log::warn("engine settings differ from the snapshot; continuing with the snapshot's settings");
        rc.engine = snap.config;
        engine.emplace(restore_engine(snap));
        for (const auto& strings : snap.dictionaries) dictionaries.push_back(Dictionary::from_strings(strings));
        if (!snap.stream_origin) throw std::runtime_error("snapshot has no stream origin to resume from");
        origin = snap.stream_origin;
    } else {
        engine.emplace(rc.engine, rc.seed);
    }

    auto input = open_input(opt.input);
    EventReader reader(*input, rc.schema, std::move(dictionaries));
    const std::size_t first_index = engine->next_window_index();
    if (origin && first_index > 0)
        reader.skip_before(*origin + static_cast<double>(first_index) * rc.engine.window_seconds);

    std::ofstream scores = open_output(opt.output);
    scores << kScoreHeader;
    std::optional<std::ofstream> labels;
    if (rc.schema.label_column) {
        labels = open_output(opt.output + ".labels.csv");
        *labels << "window_index,events,attack_events\n";
    }
    std::optional<std::ofstream> latency;
    if (!opt.latency_out.empty()) {
        latency = open_output(opt.latency_out);
        *latency << "window_index,events,seconds\n";
    }

    std::optional<WindowStream> windows;
    std::size_t processed = 0;
    bool stopped = false;
    auto save_snapshot = [&] {
        if (opt.snapshot_out.empty()) return;
        const Snapshot snap =
            capture(*engine, reader.attributes(), origin, dictionary_strings(reader.dictionaries()));
        write_file_atomic(opt.snapshot_out, write_snapshot(snap));
    };
    auto handle = [&](const LabeledWindow& w) {
        const auto t0 = std::chrono::steady_clock::now();
        const ScoredWindow scored = engine->process(w.tensor, reader.attributes());
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        write_score(scores, scored);
        if (labels) *labels << w.tensor.window_index << ',' << w.tensor.events.size() << ',' << w.attack_events << '\n';
        if (latency) *latency << w.tensor.window_index << ',' << w.tensor.events.size() << ',' << dt.count() << '\n';
        ++processed;
        if (rc.snapshot_every > 0 && processed % rc.snapshot_every == 0) save_snapshot();
        if (opt.max_windows > 0 && processed >= opt.max_windows) stopped = true;
    };

    const auto start = std::chrono::steady_clock::now();
    std::size_t events = 0;
    while (!stopped) {
        auto row = reader.next();
        if (!row) break;
        if (!windows) {
            if (!origin) origin = row->event.time;
            windows.emplace(rc.engine.window_seconds, rc.engine.tick_seconds, *origin, first_index);
        }
        ++events;
        for (const LabeledWindow& w : windows->push(std::move(row->event), row->is_attack)) {
            handle(w);
            if (stopped) break;
        }
    }
    if (!stopped && windows)
        if (auto last = windows->flush()) handle(*last);
    save_snapshot();
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;

    nlohmann::json meta = {
        {"effective_config", nlohmann::json::parse(run_config_to_json(rc))},
        {"score_unit", rc.engine.per_event_normalization ? "bits_per_event" : "bits_per_window"},
        {"windowing", {{"origin", origin ? nlohmann::json(*origin) : nlohmann::json(nullptr)},
                       {"first_window_index", first_index}}},
        {"resumed_from_snapshot", !opt.snapshot_in.empty()},
        {"rows_read", reader.rows_read()},
        {"rows_rejected", reader.rows_rejected()},
        {"rows_skipped", reader.rows_skipped()},
        {"out_of_order", windows ? windows->out_of_order() : 0},
        {"windows_written", processed},
        {"regimes", engine->description().R()},
        {"switches", engine->description().G()},
    };
    write_file_atomic(opt.output + ".meta.json", meta.dump(2) + "\n");

    std::cerr << "processed " << processed << " windows (" << events << " events, " << reader.rows_rejected()
              << " rejected rows) in " << wall.count() << " s; regimes=" << engine->description().R()
              << " switches=" << engine->description().G() << '\n';
    if (reader.rows_read() > 0 && reader.rejection_rate() > 0.01)
        log::warn("more than 1% of input rows were rejected");
}

}  // namespace

void add_run(CLI::App& app) {
    auto opt = std::make_shared<RunOptions>();
    CLI::App* cmd = app.add_subcommand("run", "Stream events through the engine and write per-window scores");
    cmd->add_option("--config", opt->config, "Run config (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--input", opt->input, "Event file, '-' for stdin; .gz is decompressed")->capture_default_str();
    cmd->add_option("--output", opt->output, "Per-window score CSV")->required();
    cmd->add_option("--snapshot-in", opt->snapshot_in, "Resume from this snapshot")->check(CLI::ExistingFile);
    cmd->add_option("--snapshot-out", opt->snapshot_out, "Write the engine snapshot here");
    cmd->add_option("--latency-out", opt->latency_out, "Per-window processing time CSV (not deterministic)");
    cmd->add_option("--seed", opt->seed, "Overrides 'seed'");
    cmd->add_option("--components", opt->components, "Overrides 'components'");
    cmd->add_option("--window-seconds", opt->window_seconds, "Overrides 'window_seconds'");
    cmd->add_option("--snapshot-every", opt->snapshot_every, "Overrides 'snapshot_every'");
    cmd->add_option("--min-attack-fraction", opt->min_attack_fraction, "Overrides 'min_attack_fraction'");
    cmd->add_option("--max-windows", opt->max_windows, "Stop after this many windows (0 = all)");
    cmd->callback([opt] { execute(*opt); });
}

}  // namespace skewstream::cli
