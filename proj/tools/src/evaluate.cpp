#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "commands.hpp"
#include "io.hpp"
#include "skewstream/error.hpp"
#include "skewstream/eval.hpp"
#include "skewstream/ingestion.hpp"
#include "skewstream/synthgen.hpp"

namespace skewstream::cli {

namespace {

struct EvaluateOptions {
    std::string scores;
    std::string truth;
    std::string labeling = "any";
    std::string out;
};

struct ScoreRow {
    std::size_t window_index = 0;
    int regime = -1;
    double score = 0.0;
};

std::vector<std::vector<std::string>> read_csv(const std::string& path, std::vector<std::string>& header) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw FormatError("'" + path + "' is empty");
    header = split_row(line, ',');
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line))
        if (!line.empty()) rows.push_back(split_row(line, ','));
    return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name, const std::string& path) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw FormatError("'" + path + "' has no column '" + name + "'");
}

std::vector<ScoreRow> read_scores(const std::string& path) {
    std::vector<std::string> header;
    const auto rows = read_csv(path, header);
    const auto idx = column(header, "window_index", path);
    const auto reg = column(header, "chosen_regime_id", path);
    const auto score = column(header, "anomaly_score", path);
    std::vector<ScoreRow> out;
    for (const auto& r : rows) {
        if (r.size() != header.size()) throw FormatError("'" + path + "' has a ragged row");
        out.push_back({std::stoull(r[idx]), std::stoi(r[reg]), std::stod(r[score])});
    }
    return out;
}

double parse_labeling(const std::string& rule) {
    if (rule == "any") return 0.0;
    const std::string prefix = "fraction:";
    if (rule.rfind(prefix, 0) == 0) {
        const double f = std::stod(rule.substr(prefix.size()));
        if (!(f > 0.0 && f <= 1.0)) throw std::runtime_error("labeling fraction must lie in (0, 1]");
        return f;
    }
    throw std::runtime_error("unknown labeling rule '" + rule + "' (use 'any' or 'fraction:<f>')");
}

void execute(const EvaluateOptions& opt) {
    const double min_fraction = parse_labeling(opt.labeling);
    const auto scores = read_scores(opt.scores);

    std::vector<std::string> header;
    const auto rows = read_csv(opt.truth, header);
    if (rows.size() != scores.size())
        throw AlignmentError("scores cover " + std::to_string(scores.size()) + " windows but truth covers " +
                             std::to_string(rows.size()));

    std::vector<bool> labels;
    std::vector<int> true_regimes;
    std::string rule;
    const bool regime_truth = header.size() >= 3 && header[0] == "window_index" && header[1] == "regime_id";
    if (regime_truth) {
        std::istringstream truth_text(read_file(opt.truth));
        const auto truth = read_truth_csv(truth_text);
        for (std::size_t i = 0; i < truth.size(); ++i) {
            if (truth[i].window_index != scores[i].window_index)
                throw AlignmentError("window " + std::to_string(scores[i].window_index) +
                                     " does not line up with the truth file");
            labels.push_back(truth[i].is_anomaly);
            true_regimes.push_back(truth[i].regime_id);
        }
        rule = "truth file is_anomaly flag";
    } else {
        const auto idx = column(header, "window_index", opt.truth);
        const auto ev = column(header, "events", opt.truth);
        const auto at = column(header, "attack_events", opt.truth);
        std::vector<WindowLabelCounts> counts;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (std::stoull(rows[i][idx]) != scores[i].window_index)
                throw AlignmentError("window " + std::to_string(scores[i].window_index) +
                                     " does not line up with the label file");
            counts.push_back({std::stoull(rows[i][ev]), std::stoull(rows[i][at])});
        }
        labels = window_labels(counts, min_fraction);
        rule = min_fraction > 0.0 ? "attack fraction >= " + std::to_string(min_fraction) : "any attack event";
    }

    std::vector<double> s;
    std::vector<int> predicted;
    for (const ScoreRow& r : scores) {
        s.push_back(r.score);
        predicted.push_back(r.regime);
    }
    std::ostringstream metrics;
    metrics << "metric,value\n";
    metrics << "windows," << scores.size() << '\n';
    std::size_t positives = 0;
    for (bool b : labels) positives += b;
    metrics << "positive_windows," << positives << '\n';
    metrics << "roc_auc," << format_double(roc_auc(s, labels)) << '\n';
    metrics << "pr_auc," << format_double(pr_auc(s, labels)) << '\n';
    if (regime_truth)
        metrics << "segmentation_accuracy,"
                << format_double(segmentation_accuracy(std::span<const int>(predicted), true_regimes)) << '\n';
    metrics << "labeling,\"" << rule << "\"\n";

    std::cout << metrics.str();
    if (!opt.out.empty()) write_file_atomic(opt.out, metrics.str());
}

}  // namespace

void add_evaluate(CLI::App& app) {
    auto opt = std::make_shared<EvaluateOptions>();
    CLI::App* cmd = app.add_subcommand("evaluate", "Score a run against ground truth");
    cmd->add_option("--scores", opt->scores, "Score CSV written by 'run'")->required()->check(CLI::ExistingFile);
    cmd->add_option("--truth", opt->truth, "Truth CSV from 'generate' or the .labels.csv written by 'run'")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--labeling", opt->labeling, "Window labeling rule: 'any' or 'fraction:<f>'")
        ->capture_default_str();
    cmd->add_option("--out", opt->out, "Also write the metrics (key,value rows) here");
    cmd->callback([opt] { execute(*opt); });
}

}  // namespace skewstream::cli
