#include "skewstream/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "skewstream/error.hpp"

namespace skewstream {

namespace {

void check_aligned(std::size_t a, std::size_t b) {
    if (a != b) throw AlignmentError("scores and labels differ in length");
}

// Average ranks (1-based) with ties sharing the mean rank.
std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t r = i; r <= j; ++r) ranks[order[r]] = avg;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double roc_auc(std::span<const double> scores, const std::vector<bool>& labels) {
    check_aligned(scores.size(), labels.size());
    const auto positives = static_cast<double>(std::count(labels.begin(), labels.end(), true));
    const double negatives = static_cast<double>(labels.size()) - positives;
    if (positives == 0.0 || negatives == 0.0) throw UndefinedMetric("ROC-AUC needs both positive and negative labels");
    const auto ranks = average_ranks(scores);
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i]) rank_sum += ranks[i];
    const double u = rank_sum - positives * (positives + 1.0) / 2.0;
    return u / (positives * negatives);
}

double pr_auc(std::span<const double> scores, const std::vector<bool>& labels) {
    check_aligned(scores.size(), labels.size());
    const auto positives = static_cast<double>(std::count(labels.begin(), labels.end(), true));
    if (positives == 0.0) throw UndefinedMetric("PR-AUC needs at least one positive label");
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    double ap = 0.0;
    double tp = 0.0;
    double seen = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        double group_tp = 0.0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            if (labels[order[j]]) group_tp += 1.0;
            ++j;
        }
        tp += group_tp;
        seen += static_cast<double>(j - i);
        if (group_tp > 0.0) ap += (tp / seen) * (group_tp / positives);
        i = j;
    }
    return ap;
}

std::vector<bool> window_labels(std::span<const WindowLabelCounts> counts, double min_attack_fraction) {
    std::vector<bool> out;
    out.reserve(counts.size());
    for (const WindowLabelCounts& c : counts) {
        if (c.attack_events > c.events) throw AlignmentError("window has more attack events than events");
        const bool any = c.attack_events > 0;
        const double frac = c.events == 0 ? 0.0 : static_cast<double>(c.attack_events) / static_cast<double>(c.events);
        out.push_back(any && frac >= min_attack_fraction);
    }
    return out;
}

std::vector<int> expand_switches(std::span<const SwitchRecord> switches, std::size_t total_windows) {
    std::vector<int> labels(total_windows, -1);
    for (std::size_t g = 0; g < switches.size(); ++g) {
        const std::size_t begin = switches[g].switch_time;
        const std::size_t end = g + 1 < switches.size() ? switches[g + 1].switch_time : total_windows;
        for (std::size_t w = begin; w < end && w < total_windows; ++w) labels[w] = switches[g].regime_id;
    }
    return labels;
}

std::vector<int> max_weight_matching(const std::vector<std::vector<double>>& weights) {
    // Hungarian algorithm on a square cost matrix (negated weights).
    const std::size_t rows = weights.size();
    std::size_t cols = 0;
    for (const auto& r : weights) cols = std::max(cols, r.size());
    const std::size_t n = std::max(rows, cols);
    if (n == 0) return {};
    double max_w = 0.0;
    for (const auto& r : weights)
        for (double w : r) max_w = std::max(max_w, w);
    auto cost = [&](std::size_t i, std::size_t j) {
        const double w = (i < rows && j < weights[i].size()) ? weights[i][j] : 0.0;
        return max_w - w;
    };
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> match(rows, -1);
    for (std::size_t j = 1; j <= n; ++j)
        if (p[j] != 0 && p[j] - 1 < rows && j - 1 < cols) match[p[j] - 1] = static_cast<int>(j - 1);
    return match;
}

double segmentation_accuracy(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size()) throw AlignmentError("segmentations cover different window ranges");
    if (truth.empty()) return 1.0;
    std::map<int, std::size_t> pred_ids, truth_ids;
    for (int p : predicted) pred_ids.emplace(p, pred_ids.size());
    for (int t : truth) truth_ids.emplace(t, truth_ids.size());
    std::vector<std::vector<double>> overlap(pred_ids.size(), std::vector<double>(truth_ids.size(), 0.0));
    for (std::size_t w = 0; w < truth.size(); ++w) overlap[pred_ids[predicted[w]]][truth_ids[truth[w]]] += 1.0;
    const auto match = max_weight_matching(overlap);
    double hits = 0.0;
    for (std::size_t i = 0; i < match.size(); ++i)
        if (match[i] >= 0) hits += overlap[i][static_cast<std::size_t>(match[i])];
    return hits / static_cast<double>(truth.size());
}

double segmentation_accuracy(std::span<const SwitchRecord> predicted, std::span<const SwitchRecord> truth,
                             std::size_t total_windows) {
    const auto p = expand_switches(predicted, total_windows);
    const auto t = expand_switches(truth, total_windows);
    return segmentation_accuracy(std::span<const int>(p), std::span<const int>(t));
}

MannWhitney mann_whitney(std::span<const double> first, std::span<const double> second) {
    if (first.empty() || second.empty()) throw UndefinedMetric("Mann-Whitney test needs two non-empty samples");
    std::vector<double> pooled(first.begin(), first.end());
    pooled.insert(pooled.end(), second.begin(), second.end());
    const auto ranks = average_ranks(pooled);
    const auto n1 = static_cast<double>(first.size());
    const auto n2 = static_cast<double>(second.size());
    double r1 = 0.0;
    for (std::size_t i = 0; i < first.size(); ++i) r1 += ranks[i];
    MannWhitney out;
    out.u = r1 - n1 * (n1 + 1.0) / 2.0;

    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const auto t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double n = n1 + n2;
    const double variance = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (!(variance > 0.0)) {
        out.p_greater = 1.0;
        return out;
    }
    const double z = (out.u - n1 * n2 / 2.0 - 0.5) / std::sqrt(variance);
    out.p_greater = 0.5 * std::erfc(z / std::sqrt(2.0));
    return out;
}

}  // namespace skewstream
