#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skewstream/types.hpp"

namespace skewstream {

/// Rank-based (Mann-Whitney) area under the ROC curve; ties count one half.
/// Throws UndefinedMetric unless both classes are present.
double roc_auc(std::span<const double> scores, const std::vector<bool>& labels);

/// Average precision: precision at each distinct-score threshold, weighted by the
/// recall gained there. Throws UndefinedMetric without positives.
double pr_auc(std::span<const double> scores, const std::vector<bool>& labels);

struct WindowLabelCounts {
    std::size_t events = 0;
    std::size_t attack_events = 0;
};

/// A window is positive iff it holds attack events and their fraction is at least
/// `min_attack_fraction` (0 means any attack event).
std::vector<bool> window_labels(std::span<const WindowLabelCounts> counts, double min_attack_fraction = 0.0);

/// Regime label per window implied by a switch history.
std::vector<int> expand_switches(std::span<const SwitchRecord> switches, std::size_t total_windows);

/// Fraction of windows whose predicted regime maps to the true regime under the best
/// one-to-one matching of labels.
double segmentation_accuracy(std::span<const int> predicted, std::span<const int> truth);

double segmentation_accuracy(std::span<const SwitchRecord> predicted, std::span<const SwitchRecord> truth,
                             std::size_t total_windows);

struct MannWhitney {
    double u = 0.0;
    /// One-sided p-value for "first sample tends to be larger" (normal approximation
    /// with tie correction).
    double p_greater = 1.0;
};

MannWhitney mann_whitney(std::span<const double> first, std::span<const double> second);

/// Maximum-weight one-to-one assignment of rows to columns of a non-negative matrix.
/// Returns the column for each row (-1 when a row stays unmatched).
std::vector<int> max_weight_matching(const std::vector<std::vector<double>>& weights);

}  // namespace skewstream
