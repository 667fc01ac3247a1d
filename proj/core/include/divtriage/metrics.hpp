#pragma once

#include <stdexcept>

namespace divtriage {

struct ConfusionCounts {
    long true_positives = 0;
    long false_positives = 0;
    long true_negatives = 0;
    long false_negatives = 0;

    long total() const {
        return true_positives + false_positives + true_negatives + false_negatives;
    }
};

struct UndefinedMetric : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// TP / (TP + FN). Throws UndefinedMetric when no positives exist.
double recall(const ConfusionCounts& c);

// FP / (FP + TN). Throws UndefinedMetric when no negatives exist.
double false_positive_rate(const ConfusionCounts& c);

// Display rounding: metrics carry full precision internally and round to
// two decimals for reports.
double round2(double value);

}  // namespace divtriage
