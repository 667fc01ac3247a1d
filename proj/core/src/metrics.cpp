#include "divtriage/metrics.hpp"

#include <cmath>

namespace divtriage {

double recall(const ConfusionCounts& c) {
    const long denom = c.true_positives + c.false_negatives;
    if (denom <= 0) throw UndefinedMetric("recall undefined: no ground-truth positives");
    return static_cast<double>(c.true_positives) / static_cast<double>(denom);
}

double false_positive_rate(const ConfusionCounts& c) {
    const long denom = c.false_positives + c.true_negatives;
    if (denom <= 0)
        throw UndefinedMetric("false positive rate undefined: no ground-truth negatives");
    return static_cast<double>(c.false_positives) / static_cast<double>(denom);
}

double round2(double value) { return std::round(value * 100.0) / 100.0; }

}  // namespace divtriage
