#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "divtriage/clusterer.hpp"
#include "divtriage/corpus.hpp"
#include "divtriage/vectorizer.hpp"

namespace divtriage {

// One cluster as persisted in clusters.jsonl.
struct ClusterRow {
    std::string pattern_key;
    int cluster_id = 0;
    std::vector<std::string> finding_ids;
    std::string medoid_id;
    int k = 1;             // cluster count chosen for the pattern
    double silhouette = 0.0;
};

std::vector<ClusterRow> load_cluster_rows(const std::string& path);
void save_cluster_rows(const std::vector<ClusterRow>& rows, const std::string& path);

// Index of the member minimizing cosine distance to the arithmetic mean of
// the (unnormalized) member vectors; ties go to the lowest index.
std::size_t medoid(std::span<const FeatureVector> cluster_vectors);

enum class Granularity { Binary, RootCause };

struct PropagationResult {
    std::map<std::string, std::string> medoid_per_cluster;  // "pattern/cid" -> finding id
    std::map<std::string, Label> propagated;                // finding id -> label
};

// Copies each cluster's medoid label onto every member. Throws when a
// medoid has no label, naming the cluster.
PropagationResult propagate(const std::vector<ClusterRow>& rows,
                            const std::map<std::string, Label>& labels_for_medoids);

// Percentage in [0, 100] of propagated ids whose label matches ground
// truth. Binary compares verdicts; RootCause compares the root-cause token
// case-insensitively after trimming. Throws when truth misses any id.
double propagation_accuracy(const std::map<std::string, Label>& propagated,
                            const std::map<std::string, Label>& ground_truth,
                            Granularity granularity);

// Full clustering pipeline: fit TF-IDF over all finding logs, group by
// exit pattern, refine each pattern with select_k, pick per-cluster
// medoids. k_max <= 0 means the default bound per pattern.
std::vector<ClusterRow> build_cluster_rows(const std::vector<Finding>& findings,
                                           int k_max, std::uint64_t seed);

// Same grouping but one cluster per exit pattern (the baseline strategy).
std::vector<ClusterRow> build_baseline_rows(const std::vector<Finding>& findings);

struct PatternComparison {
    std::string pattern_key;
    std::size_t size = 0;
    double baseline_accuracy = 0.0;
    double kmeans_accuracy = 0.0;
    int optimal_k = 1;
};

struct StrategyReport {
    double baseline_accuracy = 0.0;  // overall, weighted by pattern size
    double kmeans_accuracy = 0.0;
    std::vector<PatternComparison> per_pattern;
};

// Evaluation mode: requires a fully labeled corpus. Compares one-cluster-
// per-pattern propagation against K-means-refined propagation at the given
// granularity.
StrategyReport compare_strategies(const std::vector<Finding>& findings,
                                  const std::map<std::string, Label>& ground_truth,
                                  int k_max, std::uint64_t seed,
                                  Granularity granularity = Granularity::RootCause);

// Text table with columns Pattern, Baseline, K-means, Opt. k, % Gain.
std::string render_strategy_report(const StrategyReport& report);

// Medoid work-list for human labeling, largest clusters first.
std::vector<ClusterRow> labeling_worklist(std::vector<ClusterRow> rows);

}  // namespace divtriage
