#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "divtriage/corpus.hpp"
#include "divtriage/vectorizer.hpp"

namespace divtriage {

// Ordered tuple of per-engine exit codes; the first-level cluster key.
struct ExitPattern {
    std::vector<int> codes;

    std::string key() const;  // "pattern_" + codes joined by "_"
    bool operator<(const ExitPattern& o) const { return key() < o.key(); }
    bool operator==(const ExitPattern&) const = default;
};

ExitPattern exit_pattern_of(const Finding& f);

// Partition of finding indices by exit pattern, ordered lexicographically
// by pattern key. Throws on heterogeneous engine counts.
std::map<ExitPattern, std::vector<std::size_t>> group_by_exit_pattern(
    const std::vector<Finding>& findings);

struct Clustering {
    std::vector<int> assignments;          // per input vector, in [0, k)
    std::vector<FeatureVector> centroids;  // mean of normalized members
    int k = 0;
    double inertia = 0.0;
    std::vector<double> iteration_inertia;  // inertia after each Lloyd pass
};

// Lloyd's algorithm with k-means++ seeding. Vectors are L2-normalized
// internally so squared Euclidean distance tracks cosine structure.
// Deterministic for a given seed; empty clusters are repaired by moving
// the point farthest from its centroid.
Clustering kmeans(std::span<const FeatureVector> vectors, int k, std::uint64_t seed);

using DistanceFn = std::function<double(const FeatureVector&, const FeatureVector&)>;

// Mean silhouette s(i) = (b(i) - a(i)) / max{a(i), b(i)} over all points;
// singleton clusters contribute s = 0. Requires >= 2 non-empty clusters.
// Metric defaults to cosine distance on the raw vectors.
double silhouette_score(std::span<const FeatureVector> vectors,
                        std::span<const int> assignments,
                        const DistanceFn& metric = cosine_distance);

struct KSelection {
    int k = 1;
    double silhouette = 0.0;  // meaningful only when k >= 2
    Clustering clustering;
};

// Runs kmeans for each k in [k_min, k_max] (clamped to the input size) and
// returns the k maximizing mean silhouette, ties toward smaller k.
// Degenerate inputs (fewer than 2 distinct vectors, or n < 2) fall back to
// a single cluster with k = 1.
KSelection select_k(std::span<const FeatureVector> vectors, int k_min, int k_max,
                    std::uint64_t seed);

// Default upper bound for k selection: min(20, n - 1).
int default_k_max(std::size_t n);

}  // namespace divtriage
