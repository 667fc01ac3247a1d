#include "divtriage/clusterer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

namespace divtriage {

std::string ExitPattern::key() const {
    std::string k = "pattern";
    for (int c : codes) k += "_" + std::to_string(c);
    return k;
}

ExitPattern exit_pattern_of(const Finding& f) {
    ExitPattern p;
    p.codes.reserve(f.engine_results.size());
    for (const auto& r : f.engine_results) p.codes.push_back(r.exit_code);
    return p;
}

std::map<ExitPattern, std::vector<std::size_t>> group_by_exit_pattern(
    const std::vector<Finding>& findings) {
    std::map<ExitPattern, std::vector<std::size_t>> groups;
    std::size_t engine_count = 0;
    for (std::size_t i = 0; i < findings.size(); ++i) {
        const auto& f = findings[i];
        if (i == 0)
            engine_count = f.engine_results.size();
        else if (f.engine_results.size() != engine_count)
            throw CorpusError("heterogeneous engine counts in corpus (finding " + f.id + ")");
        groups[exit_pattern_of(f)].push_back(i);
    }
    return groups;
}

namespace {

FeatureVector normalized(const FeatureVector& v) {
    if (v.norm == 0.0) return v;
    std::map<int, double> e = v.entries;
    for (auto& [_, w] : e) w /= v.norm;
    return FeatureVector::from_entries(std::move(e));
}

double sq_euclidean(const FeatureVector& a, const FeatureVector& b) {
    // ||a||^2 + ||b||^2 - 2 a.b
    double d = a.norm * a.norm + b.norm * b.norm - 2.0 * dot(a, b);
    return d < 0.0 ? 0.0 : d;
}

}  // namespace

Clustering kmeans(std::span<const FeatureVector> vectors, int k, std::uint64_t seed) {
    const int n = static_cast<int>(vectors.size());
    if (k < 1 || k > n) throw std::invalid_argument("kmeans: k out of range");

    std::vector<FeatureVector> pts(vectors.size());
    for (int i = 0; i < n; ++i) pts[i] = normalized(vectors[i]);

    std::mt19937_64 rng(seed);

    // k-means++ seeding
    std::vector<FeatureVector> centroids;
    centroids.reserve(k);
    {
        std::uniform_int_distribution<int> pick(0, n - 1);
        centroids.push_back(pts[pick(rng)]);
        std::vector<double> d2(n);
        while (static_cast<int>(centroids.size()) < k) {
            double total = 0.0;
            for (int i = 0; i < n; ++i) {
                double best = std::numeric_limits<double>::max();
                for (const auto& c : centroids) best = std::min(best, sq_euclidean(pts[i], c));
                d2[i] = best;
                total += best;
            }
            int chosen;
            if (total <= 0.0) {
                chosen = std::uniform_int_distribution<int>(0, n - 1)(rng);
            } else {
                double r = std::uniform_real_distribution<double>(0.0, total)(rng);
                chosen = n - 1;
                double acc = 0.0;
                for (int i = 0; i < n; ++i) {
                    acc += d2[i];
                    if (acc >= r) {
                        chosen = i;
                        break;
                    }
                }
            }
            centroids.push_back(pts[chosen]);
        }
    }

    constexpr int kMaxIterations = 300;
    Clustering result;
    result.k = k;
    std::vector<int> assign(n, -1);

    auto assign_all = [&](std::vector<int>& out) {
        double inertia = 0.0;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::max();
            for (int c = 0; c < k; ++c) {
                double d = sq_euclidean(pts[i], centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            out[i] = best;
            inertia += best_d;
        }
        return inertia;
    };

    std::vector<int> next(n, -1);
    double inertia = 0.0;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        inertia = assign_all(next);

        // Empty-cluster repair: hand the point farthest from its centroid
        // to each empty cluster, keeping k fixed.
        std::vector<int> sizes(k, 0);
        for (int a : next) ++sizes[a];
        for (int c = 0; c < k; ++c) {
            if (sizes[c] > 0) continue;
            int far_idx = -1;
            double far_d = -1.0;
            for (int i = 0; i < n; ++i) {
                if (sizes[next[i]] <= 1) continue;
                double d = sq_euclidean(pts[i], centroids[next[i]]);
                if (d > far_d) {
                    far_d = d;
                    far_idx = i;
                }
            }
            if (far_idx >= 0) {
                --sizes[next[far_idx]];
                next[far_idx] = c;
                ++sizes[c];
            }
        }

        result.iteration_inertia.push_back(inertia);
        if (next == assign) break;
        assign = next;

        // Update step: centroid = mean of assigned normalized points.
        std::vector<std::vector<const FeatureVector*>> members(k);
        for (int i = 0; i < n; ++i) members[assign[i]].push_back(&pts[i]);
        for (int c = 0; c < k; ++c) {
            if (members[c].empty()) continue;
            std::map<int, double> sum;
            for (const auto* p : members[c])
                for (const auto& [idx, w] : p->entries) sum[idx] += w;
            for (auto& [_, w] : sum) w /= static_cast<double>(members[c].size());
            centroids[c] = FeatureVector::from_entries(std::move(sum));
        }
    }

    result.assignments = assign;
    result.centroids = std::move(centroids);
    result.inertia = inertia;
    return result;
}

double silhouette_score(std::span<const FeatureVector> vectors,
                        std::span<const int> assignments, const DistanceFn& metric) {
    const int n = static_cast<int>(vectors.size());
    if (assignments.size() != vectors.size())
        throw std::invalid_argument("silhouette_score: size mismatch");
    std::set<int> cluster_ids(assignments.begin(), assignments.end());
    if (cluster_ids.size() < 2)
        throw std::invalid_argument("silhouette_score: need at least 2 clusters");

    std::map<int, std::vector<int>> members;
    for (int i = 0; i < n; ++i) members[assignments[i]].push_back(i);

    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const int own = assignments[i];
        if (members[own].size() == 1) continue;  // singleton: s = 0

        double a = 0.0;
        for (int j : members[own])
            if (j != i) a += metric(vectors[i], vectors[j]);
        a /= static_cast<double>(members[own].size() - 1);

        double b = std::numeric_limits<double>::max();
        for (const auto& [cid, idxs] : members) {
            if (cid == own) continue;
            double m = 0.0;
            for (int j : idxs) m += metric(vectors[i], vectors[j]);
            m /= static_cast<double>(idxs.size());
            b = std::min(b, m);
        }

        double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

int default_k_max(std::size_t n) {
    if (n < 2) return 1;
    return static_cast<int>(std::min<std::size_t>(20, n - 1));
}

KSelection select_k(std::span<const FeatureVector> vectors, int k_min, int k_max,
                    std::uint64_t seed) {
    const int n = static_cast<int>(vectors.size());
    if (k_min > k_max) throw std::invalid_argument("select_k: empty k range");

    std::set<std::map<int, double>> distinct;
    for (const auto& v : vectors) distinct.insert(v.entries);

    auto single_cluster = [&] {
        KSelection sel;
        sel.k = 1;
        sel.clustering.k = 1;
        sel.clustering.assignments.assign(n, 0);
        if (n > 0) sel.clustering.centroids.push_back(mean_vector(vectors));
        return sel;
    };

    // Fewer than 2 distinct points: a single cluster is the only sensible
    // answer; silhouette is undefined there.
    if (n < 2 || distinct.size() < 2) return single_cluster();

    k_min = std::max(k_min, 2);
    k_max = std::min(k_max, n);
    if (k_min > k_max) return single_cluster();

    KSelection best;
    bool have = false;
    for (int k = k_min; k <= k_max; ++k) {
        Clustering c = kmeans(vectors, k, seed);
        double s = silhouette_score(vectors, c.assignments);
        if (!have || s > best.silhouette) {  // strict: ties keep smaller k
            best.k = k;
            best.silhouette = s;
            best.clustering = std::move(c);
            have = true;
        }
    }
    return best;
}

}  // namespace divtriage
