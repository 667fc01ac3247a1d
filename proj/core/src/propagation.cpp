#include "divtriage/propagation.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace divtriage {

using nlohmann::json;

std::vector<ClusterRow> load_cluster_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open clusters file: " + path);
    std::vector<ClusterRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            ClusterRow r;
            r.pattern_key = j.at("pattern_key").get<std::string>();
            r.cluster_id = j.at("cluster_id").get<int>();
            r.finding_ids = j.at("finding_ids").get<std::vector<std::string>>();
            r.medoid_id = j.value("medoid_id", std::string{});
            r.k = j.value("k", 1);
            r.silhouette = j.value("silhouette", 0.0);
            rows.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw CorpusError("parse error at line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

void save_cluster_rows(const std::vector<ClusterRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CorpusError("cannot open for writing: " + path);
    for (const auto& r : rows) {
        json j{{"pattern_key", r.pattern_key}, {"cluster_id", r.cluster_id},
               {"finding_ids", r.finding_ids}, {"medoid_id", r.medoid_id},
               {"k", r.k},                     {"silhouette", r.silhouette}};
        out << j.dump() << "\n";
    }
}

std::size_t medoid(std::span<const FeatureVector> cluster_vectors) {
    if (cluster_vectors.empty()) throw std::invalid_argument("medoid: empty cluster");
    FeatureVector centroid = mean_vector(cluster_vectors);
    std::size_t best = 0;
    double best_d = cosine_distance(cluster_vectors[0], centroid);
    for (std::size_t i = 1; i < cluster_vectors.size(); ++i) {
        double d = cosine_distance(cluster_vectors[i], centroid);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

PropagationResult propagate(const std::vector<ClusterRow>& rows,
                            const std::map<std::string, Label>& labels_for_medoids) {
    PropagationResult result;
    for (const auto& row : rows) {
        auto it = labels_for_medoids.find(row.medoid_id);
        if (it == labels_for_medoids.end())
            throw CorpusError("no label for medoid \"" + row.medoid_id + "\" of cluster " +
                              row.pattern_key + "/" + std::to_string(row.cluster_id));
        result.medoid_per_cluster[row.pattern_key + "/" + std::to_string(row.cluster_id)] =
            row.medoid_id;
        for (const auto& fid : row.finding_ids) {
            Label l = it->second;
            l.finding_id = fid;
            result.propagated[fid] = std::move(l);
        }
    }
    return result;
}

namespace {

std::string canon_root_cause(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    std::string out = s.substr(b, e - b);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

double propagation_accuracy(const std::map<std::string, Label>& propagated,
                            const std::map<std::string, Label>& ground_truth,
                            Granularity granularity) {
    if (propagated.empty()) return 0.0;
    std::size_t matches = 0;
    for (const auto& [fid, label] : propagated) {
        auto it = ground_truth.find(fid);
        if (it == ground_truth.end())
            throw CorpusError("ground truth missing finding id \"" + fid + "\"");
        bool ok = granularity == Granularity::Binary
                      ? label.verdict == it->second.verdict
                      : canon_root_cause(label.root_cause) ==
                            canon_root_cause(it->second.root_cause);
        if (ok) ++matches;
    }
    return 100.0 * static_cast<double>(matches) / static_cast<double>(propagated.size());
}

std::vector<ClusterRow> build_cluster_rows(const std::vector<Finding>& findings,
                                           int k_max, std::uint64_t seed) {
    std::vector<ClusterRow> rows;
    if (findings.empty()) return rows;

    std::vector<std::string> docs;
    docs.reserve(findings.size());
    for (const auto& f : findings) docs.push_back(finding_document(f));
    Vocabulary vocab = fit(docs);

    std::vector<FeatureVector> vectors;
    vectors.reserve(findings.size());
    for (const auto& d : docs) vectors.push_back(transform(vocab, d));

    for (const auto& [pattern, indices] : group_by_exit_pattern(findings)) {
        std::vector<FeatureVector> group;
        group.reserve(indices.size());
        for (auto i : indices) group.push_back(vectors[i]);

        int bound = k_max > 0 ? std::min<int>(k_max, static_cast<int>(indices.size()))
                              : default_k_max(indices.size());
        KSelection sel = select_k(group, 2, bound, seed);

        for (int c = 0; c < std::max(sel.k, 1); ++c) {
            ClusterRow row;
            row.pattern_key = pattern.key();
            row.cluster_id = c;
            row.k = sel.k;
            row.silhouette = sel.silhouette;
            std::vector<FeatureVector> member_vecs;
            for (std::size_t g = 0; g < indices.size(); ++g) {
                int assigned = sel.clustering.assignments.empty()
                                   ? 0
                                   : sel.clustering.assignments[g];
                if (assigned == c) {
                    row.finding_ids.push_back(findings[indices[g]].id);
                    member_vecs.push_back(group[g]);
                }
            }
            if (row.finding_ids.empty()) continue;
            row.medoid_id = row.finding_ids[medoid(member_vecs)];
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<ClusterRow> build_baseline_rows(const std::vector<Finding>& findings) {
    std::vector<ClusterRow> rows;
    if (findings.empty()) return rows;

    std::vector<std::string> docs;
    docs.reserve(findings.size());
    for (const auto& f : findings) docs.push_back(finding_document(f));
    Vocabulary vocab = fit(docs);
    std::vector<FeatureVector> vectors;
    for (const auto& d : docs) vectors.push_back(transform(vocab, d));

    for (const auto& [pattern, indices] : group_by_exit_pattern(findings)) {
        ClusterRow row;
        row.pattern_key = pattern.key();
        row.cluster_id = 0;
        row.k = 1;
        std::vector<FeatureVector> member_vecs;
        for (auto i : indices) {
            row.finding_ids.push_back(findings[i].id);
            member_vecs.push_back(vectors[i]);
        }
        row.medoid_id = row.finding_ids[medoid(member_vecs)];
        rows.push_back(std::move(row));
    }
    return rows;
}

StrategyReport compare_strategies(const std::vector<Finding>& findings,
                                  const std::map<std::string, Label>& ground_truth,
                                  int k_max, std::uint64_t seed, Granularity granularity) {
    for (const auto& f : findings)
        if (!ground_truth.count(f.id))
            throw CorpusError("compare_strategies: unlabeled finding \"" + f.id + "\"");

    auto baseline_rows = build_baseline_rows(findings);
    auto kmeans_rows = build_cluster_rows(findings, k_max, seed);

    auto accuracy_for = [&](const std::vector<ClusterRow>& rows,
                            const std::string& pattern) {
        std::vector<ClusterRow> subset;
        for (const auto& r : rows)
            if (r.pattern_key == pattern) subset.push_back(r);
        PropagationResult pr = propagate(subset, ground_truth);
        return propagation_accuracy(pr.propagated, ground_truth, granularity);
    };

    StrategyReport report;
    std::size_t total = 0;
    double base_weighted = 0.0, km_weighted = 0.0;
    for (const auto& base : baseline_rows) {
        PatternComparison cmp;
        cmp.pattern_key = base.pattern_key;
        cmp.size = base.finding_ids.size();
        cmp.baseline_accuracy = accuracy_for(baseline_rows, base.pattern_key);
        cmp.kmeans_accuracy = accuracy_for(kmeans_rows, base.pattern_key);
        for (const auto& r : kmeans_rows)
            if (r.pattern_key == base.pattern_key) cmp.optimal_k = r.k;
        total += cmp.size;
        base_weighted += cmp.baseline_accuracy * static_cast<double>(cmp.size);
        km_weighted += cmp.kmeans_accuracy * static_cast<double>(cmp.size);
        report.per_pattern.push_back(std::move(cmp));
    }
    if (total > 0) {
        report.baseline_accuracy = base_weighted / static_cast<double>(total);
        report.kmeans_accuracy = km_weighted / static_cast<double>(total);
    }
    return report;
}

std::string render_strategy_report(const StrategyReport& report) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(2);
    out << "Pattern                    Baseline   K-means   Opt. k   % Gain\n";
    for (const auto& row : report.per_pattern) {
        std::string name = row.pattern_key;
        if (name.size() < 26) name.resize(26, ' ');
        out << name << " " << row.baseline_accuracy << "%     " << row.kmeans_accuracy
            << "%     " << row.optimal_k << "      "
            << (row.kmeans_accuracy - row.baseline_accuracy) << "\n";
    }
    out << "Overall: baseline " << report.baseline_accuracy << "%, K-means "
        << report.kmeans_accuracy << "% ("
        << (report.kmeans_accuracy - report.baseline_accuracy) << " pts)\n";
    return out.str();
}

std::vector<ClusterRow> labeling_worklist(std::vector<ClusterRow> rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const ClusterRow& a, const ClusterRow& b) {
        return a.finding_ids.size() > b.finding_ids.size();
    });
    return rows;
}

}  // namespace divtriage
