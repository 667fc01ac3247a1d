#include "divtriage/memory.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "divtriage/corpus.hpp"

namespace divtriage {

using nlohmann::json;

IssueStore::IssueStore(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) return;  // new store
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            IssueRecord r;
            r.issue_id = j.at("issue_id").get<std::string>();
            r.summary = j.at("summary").get<std::string>();
            r.finding_id = j.at("finding_id").get<std::string>();
            r.decided_at = j.at("decided_at").get<std::int64_t>();
            records_.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw CorpusError("issues file parse error at line " + std::to_string(lineno) +
                              ": " + e.what());
        }
    }
    refit();
}

void IssueStore::refit() {
    if (records_.empty()) return;
    std::vector<std::string> summaries;
    summaries.reserve(records_.size());
    for (const auto& r : records_) summaries.push_back(r.summary);
    vocab_ = fit(summaries);
    // Smoothed idf keeps vectors nonzero even when a term occurs in every
    // summary, which matters for identity lookups on tiny stores.
    for (auto& r : records_) r.vector = transform(vocab_, r.summary, IdfMode::Smoothed);
}

void IssueStore::persist(const IssueRecord& r) {
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw CorpusError("cannot append to issues file: " + path_);
    json j{{"issue_id", r.issue_id},
           {"summary", r.summary},
           {"finding_id", r.finding_id},
           {"decided_at", r.decided_at}};
    out << j.dump() << "\n";
}

const IssueRecord& IssueStore::record_issue(const std::string& summary,
                                            const std::string& finding_id) {
    if (summary.empty()) throw std::invalid_argument("record_issue: empty summary");
    IssueRecord r;
    r.issue_id = "issue-" + std::to_string(records_.size() + 1);
    r.summary = summary;
    r.finding_id = finding_id;
    r.decided_at = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
    persist(r);
    records_.push_back(std::move(r));
    refit();
    return records_.back();
}

std::vector<std::pair<IssueRecord, double>> IssueStore::top_k_similar(
    const std::string& query_summary, int k) const {
    if (k < 1) throw std::invalid_argument("top_k_similar: k must be >= 1");
    std::vector<std::pair<IssueRecord, double>> scored;
    if (records_.empty()) return scored;
    FeatureVector q = transform(vocab_, query_summary, IdfMode::Smoothed);
    scored.reserve(records_.size());
    // Reverse insertion order so that similarity ties come out newest first
    // under the stable sort.
    for (auto it = records_.rbegin(); it != records_.rend(); ++it)
        scored.emplace_back(*it, cosine_similarity(q, it->vector));
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (static_cast<int>(scored.size()) > k) scored.resize(static_cast<std::size_t>(k));
    return scored;
}

}  // namespace divtriage
