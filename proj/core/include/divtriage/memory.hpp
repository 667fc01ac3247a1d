#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "divtriage/vectorizer.hpp"

namespace divtriage {

struct IssueRecord {
    std::string issue_id;
    std::string summary;
    std::string finding_id;
    std::int64_t decided_at = 0;  // seconds since epoch
    FeatureVector vector;         // derived; rebuilt at load
};

// Append-only store of reported issues with exact top-k retrieval over
// TF-IDF vectors of the summaries. The vocabulary is refit over all stored
// summaries on every insert; store sizes are hundreds, not millions.
class IssueStore {
public:
    IssueStore() = default;

    // Binds the store to a JSONL file and loads existing records.
    explicit IssueStore(std::string path);

    const IssueRecord& record_issue(const std::string& summary, const std::string& finding_id);

    // Results sorted by cosine similarity descending, ties broken newest
    // first. At most k entries; an empty store yields an empty list.
    std::vector<std::pair<IssueRecord, double>> top_k_similar(const std::string& query_summary,
                                                              int k = 10) const;

    std::size_t size() const { return records_.size(); }
    const std::vector<IssueRecord>& records() const { return records_; }

private:
    void refit();
    void persist(const IssueRecord& r);

    std::string path_;  // empty for in-memory stores
    std::vector<IssueRecord> records_;
    Vocabulary vocab_;
};

}  // namespace divtriage
