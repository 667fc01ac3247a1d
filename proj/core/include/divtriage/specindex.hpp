#pragma once

#include <optional>
#include <string>
#include <vector>

#include "divtriage/vectorizer.hpp"

namespace divtriage {

struct SpecSection {
    std::string section_id;  // dotted clause id, e.g. "20.2.3.5"
    std::string title;
    std::string body;
};

struct SpecExcerpt {
    std::string section_id;
    std::string title;
    std::string excerpt;  // first 1000 characters of the body
    double similarity = 0.0;
};

// Queryable index over a plain-text specification dump. Sections start at
// lines of the form "# <dotted-id> <title>"; everything until the next
// header is the body.
class SpecIndex {
public:
    static SpecIndex build(const std::string& document);
    static SpecIndex build_from_file(const std::string& path);

    std::optional<SpecSection> by_id(const std::string& section_id) const;

    // Up to `limit` sections ranked by cosine similarity of the query to
    // title+body; zero-similarity sections are dropped.
    std::vector<SpecExcerpt> query(const std::string& query_text, int limit = 5) const;

    std::size_t size() const { return sections_.size(); }

private:
    std::vector<SpecSection> sections_;
    std::vector<FeatureVector> vectors_;
    Vocabulary vocab_;
};

}  // namespace divtriage
