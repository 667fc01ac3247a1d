#include "divtriage/specindex.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "divtriage/corpus.hpp"

namespace divtriage {

namespace {
const std::regex kHeaderRe(R"(^#\s*([0-9.]+)\s+(.*)$)");
constexpr std::size_t kExcerptCap = 1000;
}  // namespace

SpecIndex SpecIndex::build(const std::string& document) {
    SpecIndex index;
    std::istringstream in(document);
    std::string line;
    SpecSection current;
    bool open = false;
    auto close = [&] {
        if (!open) return;
        // trim trailing newlines from the body
        while (!current.body.empty() && current.body.back() == '\n') current.body.pop_back();
        if (current.body.empty())
            throw CorpusError("spec section " + current.section_id + " has an empty body");
        index.sections_.push_back(current);
        current = {};
    };
    while (std::getline(in, line)) {
        std::smatch m;
        if (std::regex_match(line, m, kHeaderRe)) {
            close();
            current.section_id = m[1];
            current.title = m[2];
            open = true;
        } else if (open) {
            current.body += line;
            current.body += "\n";
        }
    }
    close();
    if (index.sections_.empty())
        throw CorpusError("spec document contains no sections");

    std::vector<std::string> docs;
    docs.reserve(index.sections_.size());
    for (const auto& s : index.sections_) docs.push_back(s.title + "\n" + s.body);
    index.vocab_ = fit(docs);
    for (const auto& d : docs)
        index.vectors_.push_back(transform(index.vocab_, d, IdfMode::Smoothed));
    return index;
}

SpecIndex SpecIndex::build_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open spec document: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return build(buf.str());
}

std::optional<SpecSection> SpecIndex::by_id(const std::string& section_id) const {
    for (const auto& s : sections_)
        if (s.section_id == section_id) return s;
    return std::nullopt;
}

std::vector<SpecExcerpt> SpecIndex::query(const std::string& query_text, int limit) const {
    std::vector<SpecExcerpt> out;
    if (limit < 1 || query_text.empty()) return out;
    FeatureVector q = transform(vocab_, query_text, IdfMode::Smoothed);
    if (q.norm == 0.0) return out;

    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t i = 0; i < sections_.size(); ++i) {
        double sim = cosine_similarity(q, vectors_[i]);
        if (sim > 0.0) scored.emplace_back(sim, i);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [sim, i] : scored) {
        if (static_cast<int>(out.size()) >= limit) break;
        const auto& s = sections_[i];
        SpecExcerpt e;
        e.section_id = s.section_id;
        e.title = s.title;
        e.excerpt = s.body.substr(0, kExcerptCap);
        e.similarity = sim;
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace divtriage
