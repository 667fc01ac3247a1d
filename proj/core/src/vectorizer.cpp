#include "divtriage/vectorizer.hpp"

#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>

namespace divtriage {

FeatureVector FeatureVector::from_entries(std::map<int, double> e) {
    FeatureVector v;
    for (auto it = e.begin(); it != e.end();) {
        if (it->second == 0.0)
            it = e.erase(it);
        else
            ++it;
    }
    v.entries = std::move(e);
    double sq = 0.0;
    for (const auto& [_, w] : v.entries) sq += w * w;
    v.norm = std::sqrt(sq);
    return v;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (cur.size() >= 2) tokens.push_back(cur);
        cur.clear();
    };
    for (unsigned char c : text) {
        if (std::isalnum(c))
            cur.push_back(static_cast<char>(std::tolower(c)));
        else
            flush();
    }
    flush();
    return tokens;
}

Vocabulary fit(std::span<const std::string> documents) {
    if (documents.empty()) throw std::invalid_argument("fit: empty corpus");
    Vocabulary vocab;
    vocab.corpus_size = static_cast<int>(documents.size());
    for (const auto& doc : documents) {
        std::set<std::string> uniq;
        for (auto& t : tokenize(doc)) uniq.insert(std::move(t));
        for (const auto& t : uniq) {
            auto [it, inserted] = vocab.term_to_index.try_emplace(
                t, static_cast<int>(vocab.document_frequency.size()));
            if (inserted)
                vocab.document_frequency.push_back(1);
            else
                ++vocab.document_frequency[it->second];
        }
    }
    return vocab;
}

FeatureVector transform(const Vocabulary& vocab, std::string_view document, IdfMode mode) {
    std::map<int, double> counts;
    for (const auto& t : tokenize(document)) {
        auto it = vocab.term_to_index.find(t);
        if (it != vocab.term_to_index.end()) counts[it->second] += 1.0;
    }
    const double n = static_cast<double>(vocab.corpus_size);
    for (auto& [idx, w] : counts) {
        const double df = static_cast<double>(vocab.document_frequency[idx]);
        const double idf = mode == IdfMode::Plain ? std::log(n / df)
                                                  : std::log((1.0 + n) / (1.0 + df)) + 1.0;
        w *= idf;
    }
    return FeatureVector::from_entries(std::move(counts));
}

double dot(const FeatureVector& u, const FeatureVector& v) {
    const auto& a = u.entries.size() <= v.entries.size() ? u : v;
    const auto& b = u.entries.size() <= v.entries.size() ? v : u;
    double s = 0.0;
    for (const auto& [idx, w] : a.entries) {
        auto it = b.entries.find(idx);
        if (it != b.entries.end()) s += w * it->second;
    }
    return s;
}

double cosine_similarity(const FeatureVector& u, const FeatureVector& v) {
    if (u.norm == 0.0 || v.norm == 0.0) return 0.0;
    return dot(u, v) / (u.norm * v.norm);
}

double cosine_distance(const FeatureVector& u, const FeatureVector& v) {
    if (u.norm == 0.0 || v.norm == 0.0) return 1.0;
    return 1.0 - cosine_similarity(u, v);
}

FeatureVector mean_vector(std::span<const FeatureVector> vectors) {
    if (vectors.empty()) throw std::invalid_argument("mean_vector: empty input");
    std::map<int, double> sum;
    for (const auto& v : vectors)
        for (const auto& [idx, w] : v.entries) sum[idx] += w;
    const double n = static_cast<double>(vectors.size());
    for (auto& [_, w] : sum) w /= n;
    return FeatureVector::from_entries(std::move(sum));
}

std::string finding_document(const Finding& f) {
    std::string doc;
    for (const auto& r : f.engine_results) {
        doc += "=== " + r.engine_name + " ===\n";
        doc += r.stdout_text;
        doc += "\n";
        doc += r.stderr_text;
        doc += "\n";
    }
    return doc;
}

}  // namespace divtriage
