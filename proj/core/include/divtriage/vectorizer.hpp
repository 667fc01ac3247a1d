#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "divtriage/corpus.hpp"

namespace divtriage {

// Sparse TF-IDF vector. No explicit zeros are stored; the Euclidean norm
// is cached at construction.
struct FeatureVector {
    std::map<int, double> entries;
    double norm = 0.0;

    static FeatureVector from_entries(std::map<int, double> e);
    bool operator==(const FeatureVector& o) const { return entries == o.entries; }
};

struct Vocabulary {
    std::unordered_map<std::string, int> term_to_index;
    std::vector<int> document_frequency;  // indexed by term index
    int corpus_size = 0;                  // N
};

// How the inverse-document-frequency factor is computed.
//   Plain:    ln(N / df)          -- weight is 0 for terms in every document
//   Smoothed: ln((1+N)/(1+df))+1  -- strictly positive; used where identity
//                                    similarity must survive tiny corpora
enum class IdfMode { Plain, Smoothed };

// Lowercases, splits on any non-alphanumeric byte, drops tokens shorter
// than 2 characters.
std::vector<std::string> tokenize(std::string_view text);

Vocabulary fit(std::span<const std::string> documents);

// Raw term count times idf. Terms absent from the vocabulary are ignored;
// an empty document yields the zero vector.
FeatureVector transform(const Vocabulary& vocab, std::string_view document,
                        IdfMode mode = IdfMode::Plain);

// 1 - cos(u, v). Returns 1 when either vector has zero norm.
double cosine_distance(const FeatureVector& u, const FeatureVector& v);
double cosine_similarity(const FeatureVector& u, const FeatureVector& v);
double dot(const FeatureVector& u, const FeatureVector& v);

// Arithmetic mean of the given vectors (all must be non-null count > 0).
FeatureVector mean_vector(std::span<const FeatureVector> vectors);

// Document text fed to TF-IDF for a finding: every engine's stdout and
// stderr in engine order, each block preceded by a line naming the engine.
std::string finding_document(const Finding& f);

}  // namespace divtriage
