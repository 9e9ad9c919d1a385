#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "litcmp/graph_store.hpp"
#include "litcmp/statement_selector.hpp"

namespace litcmp {

struct ContributionDocument {
    ResourceId contribution;
    std::vector<std::string> tokens;
};

// Tokens of the predicate labels of every statement selected for the
// contribution, in statement order. Object values are not included.
ContributionDocument build_document(const GraphStore& store, const ResourceId& contribution,
                                   const SelectionConfig& config = {});

// Documents for every contribution in the store.
std::vector<ContributionDocument> build_corpus(const GraphStore& store, const SelectionConfig& config = {});

struct SimilarityHit {
    ResourceId contribution;
    double score = 0;
    int percentage = 0;  // round(score * 100)
};

inline constexpr std::size_t kDefaultTopK = 3;

// TF-IDF vectors over contribution documents.
//   tf(t, d) = raw count of t in d
//   idf(t)   = ln((1 + N) / (1 + df(t))) + 1
// Each document vector is L2-normalized (all-zero vectors stay zero), so the
// cosine of two documents is the dot product of their vectors.
class TfIdfIndex {
public:
    using SparseVector = std::vector<std::pair<std::size_t, double>>;  // ascending dimension

    static TfIdfIndex build(std::vector<ContributionDocument> documents);

    std::size_t document_count() const { return vectors_.size(); }
    std::size_t vocabulary_size() const { return vocabulary_.size(); }
    std::optional<double> idf(const std::string& token) const;
    const SparseVector* vector(const ResourceId& contribution) const;
    bool contains(const ResourceId& contribution) const { return vectors_.contains(contribution); }

    double similarity(const ResourceId& a, const ResourceId& b) const;

    // Top-k other documents by cosine: descending score, ties by ascending id.
    std::vector<SimilarityHit> find_similar(const ResourceId& main, std::size_t k = kDefaultTopK) const;

private:
    std::map<std::string, std::size_t> vocabulary_;
    std::vector<double> idf_;
    std::map<ResourceId, SparseVector> vectors_;
};

// Manually selected contributions, kept in insertion order without duplicates.
class ComparisonCart {
public:
    // Throws ReferenceError unless `id` is a contribution in `store`.
    void add(const GraphStore& store, const ResourceId& id);
    void remove(const ResourceId& id);
    void clear() { items_.clear(); }
    const std::vector<ResourceId>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    bool ready_to_compare() const { return items_.size() >= 2; }

private:
    std::vector<ResourceId> items_;
};

}  // namespace litcmp
