#include "litcmp/candidate_finder.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "litcmp/errors.hpp"
#include "litcmp/tokenize.hpp"

namespace litcmp {

ContributionDocument build_document(const GraphStore& store, const ResourceId& contribution,
                                   const SelectionConfig& config) {
    ContributionDocument doc{contribution, {}};
    for (const auto& st : select_related(store, contribution, config).statements) {
        for (auto& token : tokenize_label(store.predicate_label(st.predicate))) {
            doc.tokens.push_back(std::move(token));
        }
    }
    return doc;
}

std::vector<ContributionDocument> build_corpus(const GraphStore& store, const SelectionConfig& config) {
    std::vector<ContributionDocument> docs;
    for (const auto& c : store.contributions()) docs.push_back(build_document(store, c, config));
    return docs;
}

TfIdfIndex TfIdfIndex::build(std::vector<ContributionDocument> documents) {
    if (documents.empty()) throw ValidationError("cannot build a TF-IDF index over an empty corpus");

    TfIdfIndex index;
    std::map<ResourceId, std::map<std::string, std::size_t>> counts;
    for (const auto& doc : documents) {
        auto [it, fresh] = counts.try_emplace(doc.contribution);
        if (!fresh) throw ValidationError("duplicate document for " + doc.contribution.value);
        for (const auto& t : doc.tokens) ++it->second[t];
    }

    std::map<std::string, std::size_t> df;
    for (const auto& [id, tf] : counts) {
        for (const auto& [token, n] : tf) ++df[token];
    }
    const double n_docs = static_cast<double>(counts.size());
    for (const auto& [token, freq] : df) {
        index.vocabulary_.emplace(token, index.idf_.size());
        index.idf_.push_back(std::log((1.0 + n_docs) / (1.0 + static_cast<double>(freq))) + 1.0);
    }

    for (const auto& [id, tf] : counts) {
        SparseVector vec;
        double sq = 0;
        for (const auto& [token, n] : tf) {
            auto dim = index.vocabulary_.at(token);
            double w = static_cast<double>(n) * index.idf_[dim];
            vec.emplace_back(dim, w);
            sq += w * w;
        }
        if (sq > 0) {
            double norm = std::sqrt(sq);
            for (auto& [dim, w] : vec) w /= norm;
        }
        index.vectors_.emplace(id, std::move(vec));
    }
    return index;
}

std::optional<double> TfIdfIndex::idf(const std::string& token) const {
    auto it = vocabulary_.find(token);
    if (it == vocabulary_.end()) return std::nullopt;
    return idf_[it->second];
}

const TfIdfIndex::SparseVector* TfIdfIndex::vector(const ResourceId& contribution) const {
    auto it = vectors_.find(contribution);
    return it == vectors_.end() ? nullptr : &it->second;
}

namespace {

double sparse_dot(const TfIdfIndex::SparseVector& a, const TfIdfIndex::SparseVector& b) {
    double dot = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            dot += ia->second * ib->second;
            ++ia;
            ++ib;
        }
    }
    return std::clamp(dot, 0.0, 1.0);
}

}  // namespace

double TfIdfIndex::similarity(const ResourceId& a, const ResourceId& b) const {
    const auto* va = vector(a);
    const auto* vb = vector(b);
    if (!va) throw ReferenceError("contribution " + a.value + " is not indexed");
    if (!vb) throw ReferenceError("contribution " + b.value + " is not indexed");
    return sparse_dot(*va, *vb);
}

std::vector<SimilarityHit> TfIdfIndex::find_similar(const ResourceId& main, std::size_t k) const {
    if (k < 1) throw ValidationError("k must be >= 1");
    const auto* query = vector(main);
    if (!query) throw ReferenceError("contribution " + main.value + " is not indexed");

    // Scores equal to 12 decimal places rank as ties, so rounding noise in the
    // dot product does not override the id order.
    auto rank_key = [](double score) { return std::llround(score * 1e12); };
    std::vector<SimilarityHit> hits;
    for (const auto& [id, vec] : vectors_) {
        if (id == main) continue;
        double score = sparse_dot(*query, vec);
        hits.push_back({id, score, static_cast<int>(std::lround(score * 100.0))});
    }
    std::sort(hits.begin(), hits.end(), [&](const SimilarityHit& a, const SimilarityHit& b) {
        if (rank_key(a.score) != rank_key(b.score)) return rank_key(a.score) > rank_key(b.score);
        return a.contribution < b.contribution;
    });
    if (hits.size() > k) hits.resize(k);
    return hits;
}

void ComparisonCart::add(const GraphStore& store, const ResourceId& id) {
    if (!store.is_contribution(id)) throw ReferenceError("unknown contribution " + id.value);
    if (std::find(items_.begin(), items_.end(), id) == items_.end()) items_.push_back(id);
}

void ComparisonCart::remove(const ResourceId& id) {
    items_.erase(std::remove(items_.begin(), items_.end(), id), items_.end());
}

}  // namespace litcmp
