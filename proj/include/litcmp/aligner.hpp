#pragma once
// Property alignment: groups predicates of different contributions that
// denote the same concept.
//
//   gamma[i][j]  cosine of the label embeddings of properties i and j
//   Phi[c][j]    1 iff contribution c uses property j (anywhere in its subgraph)
//   phi_p        Phi restricted to the columns sim(p) = {q : gamma[p][q] >= tau}
//
// Two properties are similar when their cosine reaches tau or their labels
// are identical. Groups are the connected components of that relation.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "litcmp/embeddings.hpp"
#include "litcmp/graph_store.hpp"
#include "litcmp/statement_selector.hpp"

namespace litcmp {

struct Property {
    PredicateId id;
    std::string label;

    bool operator==(const Property&) const = default;
};

struct AlignmentConfig {
    double tau = 0.9;

    void validate() const;
};

class SimilarityMatrix {
public:
    SimilarityMatrix() = default;
    SimilarityMatrix(std::vector<Property> properties, std::vector<double> values);

    const std::vector<Property>& properties() const { return properties_; }
    std::size_t size() const { return properties_.size(); }
    double at(std::size_t i, std::size_t j) const { return values_[i * properties_.size() + j]; }
    std::optional<std::size_t> index_of(const PredicateId& id) const;

private:
    std::vector<Property> properties_;
    std::vector<double> values_;
};

// Embeds each distinct label once through the cache.
SimilarityMatrix similarity_matrix(std::vector<Property> properties, EmbeddingCache& cache);

// Unordered pairs are normalized so that first < second.
using PropertyPair = std::pair<PredicateId, PredicateId>;
using PairSet = std::set<PropertyPair>;

PairSet align_properties(const SimilarityMatrix& gamma, double tau);
PairSet align_properties(std::span<const Property> properties, double tau, EmbeddingCache& cache);

// Reference all-pairs alignment: no cache, no symmetry. Both (p, q) and (q, p)
// are evaluated and returned; every evaluation embeds both labels again.
PairSet naive_align(std::span<const Property> properties, double tau, const EmbeddingProvider& provider);

PairSet symmetrize(const PairSet& ordered_pairs);

class MaskMatrix {
public:
    MaskMatrix() = default;
    MaskMatrix(std::vector<ResourceId> contributions, std::vector<Property> properties);

    const std::vector<ResourceId>& contributions() const { return contributions_; }
    const std::vector<Property>& properties() const { return properties_; }
    std::size_t rows() const { return contributions_.size(); }
    std::size_t columns() const { return properties_.size(); }
    bool at(std::size_t row, std::size_t column) const { return cells_[row * columns() + column] != 0; }
    void set(std::size_t row, std::size_t column, bool value) { cells_[row * columns() + column] = value; }
    std::optional<std::size_t> column_of(const PredicateId& id) const;
    // Number of contributions using property `column`.
    std::size_t column_count(std::size_t column) const;

private:
    std::vector<ResourceId> contributions_;
    std::vector<Property> properties_;
    std::vector<std::uint8_t> cells_;
};

MaskMatrix mask_matrix(std::span<const ResourceId> contributions, std::span<const Property> properties,
                       const std::map<ResourceId, ContributionSubgraph>& subgraphs);

struct SlicedMask {
    PredicateId property;
    std::vector<std::size_t> columns;  // indices into the mask's property list
    MaskMatrix values;                 // rows x columns.size()

    // Contributions having at least one of the sliced properties.
    std::size_t support() const;
};

SlicedMask slice_columns(const MaskMatrix& mask, const PredicateId& key, std::vector<std::size_t> columns);
SlicedMask slice_mask(const MaskMatrix& mask, const SimilarityMatrix& gamma, const PredicateId& property,
                      double tau);

struct PropertyGroup {
    std::string id;  // id of the representative predicate
    std::string label;
    PredicateId representative;
    std::vector<PredicateId> members;
    std::vector<std::string> member_labels;
    std::size_t support = 0;
};

// Connected components of `pairs` over `properties`. Ordered by descending
// support, then by first appearance in `properties`.
std::vector<PropertyGroup> group_properties(const PairSet& pairs, std::span<const Property> properties,
                                            const MaskMatrix& mask);

}  // namespace litcmp
