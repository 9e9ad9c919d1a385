#include "litcmp/aligner.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "litcmp/errors.hpp"
#include "litcmp/union_find.hpp"

namespace litcmp {

namespace {

PropertyPair ordered(const PredicateId& a, const PredicateId& b) {
    return a < b ? PropertyPair{a, b} : PropertyPair{b, a};
}

double norm(const Vector& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void require_unique(std::span<const Property> properties) {
    std::unordered_set<std::string> seen;
    for (const auto& p : properties) {
        if (!seen.insert(p.id.value).second) throw ValidationError("duplicate property " + p.id.value);
    }
}

}  // namespace

void AlignmentConfig::validate() const {
    if (!(tau > 0.0 && tau <= 1.0)) throw ValidationError("tau must lie in (0, 1]");
}

SimilarityMatrix::SimilarityMatrix(std::vector<Property> properties, std::vector<double> values)
    : properties_(std::move(properties)), values_(std::move(values)) {
    if (values_.size() != properties_.size() * properties_.size()) {
        throw ValidationError("similarity matrix size mismatch");
    }
}

std::optional<std::size_t> SimilarityMatrix::index_of(const PredicateId& id) const {
    for (std::size_t i = 0; i < properties_.size(); ++i) {
        if (properties_[i].id == id) return i;
    }
    return std::nullopt;
}

SimilarityMatrix similarity_matrix(std::vector<Property> properties, EmbeddingCache& cache) {
    require_unique(properties);
    const std::size_t n = properties.size();
    std::vector<std::shared_ptr<const Vector>> vectors;
    vectors.reserve(n);
    for (const auto& p : properties) vectors.push_back(cache.get(p.label));

    std::vector<double> values(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        values[i * n + i] = norm(*vectors[i]) > 0 ? 1.0 : 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double c = cosine(*vectors[i], *vectors[j]);
            values[i * n + j] = c;
            values[j * n + i] = c;
        }
    }
    return SimilarityMatrix(std::move(properties), std::move(values));
}

PairSet align_properties(const SimilarityMatrix& gamma, double tau) {
    AlignmentConfig{tau}.validate();
    const auto& props = gamma.properties();
    PairSet pairs;
    for (std::size_t i = 0; i < props.size(); ++i) {
        for (std::size_t j = i + 1; j < props.size(); ++j) {
            if (props[i].label == props[j].label || gamma.at(i, j) >= tau) {
                pairs.insert(ordered(props[i].id, props[j].id));
            }
        }
    }
    return pairs;
}

PairSet align_properties(std::span<const Property> properties, double tau, EmbeddingCache& cache) {
    return align_properties(similarity_matrix({properties.begin(), properties.end()}, cache), tau);
}

PairSet naive_align(std::span<const Property> properties, double tau, const EmbeddingProvider& provider) {
    AlignmentConfig{tau}.validate();
    require_unique(properties);
    PairSet pairs;
    for (const auto& p1 : properties) {
        for (const auto& p2 : properties) {
            Vector v1 = provider.embed(p1.label);
            Vector v2 = provider.embed(p2.label);
            double similarity = cosine(v1, v2);
            if (p1.id != p2.id && (p1.label == p2.label || similarity >= tau)) {
                pairs.emplace(p1.id, p2.id);
            }
        }
    }
    return pairs;
}

PairSet symmetrize(const PairSet& ordered_pairs) {
    PairSet out;
    for (const auto& [a, b] : ordered_pairs) {
        if (a != b) out.insert(ordered(a, b));
    }
    return out;
}

MaskMatrix::MaskMatrix(std::vector<ResourceId> contributions, std::vector<Property> properties)
    : contributions_(std::move(contributions)),
      properties_(std::move(properties)),
      cells_(contributions_.size() * properties_.size(), 0) {}

std::optional<std::size_t> MaskMatrix::column_of(const PredicateId& id) const {
    for (std::size_t j = 0; j < properties_.size(); ++j) {
        if (properties_[j].id == id) return j;
    }
    return std::nullopt;
}

std::size_t MaskMatrix::column_count(std::size_t column) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < rows(); ++i) n += at(i, column);
    return n;
}

MaskMatrix mask_matrix(std::span<const ResourceId> contributions, std::span<const Property> properties,
                       const std::map<ResourceId, ContributionSubgraph>& subgraphs) {
    MaskMatrix mask({contributions.begin(), contributions.end()}, {properties.begin(), properties.end()});
    std::unordered_map<std::string, std::size_t> column;
    for (std::size_t j = 0; j < properties.size(); ++j) column.emplace(properties[j].id.value, j);
    for (std::size_t i = 0; i < contributions.size(); ++i) {
        auto it = subgraphs.find(contributions[i]);
        if (it == subgraphs.end()) throw ReferenceError("no subgraph for " + contributions[i].value);
        for (const auto& st : it->second.statements) {
            if (auto c = column.find(st.predicate.value); c != column.end()) mask.set(i, c->second, true);
        }
    }
    return mask;
}

std::size_t SlicedMask::support() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < values.rows(); ++i) {
        for (std::size_t k = 0; k < values.columns(); ++k) {
            if (values.at(i, k)) {
                ++n;
                break;
            }
        }
    }
    return n;
}

SlicedMask slice_columns(const MaskMatrix& mask, const PredicateId& key, std::vector<std::size_t> columns) {
    std::vector<Property> props;
    for (auto j : columns) props.push_back(mask.properties().at(j));
    SlicedMask slice{key, columns, MaskMatrix(mask.contributions(), std::move(props))};
    for (std::size_t i = 0; i < mask.rows(); ++i) {
        for (std::size_t k = 0; k < columns.size(); ++k) slice.values.set(i, k, mask.at(i, columns[k]));
    }
    return slice;
}

SlicedMask slice_mask(const MaskMatrix& mask, const SimilarityMatrix& gamma, const PredicateId& property,
                      double tau) {
    AlignmentConfig{tau}.validate();
    auto gp = gamma.index_of(property);
    auto mp = mask.column_of(property);
    if (!gp || !mp) throw ReferenceError("unknown property " + property.value);
    const auto& label = gamma.properties()[*gp].label;

    std::vector<std::size_t> columns;
    for (std::size_t j = 0; j < mask.columns(); ++j) {
        const auto& q = mask.properties()[j];
        if (j == *mp || q.label == label) {
            columns.push_back(j);
            continue;
        }
        if (auto gq = gamma.index_of(q.id); gq && gamma.at(*gp, *gq) >= tau) columns.push_back(j);
    }
    return slice_columns(mask, property, std::move(columns));
}

std::vector<PropertyGroup> group_properties(const PairSet& pairs, std::span<const Property> properties,
                                            const MaskMatrix& mask) {
    require_unique(properties);
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < properties.size(); ++i) index.emplace(properties[i].id.value, i);

    UnionFind uf(properties.size());
    for (const auto& [a, b] : pairs) {
        auto ia = index.find(a.value);
        auto ib = index.find(b.value);
        if (ia == index.end() || ib == index.end()) {
            throw ReferenceError("pair references unknown property " + a.value + "/" + b.value);
        }
        uf.unite(ia->second, ib->second);
    }

    // Components in first-appearance order.
    std::vector<std::vector<std::size_t>> components;
    std::unordered_map<std::size_t, std::size_t> component_of_root;
    for (std::size_t i = 0; i < properties.size(); ++i) {
        auto root = uf.find(i);
        auto [it, fresh] = component_of_root.emplace(root, components.size());
        if (fresh) components.emplace_back();
        components[it->second].push_back(i);
    }

    std::vector<std::pair<PropertyGroup, std::size_t>> groups;
    for (const auto& members : components) {
        PropertyGroup g;
        std::vector<std::size_t> mask_columns;
        std::size_t best_usage = 0;
        const Property* best = nullptr;
        for (auto i : members) {
            const auto& p = properties[i];
            g.members.push_back(p.id);
            g.member_labels.push_back(p.label);
            std::size_t usage = 0;
            if (auto col = mask.column_of(p.id)) {
                mask_columns.push_back(*col);
                usage = mask.column_count(*col);
            }
            if (!best || usage > best_usage ||
                (usage == best_usage && std::tie(p.label, p.id) < std::tie(best->label, best->id))) {
                best = &p;
                best_usage = usage;
            }
        }
        g.representative = best->id;
        g.id = best->id.value;
        g.label = best->label;
        g.support = slice_columns(mask, g.representative, mask_columns).support();
        groups.emplace_back(std::move(g), members.front());
    }
    std::stable_sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
        if (a.first.support != b.first.support) return a.first.support > b.first.support;
        return a.second < b.second;
    });
    std::vector<PropertyGroup> out;
    out.reserve(groups.size());
    for (auto& [g, first] : groups) out.push_back(std::move(g));
    return out;
}

}  // namespace litcmp
