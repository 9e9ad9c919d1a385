#include <gtest/gtest.h>

#include <random>

#include "litcmp/aligner.hpp"
#include "litcmp/errors.hpp"
#include "litcmp/union_find.hpp"
#include "test_support.hpp"

using namespace litcmp;

namespace {

WordVectors small_vectors() { return WordVectors::load(litcmp::testing::fixture_path("vectors_small.txt")); }

Property prop(const std::string& id, const std::string& label) { return {PredicateId{id}, label}; }

PropertyPair pair(const std::string& a, const std::string& b) { return {PredicateId{a}, PredicateId{b}}; }

MaskMatrix full_mask(const std::vector<Property>& props, std::size_t rows) {
    std::vector<ResourceId> contributions;
    for (std::size_t i = 0; i < rows; ++i) contributions.push_back(ResourceId{"C" + std::to_string(i)});
    MaskMatrix mask(contributions, props);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < props.size(); ++j) mask.set(i, j, true);
    }
    return mask;
}

std::set<std::set<std::string>> partition(const std::vector<PropertyGroup>& groups) {
    std::set<std::set<std::string>> out;
    for (const auto& g : groups) {
        std::set<std::string> members;
        for (const auto& m : g.members) members.insert(m.value);
        out.insert(members);
    }
    return out;
}

}  // namespace

TEST(UnionFind, Basics) {
    UnionFind uf(5);
    uf.unite(0, 1);
    uf.unite(3, 4);
    uf.unite(1, 0);
    EXPECT_TRUE(uf.connected(0, 1));
    EXPECT_FALSE(uf.connected(1, 3));
    uf.unite(1, 4);
    EXPECT_TRUE(uf.connected(0, 3));
    EXPECT_FALSE(uf.connected(2, 0));
}

TEST(SimilarityMatrix, FixtureCosines) {
    auto wv = small_vectors();
    EmbeddingCache cache(wv);
    auto gamma = similarity_matrix({prop("P1", "population"), prop("P2", "population total"),
                                    prop("P3", "country"), prop("P4", "population")},
                                   cache);
    EXPECT_DOUBLE_EQ(gamma.at(0, 0), 1.0);
    EXPECT_NEAR(gamma.at(0, 1), 0.96, 1e-12);
    EXPECT_NEAR(gamma.at(1, 0), 0.96, 1e-12);
    EXPECT_EQ(gamma.at(0, 2), 0.0);
    EXPECT_NEAR(gamma.at(0, 3), 1.0, 1e-12);
    EXPECT_EQ(cache.size(), 3u);  // "population" embedded once
}

TEST(SimilarityMatrix, ZeroVectorsHaveZeroDiagonal) {
    auto wv = small_vectors();
    EmbeddingCache cache(wv);
    auto gamma = similarity_matrix({prop("P1", "unknown words"), prop("P2", "population")}, cache);
    EXPECT_EQ(gamma.at(0, 0), 0.0);
    EXPECT_EQ(gamma.at(1, 1), 1.0);
    EXPECT_EQ(gamma.at(0, 1), 0.0);
}

TEST(SimilarityMatrix, DuplicateIdsRejected) {
    auto wv = small_vectors();
    EmbeddingCache cache(wv);
    EXPECT_THROW(similarity_matrix({prop("P1", "a"), prop("P1", "b")}, cache), ValidationError);
}

TEST(AlignProperties, ThreeLabelFixture) {
    // cos(a,b) = 0.95, cos(b,c) = 0.92, cos(a,c) = 0.80
    auto wv = small_vectors();
    EmbeddingCache cache(wv);
    std::vector<Property> props{prop("A", "a"), prop("B", "b"), prop("C", "c")};
    auto gamma = similarity_matrix(props, cache);
    EXPECT_NEAR(gamma.at(0, 1), 0.95, 1e-12);
    EXPECT_NEAR(gamma.at(1, 2), 0.92, 1e-12);
    EXPECT_NEAR(gamma.at(0, 2), 0.80, 1e-12);
    EXPECT_EQ(align_properties(gamma, 0.9), (PairSet{pair("A", "B"), pair("B", "C")}));
}

TEST(AlignProperties, ThresholdIsInclusive) {
    auto wv = small_vectors();
    EmbeddingCache cache(wv);
    std::vector<Property> props{prop("A", "a"), prop("B", "b")};
    auto gamma = similarity_matrix(props, cache);
    EXPECT_EQ(align_properties(gamma, gamma.at(0, 1)).size(), 1u);
    EXPECT_TRUE(align_properties(gamma, std::nextafter(gamma.at(0, 1), 2.0)).empty());
}

TEST(AlignProperties, PopulationPairGroupedOrthogonalNot) {
    auto wv = small_vectors();
    EmbeddingCache cache(wv);
    std::vector<Property> props{prop("P1", "population"), prop("P2", "populationTotal"), prop("P3", "colour")};
    auto pairs = align_properties(props, 0.9, cache);
    EXPECT_EQ(pairs, (PairSet{pair("P1", "P2")}));
}

TEST(AlignProperties, IdenticalLabelsAlwaysPair) {
    auto wv = small_vectors();
    EmbeddingCache cache(wv);
    std::vector<Property> props{prop("P1", "zzz"), prop("P2", "zzz"), prop("P3", "zzz")};
    for (double tau : {0.1, 0.9, 1.0}) {
        EXPECT_EQ(align_properties(props, tau, cache).size(), 3u) << tau;
    }
}

TEST(AlignProperties, TauOneKeepsOnlyExactLabels) {
    auto wv = small_vectors();
    EmbeddingCache cache(wv);
    std::vector<Property> props{prop("A", "a"), prop("B", "b"), prop("C", "c"), prop("D", "a")};
    EXPECT_EQ(align_properties(props, 1.0, cache), (PairSet{pair("A", "D")}));
}

TEST(AlignProperties, InvalidTau) {
    auto wv = small_vectors();
    EmbeddingCache cache(wv);
    std::vector<Property> props{prop("A", "a")};
    EXPECT_THROW(align_properties(props, 0.0, cache), ValidationError);
    EXPECT_THROW(align_properties(props, 1.5, cache), ValidationError);
    EXPECT_THROW(naive_align(props, -0.1, wv), ValidationError);
}

TEST(NaiveAlign, EvaluatesBothOrdersAndCountsCalls) {
    auto wv = small_vectors();
    CountingProvider counting(wv);
    std::vector<Property> props{prop("A", "a"), prop("B", "b"), prop("C", "c")};
    auto ordered_pairs = naive_align(props, 0.9, counting);
    EXPECT_EQ(ordered_pairs, (PairSet{pair("A", "B"), pair("B", "A"), pair("B", "C"), pair("C", "B")}));
    EXPECT_EQ(counting.calls(), 2u * 3u * 3u);
    EmbeddingCache cache(wv);
    EXPECT_EQ(symmetrize(ordered_pairs), align_properties(props, 0.9, cache));
}

TEST(MaskMatrix, DirectEvaluation) {
    GraphStore store;
    auto c1 = store.create_resource("c1", {"Contribution"});
    auto c2 = store.create_resource("c2", {"Contribution"});
    auto c3 = store.create_resource("c3", {"Contribution"});
    auto p1 = store.create_predicate("p1");
    auto p2 = store.create_predicate("p2");
    store.add_statement(c1, p1, Literal{"x", std::nullopt});
    store.add_statement(c1, p2, Literal{"y", std::nullopt});
    store.add_statement(c2, p2, Literal{"z", std::nullopt});
    std::vector<ResourceId> cs{c1, c2, c3};
    std::vector<Property> ps{{p1, "p1"}, {p2, "p2"}};
    auto mask = mask_matrix(cs, ps, select_related(store, cs));
    EXPECT_TRUE(mask.at(0, 0));
    EXPECT_TRUE(mask.at(0, 1));
    EXPECT_FALSE(mask.at(1, 0));
    EXPECT_TRUE(mask.at(1, 1));
    EXPECT_FALSE(mask.at(2, 0));
    EXPECT_FALSE(mask.at(2, 1));
    EXPECT_EQ(mask.column_count(1), 2u);
}

TEST(MaskMatrix, RandomInstanceMatchesMembership) {
    std::mt19937_64 rng(5);
    GraphStore store;
    std::vector<ResourceId> cs;
    std::vector<Property> ps;
    for (int j = 0; j < 8; ++j) {
        auto id = store.create_predicate("prop " + std::to_string(j));
        ps.push_back({id, "prop " + std::to_string(j)});
    }
    std::map<ResourceId, std::set<PredicateId>> uses;
    for (int i = 0; i < 5; ++i) {
        auto c = store.create_resource("c", {"Contribution"});
        cs.push_back(c);
        for (const auto& p : ps) {
            if (rng() % 2) {
                store.add_statement(c, p.id, Literal{"v", std::nullopt});
                uses[c].insert(p.id);
            }
        }
    }
    auto mask = mask_matrix(cs, ps, select_related(store, cs));
    for (std::size_t i = 0; i < cs.size(); ++i) {
        for (std::size_t j = 0; j < ps.size(); ++j) {
            EXPECT_EQ(mask.at(i, j), uses[cs[i]].contains(ps[j].id));
        }
    }
}

TEST(SliceMask, ColumnsFollowRawSimilarity) {
    auto wv = small_vectors();
    EmbeddingCache cache(wv);
    std::vector<Property> props{prop("A", "a"), prop("B", "b"), prop("C", "c")};
    auto gamma = similarity_matrix(props, cache);
    auto mask = full_mask(props, 2);
    mask.set(1, 0, false);

    auto slice_a = slice_mask(mask, gamma, PredicateId{"A"}, 0.9);
    EXPECT_EQ(slice_a.columns, (std::vector<std::size_t>{0, 1}));  // no transitivity: c excluded
    EXPECT_EQ(slice_a.values.columns(), 2u);
    EXPECT_FALSE(slice_a.values.at(1, 0));
    EXPECT_EQ(slice_a.support(), 2u);

    auto slice_b = slice_mask(mask, gamma, PredicateId{"B"}, 0.9);
    EXPECT_EQ(slice_b.columns, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(SliceMask, SingleColumnEqualsMaskColumn) {
    auto wv = small_vectors();
    EmbeddingCache cache(wv);
    std::vector<Property> props{prop("A", "a"), prop("B", "b"), prop("C", "c")};
    auto gamma = similarity_matrix(props, cache);
    auto mask = full_mask(props, 3);
    mask.set(0, 2, false);
    auto slice = slice_mask(mask, gamma, PredicateId{"C"}, 1.0);
    ASSERT_EQ(slice.columns, (std::vector<std::size_t>{2}));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(slice.values.at(i, 0), mask.at(i, 2));
    for (const auto& p : props) EXPECT_EQ(slice_mask(mask, gamma, p.id, 1.0).columns.size(), 1u);
}

TEST(SliceMask, UnknownPropertyIsAReferenceError) {
    auto wv = small_vectors();
    EmbeddingCache cache(wv);
    std::vector<Property> props{prop("A", "a")};
    auto gamma = similarity_matrix(props, cache);
    EXPECT_THROW(slice_mask(full_mask(props, 1), gamma, PredicateId{"Z"}, 0.9), ReferenceError);
}

TEST(GroupProperties, TransitiveClosure) {
    std::vector<Property> props{prop("A", "a"), prop("B", "b"), prop("C", "c")};
    auto groups = group_properties({pair("A", "B"), pair("B", "C")}, props, full_mask(props, 2));
    ASSERT_EQ(groups.size(), 1u);
    EXPECT_EQ(groups[0].members.size(), 3u);
    EXPECT_EQ(groups[0].support, 2u);
}

TEST(GroupProperties, NoPairsGivesSingletons) {
    std::vector<Property> props{prop("A", "a"), prop("B", "b"), prop("C", "c")};
    auto groups = group_properties({}, props, full_mask(props, 1));
    EXPECT_EQ(groups.size(), 3u);
}

TEST(GroupProperties, DisjointClustersPartition) {
    std::vector<Property> props{prop("A", "a"), prop("B", "b"), prop("C", "c"), prop("D", "d")};
    auto groups = group_properties({pair("A", "B"), pair("C", "D")}, props, full_mask(props, 1));
    EXPECT_EQ(partition(groups), (std::set<std::set<std::string>>{{"A", "B"}, {"C", "D"}}));
}

TEST(GroupProperties, RepresentativeIsMostUsedThenLexicographic) {
    std::vector<Property> props{prop("A", "zeta"), prop("B", "alpha"), prop("C", "mid")};
    MaskMatrix mask({ResourceId{"C1"}, ResourceId{"C2"}, ResourceId{"C3"}}, props);
    mask.set(0, 0, true);
    mask.set(1, 0, true);
    mask.set(2, 1, true);
    mask.set(0, 2, true);
    mask.set(2, 2, true);
    // zeta and mid both used twice; "mid" < "zeta".
    auto groups = group_properties({pair("A", "B"), pair("A", "C")}, props, mask);
    ASSERT_EQ(groups.size(), 1u);
    EXPECT_EQ(groups[0].label, "mid");
    EXPECT_EQ(groups[0].id, "C");
    EXPECT_EQ(groups[0].support, 3u);
}

TEST(GroupProperties, SortedBySupport) {
    std::vector<Property> props{prop("A", "a"), prop("B", "b")};
    MaskMatrix mask({ResourceId{"C1"}, ResourceId{"C2"}}, props);
    mask.set(0, 0, true);
    mask.set(0, 1, true);
    mask.set(1, 1, true);
    auto groups = group_properties({}, props, mask);
    ASSERT_EQ(groups.size(), 2u);
    EXPECT_EQ(groups[0].id, "B");
    EXPECT_EQ(groups[0].support, 2u);
    EXPECT_EQ(groups[1].support, 1u);
}

TEST(GroupProperties, UnknownPairMember) {
    std::vector<Property> props{prop("A", "a")};
    EXPECT_THROW(group_properties({pair("A", "Z")}, props, full_mask(props, 1)), ReferenceError);
}

namespace {

struct Instance {
    WordVectors vectors;
    std::vector<Property> properties;
    MaskMatrix mask;
};

// Words come in families of near-duplicate vectors so that some label pairs
// land above typical thresholds; labels are 1-2 words and may repeat.
Instance random_instance(std::mt19937_64& rng, std::size_t max_properties) {
    std::normal_distribution<double> gauss(0, 1);
    std::unordered_map<std::string, Vector> words;
    for (int family = 0; family < 6; ++family) {
        Vector base(8);
        for (auto& x : base) x = gauss(rng);
        for (int member = 0; member < 3; ++member) {
            Vector v = base;
            for (auto& x : v) x += 0.15 * member * gauss(rng);
            words.emplace("w" + std::to_string(family) + "x" + std::to_string(member), std::move(v));
        }
    }
    std::vector<std::string> vocab;
    for (const auto& [w, v] : words) vocab.push_back(w);
    std::sort(vocab.begin(), vocab.end());
    vocab.push_back("oov");

    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_properties)(rng);
    std::vector<Property> props;
    std::vector<std::string> used_labels;
    for (std::size_t i = 0; i < n; ++i) {
        std::string label;
        if (!used_labels.empty() && rng() % 6 == 0) {
            label = used_labels[rng() % used_labels.size()];
        } else {
            label = vocab[rng() % vocab.size()];
            if (rng() % 2) label += " " + vocab[rng() % vocab.size()];
        }
        used_labels.push_back(label);
        props.push_back({PredicateId{"P" + std::to_string(i)}, label});
    }
    std::vector<ResourceId> cs;
    const std::size_t rows = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    for (std::size_t i = 0; i < rows; ++i) cs.push_back(ResourceId{"C" + std::to_string(i)});
    MaskMatrix mask(cs, props);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < props.size(); ++j) mask.set(i, j, rng() % 3 == 0);
    }
    return {WordVectors::from_words(8, std::move(words)), std::move(props), std::move(mask)};
}

}  // namespace

TEST(AlignerProperty, OptimizedEqualsNaiveUpToFiftyProperties) {
    std::mt19937_64 rng(1234);
    for (int round = 0; round < 150; ++round) {
        auto inst = random_instance(rng, 50);
        const double tau = std::uniform_real_distribution<double>(0.5, 1.0)(rng);
        EmbeddingCache cache(inst.vectors);
        auto fast = align_properties(inst.properties, tau, cache);
        auto slow = symmetrize(naive_align(inst.properties, tau, inst.vectors));
        ASSERT_EQ(fast, slow) << "round " << round;

        auto g_fast = group_properties(fast, inst.properties, inst.mask);
        auto g_slow = group_properties(slow, inst.properties, inst.mask);
        ASSERT_EQ(partition(g_fast), partition(g_slow));

        // Components checked against an independent graph search.
        std::vector<std::string> nodes;
        for (const auto& p : inst.properties) nodes.push_back(p.id.value);
        std::set<std::pair<std::string, std::string>> edges;
        for (const auto& [a, b] : slow) edges.emplace(a.value, b.value);
        ASSERT_EQ(partition(g_fast), litcmp::testing::components(nodes, edges));
    }
}

TEST(AlignerProperty, GammaIsSymmetricWithUnitDiagonal) {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 50; ++round) {
        auto inst = random_instance(rng, 30);
        EmbeddingCache cache(inst.vectors);
        auto gamma = similarity_matrix(inst.properties, cache);
        for (std::size_t i = 0; i < gamma.size(); ++i) {
            const bool zero = inst.vectors.embed(inst.properties[i].label) == Vector(8, 0.0);
            EXPECT_EQ(gamma.at(i, i), zero ? 0.0 : 1.0);
            for (std::size_t j = 0; j < gamma.size(); ++j) {
                EXPECT_EQ(gamma.at(i, j), gamma.at(j, i));
                EXPECT_GE(gamma.at(i, j), -1.0 - 1e-9);
                EXPECT_LE(gamma.at(i, j), 1.0 + 1e-9);
            }
        }
    }
}

TEST(AlignerProperty, ExactLabelsCoGroupedAndLoweringTauOnlyMerges) {
    std::mt19937_64 rng(4321);
    for (int round = 0; round < 60; ++round) {
        auto inst = random_instance(rng, 40);
        EmbeddingCache cache(inst.vectors);
        std::set<std::set<std::string>> previous;
        for (double tau : {1.0, 0.97, 0.93, 0.9, 0.8, 0.6, 0.3}) {
            auto groups = group_properties(align_properties(inst.properties, tau, cache), inst.properties, inst.mask);
            std::map<std::string, std::string> group_of_label;
            for (const auto& g : groups) {
                for (const auto& label : g.member_labels) {
                    auto [it, fresh] = group_of_label.emplace(label, g.id);
                    ASSERT_TRUE(fresh || it->second == g.id) << "label split across groups: " << label;
                }
            }
            auto current = partition(groups);
            // Every previous group is contained in some current group.
            for (const auto& old_group : previous) {
                bool contained = false;
                for (const auto& g : current) {
                    contained |= std::includes(g.begin(), g.end(), old_group.begin(), old_group.end());
                }
                ASSERT_TRUE(contained);
            }
            previous = std::move(current);
        }
    }
}

TEST(AlignerProperty, OptimizedEmbedsEachDistinctLabelAtMostOnce) {
    std::mt19937_64 rng(8);
    for (int round = 0; round < 50; ++round) {
        auto inst = random_instance(rng, 80);
        CountingProvider counting(inst.vectors);
        EmbeddingCache cache(counting);
        align_properties(inst.properties, 0.9, cache);
        std::set<std::string> labels;
        for (const auto& p : inst.properties) labels.insert(p.label);
        EXPECT_LE(counting.calls(), labels.size());

        CountingProvider naive_counter(inst.vectors);
        naive_align(inst.properties, 0.9, naive_counter);
        EXPECT_EQ(naive_counter.calls(), 2 * inst.properties.size() * inst.properties.size());
    }
}
