#include <gtest/gtest.h>

#include <thread>

#include "litcmp/errors.hpp"
#include "litcmp/graph_store.hpp"
#include "test_support.hpp"

using namespace litcmp;
using litcmp::testing::TempDir;

namespace {

struct PaperFixture {
    GraphStore store;
    ResourceId problem;
    ResourceId contribution;
    Paper paper;

    PaperFixture() {
        problem = store.create_resource("Entity linking", {std::string(classes::kResearchProblem)});
        contribution = store.create_contribution("Contribution 1", {problem});
        paper = store.create_paper({"A survey of linkers", {"Doe, J."}, 2019, "10.1000/xyz"}, {contribution});
    }
};

}  // namespace

TEST(GraphStore, PredicatesAreDeduplicatedByLabel) {
    GraphStore store;
    auto a = store.create_predicate("has dataset");
    auto b = store.create_predicate("has dataset");
    auto c = store.create_predicate("has metric");
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    EXPECT_EQ(store.find_predicate("has dataset"), a);
    EXPECT_FALSE(store.find_predicate("missing").has_value());
}

TEST(GraphStore, ResourceLabelsAreNotUnique) {
    GraphStore store;
    auto a = store.create_resource("DBpedia");
    auto b = store.create_resource("DBpedia");
    EXPECT_NE(a, b);
    EXPECT_EQ(store.find_resources("DBpedia").size(), 2u);
}

TEST(GraphStore, EmptyLabelsAreRejected) {
    GraphStore store;
    EXPECT_THROW(store.create_resource(""), ValidationError);
    EXPECT_THROW(store.create_predicate(""), ValidationError);
}

TEST(GraphStore, StatementsAreIndexedBothWays) {
    GraphStore store;
    auto s = store.create_resource("s");
    auto o = store.create_resource("o");
    auto p = store.create_predicate("p");
    auto st1 = store.add_statement(s, p, o);
    auto st2 = store.add_statement(s, p, Literal{"42", "xsd:integer"});

    EXPECT_EQ(st1.id.seq, 1u);
    EXPECT_EQ(st2.id.seq, 2u);
    EXPECT_EQ(store.statements_by_subject(s).size(), 2u);
    ASSERT_EQ(store.statements_by_object(o).size(), 1u);
    EXPECT_EQ(store.statements_by_object(o)[0], st1);
    EXPECT_EQ(store.statements_by_predicate(p).size(), 2u);
    EXPECT_EQ(store.statement(st2.id), st2);
    EXPECT_EQ(store.display(st1.object), "o");
    EXPECT_EQ(store.display(st2.object), "42");
}

TEST(GraphStore, DanglingReferencesAreRejected) {
    GraphStore store;
    auto s = store.create_resource("s");
    auto p = store.create_predicate("p");
    EXPECT_THROW(store.add_statement(ResourceId{"R999"}, p, s), ReferenceError);
    EXPECT_THROW(store.add_statement(s, PredicateId{"P999"}, s), ReferenceError);
    EXPECT_THROW(store.add_statement(s, p, ResourceId{"R999"}), ReferenceError);
    EXPECT_EQ(store.statement_count(), 0u);
}

TEST(GraphStore, StatementIdsFormatAndParse) {
    EXPECT_EQ(StatementId{17}.str(), "S17");
    EXPECT_EQ(StatementId::parse("S17"), StatementId{17});
    EXPECT_THROW(StatementId::parse("17"), ValidationError);
    EXPECT_THROW(StatementId::parse("S0"), ValidationError);
    EXPECT_THROW(StatementId::parse("Sx"), ValidationError);
}

TEST(GraphStore, PaperOwnsContributions) {
    PaperFixture f;
    EXPECT_TRUE(f.store.is_contribution(f.contribution));
    EXPECT_TRUE(f.store.has_class(f.paper.id, classes::kPaper));
    auto owner = f.store.paper_of(f.contribution);
    ASSERT_TRUE(owner.has_value());
    EXPECT_EQ(owner->id, f.paper.id);
    EXPECT_EQ(owner->metadata.title, "A survey of linkers");
    EXPECT_EQ(f.store.contributions(), std::vector<ResourceId>{f.contribution});

    // One "addresses problem" and one "has contribution" statement.
    EXPECT_EQ(f.store.statement_count(), 2u);
    auto incoming = f.store.statements_by_object(f.contribution);
    ASSERT_EQ(incoming.size(), 1u);
    EXPECT_EQ(f.store.predicate_label(incoming[0].predicate), predicates::kHasContribution);
}

TEST(GraphStore, PaperConstraints) {
    PaperFixture f;
    EXPECT_THROW(f.store.create_paper({"x", {}, {}, {}}, {}), ValidationError);
    EXPECT_THROW(f.store.create_paper({"", {}, {}, {}}, {f.contribution}), ValidationError);
    EXPECT_THROW(f.store.create_paper({"x", {}, {}, {}}, {f.contribution}), ValidationError);
    EXPECT_THROW(f.store.create_paper({"x", {}, {}, {}}, {f.problem}), ValidationError);
    EXPECT_THROW(f.store.create_paper({"x", {}, {}, {}}, {ResourceId{"R404"}}), ReferenceError);
    EXPECT_THROW(f.store.create_contribution("c", {}), ValidationError);
    EXPECT_THROW(f.store.create_contribution("c", {ResourceId{"R404"}}), ReferenceError);
}

TEST(GraphStore, FieldEscapingRoundTrips) {
    for (std::string s : {"plain", "tab\there", "new\nline", "back\\slash", "\r\n\t\\", ""}) {
        auto escaped = escape_field(s);
        EXPECT_EQ(escaped.find('\t'), std::string::npos);
        EXPECT_EQ(escaped.find('\n'), std::string::npos);
        EXPECT_EQ(unescape_field(escaped), s);
    }
}

TEST(GraphStore, LogReplayRestoresEverything) {
    TempDir dir;
    const auto log = dir / "store.log";
    std::vector<Statement> before;
    ResourceId contribution;
    {
        auto store = GraphStore::open(log);
        auto problem = store->create_resource("Question answering", {"ResearchProblem"});
        contribution = store->create_contribution("Contribution", {problem});
        store->create_paper({"QA \"systems\"\tsurvey", {"Ng, A.", "Li, B."}, 2018, std::nullopt}, {contribution});
        auto kb = store->create_resource("DBpedia\nlive");
        auto p = store->create_predicate("knowledge\\base");
        store->add_statement(contribution, p, kb);
        store->add_statement(contribution, store->create_predicate("precision"), Literal{"0.7", "xsd:decimal"});
        before = store->all_statements();
    }
    const auto log_bytes = litcmp::testing::read_text(log);

    auto reopened = GraphStore::open(log);
    EXPECT_EQ(reopened->all_statements(), before);
    EXPECT_TRUE(reopened->is_contribution(contribution));
    auto paper = reopened->paper_of(contribution);
    ASSERT_TRUE(paper.has_value());
    EXPECT_EQ(paper->metadata.title, "QA \"systems\"\tsurvey");
    EXPECT_EQ(paper->metadata.authors, (std::vector<std::string>{"Ng, A.", "Li, B."}));
    EXPECT_EQ(reopened->find_resources("DBpedia\nlive").size(), 1u);

    // New ids continue after the replayed ones.
    auto fresh = reopened->create_resource("fresh");
    EXPECT_FALSE(reopened->find_resources("DBpedia\nlive").front() == fresh);
    auto st = reopened->add_statement(fresh, *reopened->find_predicate("precision"), Literal{"1", std::nullopt});
    EXPECT_EQ(st.id.seq, before.size() + 1);

    // Replay does not rewrite existing records.
    const auto after = litcmp::testing::read_text(log);
    EXPECT_EQ(after.substr(0, log_bytes.size()), log_bytes);
}

TEST(GraphStore, StatementLogLineFormat) {
    TempDir dir;
    const auto log = dir / "store.log";
    {
        auto store = GraphStore::open(log);
        auto s = store->create_resource("s");
        auto o = store->create_resource("o");
        auto p = store->create_predicate("p");
        store->add_statement(s, p, o);
        store->add_statement(s, p, Literal{"a\tb", std::nullopt});
    }
    const auto text = litcmp::testing::read_text(log);
    EXPECT_EQ(text, "S1\tR1\tP1\tR\tR2\t\nS2\tR1\tP1\tL\ta\\tb\t\n");
}

TEST(GraphStore, CorruptLogIsReported) {
    TempDir dir;
    const auto log = dir / "store.log";
    {
        std::ofstream out(log);
        out << "S1\tR1\tP1\tX\tR2\t\n";
    }
    EXPECT_THROW(GraphStore::open(log), StorageError);
}

TEST(GraphStore, ConcurrentReadersAndWriter) {
    GraphStore store;
    auto s = store.create_resource("s");
    auto p = store.create_predicate("p");
    std::thread writer([&] {
        for (int i = 0; i < 2000; ++i) store.add_statement(s, p, Literal{std::to_string(i), std::nullopt});
    });
    std::size_t last = 0;
    bool monotone = true;
    for (int i = 0; i < 2000; ++i) {
        auto n = store.statements_by_subject(s).size();
        monotone &= n >= last;
        last = n;
    }
    writer.join();
    EXPECT_TRUE(monotone);
    EXPECT_EQ(store.statement_count(), 2000u);
}
