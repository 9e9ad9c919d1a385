#include "litcmp/statement_selector.hpp"

#include <algorithm>
#include <set>

#include "litcmp/errors.hpp"

namespace litcmp {

void SelectionConfig::validate() const {
    if (max_depth < 1) throw ValidationError("maximum selection depth must be >= 1");
}

const Statement& ContributionSubgraph::statement(const StatementId& id) const {
    auto it = std::lower_bound(statements.begin(), statements.end(), id,
                               [](const Statement& s, const StatementId& key) { return s.id < key; });
    if (it == statements.end() || it->id != id) {
        throw ReferenceError("statement " + id.str() + " is not part of the subgraph of " + contribution.value);
    }
    return *it;
}

std::vector<Statement> ContributionSubgraph::at_depth(int d) const {
    std::vector<Statement> out;
    for (const auto& st : statements) {
        if (depth.at(st.id) == d) out.push_back(st);
    }
    return out;
}

ContributionSubgraph select_related(const GraphStore& store, const ResourceId& contribution,
                                    const SelectionConfig& config) {
    config.validate();
    if (!store.resource(contribution)) throw ReferenceError("unknown contribution " + contribution.value);

    ContributionSubgraph sub;
    sub.contribution = contribution;
    std::set<ResourceId> visited{contribution};

    // Level 1: incident statements in either direction.
    std::vector<Statement> level = store.statements_by_subject(contribution);
    auto incoming = store.statements_by_object(contribution);
    level.insert(level.end(), incoming.begin(), incoming.end());

    for (int d = 1; d <= config.max_depth && !level.empty(); ++d) {
        std::sort(level.begin(), level.end(), [](const Statement& a, const Statement& b) { return a.id < b.id; });
        std::vector<ResourceId> frontier;
        for (const auto& st : level) {
            if (sub.depth.contains(st.id)) continue;
            sub.depth.emplace(st.id, d);
            sub.statements.push_back(st);

            // The endpoint this statement leads to, away from the visited side.
            const ResourceId* reached = st.object_resource();
            if (d == 1 && st.subject != contribution) reached = &st.subject;
            if (!reached || visited.contains(*reached)) continue;
            visited.insert(*reached);
            sub.reached_via.emplace(*reached, st.id);
            if (!store.is_contribution(*reached)) frontier.push_back(*reached);
        }
        level.clear();
        for (const auto& r : frontier) {
            auto out = store.statements_by_subject(r);
            level.insert(level.end(), out.begin(), out.end());
        }
    }
    std::sort(sub.statements.begin(), sub.statements.end(),
              [](const Statement& a, const Statement& b) { return a.id < b.id; });
    return sub;
}

std::map<ResourceId, ContributionSubgraph> select_related(const GraphStore& store,
                                                          std::span<const ResourceId> contributions,
                                                          const SelectionConfig& config) {
    std::map<ResourceId, ContributionSubgraph> out;
    for (const auto& c : contributions) {
        if (!out.contains(c)) out.emplace(c, select_related(store, c, config));
    }
    return out;
}

std::vector<Statement> provenance_path(const ContributionSubgraph& subgraph, const StatementId& target) {
    std::vector<Statement> path;
    const Statement* st = &subgraph.statement(target);
    while (true) {
        path.push_back(*st);
        if (subgraph.depth.at(st->id) == 1) break;
        auto via = subgraph.reached_via.find(st->subject);
        if (via == subgraph.reached_via.end()) {
            throw ReferenceError("broken provenance chain at " + st->id.str());
        }
        st = &subgraph.statement(via->second);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace litcmp
