#pragma once

#include <map>
#include <span>
#include <vector>

#include "litcmp/graph_store.hpp"

namespace litcmp {

struct SelectionConfig {
    int max_depth = 5;

    void validate() const;
};

// Statements reachable from one contribution, each tagged with the minimal
// number of statement hops needed to reach it.
struct ContributionSubgraph {
    ResourceId contribution;
    std::vector<Statement> statements;              // ascending statement id
    std::map<StatementId, int> depth;               // 1..max_depth
    std::map<ResourceId, StatementId> reached_via;  // first statement reaching a resource

    bool contains(const StatementId& id) const { return depth.contains(id); }
    const Statement& statement(const StatementId& id) const;
    std::vector<Statement> at_depth(int d) const;
};

// Breadth-first selection. Depth 1 takes every statement with the
// contribution in subject or object position; deeper levels follow outgoing
// statements of resources first reached on the previous level. Literals are
// leaves and other contributions are never expanded.
ContributionSubgraph select_related(const GraphStore& store, const ResourceId& contribution,
                                    const SelectionConfig& config = {});

std::map<ResourceId, ContributionSubgraph> select_related(const GraphStore& store,
                                                          std::span<const ResourceId> contributions,
                                                          const SelectionConfig& config = {});

// Shortest statement path from the contribution to `target`; at every
// branching the lowest statement id wins.
std::vector<Statement> provenance_path(const ContributionSubgraph& subgraph, const StatementId& target);

}  // namespace litcmp
