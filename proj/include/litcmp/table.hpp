#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "litcmp/aligner.hpp"
#include "litcmp/embeddings.hpp"
#include "litcmp/graph_store.hpp"

namespace litcmp {

struct ComparisonConfig {
    int alpha = 2;     // minimum support for a row to be shown
    double tau = 0.9;  // alignment threshold
    int delta = 5;     // statement selection depth
    int k = 3;         // number of suggested candidates
    bool transposed = false;
    std::set<std::string> hidden_groups;
    std::vector<std::string> row_order;

    void validate() const;
    bool operator==(const ComparisonConfig&) const = default;
};

enum class ValueKind { literal, resource };

struct CellValue {
    std::string display;
    ValueKind kind = ValueKind::literal;
    std::optional<ResourceId> resource;
    std::vector<StatementId> provenance;  // statement path from the contribution

    bool operator==(const CellValue&) const = default;
};

struct Cell {
    ResourceId contribution;
    std::string group;
    std::vector<CellValue> values;  // statement id order

    bool operator==(const Cell&) const = default;
};

struct PaperInfo {
    ResourceId id;
    PaperMetadata metadata;

    bool operator==(const PaperInfo&) const = default;
};

struct ContributionColumn {
    ResourceId id;
    std::string label;
    std::optional<PaperInfo> paper;

    // Paper title when known, else the contribution label.
    const std::string& title() const { return paper ? paper->metadata.title : label; }
    bool operator==(const ContributionColumn&) const = default;
};

struct GroupRow {
    std::string id;
    std::string label;
    std::vector<PredicateId> members;
    std::vector<std::string> member_labels;
    std::size_t support = 0;

    bool operator==(const GroupRow&) const = default;
};

// Contributions x property groups. Data (columns, groups, cells) is fixed at
// build time; customization only touches the presentation fields of config.
struct ComparisonTable {
    std::vector<ContributionColumn> contributions;
    std::vector<GroupRow> groups;
    std::vector<std::vector<Cell>> cells;  // [group][contribution]
    ComparisonConfig config;

    bool auto_visible(const GroupRow& g) const { return g.support >= static_cast<std::size_t>(config.alpha); }
    bool visible(const GroupRow& g) const { return auto_visible(g) && !config.hidden_groups.contains(g.id); }
    std::optional<std::size_t> group_index(std::string_view id) const;
    std::optional<std::size_t> contribution_index(const ResourceId& id) const;
    // All groups in presentation order.
    std::vector<std::size_t> ordered_groups() const;
    std::vector<std::size_t> visible_groups() const;
    const Cell& cell(std::size_t group, std::size_t contribution) const { return cells.at(group).at(contribution); }

    bool operator==(const ComparisonTable&) const = default;
};

// Runs selection, alignment and grouping, then fills depth-1 cells.
// Presentation fields of `config` (hidden groups, row order, transposed) are
// applied through customize() and must reference existing groups.
ComparisonTable build_table(const GraphStore& store, std::span<const ResourceId> contributions,
                            const ComparisonConfig& config, EmbeddingCache& embeddings);

struct HideGroup {
    std::string group;
};
struct ShowGroup {
    std::string group;
};
struct ReorderGroups {
    std::vector<std::string> order;
};
struct Transpose {};

using Customization = std::variant<HideGroup, ShowGroup, ReorderGroups, Transpose>;

ComparisonTable customize(ComparisonTable table, const Customization& op);

void to_json(nlohmann::json& j, const ComparisonConfig& config);
void from_json(const nlohmann::json& j, ComparisonConfig& config);
void to_json(nlohmann::json& j, const ComparisonTable& table);
void from_json(const nlohmann::json& j, ComparisonTable& table);
void to_json(nlohmann::json& j, const PaperInfo& paper);
void from_json(const nlohmann::json& j, PaperInfo& paper);

std::string to_string(ValueKind kind);
ValueKind value_kind_from_string(std::string_view text);

}  // namespace litcmp
