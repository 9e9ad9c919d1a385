#include "litcmp/table.hpp"

#include <algorithm>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "litcmp/errors.hpp"
#include "litcmp/statement_selector.hpp"

namespace litcmp {

using json = nlohmann::json;

void ComparisonConfig::validate() const {
    if (alpha < 1) throw ValidationError("alpha must be >= 1");
    AlignmentConfig{tau}.validate();
    SelectionConfig{delta}.validate();
    if (k < 1) throw ValidationError("k must be >= 1");
}

std::optional<std::size_t> ComparisonTable::group_index(std::string_view id) const {
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (groups[i].id == id) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> ComparisonTable::contribution_index(const ResourceId& id) const {
    for (std::size_t i = 0; i < contributions.size(); ++i) {
        if (contributions[i].id == id) return i;
    }
    return std::nullopt;
}

std::vector<std::size_t> ComparisonTable::ordered_groups() const {
    std::vector<std::size_t> out;
    if (config.row_order.empty()) {
        for (std::size_t i = 0; i < groups.size(); ++i) out.push_back(i);
        return out;
    }
    for (const auto& id : config.row_order) {
        if (auto i = group_index(id)) out.push_back(*i);
    }
    return out;
}

std::vector<std::size_t> ComparisonTable::visible_groups() const {
    std::vector<std::size_t> out;
    for (auto i : ordered_groups()) {
        if (visible(groups[i])) out.push_back(i);
    }
    return out;
}

ComparisonTable build_table(const GraphStore& store, std::span<const ResourceId> contributions,
                            const ComparisonConfig& config, EmbeddingCache& embeddings) {
    config.validate();
    if (contributions.size() < 2) throw ValidationError("a comparison needs at least two contributions");
    {
        std::set<ResourceId> distinct(contributions.begin(), contributions.end());
        if (distinct.size() != contributions.size()) throw ValidationError("duplicate contribution in comparison");
    }
    for (const auto& c : contributions) {
        if (!store.is_contribution(c)) throw ReferenceError("unknown contribution " + c.value);
    }

    auto subgraphs = select_related(store, contributions, SelectionConfig{config.delta});

    // Property list in first-appearance order. The paper -> contribution link
    // is structural and becomes the column header instead of a row.
    const auto structural = store.find_predicate(predicates::kHasContribution);
    std::vector<Property> properties;
    std::unordered_set<std::string> seen;
    for (const auto& c : contributions) {
        for (const auto& st : subgraphs.at(c).statements) {
            if (structural && st.predicate == *structural) continue;
            if (seen.insert(st.predicate.value).second) {
                properties.push_back({st.predicate, store.predicate_label(st.predicate)});
            }
        }
    }

    auto gamma = similarity_matrix(properties, embeddings);
    auto pairs = align_properties(gamma, config.tau);
    auto mask = mask_matrix(contributions, properties, subgraphs);
    auto groups = group_properties(pairs, properties, mask);

    ComparisonTable table;
    table.config = config;
    table.config.transposed = false;
    table.config.hidden_groups.clear();
    table.config.row_order.clear();

    for (const auto& c : contributions) {
        ContributionColumn col{c, store.resource_label(c), std::nullopt};
        if (auto paper = store.paper_of(c)) col.paper = PaperInfo{paper->id, paper->metadata};
        table.contributions.push_back(std::move(col));
    }

    for (const auto& g : groups) {
        table.groups.push_back({g.id, g.label, g.members, g.member_labels, g.support});
        std::set<PredicateId> members(g.members.begin(), g.members.end());
        auto& row = table.cells.emplace_back();
        for (const auto& c : contributions) {
            Cell cell{c, g.id, {}};
            const auto& sub = subgraphs.at(c);
            for (const auto& st : sub.statements) {
                if (st.subject != c || sub.depth.at(st.id) != 1 || !members.contains(st.predicate)) continue;
                CellValue value;
                value.display = store.display(st.object);
                if (auto* res = st.object_resource()) {
                    value.kind = ValueKind::resource;
                    value.resource = *res;
                }
                for (const auto& hop : provenance_path(sub, st.id)) value.provenance.push_back(hop.id);
                cell.values.push_back(std::move(value));
            }
            row.push_back(std::move(cell));
        }
    }

    if (!config.row_order.empty()) table = customize(std::move(table), ReorderGroups{config.row_order});
    for (const auto& g : config.hidden_groups) table = customize(std::move(table), HideGroup{g});
    if (config.transposed) table = customize(std::move(table), Transpose{});
    return table;
}

namespace {

struct Customizer {
    ComparisonTable& table;

    void require(const std::string& group) const {
        if (!table.group_index(group)) throw ReferenceError("unknown group " + group);
    }

    void operator()(const HideGroup& op) const {
        require(op.group);
        table.config.hidden_groups.insert(op.group);
    }
    void operator()(const ShowGroup& op) const {
        require(op.group);
        table.config.hidden_groups.erase(op.group);
    }
    void operator()(const ReorderGroups& op) const {
        std::set<std::string> ids;
        for (const auto& g : op.order) {
            require(g);
            if (!ids.insert(g).second) throw ValidationError("row order lists group " + g + " twice");
        }
        if (ids.size() != table.groups.size()) {
            throw ValidationError("row order must be a permutation of all groups");
        }
        table.config.row_order = op.order;
    }
    void operator()(const Transpose&) const { table.config.transposed = !table.config.transposed; }
};

}  // namespace

ComparisonTable customize(ComparisonTable table, const Customization& op) {
    std::visit(Customizer{table}, op);
    return table;
}

std::string to_string(ValueKind kind) { return kind == ValueKind::resource ? "resource" : "literal"; }

ValueKind value_kind_from_string(std::string_view text) {
    if (text == "resource") return ValueKind::resource;
    if (text == "literal") return ValueKind::literal;
    throw ValidationError("value kind must be 'literal' or 'resource', got '" + std::string(text) + "'");
}

void to_json(json& j, const ComparisonConfig& c) {
    j = json{{"alpha", c.alpha},
             {"tau", c.tau},
             {"delta", c.delta},
             {"k", c.k},
             {"transposed", c.transposed},
             {"hiddenGroups", c.hidden_groups},
             {"rowOrder", c.row_order}};
}

void from_json(const json& j, ComparisonConfig& c) {
    c = ComparisonConfig{};
    if (j.contains("alpha")) j.at("alpha").get_to(c.alpha);
    if (j.contains("tau")) j.at("tau").get_to(c.tau);
    if (j.contains("delta")) j.at("delta").get_to(c.delta);
    if (j.contains("k")) j.at("k").get_to(c.k);
    if (j.contains("transposed")) j.at("transposed").get_to(c.transposed);
    if (j.contains("hiddenGroups")) j.at("hiddenGroups").get_to(c.hidden_groups);
    if (j.contains("rowOrder")) j.at("rowOrder").get_to(c.row_order);
}

void to_json(json& j, const PaperInfo& p) {
    j = json{{"id", p.id.value}, {"title", p.metadata.title}, {"authors", p.metadata.authors}};
    if (p.metadata.year) j["year"] = *p.metadata.year;
    if (p.metadata.doi) j["doi"] = *p.metadata.doi;
}

void from_json(const json& j, PaperInfo& p) {
    p.id = ResourceId{j.at("id").get<std::string>()};
    p.metadata.title = j.at("title").get<std::string>();
    p.metadata.authors = j.at("authors").get<std::vector<std::string>>();
    p.metadata.year = j.contains("year") ? std::optional<int>(j["year"].get<int>()) : std::nullopt;
    p.metadata.doi = j.contains("doi") ? std::optional<std::string>(j["doi"].get<std::string>()) : std::nullopt;
}

void to_json(json& j, const ComparisonTable& t) {
    j = json::object();
    j["config"] = t.config;
    auto& cols = j["contributions"] = json::array();
    for (const auto& c : t.contributions) {
        json col{{"id", c.id.value}, {"label", c.label}};
        if (c.paper) col["paper"] = *c.paper;
        cols.push_back(std::move(col));
    }
    auto& groups = j["groups"] = json::array();
    for (const auto& g : t.groups) {
        json members = json::array();
        for (const auto& m : g.members) members.push_back(m.value);
        groups.push_back({{"id", g.id},
                          {"label", g.label},
                          {"members", members},
                          {"memberLabels", g.member_labels},
                          {"support", g.support}});
    }
    auto& cells = j["cells"] = json::array();
    for (const auto& row : t.cells) {
        json jrow = json::array();
        for (const auto& cell : row) {
            json values = json::array();
            for (const auto& v : cell.values) {
                json jv{{"display", v.display}, {"kind", to_string(v.kind)}};
                if (v.resource) jv["resource"] = v.resource->value;
                json path = json::array();
                for (const auto& s : v.provenance) path.push_back(s.str());
                jv["provenance"] = std::move(path);
                values.push_back(std::move(jv));
            }
            jrow.push_back({{"contribution", cell.contribution.value}, {"group", cell.group}, {"values", values}});
        }
        cells.push_back(std::move(jrow));
    }
}

void from_json(const json& j, ComparisonTable& t) {
    t = ComparisonTable{};
    j.at("config").get_to(t.config);
    for (const auto& col : j.at("contributions")) {
        ContributionColumn c{ResourceId{col.at("id").get<std::string>()}, col.at("label").get<std::string>(),
                             std::nullopt};
        if (col.contains("paper")) c.paper = col["paper"].get<PaperInfo>();
        t.contributions.push_back(std::move(c));
    }
    for (const auto& g : j.at("groups")) {
        GroupRow row{g.at("id").get<std::string>(), g.at("label").get<std::string>(), {},
                     g.at("memberLabels").get<std::vector<std::string>>(), g.at("support").get<std::size_t>()};
        for (const auto& m : g.at("members")) row.members.push_back(PredicateId{m.get<std::string>()});
        t.groups.push_back(std::move(row));
    }
    for (const auto& jrow : j.at("cells")) {
        auto& row = t.cells.emplace_back();
        for (const auto& jc : jrow) {
            Cell cell{ResourceId{jc.at("contribution").get<std::string>()}, jc.at("group").get<std::string>(), {}};
            for (const auto& jv : jc.at("values")) {
                CellValue v;
                v.display = jv.at("display").get<std::string>();
                v.kind = value_kind_from_string(jv.at("kind").get<std::string>());
                if (jv.contains("resource")) v.resource = ResourceId{jv["resource"].get<std::string>()};
                for (const auto& s : jv.at("provenance")) v.provenance.push_back(StatementId::parse(s.get<std::string>()));
                cell.values.push_back(std::move(v));
            }
            row.push_back(std::move(cell));
        }
    }
    if (t.cells.size() != t.groups.size()) throw ValidationError("table cell rows do not match groups");
    for (const auto& row : t.cells) {
        if (row.size() != t.contributions.size()) throw ValidationError("table cell columns do not match contributions");
    }
}

}  // namespace litcmp
