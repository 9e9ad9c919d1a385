#pragma once
// In-process statement store for research contribution descriptions.
//
// Model:
//   - Resources: opaque id, non-empty label, set of class names. Labels are
//     not unique.
//   - Predicates: separate id space, labels deduplicated store-wide.
//   - Statements: (subject resource, predicate, object node) where the object
//     is a resource reference or a literal.
//   - Papers and contributions are resources of class "Paper" and
//     "Contribution". A paper owns >= 1 contribution, a contribution
//     addresses >= 1 research problem.
//
// Persistence (optional, see GraphStore::open):
//   <path>           statement log, one line per statement:
//                    id \t subject \t predicate \t R|L \t object \t datatype
//   <path>.entities  JSON lines declaring resources, predicates and papers.
// Both files are append-only; fields are backslash-escaped (\\ \t \n \r).

#include <compare>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace litcmp {

template <class Tag>
struct StringId {
    std::string value;

    auto operator<=>(const StringId&) const = default;
    bool empty() const { return value.empty(); }
};

using ResourceId = StringId<struct ResourceTag>;
using PredicateId = StringId<struct PredicateTag>;

struct StatementId {
    std::uint64_t seq = 0;

    auto operator<=>(const StatementId&) const = default;
    std::string str() const { return "S" + std::to_string(seq); }
    static StatementId parse(std::string_view text);
};

struct Literal {
    std::string value;
    std::optional<std::string> datatype;

    bool operator==(const Literal&) const = default;
};

using Node = std::variant<ResourceId, Literal>;

struct Statement {
    StatementId id;
    ResourceId subject;
    PredicateId predicate;
    Node object;

    bool operator==(const Statement&) const = default;
    const ResourceId* object_resource() const { return std::get_if<ResourceId>(&object); }
};

struct Resource {
    ResourceId id;
    std::string label;
    std::set<std::string> classes;
};

struct Predicate {
    PredicateId id;
    std::string label;
};

struct PaperMetadata {
    std::string title;
    std::vector<std::string> authors;
    std::optional<int> year;
    std::optional<std::string> doi;

    bool operator==(const PaperMetadata&) const = default;
};

struct Paper {
    ResourceId id;
    PaperMetadata metadata;
    std::vector<ResourceId> contributions;
};

namespace classes {
inline constexpr std::string_view kPaper = "Paper";
inline constexpr std::string_view kContribution = "Contribution";
inline constexpr std::string_view kResearchProblem = "ResearchProblem";
}  // namespace classes

// Fixed predicate labels for the structural paper/contribution links.
namespace predicates {
inline constexpr std::string_view kHasContribution = "has contribution";
inline constexpr std::string_view kAddressesProblem = "addresses problem";
inline constexpr std::string_view kHasTitle = "has title";
inline constexpr std::string_view kHasAuthor = "has author";
inline constexpr std::string_view kHasPublicationYear = "has publication year";
inline constexpr std::string_view kHasDoi = "has DOI";
}  // namespace predicates

class GraphStore {
public:
    GraphStore();
    ~GraphStore();
    GraphStore(const GraphStore&) = delete;
    GraphStore& operator=(const GraphStore&) = delete;

    // Opens (or creates) an append-log backed store and replays existing
    // records.
    static std::unique_ptr<GraphStore> open(const std::filesystem::path& log_path);

    ResourceId create_resource(std::string_view label, std::set<std::string> classes = {});
    PredicateId create_predicate(std::string_view label);
    Statement add_statement(const ResourceId& subject, const PredicateId& predicate, Node object);

    // Contribution resource plus one "addresses problem" statement per problem.
    ResourceId create_contribution(std::string_view label, const std::vector<ResourceId>& problems);
    // Paper resource (label = title) plus one "has contribution" statement per
    // contribution.
    Paper create_paper(PaperMetadata metadata, const std::vector<ResourceId>& contributions);

    std::optional<Resource> resource(const ResourceId& id) const;
    std::vector<ResourceId> find_resources(std::string_view label) const;
    std::optional<Predicate> predicate(const PredicateId& id) const;
    std::optional<PredicateId> find_predicate(std::string_view label) const;
    // Throws ReferenceError for unknown ids.
    std::string predicate_label(const PredicateId& id) const;
    std::string resource_label(const ResourceId& id) const;

    bool has_class(const ResourceId& id, std::string_view cls) const;
    bool is_contribution(const ResourceId& id) const { return has_class(id, classes::kContribution); }

    std::optional<Paper> paper(const ResourceId& id) const;
    std::optional<Paper> paper_of(const ResourceId& contribution) const;
    std::vector<ResourceId> contributions() const;

    std::vector<Statement> statements_by_subject(const ResourceId& id) const;
    std::vector<Statement> statements_by_object(const ResourceId& id) const;
    std::vector<Statement> statements_by_predicate(const PredicateId& id) const;
    std::optional<Statement> statement(const StatementId& id) const;
    std::vector<Statement> all_statements() const;
    std::size_t statement_count() const;

    // Display string of a node: resource label or literal value.
    std::string display(const Node& node) const;

private:
    struct Log;

    ResourceId create_resource_locked(std::string_view label, std::set<std::string> classes);
    PredicateId create_predicate_locked(std::string_view label);
    Statement add_statement_locked(const ResourceId& subject, const PredicateId& predicate, Node object);
    void register_paper_locked(const Paper& paper);
    bool has_class_locked(const ResourceId& id, std::string_view cls) const;
    std::vector<Statement> collect_locked(
        const std::unordered_map<std::string, std::vector<std::uint64_t>>& index,
        const std::string& key) const;
    void replay(const std::filesystem::path& log_path);

    mutable std::shared_mutex mutex_;
    std::uint64_t next_resource_ = 1;
    std::uint64_t next_predicate_ = 1;
    std::vector<Statement> statements_;  // index = seq - 1
    std::unordered_map<std::string, Resource> resources_;
    std::unordered_map<std::string, std::vector<std::string>> resources_by_label_;
    std::unordered_map<std::string, Predicate> predicates_;
    std::unordered_map<std::string, std::string> predicates_by_label_;
    std::unordered_map<std::string, Paper> papers_;
    std::unordered_map<std::string, std::string> paper_of_contribution_;
    std::unordered_map<std::string, std::vector<std::uint64_t>> by_subject_;
    std::unordered_map<std::string, std::vector<std::uint64_t>> by_object_;
    std::unordered_map<std::string, std::vector<std::uint64_t>> by_predicate_;
    std::unique_ptr<Log> log_;
};

// Escaping used by the append log.
std::string escape_field(std::string_view text);
std::string unescape_field(std::string_view text);

}  // namespace litcmp

template <class Tag>
struct std::hash<litcmp::StringId<Tag>> {
    std::size_t operator()(const litcmp::StringId<Tag>& id) const noexcept {
        return std::hash<std::string>{}(id.value);
    }
};
