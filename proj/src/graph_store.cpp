#include "litcmp/graph_store.hpp"

#include <charconv>
#include <mutex>

#include <nlohmann/json.hpp>

#include "litcmp/errors.hpp"

namespace litcmp {

using json = nlohmann::json;

namespace {

std::optional<std::uint64_t> numeric_suffix(std::string_view id, char prefix) {
    if (id.size() < 2 || id.front() != prefix) return std::nullopt;
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), value);
    if (ec != std::errc{} || ptr != id.data() + id.size()) return std::nullopt;
    return value;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find('\t', start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

}  // namespace

StatementId StatementId::parse(std::string_view text) {
    auto seq = numeric_suffix(text, 'S');
    if (!seq || *seq == 0) throw ValidationError("malformed statement id: " + std::string(text));
    return StatementId{*seq};
}

std::string escape_field(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out;
}

std::string unescape_field(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != '\\' || i + 1 == text.size()) {
            out += c;
            continue;
        }
        switch (text[++i]) {
            case 't': out += '\t'; break;
            case 'n': out += '\n'; break;
            case 'r': out += '\r'; break;
            case '\\': out += '\\'; break;
            default:
                out += '\\';
                out += text[i];
        }
    }
    return out;
}

struct GraphStore::Log {
    std::ofstream statements;
    std::ofstream entities;

    void entity(const json& record) {
        entities << record.dump() << '\n';
        entities.flush();
        if (!entities) throw StorageError("failed to append entity record");
    }

    void statement(const Statement& st) {
        statements << st.id.str() << '\t' << escape_field(st.subject.value) << '\t'
                   << escape_field(st.predicate.value) << '\t';
        if (auto* res = st.object_resource()) {
            statements << "R\t" << escape_field(res->value) << '\t';
        } else {
            const auto& lit = std::get<Literal>(st.object);
            statements << "L\t" << escape_field(lit.value) << '\t'
                       << escape_field(lit.datatype.value_or(""));
        }
        statements << '\n';
        statements.flush();
        if (!statements) throw StorageError("failed to append statement record");
    }
};

GraphStore::GraphStore() = default;
GraphStore::~GraphStore() = default;

std::unique_ptr<GraphStore> GraphStore::open(const std::filesystem::path& log_path) {
    auto store = std::make_unique<GraphStore>();
    store->replay(log_path);
    auto log = std::make_unique<Log>();
    auto entities_path = log_path;
    entities_path += ".entities";
    log->statements.open(log_path, std::ios::app | std::ios::binary);
    log->entities.open(entities_path, std::ios::app | std::ios::binary);
    if (!log->statements || !log->entities) {
        throw StorageError("cannot open store log at " + log_path.string());
    }
    store->log_ = std::move(log);
    return store;
}

void GraphStore::replay(const std::filesystem::path& log_path) {
    auto entities_path = log_path;
    entities_path += ".entities";

    std::ifstream entities(entities_path, std::ios::binary);
    std::string line;
    std::size_t line_no = 0;
    while (entities && std::getline(entities, line)) {
        ++line_no;
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw StorageError("corrupt entity log line " + std::to_string(line_no) + ": " + e.what());
        }
        const auto kind = rec.at("t").get<std::string>();
        const auto id = rec.at("id").get<std::string>();
        if (kind == "resource") {
            Resource r{ResourceId{id}, rec.at("label").get<std::string>(),
                       rec.at("classes").get<std::set<std::string>>()};
            resources_by_label_[r.label].push_back(id);
            resources_.emplace(id, std::move(r));
            if (auto n = numeric_suffix(id, 'R')) next_resource_ = std::max(next_resource_, *n + 1);
        } else if (kind == "predicate") {
            Predicate p{PredicateId{id}, rec.at("label").get<std::string>()};
            predicates_by_label_[p.label] = id;
            predicates_.emplace(id, std::move(p));
            if (auto n = numeric_suffix(id, 'P')) next_predicate_ = std::max(next_predicate_, *n + 1);
        } else if (kind == "paper") {
            Paper paper;
            paper.id = ResourceId{id};
            paper.metadata.title = rec.at("title").get<std::string>();
            paper.metadata.authors = rec.at("authors").get<std::vector<std::string>>();
            if (rec.contains("year")) paper.metadata.year = rec["year"].get<int>();
            if (rec.contains("doi")) paper.metadata.doi = rec["doi"].get<std::string>();
            for (const auto& c : rec.at("contributions")) paper.contributions.push_back(ResourceId{c.get<std::string>()});
            register_paper_locked(paper);
        } else {
            throw StorageError("unknown entity record kind '" + kind + "'");
        }
    }

    std::ifstream statements(log_path, std::ios::binary);
    line_no = 0;
    while (statements && std::getline(statements, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        if (fields.size() != 6 || (fields[3] != "R" && fields[3] != "L")) {
            throw StorageError("corrupt statement log line " + std::to_string(line_no));
        }
        auto sid = StatementId::parse(fields[0]);
        if (sid.seq != statements_.size() + 1) {
            throw StorageError("statement log out of sequence at " + std::string(fields[0]));
        }
        Node object;
        if (fields[3] == "R") {
            object = ResourceId{unescape_field(fields[4])};
        } else {
            Literal lit{unescape_field(fields[4]), std::nullopt};
            if (!fields[5].empty()) lit.datatype = unescape_field(fields[5]);
            object = std::move(lit);
        }
        add_statement_locked(ResourceId{unescape_field(fields[1])}, PredicateId{unescape_field(fields[2])},
                             std::move(object));
    }
}

ResourceId GraphStore::create_resource(std::string_view label, std::set<std::string> classes) {
    std::unique_lock lock(mutex_);
    return create_resource_locked(label, std::move(classes));
}

ResourceId GraphStore::create_resource_locked(std::string_view label, std::set<std::string> classes) {
    if (label.empty()) throw ValidationError("resource label must not be empty");
    ResourceId id{"R" + std::to_string(next_resource_++)};
    if (log_) {
        log_->entity(json{{"t", "resource"}, {"id", id.value}, {"label", label}, {"classes", classes}});
    }
    resources_by_label_[std::string(label)].push_back(id.value);
    resources_.emplace(id.value, Resource{id, std::string(label), std::move(classes)});
    return id;
}

PredicateId GraphStore::create_predicate(std::string_view label) {
    std::unique_lock lock(mutex_);
    return create_predicate_locked(label);
}

PredicateId GraphStore::create_predicate_locked(std::string_view label) {
    if (label.empty()) throw ValidationError("predicate label must not be empty");
    std::string key(label);
    if (auto it = predicates_by_label_.find(key); it != predicates_by_label_.end()) {
        return PredicateId{it->second};
    }
    PredicateId id{"P" + std::to_string(next_predicate_++)};
    if (log_) log_->entity(json{{"t", "predicate"}, {"id", id.value}, {"label", key}});
    predicates_by_label_[key] = id.value;
    predicates_.emplace(id.value, Predicate{id, key});
    return id;
}

Statement GraphStore::add_statement(const ResourceId& subject, const PredicateId& predicate, Node object) {
    std::unique_lock lock(mutex_);
    auto st = add_statement_locked(subject, predicate, std::move(object));
    if (log_) log_->statement(st);
    return st;
}

Statement GraphStore::add_statement_locked(const ResourceId& subject, const PredicateId& predicate,
                                           Node object) {
    if (!resources_.contains(subject.value)) throw ReferenceError("unknown subject " + subject.value);
    if (!predicates_.contains(predicate.value)) throw ReferenceError("unknown predicate " + predicate.value);
    if (auto* res = std::get_if<ResourceId>(&object); res && !resources_.contains(res->value)) {
        throw ReferenceError("unknown object resource " + res->value);
    }
    Statement st{StatementId{statements_.size() + 1}, subject, predicate, std::move(object)};
    const auto seq = st.id.seq;
    by_subject_[subject.value].push_back(seq);
    by_predicate_[predicate.value].push_back(seq);
    if (auto* res = st.object_resource()) by_object_[res->value].push_back(seq);
    statements_.push_back(st);
    return st;
}

ResourceId GraphStore::create_contribution(std::string_view label, const std::vector<ResourceId>& problems) {
    std::unique_lock lock(mutex_);
    if (problems.empty()) throw ValidationError("a contribution must address at least one research problem");
    for (const auto& p : problems) {
        if (!resources_.contains(p.value)) throw ReferenceError("unknown research problem " + p.value);
    }
    if (label.empty()) throw ValidationError("resource label must not be empty");
    auto id = create_resource_locked(label, {std::string(classes::kContribution)});
    auto pred = create_predicate_locked(predicates::kAddressesProblem);
    for (const auto& p : problems) {
        auto st = add_statement_locked(id, pred, p);
        if (log_) log_->statement(st);
    }
    return id;
}

Paper GraphStore::create_paper(PaperMetadata metadata, const std::vector<ResourceId>& contributions) {
    std::unique_lock lock(mutex_);
    if (contributions.empty()) throw ValidationError("a paper must have at least one contribution");
    if (metadata.title.empty()) throw ValidationError("paper title must not be empty");
    for (const auto& c : contributions) {
        if (!resources_.contains(c.value)) throw ReferenceError("unknown contribution " + c.value);
        if (!has_class_locked(c, classes::kContribution)) {
            throw ValidationError(c.value + " is not a contribution");
        }
        if (paper_of_contribution_.contains(c.value)) {
            throw ValidationError(c.value + " already belongs to a paper");
        }
    }
    auto id = create_resource_locked(metadata.title, {std::string(classes::kPaper)});
    Paper paper{id, std::move(metadata), contributions};
    if (log_) {
        json rec{{"t", "paper"}, {"id", id.value}, {"title", paper.metadata.title},
                 {"authors", paper.metadata.authors}, {"contributions", json::array()}};
        if (paper.metadata.year) rec["year"] = *paper.metadata.year;
        if (paper.metadata.doi) rec["doi"] = *paper.metadata.doi;
        for (const auto& c : contributions) rec["contributions"].push_back(c.value);
        log_->entity(rec);
    }
    register_paper_locked(paper);
    auto pred = create_predicate_locked(predicates::kHasContribution);
    for (const auto& c : contributions) {
        auto st = add_statement_locked(id, pred, c);
        if (log_) log_->statement(st);
    }
    return paper;
}

void GraphStore::register_paper_locked(const Paper& paper) {
    for (const auto& c : paper.contributions) paper_of_contribution_[c.value] = paper.id.value;
    papers_[paper.id.value] = paper;
}

std::optional<Resource> GraphStore::resource(const ResourceId& id) const {
    std::shared_lock lock(mutex_);
    auto it = resources_.find(id.value);
    if (it == resources_.end()) return std::nullopt;
    return it->second;
}

std::vector<ResourceId> GraphStore::find_resources(std::string_view label) const {
    std::shared_lock lock(mutex_);
    std::vector<ResourceId> out;
    if (auto it = resources_by_label_.find(std::string(label)); it != resources_by_label_.end()) {
        for (const auto& id : it->second) out.push_back(ResourceId{id});
    }
    return out;
}

std::optional<Predicate> GraphStore::predicate(const PredicateId& id) const {
    std::shared_lock lock(mutex_);
    auto it = predicates_.find(id.value);
    if (it == predicates_.end()) return std::nullopt;
    return it->second;
}

std::optional<PredicateId> GraphStore::find_predicate(std::string_view label) const {
    std::shared_lock lock(mutex_);
    auto it = predicates_by_label_.find(std::string(label));
    if (it == predicates_by_label_.end()) return std::nullopt;
    return PredicateId{it->second};
}

std::string GraphStore::predicate_label(const PredicateId& id) const {
    std::shared_lock lock(mutex_);
    auto it = predicates_.find(id.value);
    if (it == predicates_.end()) throw ReferenceError("unknown predicate " + id.value);
    return it->second.label;
}

std::string GraphStore::resource_label(const ResourceId& id) const {
    std::shared_lock lock(mutex_);
    auto it = resources_.find(id.value);
    if (it == resources_.end()) throw ReferenceError("unknown resource " + id.value);
    return it->second.label;
}

bool GraphStore::has_class(const ResourceId& id, std::string_view cls) const {
    std::shared_lock lock(mutex_);
    return has_class_locked(id, cls);
}

bool GraphStore::has_class_locked(const ResourceId& id, std::string_view cls) const {
    auto it = resources_.find(id.value);
    return it != resources_.end() && it->second.classes.contains(std::string(cls));
}

std::optional<Paper> GraphStore::paper(const ResourceId& id) const {
    std::shared_lock lock(mutex_);
    auto it = papers_.find(id.value);
    if (it == papers_.end()) return std::nullopt;
    return it->second;
}

std::optional<Paper> GraphStore::paper_of(const ResourceId& contribution) const {
    std::shared_lock lock(mutex_);
    auto it = paper_of_contribution_.find(contribution.value);
    if (it == paper_of_contribution_.end()) return std::nullopt;
    return papers_.at(it->second);
}

std::vector<ResourceId> GraphStore::contributions() const {
    std::shared_lock lock(mutex_);
    std::vector<ResourceId> out;
    for (const auto& [id, r] : resources_) {
        if (r.classes.contains(std::string(classes::kContribution))) out.push_back(r.id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Statement> GraphStore::collect_locked(
    const std::unordered_map<std::string, std::vector<std::uint64_t>>& index, const std::string& key) const {
    std::vector<Statement> out;
    auto it = index.find(key);
    if (it == index.end()) return out;
    out.reserve(it->second.size());
    for (auto seq : it->second) out.push_back(statements_[seq - 1]);
    return out;
}

std::vector<Statement> GraphStore::statements_by_subject(const ResourceId& id) const {
    std::shared_lock lock(mutex_);
    return collect_locked(by_subject_, id.value);
}

std::vector<Statement> GraphStore::statements_by_object(const ResourceId& id) const {
    std::shared_lock lock(mutex_);
    return collect_locked(by_object_, id.value);
}

std::vector<Statement> GraphStore::statements_by_predicate(const PredicateId& id) const {
    std::shared_lock lock(mutex_);
    return collect_locked(by_predicate_, id.value);
}

std::optional<Statement> GraphStore::statement(const StatementId& id) const {
    std::shared_lock lock(mutex_);
    if (id.seq == 0 || id.seq > statements_.size()) return std::nullopt;
    return statements_[id.seq - 1];
}

std::vector<Statement> GraphStore::all_statements() const {
    std::shared_lock lock(mutex_);
    return statements_;
}

std::size_t GraphStore::statement_count() const {
    std::shared_lock lock(mutex_);
    return statements_.size();
}

std::string GraphStore::display(const Node& node) const {
    if (auto* res = std::get_if<ResourceId>(&node)) return resource_label(*res);
    return std::get<Literal>(node).value;
}

}  // namespace litcmp
