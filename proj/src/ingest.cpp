#include "litcmp/ingest.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "file_util.hpp"
#include "litcmp/errors.hpp"

namespace litcmp {

using json = nlohmann::json;

namespace {

std::vector<CellEntry> parse_cell(const json& j, const std::string& column) {
    std::vector<CellEntry> out;
    auto one = [&](const json& v) {
        if (v.is_string()) {
            out.push_back({v.get<std::string>(), ValueKind::literal});
        } else if (v.is_object()) {
            CellEntry e{v.at("value").get<std::string>(), ValueKind::literal};
            if (v.contains("kind")) e.kind = value_kind_from_string(v["kind"].get<std::string>());
            out.push_back(std::move(e));
        } else {
            throw ValidationError("cell '" + column + "' holds an unsupported value");
        }
    };
    if (j.is_array()) {
        for (const auto& v : j) one(v);
    } else {
        one(j);
    }
    std::erase_if(out, [](const CellEntry& e) { return e.value.empty(); });
    return out;
}

}  // namespace

void ReviewTableDocument::validate() const {
    if (research_problem.empty()) throw ValidationError("researchProblem must not be empty");
    if (papers.empty()) throw ValidationError("a review table needs at least one paper");
    std::set<std::string> seen;
    for (const auto& c : columns) {
        if (c.empty()) throw ValidationError("column labels must not be empty");
        if (!seen.insert(c).second) throw ValidationError("duplicate column label '" + c + "'");
    }
    for (std::size_t i = 0; i < papers.size(); ++i) {
        const auto& p = papers[i];
        const auto where = "paper #" + std::to_string(i + 1);
        if (p.title.empty() && !p.doi) throw ValidationError(where + " has neither title nor DOI");
        if (!p.doi && !p.has_full_metadata()) {
            throw ValidationError(where + " has no DOI, so title, authors and year are required");
        }
        if (p.doi && !is_valid_doi(*p.doi)) throw ValidationError(where + " has a malformed DOI '" + *p.doi + "'");
        for (const auto& [column, values] : p.cells) {
            if (!seen.contains(column)) throw ValidationError(where + " fills undeclared column '" + column + "'");
        }
    }
}

ReviewTableDocument parse_review_table(const json& j) {
    ReviewTableDocument doc;
    try {
        doc.research_problem = j.at("researchProblem").get<std::string>();
        doc.columns = j.at("defaultPredicateLabels").get<std::vector<std::string>>();
        for (const auto& jp : j.at("papers")) {
            PaperEntry p;
            if (jp.contains("title")) p.title = jp["title"].get<std::string>();
            if (jp.contains("doi") && !jp["doi"].is_null()) p.doi = jp["doi"].get<std::string>();
            if (jp.contains("authors")) p.authors = jp["authors"].get<std::vector<std::string>>();
            if (jp.contains("year") && !jp["year"].is_null()) p.year = jp["year"].get<int>();
            if (jp.contains("cells")) {
                for (const auto& [column, value] : jp["cells"].items()) {
                    auto values = parse_cell(value, column);
                    if (!values.empty()) p.cells[column] = std::move(values);
                }
            }
            doc.papers.push_back(std::move(p));
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed review table: ") + e.what());
    }
    doc.validate();
    return doc;
}

ReviewTableDocument load_review_table(const std::filesystem::path& path) {
    auto text = detail::read_file(path);
    if (!text) throw StorageError("cannot read " + path.string());
    json j;
    try {
        j = json::parse(*text);
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + " is not valid JSON: " + e.what());
    }
    return parse_review_table(j);
}

json review_table_json(const ReviewTableDocument& doc) {
    json papers = json::array();
    for (const auto& p : doc.papers) {
        json jp{{"title", p.title}, {"authors", p.authors}};
        if (p.doi) jp["doi"] = *p.doi;
        if (p.year) jp["year"] = *p.year;
        json cells = json::object();
        for (const auto& [column, values] : p.cells) {
            json jv = json::array();
            for (const auto& v : values) jv.push_back({{"value", v.value}, {"kind", to_string(v.kind)}});
            cells[column] = std::move(jv);
        }
        jp["cells"] = std::move(cells);
        papers.push_back(std::move(jp));
    }
    return json{{"researchProblem", doc.research_problem},
                {"defaultPredicateLabels", doc.columns},
                {"papers", std::move(papers)}};
}

std::string canonical_json(const ReviewTableDocument& doc) {
    ReviewTableDocument canon = doc;
    for (auto& p : canon.papers) {
        for (auto it = p.cells.begin(); it != p.cells.end();) {
            std::erase_if(it->second, [](const CellEntry& e) { return e.value.empty(); });
            std::sort(it->second.begin(), it->second.end());
            it = it->second.empty() ? p.cells.erase(it) : std::next(it);
        }
    }
    return review_table_json(canon).dump(2) + "\n";
}

// ---------------------------------------------------------------------------

bool is_valid_doi(std::string_view doi) {
    static const std::regex pattern(R"(^10\.[0-9]{4,9}/\S+$)");
    return std::regex_match(doi.begin(), doi.end(), pattern);
}

std::string percent_encode(std::string_view text) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
                          c == '.' || c == '_' || c == '~';
        if (unreserved) {
            out += ch;
        } else {
            out += '%';
            out += kHex[c >> 4];
            out += kHex[c & 0xF];
        }
    }
    return out;
}

PaperMetadata parse_crossref_work(const json& message) {
    PaperMetadata meta;
    if (auto it = message.find("title"); it != message.end() && it->is_array() && !it->empty()) {
        meta.title = it->front().get<std::string>();
    }
    if (auto it = message.find("author"); it != message.end() && it->is_array()) {
        for (const auto& a : *it) {
            std::string name;
            if (a.contains("given")) name = a["given"].get<std::string>();
            if (a.contains("family")) name += (name.empty() ? "" : " ") + a["family"].get<std::string>();
            if (name.empty() && a.contains("name")) name = a["name"].get<std::string>();
            if (!name.empty()) meta.authors.push_back(std::move(name));
        }
    }
    for (const char* key : {"issued", "published-print", "published-online", "created"}) {
        auto it = message.find(key);
        if (it == message.end()) continue;
        const auto& parts = it->value("date-parts", json::array());
        if (!parts.empty() && parts[0].is_array() && !parts[0].empty() && parts[0][0].is_number_integer()) {
            meta.year = parts[0][0].get<int>();
            break;
        }
    }
    if (auto it = message.find("DOI"); it != message.end()) meta.doi = it->get<std::string>();
    return meta;
}

namespace {

json metadata_json(const PaperMetadata& m) {
    json j{{"title", m.title}, {"authors", m.authors}};
    if (m.year) j["year"] = *m.year;
    if (m.doi) j["doi"] = *m.doi;
    return j;
}

PaperMetadata metadata_from_json(const json& j) {
    PaperMetadata m;
    m.title = j.value("title", "");
    m.authors = j.value("authors", std::vector<std::string>{});
    if (j.contains("year")) m.year = j["year"].get<int>();
    if (j.contains("doi")) m.doi = j["doi"].get<std::string>();
    return m;
}

}  // namespace

CachedResolver::CachedResolver(std::filesystem::path cache_dir, std::shared_ptr<MetadataResolver> upstream,
                               bool offline)
    : dir_(std::move(cache_dir)), upstream_(std::move(upstream)), offline_(offline) {}

std::filesystem::path CachedResolver::cache_file(const std::string& doi) const { return dir_ / percent_encode(doi); }

std::optional<PaperMetadata> CachedResolver::read_cache(const std::string& doi) const {
    auto text = detail::read_file(cache_file(doi));
    if (!text) return std::nullopt;
    try {
        return metadata_from_json(json::parse(*text));
    } catch (const json::exception&) {
        return std::nullopt;  // corrupt entry behaves as a miss
    }
}

void CachedResolver::write_cache(const std::string& doi, const PaperMetadata& meta) {
    std::lock_guard lock(write_mutex_);
    std::filesystem::create_directories(dir_);
    detail::write_file_atomic(cache_file(doi), metadata_json(meta).dump(2));
}

PaperMetadata CachedResolver::fetch_metadata(const std::string& doi) {
    if (!is_valid_doi(doi)) throw ValidationError("malformed DOI '" + doi + "'");
    if (auto cached = read_cache(doi)) return *cached;
    if (offline_) throw ResolutionError(doi, "DOI " + doi + " is not cached and offline mode is on");
    if (!upstream_) throw ResolutionError(doi, "no resolver configured for DOI " + doi);

    PaperMetadata meta;
    try {
        meta = upstream_->resolve(doi);
    } catch (const ResolutionError&) {
        throw;
    } catch (const std::exception& e) {
        throw ResolutionError(doi, "resolving DOI " + doi + " failed: " + e.what());
    }
    if (!meta.doi) meta.doi = doi;
    write_cache(doi, meta);
    return meta;
}

// ---------------------------------------------------------------------------

ImportResult import_review_table(GraphStore& store, const ReviewTableDocument& doc, MetadataResolver* resolver) {
    doc.validate();

    ImportResult result;
    result.research_problem =
        store.create_resource(doc.research_problem, {std::string(classes::kResearchProblem)});

    std::unordered_map<std::string, PredicateId> column_predicates;
    std::unordered_map<std::string, ResourceId> value_resources;

    for (std::size_t i = 0; i < doc.papers.size(); ++i) {
        const auto& entry = doc.papers[i];
        PaperMetadata meta{entry.title, entry.authors, entry.year, entry.doi};

        if (entry.doi && !entry.has_full_metadata()) {
            try {
                if (!resolver) throw ResolutionError(*entry.doi, "no resolver available for DOI " + *entry.doi);
                auto resolved = resolver->resolve(*entry.doi);
                if (meta.title.empty()) meta.title = resolved.title;
                if (meta.authors.empty()) meta.authors = resolved.authors;
                if (!meta.year) meta.year = resolved.year;
            } catch (const Error& e) {
                result.errors.push_back({i, entry.title, entry.doi, e.what()});
                continue;
            }
        }
        if (meta.title.empty()) {
            result.errors.push_back({i, entry.title, entry.doi, "no title available after metadata lookup"});
            continue;
        }

        auto contribution = store.create_contribution("Contribution", {result.research_problem});
        for (const auto& column : doc.columns) {
            auto cell = entry.cells.find(column);
            if (cell == entry.cells.end()) continue;
            auto [pit, fresh] = column_predicates.try_emplace(column);
            if (fresh) pit->second = store.create_predicate(column);
            for (const auto& v : cell->second) {
                Node object;
                if (v.kind == ValueKind::resource) {
                    auto [rit, new_resource] = value_resources.try_emplace(v.value);
                    if (new_resource) rit->second = store.create_resource(v.value);
                    object = rit->second;
                } else {
                    object = Literal{v.value, std::nullopt};
                }
                store.add_statement(contribution, pit->second, std::move(object));
            }
        }
        auto paper = store.create_paper(std::move(meta), {contribution});
        result.imported.push_back({i, paper.id, contribution});
    }
    return result;
}

ReviewTableDocument export_review_table(const GraphStore& store, std::span<const ResourceId> contributions,
                                        std::span<const std::string> columns) {
    ReviewTableDocument doc;
    doc.columns.assign(columns.begin(), columns.end());
    std::set<std::string> wanted(columns.begin(), columns.end());
    const auto problem_predicate = store.find_predicate(predicates::kAddressesProblem);

    for (const auto& c : contributions) {
        if (!store.is_contribution(c)) throw ReferenceError("unknown contribution " + c.value);
        auto paper = store.paper_of(c);
        if (!paper) throw ReferenceError("contribution " + c.value + " belongs to no paper");

        PaperEntry entry{paper->metadata.title, paper->metadata.doi, paper->metadata.authors, paper->metadata.year, {}};
        for (const auto& st : store.statements_by_subject(c)) {
            if (problem_predicate && st.predicate == *problem_predicate) {
                if (doc.research_problem.empty()) doc.research_problem = store.display(st.object);
                continue;
            }
            auto label = store.predicate_label(st.predicate);
            if (!wanted.contains(label)) continue;
            entry.cells[label].push_back(
                {store.display(st.object), st.object_resource() ? ValueKind::resource : ValueKind::literal});
        }
        doc.papers.push_back(std::move(entry));
    }
    return doc;
}

}  // namespace litcmp
