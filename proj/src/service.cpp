#include "litcmp/service.hpp"

#include <charconv>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "litcmp/errors.hpp"
#include "litcmp/render.hpp"

namespace litcmp {

using json = nlohmann::json;

namespace {

HttpResponse json_response(int status, const json& body) { return {status, "application/json", body.dump()}; }

HttpResponse error_response(int status, const std::string& code, const std::string& message,
                            json details = nullptr) {
    return json_response(status, json{{"code", code}, {"message", message}, {"details", std::move(details)}});
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = text.find(sep, start);
        out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

int parse_positive_int(const std::string& name, const std::string& text) {
    int value = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || p != text.data() + text.size() || value < 1) {
        throw ValidationError("parameter '" + name + "' must be a positive integer");
    }
    return value;
}

double parse_real(const std::string& name, const std::string& text) {
    double value = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || p != text.data() + text.size()) {
        throw ValidationError("parameter '" + name + "' must be a number");
    }
    return value;
}

const WordVectors& no_vectors() {
    static const WordVectors empty = WordVectors::from_words(1, {});
    return empty;
}

json metadata_body(const ComparisonMetadata& m) {
    json j{{"id", m.id},
           {"title", m.title},
           {"created", m.created},
           {"paperCount", m.paper_count},
           {"permalink", SnapshotStore::permalink(m.id)}};
    j["description"] = m.description ? json(*m.description) : json(nullptr);
    j["creator"] = m.creator ? json(*m.creator) : json(nullptr);
    json contributions = json::array();
    for (const auto& c : m.contribution_ids) contributions.push_back(c.value);
    j["contributionIds"] = std::move(contributions);
    json papers = json::array();
    for (const auto& p : m.papers) papers.push_back({{"id", p.id.value}, {"title", p.title}});
    j["papers"] = std::move(papers);
    return j;
}

}  // namespace

json compare_payload(const ComparisonTable& table) {
    json papers = json::array();
    for (const auto& col : table.contributions) {
        json p{{"contributionId", col.id.value}, {"contributionLabel", col.label}, {"title", col.title()}};
        if (col.paper) {
            p["paperId"] = col.paper->id.value;
            p["authors"] = col.paper->metadata.authors;
            p["year"] = col.paper->metadata.year ? json(*col.paper->metadata.year) : json(nullptr);
            p["doi"] = col.paper->metadata.doi ? json(*col.paper->metadata.doi) : json(nullptr);
        } else {
            p["paperId"] = nullptr;
            p["authors"] = json::array();
            p["year"] = nullptr;
            p["doi"] = nullptr;
        }
        papers.push_back(std::move(p));
    }

    json properties = json::array();
    json values = json::object();
    for (auto g : table.ordered_groups()) {
        const auto& row = table.groups[g];
        json members = json::array();
        for (const auto& m : row.members) members.push_back(m.value);
        properties.push_back({{"id", row.id},
                              {"label", row.label},
                              {"members", members},
                              {"memberLabels", row.member_labels},
                              {"supportCount", row.support},
                              {"visible", table.visible(row)}});
        json per_contribution = json::object();
        for (std::size_t c = 0; c < table.contributions.size(); ++c) {
            json cell = json::array();
            for (const auto& v : table.cell(g, c).values) {
                json jv{{"value", v.display}, {"kind", to_string(v.kind)}};
                jv["resourceId"] = v.resource ? json(v.resource->value) : json(nullptr);
                json path = json::array();
                for (const auto& s : v.provenance) path.push_back(s.str());
                jv["path"] = std::move(path);
                cell.push_back(std::move(jv));
            }
            per_contribution[table.contributions[c].id.value] = std::move(cell);
        }
        values[row.id] = std::move(per_contribution);
    }
    return json{{"papers", std::move(papers)}, {"properties", std::move(properties)}, {"values", std::move(values)}};
}

ComparisonService::ComparisonService(std::shared_ptr<GraphStore> store,
                                     std::shared_ptr<const EmbeddingProvider> embeddings,
                                     std::shared_ptr<SnapshotStore> snapshots, ComparisonConfig defaults)
    : store_(std::move(store)),
      embeddings_(std::move(embeddings)),
      cache_(std::make_unique<EmbeddingCache>(embeddings_ ? *embeddings_ : no_vectors())),
      snapshots_(std::move(snapshots)),
      defaults_(std::move(defaults)) {
    defaults_.validate();
}

ComparisonService::~ComparisonService() = default;

void ComparisonService::reindex() {
    const auto statements = store_->statement_count();
    auto docs = build_corpus(*store_, SelectionConfig{defaults_.delta});
    std::shared_ptr<const TfIdfIndex> fresh;
    if (!docs.empty()) fresh = std::make_shared<const TfIdfIndex>(TfIdfIndex::build(std::move(docs)));
    std::lock_guard lock(index_mutex_);
    index_ = std::move(fresh);
    indexed_statements_ = statements;
}

std::shared_ptr<const TfIdfIndex> ComparisonService::index() {
    {
        std::lock_guard lock(index_mutex_);
        if (index_ && indexed_statements_ == store_->statement_count()) return index_;
    }
    reindex();
    std::lock_guard lock(index_mutex_);
    return index_;
}

HttpResponse ComparisonService::handle(const HttpRequest& request) {
    try {
        auto parts = split(request.path, '/');
        if (!parts.empty() && parts.front().empty()) parts.erase(parts.begin());
        if (!parts.empty() && parts.back().empty()) parts.pop_back();
        const auto& m = request.method;
        const auto n = parts.size();

        if (n == 2 && parts[0] == "similar" && m == "GET") return similar(parts[1], request);
        if (n == 1 && parts[0] == "compare" && m == "GET") return compare(request);
        if (n >= 1 && parts[0] == "comparisons") {
            if (n == 1 && m == "POST") return create_comparison(request);
            if (n == 2 && m == "GET") return get_comparison(parts[1]);
            if (n == 3 && parts[2] == "metadata" && m == "GET") return get_metadata(parts[1]);
            if (n == 3 && parts[2] == "export" && m == "GET") return export_comparison(parts[1], request);
        }
        if (n >= 2 && parts[0] == "carts") {
            if (n == 2) return cart(m, parts[1], nullptr);
            if (n == 4 && parts[2] == "items") return cart(m, parts[1], &parts[3]);
        }
        return error_response(404, "no_route", "no route for " + m + " " + request.path);
    } catch (const ValidationError& e) {
        return error_response(400, e.code(), e.what());
    } catch (const ReferenceError& e) {
        return error_response(404, e.code(), e.what());
    } catch (const NotFoundError& e) {
        return error_response(404, e.code(), e.what());
    } catch (const DataRetractedError& e) {
        return error_response(410, e.code(), e.what(), metadata_body(e.metadata()));
    } catch (const json::exception& e) {
        return error_response(400, "malformed_json", e.what());
    } catch (const std::exception& e) {
        return error_response(500, "internal_error", e.what());
    }
}

HttpResponse ComparisonService::similar(const std::string& id, const HttpRequest& request) {
    std::size_t k = static_cast<std::size_t>(defaults_.k);
    if (auto it = request.query.find("k"); it != request.query.end()) k = parse_positive_int("k", it->second);
    const ResourceId main{id};
    if (!store_->is_contribution(main)) throw ReferenceError("unknown contribution " + id);
    auto idx = index();
    if (!idx || !idx->contains(main)) throw ReferenceError("contribution " + id + " is not indexed");

    json hits = json::array();
    for (const auto& hit : idx->find_similar(main, k)) {
        auto paper = store_->paper_of(hit.contribution);
        hits.push_back({{"contribution", hit.contribution.value},
                        {"score", hit.score},
                        {"percentage", hit.percentage},
                        {"title", paper ? paper->metadata.title : store_->resource_label(hit.contribution)}});
    }
    return json_response(200, json{{"contribution", id}, {"k", k}, {"hits", std::move(hits)}});
}

namespace {

ComparisonConfig config_from_query(ComparisonConfig config, const std::map<std::string, std::string>& query) {
    if (auto it = query.find("tau"); it != query.end()) config.tau = parse_real("tau", it->second);
    if (auto it = query.find("alpha"); it != query.end()) config.alpha = parse_positive_int("alpha", it->second);
    if (auto it = query.find("delta"); it != query.end()) config.delta = parse_positive_int("delta", it->second);
    config.validate();
    return config;
}

std::vector<ResourceId> contribution_list(const std::map<std::string, std::string>& query) {
    auto it = query.find("contributions");
    if (it == query.end() || it->second.empty()) throw ValidationError("parameter 'contributions' is required");
    std::vector<ResourceId> ids;
    for (auto& part : split(it->second, ',')) {
        if (part.empty()) throw ValidationError("empty contribution id in list");
        ids.push_back(ResourceId{std::move(part)});
    }
    return ids;
}

}  // namespace

HttpResponse ComparisonService::compare(const HttpRequest& request) {
    auto ids = contribution_list(request.query);
    auto config = config_from_query(defaults_, request.query);
    if (ids.size() < 2) throw ValidationError("a comparison needs at least two contributions");
    auto table = build_table(*store_, ids, config, *cache_);
    return json_response(200, compare_payload(table));
}

HttpResponse ComparisonService::create_comparison(const HttpRequest& request) {
    const auto body = json::parse(request.body);
    std::vector<ResourceId> ids;
    for (const auto& c : body.at("contributions")) ids.push_back(ResourceId{c.get<std::string>()});

    ComparisonConfig config = defaults_;
    if (body.contains("config")) {
        json merged = defaults_;
        merged.update(body["config"]);
        merged.get_to(config);
    }
    const auto& jm = body.at("metadata");
    MetadataInput meta;
    meta.title = jm.value("title", "");
    if (jm.contains("description") && !jm["description"].is_null()) meta.description = jm["description"].get<std::string>();
    if (jm.contains("creator") && !jm["creator"].is_null()) meta.creator = jm["creator"].get<std::string>();
    if (meta.title.empty()) throw ValidationError("a comparison title is required");

    auto table = build_table(*store_, ids, config, *cache_);
    auto id = snapshots_->save(table, meta);
    return json_response(201, json{{"id", id}, {"permalink", SnapshotStore::permalink(id)}});
}

HttpResponse ComparisonService::get_comparison(const std::string& id) {
    auto snap = snapshots_->load(id);
    return json_response(200, json{{"id", id}, {"metadata", metadata_body(snap.metadata)}, {"table", snap.table}});
}

HttpResponse ComparisonService::get_metadata(const std::string& id) {
    return json_response(200, metadata_body(snapshots_->load_metadata(id)));
}

HttpResponse ComparisonService::export_comparison(const std::string& id, const HttpRequest& request) {
    auto it = request.query.find("format");
    const std::string format = it == request.query.end() ? "" : it->second;
    if (format != "csv" && format != "latex" && format != "bibtex" && format != "rdf-meta" && format != "rdf-cube") {
        return error_response(400, "unsupported_format",
                              "format must be one of csv, latex, bibtex, rdf-meta, rdf-cube");
    }
    if (format == "rdf-meta") return {200, "text/turtle", snapshots_->export_metadata_rdf(id)};
    if (format == "rdf-cube") return {200, "text/turtle", snapshots_->export_datacube_rdf(id)};

    auto snap = snapshots_->load(id);
    if (format == "csv") return {200, "text/csv", render_csv(snap.table)};
    auto latex = render_latex(snap.table, snapshots_->comparison_uri(id));
    if (format == "latex") return {200, "application/x-latex", latex.latex};
    return {200, "application/x-bibtex", latex.bibtex};
}

HttpResponse ComparisonService::cart(const std::string& method, const std::string& session, const std::string* item) {
    std::lock_guard lock(carts_mutex_);
    auto& cart = carts_[session];
    if (item && method == "PUT") {
        cart.add(*store_, ResourceId{*item});
    } else if (item && method == "DELETE") {
        cart.remove(ResourceId{*item});
    } else if (item || method != "GET") {
        return error_response(405, "method_not_allowed", method + " is not supported here");
    }
    json items = json::array();
    for (const auto& c : cart.items()) items.push_back(c.value);
    return json_response(200, json{{"session", session}, {"items", std::move(items)}, {"readyToCompare", cart.ready_to_compare()}});
}

void ComparisonService::mount(httplib::Server& server) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        HttpRequest request{req.method, req.path, {}, req.body};
        for (const auto& [key, value] : req.params) request.query.emplace(key, value);
        auto response = handle(request);
        res.status = response.status;
        res.set_content(response.body, response.content_type);
    };
    server.Get(R"(/.*)", forward);
    server.Post(R"(/.*)", forward);
    server.Put(R"(/.*)", forward);
    server.Delete(R"(/.*)", forward);
}

}  // namespace litcmp
