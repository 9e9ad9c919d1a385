// litcmp command line: ingest review tables, query and publish comparisons,
// or run the HTTP service.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "litcmp/errors.hpp"
#include "litcmp/ingest.hpp"
#include "litcmp/service.hpp"

using namespace litcmp;
using json = nlohmann::json;

namespace {

std::string env_or(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : std::move(fallback);
}

struct Paths {
    std::string store = env_or("STORE_PATH", "litcmp-store.log");
    std::string snapshots = env_or("SNAPSHOT_PATH", "litcmp-snapshots");
    std::string embeddings = env_or("EMBEDDINGS_PATH", "");
};

std::unique_ptr<ComparisonService> open_service(const Paths& paths, std::shared_ptr<GraphStore>& store) {
    store = GraphStore::open(paths.store);
    std::shared_ptr<const EmbeddingProvider> vectors;
    if (!paths.embeddings.empty()) vectors = std::make_shared<WordVectors>(WordVectors::load(paths.embeddings));
    auto snapshots = std::make_shared<SnapshotStore>(paths.snapshots);
    return std::make_unique<ComparisonService>(store, vectors, snapshots);
}

int emit(const HttpResponse& r) {
    (r.status >= 400 ? std::cerr : std::cout) << r.body << (r.body.ends_with('\n') ? "" : "\n");
    return r.status >= 400 ? 1 : 0;
}

std::string join(const std::vector<std::string>& ids) {
    std::string out;
    for (const auto& id : ids) out += (out.empty() ? "" : ",") + id;
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Literature comparison engine"};
    app.require_subcommand(1);
    Paths paths;
    app.add_option("--store", paths.store, "Statement log path (env STORE_PATH)");
    app.add_option("--snapshots", paths.snapshots, "Published snapshot directory (env SNAPSHOT_PATH)");
    app.add_option("--embeddings", paths.embeddings, "Word vector file (env EMBEDDINGS_PATH)");

    std::string review_file, cache_dir;
    bool offline = false;
    auto* ingest = app.add_subcommand("ingest", "Import a review table JSON document");
    ingest->add_option("file", review_file)->required()->check(CLI::ExistingFile);
    ingest->add_option("--doi-cache", cache_dir, "DOI metadata cache directory");
    ingest->add_flag("--offline", offline, "Resolve DOIs from the cache only");

    std::string contribution;
    int k = 3;
    auto* similar = app.add_subcommand("similar", "Suggest contributions similar to one");
    similar->add_option("contribution", contribution)->required();
    similar->add_option("-k", k, "Number of suggestions");

    std::vector<std::string> ids;
    std::string tau, alpha, delta;
    auto* compare = app.add_subcommand("compare", "Print the comparison payload for contributions");
    compare->add_option("contributions", ids)->required();
    compare->add_option("--tau", tau);
    compare->add_option("--alpha", alpha);
    compare->add_option("--delta", delta);

    std::string title, description, creator;
    auto* publish = app.add_subcommand("publish", "Publish a comparison snapshot");
    publish->add_option("contributions", ids)->required();
    publish->add_option("--title", title)->required();
    publish->add_option("--description", description);
    publish->add_option("--creator", creator);
    publish->add_option("--alpha", alpha);

    std::string snapshot_id, format = "csv";
    auto* exporter = app.add_subcommand("export", "Export a published comparison");
    exporter->add_option("id", snapshot_id)->required();
    exporter->add_option("--format", format)->check(CLI::IsMember({"csv", "latex", "bibtex", "rdf-meta", "rdf-cube"}));

    int port = std::stoi(env_or("PORT", "8080"));
    std::string host = "0.0.0.0";
    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    serve->add_option("--port", port, "Listen port (env PORT)");
    serve->add_option("--host", host);

    CLI11_PARSE(app, argc, argv);

    try {
        std::shared_ptr<GraphStore> store;
        auto service = open_service(paths, store);

        if (*ingest) {
            std::unique_ptr<CachedResolver> resolver;
            if (!cache_dir.empty() || offline) {
                auto upstream = offline ? nullptr : std::make_shared<CrossrefResolver>();
                resolver = std::make_unique<CachedResolver>(cache_dir.empty() ? "doi-cache" : cache_dir, upstream, offline);
            } else {
                resolver = std::make_unique<CachedResolver>("doi-cache", std::make_shared<CrossrefResolver>(), false);
            }
            auto result = import_review_table(*store, load_review_table(review_file), resolver.get());
            json out{{"researchProblem", result.research_problem.value}, {"imported", json::array()},
                     {"errors", json::array()}};
            for (const auto& p : result.imported) {
                out["imported"].push_back({{"index", p.index}, {"paper", p.paper.value},
                                           {"contribution", p.contribution.value}});
            }
            for (const auto& e : result.errors) {
                out["errors"].push_back({{"index", e.index}, {"title", e.title}, {"message", e.message}});
            }
            std::cout << out.dump(2) << "\n";
            return result.ok() ? 0 : 2;
        }
        if (*similar) {
            return emit(service->handle({"GET", "/similar/" + contribution, {{"k", std::to_string(k)}}, {}}));
        }
        if (*compare) {
            std::map<std::string, std::string> query{{"contributions", join(ids)}};
            if (!tau.empty()) query["tau"] = tau;
            if (!alpha.empty()) query["alpha"] = alpha;
            if (!delta.empty()) query["delta"] = delta;
            return emit(service->handle({"GET", "/compare", query, {}}));
        }
        if (*publish) {
            json body{{"contributions", ids}, {"metadata", {{"title", title}}}};
            if (!description.empty()) body["metadata"]["description"] = description;
            if (!creator.empty()) body["metadata"]["creator"] = creator;
            if (!alpha.empty()) body["config"]["alpha"] = std::stoi(alpha);
            return emit(service->handle({"POST", "/comparisons", {}, body.dump()}));
        }
        if (*exporter) {
            return emit(service->handle({"GET", "/comparisons/" + snapshot_id + "/export", {{"format", format}}, {}}));
        }
        if (*serve) {
            httplib::Server server;
            service->mount(server);
            std::cerr << "listening on " << host << ":" << port << "\n";
            return server.listen(host, port) ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
