#pragma once
// HTTP/JSON facade over the comparison pipeline.
//
//   GET    /similar/{contribution}?k=N
//   GET    /compare?contributions=a,b,...&tau=&alpha=&delta=
//   POST   /comparisons                      {contributions, config, metadata}
//   GET    /comparisons/{id}
//   GET    /comparisons/{id}/metadata
//   GET    /comparisons/{id}/export?format=csv|latex|bibtex|rdf-meta|rdf-cube
//   GET    /carts/{session}
//   PUT    /carts/{session}/items/{contribution}
//   DELETE /carts/{session}/items/{contribution}
//
// Errors use the envelope {"code": ..., "message": ..., "details": ...}.

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "litcmp/candidate_finder.hpp"
#include "litcmp/embeddings.hpp"
#include "litcmp/graph_store.hpp"
#include "litcmp/publisher.hpp"
#include "litcmp/table.hpp"

namespace httplib {
class Server;
}

namespace litcmp {

struct HttpRequest {
    std::string method = "GET";
    std::string path;
    std::map<std::string, std::string> query;
    std::string body;
};

struct HttpResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

// {papers, properties, values} view of a table, as served by /compare.
nlohmann::json compare_payload(const ComparisonTable& table);

class ComparisonService {
public:
    ComparisonService(std::shared_ptr<GraphStore> store, std::shared_ptr<const EmbeddingProvider> embeddings,
                      std::shared_ptr<SnapshotStore> snapshots, ComparisonConfig defaults = {});
    ~ComparisonService();

    HttpResponse handle(const HttpRequest& request);

    // Rebuilds the TF-IDF index from the current store and swaps it in.
    void reindex();
    std::shared_ptr<const TfIdfIndex> index();

    // Routes every request on `server` through handle().
    void mount(httplib::Server& server);

    const ComparisonConfig& defaults() const { return defaults_; }

private:
    HttpResponse similar(const std::string& id, const HttpRequest& request);
    HttpResponse compare(const HttpRequest& request);
    HttpResponse create_comparison(const HttpRequest& request);
    HttpResponse get_comparison(const std::string& id);
    HttpResponse get_metadata(const std::string& id);
    HttpResponse export_comparison(const std::string& id, const HttpRequest& request);
    HttpResponse cart(const std::string& method, const std::string& session, const std::string* item);

    std::shared_ptr<GraphStore> store_;
    std::shared_ptr<const EmbeddingProvider> embeddings_;
    std::unique_ptr<EmbeddingCache> cache_;
    std::shared_ptr<SnapshotStore> snapshots_;
    ComparisonConfig defaults_;

    std::mutex index_mutex_;
    std::shared_ptr<const TfIdfIndex> index_;
    std::size_t indexed_statements_ = 0;

    std::mutex carts_mutex_;
    std::map<std::string, ComparisonCart> carts_;
};

}  // namespace litcmp
