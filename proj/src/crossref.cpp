#include <httplib.h>

#include <nlohmann/json.hpp>

#include "litcmp/errors.hpp"
#include "litcmp/ingest.hpp"

namespace litcmp {

CrossrefResolver::CrossrefResolver(std::string host, int timeout_seconds)
    : host_(std::move(host)), timeout_seconds_(timeout_seconds) {}

PaperMetadata CrossrefResolver::resolve(const std::string& doi) {
    httplib::Client client("https://" + host_);
    client.set_connection_timeout(timeout_seconds_);
    client.set_read_timeout(timeout_seconds_);
    client.set_follow_location(true);

    auto res = client.Get("/works/" + percent_encode(doi), {{"User-Agent", "litcmp/1.0 (metadata lookup)"}});
    if (!res) throw ResolutionError(doi, "Crossref unreachable: " + httplib::to_string(res.error()));
    if (res->status == 404) throw ResolutionError(doi, "DOI " + doi + " is unknown to Crossref");
    if (res->status != 200) {
        throw ResolutionError(doi, "Crossref answered HTTP " + std::to_string(res->status) + " for " + doi);
    }
    try {
        auto body = nlohmann::json::parse(res->body);
        return parse_crossref_work(body.at("message"));
    } catch (const nlohmann::json::exception& e) {
        throw ResolutionError(doi, std::string("unexpected Crossref response: ") + e.what());
    }
}

}  // namespace litcmp
