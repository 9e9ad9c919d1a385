#include "litcmp/publisher.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <ctime>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "file_util.hpp"
#include "turtle.hpp"

namespace litcmp {

using json = nlohmann::json;

namespace {

constexpr std::string_view kBase62 = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
constexpr int kMaxRerolls = 4096;

json metadata_json(const ComparisonMetadata& m) {
    json j{{"id", m.id},
           {"title", m.title},
           {"created", m.created},
           {"paperCount", m.paper_count},
           {"config", m.config},
           {"contentHash", m.content_hash}};
    if (m.description) j["description"] = *m.description;
    if (m.creator) j["creator"] = *m.creator;
    json contributions = json::array();
    for (const auto& c : m.contribution_ids) contributions.push_back(c.value);
    j["contributionIds"] = std::move(contributions);
    json papers = json::array();
    for (const auto& p : m.papers) papers.push_back({{"id", p.id.value}, {"title", p.title}});
    j["papers"] = std::move(papers);
    return j;
}

ComparisonMetadata metadata_from_json(const json& j) {
    ComparisonMetadata m;
    m.id = j.at("id").get<std::string>();
    m.title = j.at("title").get<std::string>();
    m.created = j.at("created").get<std::string>();
    m.paper_count = j.at("paperCount").get<std::size_t>();
    j.at("config").get_to(m.config);
    m.content_hash = j.at("contentHash").get<std::string>();
    if (j.contains("description")) m.description = j["description"].get<std::string>();
    if (j.contains("creator")) m.creator = j["creator"].get<std::string>();
    for (const auto& c : j.at("contributionIds")) m.contribution_ids.push_back(ResourceId{c.get<std::string>()});
    for (const auto& p : j.at("papers")) {
        m.papers.push_back({ResourceId{p.at("id").get<std::string>()}, p.at("title").get<std::string>()});
    }
    return m;
}

std::string canonical_content(const ComparisonTable& table, const MetadataInput& meta) {
    json j{{"table", table}, {"title", meta.title}};
    if (meta.description) j["description"] = *meta.description;
    if (meta.creator) j["creator"] = *meta.creator;
    return j.dump();
}

}  // namespace

bool is_short_id(std::string_view text) {
    if (text.size() != kShortIdLength) return false;
    for (char c : text) {
        if (kBase62.find(c) == std::string_view::npos) return false;
    }
    return true;
}

std::string short_id_from_digest(std::string_view hex_digest) {
    if (hex_digest.size() < 16) throw ValidationError("digest too short for an id");
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < 16; ++i) {
        char c = hex_digest[i];
        int nibble = c >= '0' && c <= '9' ? c - '0' : c >= 'a' && c <= 'f' ? c - 'a' + 10 : c >= 'A' && c <= 'F' ? c - 'A' + 10 : -1;
        if (nibble < 0) throw ValidationError("digest is not hexadecimal");
        value = (value << 4) | static_cast<std::uint64_t>(nibble);
    }
    std::string id(kShortIdLength, '0');
    for (std::size_t i = kShortIdLength; i-- > 0;) {
        id[i] = kBase62[value % 62];
        value /= 62;
    }
    return id;
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw StorageError("SHA-256 computation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

std::string format_utc(std::chrono::system_clock::time_point t) {
    std::time_t secs = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

SnapshotStore::SnapshotStore(std::filesystem::path directory, SnapshotStoreOptions options)
    : dir_(std::move(directory)), options_(std::move(options)) {
    if (options_.base_uri.empty() || options_.base_uri.back() != '/') options_.base_uri += '/';
    std::filesystem::create_directories(dir_);
}

std::string SnapshotStore::resource_uri(const ResourceId& id) const {
    return options_.base_uri + "resource/" + turtle::iri_escape(id.value);
}

std::string SnapshotStore::save(const ComparisonTable& table, const MetadataInput& input) {
    if (input.title.empty()) throw ValidationError("a comparison title is required");
    if (table.contributions.size() < 2) throw ValidationError("a comparison needs at least two contributions");

    const std::string content = canonical_content(table, input);
    const std::string content_hash = sha256_hex(content);

    std::lock_guard lock(write_mutex_);
    for (int salt = 0; salt < kMaxRerolls; ++salt) {
        const std::string keyed = salt == 0 ? content : content + "\n#salt=" + std::to_string(salt);
        const std::string id = short_id_from_digest(options_.id_digest(keyed));

        if (auto existing = detail::read_file(meta_path(id))) {
            if (json::parse(*existing).at("contentHash").get<std::string>() == content_hash) return id;
            continue;  // collision with different content
        }

        ComparisonMetadata meta;
        meta.id = id;
        meta.title = input.title;
        meta.description = input.description;
        meta.creator = input.creator;
        meta.created = format_utc(options_.clock());
        meta.config = table.config;
        meta.content_hash = content_hash;
        std::set<std::string> seen_papers;
        for (const auto& col : table.contributions) {
            meta.contribution_ids.push_back(col.id);
            if (col.paper && seen_papers.insert(col.paper->id.value).second) {
                meta.papers.push_back({col.paper->id, col.paper->metadata.title});
            }
        }
        meta.paper_count = meta.papers.size();

        // Data first: metadata is the commit marker.
        detail::write_file_atomic(data_path(id), json(table).dump(2) + "\n");
        detail::write_file_atomic(meta_path(id), metadata_json(meta).dump(2) + "\n");
        return id;
    }
    throw StorageError("could not allocate a snapshot id");
}

ComparisonMetadata SnapshotStore::load_metadata(const std::string& id) const {
    if (!is_short_id(id)) throw NotFoundError("no comparison with id '" + id + "'");
    auto text = detail::read_file(meta_path(id));
    if (!text) throw NotFoundError("no comparison with id '" + id + "'");
    try {
        return metadata_from_json(json::parse(*text));
    } catch (const json::exception& e) {
        throw StorageError("corrupt metadata for " + id + ": " + e.what());
    }
}

ComparisonSnapshot SnapshotStore::load(const std::string& id) const {
    auto meta = load_metadata(id);
    auto text = detail::read_file(data_path(id));
    if (!text) throw DataRetractedError(std::move(meta));
    ComparisonSnapshot snap{id, std::move(meta), {}};
    try {
        json::parse(*text).get_to(snap.table);
    } catch (const json::exception& e) {
        throw StorageError("corrupt data for " + id + ": " + e.what());
    }
    return snap;
}

bool SnapshotStore::retract(const std::string& id) {
    if (!is_short_id(id)) return false;
    std::lock_guard lock(write_mutex_);
    std::error_code ec;
    return std::filesystem::remove(data_path(id), ec);
}

std::vector<std::string> SnapshotStore::ids() const {
    std::vector<std::string> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
        auto name = entry.path().filename().string();
        const std::string suffix = ".meta.json";
        if (name.size() == kShortIdLength + suffix.size() && name.ends_with(suffix)) {
            out.push_back(name.substr(0, kShortIdLength));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

void prefixes(std::ostringstream& out, const std::string& base, bool cube) {
    out << "@prefix dcterms: <http://purl.org/dc/terms/> .\n";
    out << "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n";
    out << "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n";
    out << "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n";
    if (cube) out << "@prefix qb: <http://purl.org/linked-data/cube#> .\n";
    out << "@prefix cmp: <" << base << "ontology#> .\n\n";
}

}  // namespace

std::string SnapshotStore::export_metadata_rdf(const std::string& id) const {
    const auto meta = load_metadata(id);
    std::ostringstream out;
    prefixes(out, options_.base_uri, false);
    out << turtle::iri(comparison_uri(id)) << " a cmp:Comparison ;\n";
    out << "    dcterms:title " << turtle::literal(meta.title) << " ;\n";
    if (meta.description) out << "    dcterms:description " << turtle::literal(*meta.description) << " ;\n";
    if (meta.creator) out << "    dcterms:creator " << turtle::literal(*meta.creator) << " ;\n";
    out << "    dcterms:created " << turtle::literal(meta.created) << "^^xsd:dateTime";
    for (const auto& p : meta.papers) {
        out << " ;\n    dcterms:references " << turtle::iri(resource_uri(p.id));
    }
    out << " .\n";
    return out.str();
}

std::string SnapshotStore::export_datacube_rdf(const std::string& id) const {
    const auto snap = load(id);
    const auto& table = snap.table;
    const std::string cube = comparison_uri(id);
    const std::string dataset = turtle::iri(cube + "#dataset");
    auto group_iri = [&](const std::string& g) { return turtle::iri(cube + "#group-" + turtle::iri_escape(g)); };

    std::ostringstream out;
    prefixes(out, options_.base_uri, true);
    out << dataset << " a qb:DataSet ;\n"
        << "    dcterms:title " << turtle::literal(snap.metadata.title) << " ;\n"
        << "    qb:structure " << turtle::iri(cube + "#structure") << " .\n\n";
    out << turtle::iri(cube + "#structure") << " a qb:DataStructureDefinition ;\n"
        << "    qb:component [ qb:dimension cmp:contribution ] ,\n"
        << "        [ qb:dimension cmp:propertyGroup ] ,\n"
        << "        [ qb:measure cmp:value ] .\n\n";
    out << "cmp:contribution a rdf:Property , qb:DimensionProperty ;\n    rdfs:label \"contribution\" .\n";
    out << "cmp:propertyGroup a rdf:Property , qb:DimensionProperty ;\n    rdfs:label \"property group\" .\n";
    out << "cmp:value a rdf:Property , qb:MeasureProperty ;\n    rdfs:label \"value\" .\n\n";

    for (const auto& col : table.contributions) {
        out << turtle::iri(resource_uri(col.id)) << " a cmp:Contribution ;\n    rdfs:label "
            << turtle::literal(col.title()) << " .\n";
    }
    const auto visible = table.visible_groups();
    for (auto g : visible) {
        out << group_iri(table.groups[g].id) << " a cmp:PropertyGroup ;\n    rdfs:label "
            << turtle::literal(table.groups[g].label) << " .\n";
    }
    out << '\n';

    std::size_t n = 0;
    for (auto g : visible) {
        for (std::size_t c = 0; c < table.contributions.size(); ++c) {
            for (const auto& v : table.cell(g, c).values) {
                out << turtle::iri(cube + "#obs" + std::to_string(++n)) << " a qb:Observation ;\n"
                    << "    qb:dataSet " << dataset << " ;\n"
                    << "    cmp:contribution " << turtle::iri(resource_uri(table.contributions[c].id)) << " ;\n"
                    << "    cmp:propertyGroup " << group_iri(table.groups[g].id) << " ;\n"
                    << "    cmp:value " << turtle::literal(v.display) << " .\n";
            }
        }
    }
    return out.str();
}

}  // namespace litcmp
