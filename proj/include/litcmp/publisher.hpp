#pragma once
// Published comparison snapshots.
//
// Each snapshot lives in two files inside the store directory:
//   <id>.meta.json   descriptive metadata (title, description, creator, created,
//                    compared papers, config, content hash)
//   <id>.data.json   the frozen comparison table
// Metadata stays readable when the data payload is removed.
//
// Ids are 6 base62 characters taken from a SHA-256 of the canonical snapshot
// content; a salt counter re-rolls the id on collision. Identical content
// saved twice yields the same id.

#include <chrono>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "litcmp/errors.hpp"
#include "litcmp/table.hpp"

namespace litcmp {

inline constexpr std::size_t kShortIdLength = 6;

bool is_short_id(std::string_view text);
// First 6 base62 digits of the leading 64 bits of a hex digest.
std::string short_id_from_digest(std::string_view hex_digest);
std::string sha256_hex(std::string_view data);

struct MetadataInput {
    std::string title;
    std::optional<std::string> description;
    std::optional<std::string> creator;
};

struct PaperLink {
    ResourceId id;
    std::string title;

    bool operator==(const PaperLink&) const = default;
};

struct ComparisonMetadata {
    std::string id;
    std::string title;
    std::optional<std::string> description;
    std::string created;  // UTC, ISO 8601, second precision
    std::optional<std::string> creator;
    std::size_t paper_count = 0;
    std::vector<ResourceId> contribution_ids;
    std::vector<PaperLink> papers;
    ComparisonConfig config;
    std::string content_hash;

    bool operator==(const ComparisonMetadata&) const = default;
};

struct ComparisonSnapshot {
    std::string id;
    ComparisonMetadata metadata;
    ComparisonTable table;
};

// The snapshot exists but its data payload was removed.
class DataRetractedError : public Error {
public:
    explicit DataRetractedError(ComparisonMetadata metadata)
        : Error("data_retracted", "comparison " + metadata.id + " data has been retracted"),
          metadata_(std::move(metadata)) {}

    const ComparisonMetadata& metadata() const { return metadata_; }

private:
    ComparisonMetadata metadata_;
};

struct SnapshotStoreOptions {
    std::string base_uri = "https://example.org/litcmp/";
    // Digest used to derive ids (hex string). Replaceable to force collisions.
    std::function<std::string(std::string_view)> id_digest = sha256_hex;
    std::function<std::chrono::system_clock::time_point()> clock = [] { return std::chrono::system_clock::now(); };
};

class SnapshotStore {
public:
    explicit SnapshotStore(std::filesystem::path directory, SnapshotStoreOptions options = {});

    std::string save(const ComparisonTable& table, const MetadataInput& metadata);
    ComparisonSnapshot load(const std::string& id) const;
    ComparisonMetadata load_metadata(const std::string& id) const;
    // Removes the data payload, keeping metadata. Returns false if absent.
    bool retract(const std::string& id);
    std::vector<std::string> ids() const;

    std::string export_metadata_rdf(const std::string& id) const;
    std::string export_datacube_rdf(const std::string& id) const;

    static std::string permalink(const std::string& id) { return "/c/" + id; }
    std::string comparison_uri(const std::string& id) const { return options_.base_uri + "c/" + id; }
    std::string resource_uri(const ResourceId& id) const;
    const std::string& base_uri() const { return options_.base_uri; }
    const std::filesystem::path& directory() const { return dir_; }

private:
    std::filesystem::path meta_path(const std::string& id) const { return dir_ / (id + ".meta.json"); }
    std::filesystem::path data_path(const std::string& id) const { return dir_ / (id + ".data.json"); }

    std::filesystem::path dir_;
    SnapshotStoreOptions options_;
    mutable std::mutex write_mutex_;
};

std::string format_utc(std::chrono::system_clock::time_point t);

}  // namespace litcmp
