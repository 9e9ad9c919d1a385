#pragma once
// Review-table ingestion: survey comparison tables, transcribed into a JSON
// document, become papers, contributions and statements in the graph store.
//
// Document shape:
//   {
//     "researchProblem": "Text summarization",
//     "defaultPredicateLabels": ["approach", "dataset", ...],
//     "papers": [
//       { "title": "...", "doi": "10.x/y", "authors": ["..."], "year": 2016,
//         "cells": { "approach": [{"value": "...", "kind": "literal"}] } }
//     ]
//   }
// A cell may also be given as a bare string or an array of strings (literals).

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "litcmp/graph_store.hpp"
#include "litcmp/table.hpp"

namespace litcmp {

struct CellEntry {
    std::string value;
    ValueKind kind = ValueKind::literal;

    auto operator<=>(const CellEntry&) const = default;
};

struct PaperEntry {
    std::string title;
    std::optional<std::string> doi;
    std::vector<std::string> authors;
    std::optional<int> year;
    std::map<std::string, std::vector<CellEntry>> cells;

    bool has_full_metadata() const { return !title.empty() && !authors.empty() && year.has_value(); }
};

struct ReviewTableDocument {
    std::string research_problem;
    std::vector<std::string> columns;
    std::vector<PaperEntry> papers;

    // Throws ValidationError when a document invariant does not hold.
    void validate() const;
};

ReviewTableDocument parse_review_table(const nlohmann::json& j);
ReviewTableDocument load_review_table(const std::filesystem::path& path);
nlohmann::json review_table_json(const ReviewTableDocument& doc);
// Sorted cell values, empty cells dropped, stable key order, 2-space indent.
std::string canonical_json(const ReviewTableDocument& doc);

// ---------------------------------------------------------------------------
// DOI metadata resolution
// ---------------------------------------------------------------------------

bool is_valid_doi(std::string_view doi);
std::string percent_encode(std::string_view text);

class MetadataResolver {
public:
    virtual ~MetadataResolver() = default;
    virtual PaperMetadata resolve(const std::string& doi) = 0;
};

// Crossref REST client (https://api.crossref.org/works/<doi>).
class CrossrefResolver : public MetadataResolver {
public:
    explicit CrossrefResolver(std::string host = "api.crossref.org", int timeout_seconds = 10);
    PaperMetadata resolve(const std::string& doi) override;

private:
    std::string host_;
    int timeout_seconds_;
};

// Extracts title, authors, year and DOI from a Crossref "message" object.
PaperMetadata parse_crossref_work(const nlohmann::json& message);

// File cache in front of an upstream resolver: one JSON file per DOI, named by
// the percent-encoded DOI. In offline mode only the cache is consulted.
class CachedResolver : public MetadataResolver {
public:
    CachedResolver(std::filesystem::path cache_dir, std::shared_ptr<MetadataResolver> upstream, bool offline);

    PaperMetadata resolve(const std::string& doi) override { return fetch_metadata(doi); }
    PaperMetadata fetch_metadata(const std::string& doi);
    std::filesystem::path cache_file(const std::string& doi) const;

private:
    std::optional<PaperMetadata> read_cache(const std::string& doi) const;
    void write_cache(const std::string& doi, const PaperMetadata& meta);

    std::filesystem::path dir_;
    std::shared_ptr<MetadataResolver> upstream_;
    bool offline_;
    std::mutex write_mutex_;
};

// ---------------------------------------------------------------------------
// Import / export
// ---------------------------------------------------------------------------

struct ImportedPaper {
    std::size_t index = 0;  // position in the document
    ResourceId paper;
    ResourceId contribution;
};

struct ImportError {
    std::size_t index = 0;
    std::string title;
    std::optional<std::string> doi;
    std::string message;
};

struct ImportResult {
    ResourceId research_problem;
    std::vector<ImportedPaper> imported;
    std::vector<ImportError> errors;

    bool ok() const { return errors.empty(); }
};

// Per paper: a Paper, one Contribution, its research-problem statement and one
// statement per cell value. DOI metadata is looked up only when the entry
// lacks title, authors or year. Resolution failures are collected per paper
// and the remaining papers are still imported.
ImportResult import_review_table(GraphStore& store, const ReviewTableDocument& doc,
                                 MetadataResolver* resolver = nullptr);

ReviewTableDocument export_review_table(const GraphStore& store, std::span<const ResourceId> contributions,
                                        std::span<const std::string> columns);

}  // namespace litcmp
