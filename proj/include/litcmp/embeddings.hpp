#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace litcmp {

using Vector = std::vector<double>;

// Maps a property label to a dense vector. Implementations must be
// deterministic and safe for concurrent calls.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::size_t dimension() const = 0;
    virtual Vector embed(std::string_view label) const = 0;
};

// Word vectors in the plain-text "word v1 ... vd" format (optional
// "count dim" header line). A label embeds to the mean of its in-vocabulary
// token vectors, or to the zero vector when no token is known.
class WordVectors : public EmbeddingProvider {
public:
    WordVectors() = default;

    static WordVectors load(const std::filesystem::path& path);
    static WordVectors parse(std::string_view text);
    static WordVectors from_words(std::size_t dimension, std::unordered_map<std::string, Vector> words);

    bool loaded() const { return dimension_ > 0; }
    std::size_t dimension() const override { return dimension_; }
    std::size_t vocabulary_size() const { return words_.size(); }
    const Vector* word(std::string_view token) const;

    Vector embed(std::string_view label) const override;

private:
    std::size_t dimension_ = 0;
    std::unordered_map<std::string, Vector> words_;
};

// Counts embed() calls on a wrapped provider.
class CountingProvider : public EmbeddingProvider {
public:
    explicit CountingProvider(const EmbeddingProvider& inner) : inner_(inner) {}

    std::size_t dimension() const override { return inner_.dimension(); }
    Vector embed(std::string_view label) const override {
        calls_.fetch_add(1, std::memory_order_relaxed);
        return inner_.embed(label);
    }

    std::size_t calls() const { return calls_.load(); }
    void reset() { calls_ = 0; }

private:
    const EmbeddingProvider& inner_;
    mutable std::atomic<std::size_t> calls_{0};
};

// Label -> vector memo shared across comparisons. Each distinct label reaches
// the provider at most once.
class EmbeddingCache {
public:
    explicit EmbeddingCache(const EmbeddingProvider& provider) : provider_(provider) {}

    const EmbeddingProvider& provider() const { return provider_; }
    std::shared_ptr<const Vector> get(const std::string& label);
    std::size_t size() const;

private:
    const EmbeddingProvider& provider_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, std::shared_ptr<const Vector>> entries_;
};

// Cosine similarity; 0 when either vector has zero norm. Clamped to [-1, 1].
double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace litcmp
