#include "litcmp/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

#include "litcmp/errors.hpp"
#include "litcmp/tokenize.hpp"

namespace litcmp {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

bool parse_size(std::string_view s, std::size_t& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

double parse_double(std::string_view s, std::size_t line_no) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw ValidationError("bad vector component '" + std::string(s) + "' on line " + std::to_string(line_no));
    }
    return v;
}

}  // namespace

WordVectors WordVectors::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StorageError("cannot read embedding file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

WordVectors WordVectors::parse(std::string_view text) {
    WordVectors wv;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto fields = split_ws(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (fields.empty()) continue;

        std::size_t count = 0, dim = 0;
        if (line_no == 1 && fields.size() == 2 && parse_size(fields[0], count) && parse_size(fields[1], dim)) {
            wv.dimension_ = dim;
            continue;
        }
        const std::size_t d = fields.size() - 1;
        if (d == 0) throw ValidationError("vector line " + std::to_string(line_no) + " has no components");
        if (wv.dimension_ == 0) wv.dimension_ = d;
        if (d != wv.dimension_) {
            throw ValidationError("vector line " + std::to_string(line_no) + " has " + std::to_string(d) +
                                  " components, expected " + std::to_string(wv.dimension_));
        }
        Vector v(d);
        for (std::size_t i = 0; i < d; ++i) v[i] = parse_double(fields[i + 1], line_no);
        wv.words_.insert_or_assign(std::string(fields[0]), std::move(v));
    }
    return wv;
}

WordVectors WordVectors::from_words(std::size_t dimension, std::unordered_map<std::string, Vector> words) {
    if (dimension == 0) throw ValidationError("embedding dimension must be positive");
    for (const auto& [w, v] : words) {
        if (v.size() != dimension) throw ValidationError("vector for '" + w + "' has wrong dimension");
    }
    WordVectors wv;
    wv.dimension_ = dimension;
    wv.words_ = std::move(words);
    return wv;
}

const Vector* WordVectors::word(std::string_view token) const {
    auto it = words_.find(std::string(token));
    return it == words_.end() ? nullptr : &it->second;
}

Vector WordVectors::embed(std::string_view label) const {
    if (!loaded()) throw StateError("word vectors are not loaded");
    Vector sum(dimension_, 0.0);
    std::size_t known = 0;
    for (const auto& token : tokenize_label(label)) {
        const Vector* v = word(token);
        if (!v) continue;
        for (std::size_t i = 0; i < dimension_; ++i) sum[i] += (*v)[i];
        ++known;
    }
    if (known > 1) {
        for (auto& x : sum) x /= static_cast<double>(known);
    }
    return sum;
}

std::shared_ptr<const Vector> EmbeddingCache::get(const std::string& label) {
    {
        std::shared_lock lock(mutex_);
        if (auto it = entries_.find(label); it != entries_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    if (auto it = entries_.find(label); it != entries_.end()) return it->second;
    auto vec = std::make_shared<const Vector>(provider_.embed(label));
    entries_.emplace(label, vec);
    return vec;
}

std::size_t EmbeddingCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ValidationError("cosine of vectors with different dimensions");
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace litcmp
