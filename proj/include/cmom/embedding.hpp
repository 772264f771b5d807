#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "cmom/errors.hpp"

namespace cmom {

struct EmbeddingVector {
    std::vector<double> components;

    [[nodiscard]] size_t dimension() const { return components.size(); }

    EmbeddingVector& operator-=(const EmbeddingVector& other) {
        for (size_t i = 0; i < components.size(); ++i) components[i] -= other.components[i];
        return *this;
    }

    EmbeddingVector& operator+=(const EmbeddingVector& other) {
        for (size_t i = 0; i < components.size(); ++i) components[i] += other.components[i];
        return *this;
    }

    [[nodiscard]] double norm() const {
        double sum = 0.0;
        for (double c : components) sum += c * c;
        return std::sqrt(sum);
    }
};

/// Cosine similarity; 0 when either vector is numerically null.
inline double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dimension() != b.dimension()) {
        throw ConfigError("cosine over mismatched dimensions " + std::to_string(a.dimension()) +
                          " vs " + std::to_string(b.dimension()));
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.components.size(); ++i) {
        dot += a.components[i] * b.components[i];
        na += a.components[i] * a.components[i];
        nb += b.components[i] * b.components[i];
    }
    if (na <= 1e-24 || nb <= 1e-24) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

class EmbeddingProvider {
  public:
    virtual ~EmbeddingProvider() = default;

    /// Deterministic for a fixed text. Throws LookupError (file store miss),
    /// TransportError (remote failure) or ConfigError (dimension mismatch).
    virtual EmbeddingVector embed(const std::string& text) = 0;
};

/// Seeded character-n-gram hashing into a fixed dimension; fully offline and
/// deterministic across platforms.
class HashEmbeddingProvider : public EmbeddingProvider {
  public:
    explicit HashEmbeddingProvider(size_t dimension = 64, uint64_t seed = 42)
        : dimension_(dimension), seed_(seed) {
        if (dimension_ == 0) throw ConfigError("embedding dimension must be positive");
    }

    EmbeddingVector embed(const std::string& text) override {
        EmbeddingVector vec;
        vec.components.assign(dimension_, 0.0);
        std::string padded = "^" + text + "$";
        for (size_t n = 2; n <= 3; ++n) {
            if (padded.size() < n) continue;
            for (size_t i = 0; i + n <= padded.size(); ++i) {
                uint64_t h = fnv1a(padded.data() + i, n, seed_);
                vec.components[h % dimension_] += 1.0;
            }
        }
        double norm = vec.norm();
        if (norm > 0.0) {
            for (double& c : vec.components) c /= norm;
        }
        return vec;
    }

  private:
    static uint64_t fnv1a(const char* data, size_t size, uint64_t seed) {
        uint64_t hash = 1469598103934665603ULL ^ seed;
        for (size_t i = 0; i < size; ++i) {
            hash ^= static_cast<unsigned char>(data[i]);
            hash *= 1099511628211ULL;
        }
        return hash;
    }

    size_t dimension_;
    uint64_t seed_;
};

/// Line-delimited {text, vector} records; lookups outside the store fail.
class FileVectorStore : public EmbeddingProvider {
  public:
    explicit FileVectorStore(std::string_view records) {
        size_t pos = 0;
        while (pos < records.size()) {
            size_t end = records.find('\n', pos);
            if (end == std::string_view::npos) end = records.size();
            auto line = records.substr(pos, end - pos);
            pos = end + 1;
            if (line.empty()) continue;
            nlohmann::json rec = nlohmann::json::parse(line);
            EmbeddingVector vec{rec.at("vector").get<std::vector<double>>()};
            if (dimension_ == 0) dimension_ = vec.dimension();
            if (vec.dimension() != dimension_) {
                throw ConfigError("vector store mixes dimensions " + std::to_string(dimension_) +
                                  " and " + std::to_string(vec.dimension()));
            }
            vectors_[rec.at("text").get<std::string>()] = std::move(vec);
        }
    }

    EmbeddingVector embed(const std::string& text) override {
        auto it = vectors_.find(text);
        if (it == vectors_.end()) throw LookupError("no stored embedding for '" + text + "'");
        return it->second;
    }

    [[nodiscard]] size_t size() const { return vectors_.size(); }

  private:
    std::unordered_map<std::string, EmbeddingVector> vectors_;
    size_t dimension_ = 0;
};

/// Thread-safe memoization over any provider; rejects dimension drift.
class CachingProvider : public EmbeddingProvider {
  public:
    explicit CachingProvider(std::shared_ptr<EmbeddingProvider> inner) : inner_(std::move(inner)) {}

    EmbeddingVector embed(const std::string& text) override {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find(text);
            if (it != cache_.end()) return it->second;
        }
        EmbeddingVector vec = inner_->embed(text);
        std::lock_guard<std::mutex> lock(mutex_);
        if (!cache_.empty() && vec.dimension() != cache_.begin()->second.dimension()) {
            throw ConfigError("provider returned dimension " + std::to_string(vec.dimension()) +
                              " but cache holds " +
                              std::to_string(cache_.begin()->second.dimension()));
        }
        return cache_.emplace(text, std::move(vec)).first->second;
    }

  private:
    std::shared_ptr<EmbeddingProvider> inner_;
    std::unordered_map<std::string, EmbeddingVector> cache_;
    std::mutex mutex_;
};

} // namespace cmom
