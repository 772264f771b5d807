#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "cmom/embedding.hpp"
#include "cmom/http.hpp"
#include "cmom/vocabulary.hpp"

namespace cmom {

enum class CandidateOrigin { Lexical, Embedding };

inline std::string_view to_string(CandidateOrigin origin) {
    return origin == CandidateOrigin::Lexical ? "lexical" : "embedding";
}

/// One proposed set of target classes for a source class.
struct CandidateSet {
    std::vector<Iri> classes; // duplicates allowed, selection order preserved
    double score = 0.0;
    CandidateOrigin origin = CandidateOrigin::Lexical;
    std::string source_name;

    [[nodiscard]] std::vector<Iri> class_multiset_key() const {
        auto key = classes;
        std::sort(key.begin(), key.end());
        return key;
    }
};

struct SelectionConfig {
    double alpha = 0.2;            // embedding recursion stop threshold
    int max_combo_size = 6;        // lexical cover size cap
    int max_results_per_source = 10;
    int max_accepted_targets = 8;  // embedding recursion depth guard
};

/// Every combination of target names with pairwise-disjoint token sets that
/// exactly covers the source token set; one CandidateSet per combination,
/// scored as the product of the member weights.
inline std::vector<CandidateSet> lexical_select(const WeightedName& source_name,
                                                const Vocabulary& vocab,
                                                const SelectionConfig& config = {}) {
    // Source token set in first-occurrence order; coverage is over sets.
    std::vector<std::string> source_tokens;
    for (const auto& t : source_name.tokens) {
        if (std::find(source_tokens.begin(), source_tokens.end(), t) == source_tokens.end()) {
            source_tokens.push_back(t);
        }
    }
    std::set<std::string> source_set(source_tokens.begin(), source_tokens.end());

    // Names sharing at least one word, narrowed to token subsets of the source.
    std::set<size_t> eligible_ids;
    for (const auto& token : source_tokens) {
        for (size_t id : vocab.names_with_token(token)) eligible_ids.insert(id);
    }
    struct Entry {
        size_t id;
        std::vector<std::string> token_set;
    };
    std::vector<Entry> eligible;
    for (size_t id : eligible_ids) {
        auto set = vocab.names()[id].token_set();
        bool subset = std::all_of(set.begin(), set.end(),
                                  [&](const std::string& t) { return source_set.count(t) > 0; });
        if (subset) eligible.push_back({id, std::move(set)});
    }

    // Index eligible names by which source token they contain.
    std::map<std::string, std::vector<size_t>> by_token; // token -> indices into `eligible`
    for (size_t i = 0; i < eligible.size(); ++i) {
        for (const auto& t : eligible[i].token_set) by_token[t].push_back(i);
    }

    std::vector<CandidateSet> results;
    std::vector<size_t> chosen;
    std::set<std::string> uncovered(source_set);

    // Exact cover search: branch on the first uncovered source token, so each
    // cover is produced exactly once.
    auto emit = [&] {
        CandidateSet set;
        set.origin = CandidateOrigin::Lexical;
        set.source_name = source_name.text;
        set.score = 1.0;
        for (size_t i : chosen) {
            const auto& name = vocab.names()[eligible[i].id];
            set.classes.push_back(name.class_iri);
            set.score *= name.weight;
        }
        results.push_back(std::move(set));
    };

    std::function<void()> recurse = [&] {
        if (uncovered.empty()) {
            emit();
            return;
        }
        if (static_cast<int>(chosen.size()) >= config.max_combo_size) return;
        std::string pivot;
        for (const auto& t : source_tokens) {
            if (uncovered.count(t) > 0) {
                pivot = t;
                break;
            }
        }
        auto it = by_token.find(pivot);
        if (it == by_token.end()) return;
        for (size_t i : it->second) {
            const auto& set = eligible[i].token_set;
            bool fits = std::all_of(set.begin(), set.end(),
                                    [&](const std::string& t) { return uncovered.count(t) > 0; });
            if (!fits) continue;
            for (const auto& t : set) uncovered.erase(t);
            chosen.push_back(i);
            recurse();
            chosen.pop_back();
            for (const auto& t : set) uncovered.insert(t);
        }
    };
    recurse();
    return results;
}

/// Recursive embedding subtraction: repeatedly take the target name most
/// similar to the residual; below the alpha threshold the final best match is
/// still added and the recursion stops. Score is cos(source, sum of picks).
inline std::optional<CandidateSet> embedding_select(const WeightedName& source_name,
                                                    const Vocabulary& vocab,
                                                    EmbeddingProvider& provider,
                                                    const SelectionConfig& config = {}) {
    if (vocab.names().empty()) return std::nullopt;

    struct Target {
        const WeightedName* name;
        EmbeddingVector vec;
    };
    std::vector<Target> targets;
    targets.reserve(vocab.names().size());
    for (const auto& name : vocab.names()) targets.push_back({&name, provider.embed(name.text)});

    EmbeddingVector source_vec = provider.embed(source_name.text);
    EmbeddingVector residual = source_vec;

    CandidateSet set;
    set.origin = CandidateOrigin::Embedding;
    set.source_name = source_name.text;

    EmbeddingVector sum;
    sum.components.assign(source_vec.dimension(), 0.0);

    int accepted = 0;
    while (residual.norm() > 1e-12) {
        const Target* best = nullptr;
        double best_cos = 0.0;
        for (const auto& t : targets) {
            double c = cosine(residual, t.vec);
            if (best == nullptr || c > best_cos ||
                (c == best_cos && (t.name->class_iri < best->name->class_iri ||
                                   (t.name->class_iri == best->name->class_iri &&
                                    t.name->text < best->name->text)))) {
                best = &t;
                best_cos = c;
            }
        }
        set.classes.push_back(best->name->class_iri);
        sum += best->vec;
        if (best_cos < config.alpha) break; // stop branch still adds the match
        residual -= best->vec;
        ++accepted;
        if (accepted >= config.max_accepted_targets) break;
    }
    if (set.classes.empty()) return std::nullopt; // null source embedding
    set.score = cosine(source_vec, sum);
    return set;
}

/// Deduplicates identical class multisets (keeping the best score), orders by
/// score descending and returns the top set plus every set tied with it.
inline std::vector<CandidateSet> aggregate(std::vector<CandidateSet> sets,
                                           const SelectionConfig& config = {}) {
    if (sets.empty()) return {};

    std::map<std::vector<Iri>, CandidateSet> best;
    for (auto& set : sets) {
        auto key = set.class_multiset_key();
        auto it = best.find(key);
        if (it == best.end() || set.score > it->second.score) best[key] = std::move(set);
    }
    std::vector<CandidateSet> unique;
    unique.reserve(best.size());
    for (auto& [key, set] : best) unique.push_back(std::move(set));
    std::stable_sort(unique.begin(), unique.end(), [](const CandidateSet& a, const CandidateSet& b) {
        return a.score > b.score;
    });

    std::vector<CandidateSet> out;
    double top = unique.front().score;
    for (auto& set : unique) {
        if (set.score < top) break;
        out.push_back(std::move(set));
        if (static_cast<int>(out.size()) >= config.max_results_per_source) break;
    }
    return out;
}

/// Convenience overload matching the two-strategy shape.
inline std::vector<CandidateSet> aggregate(std::vector<CandidateSet> lexical,
                                           std::optional<CandidateSet> embedding,
                                           const SelectionConfig& config = {}) {
    if (embedding.has_value()) lexical.push_back(std::move(*embedding));
    return aggregate(std::move(lexical), config);
}

/// OpenAI-compatible embeddings endpoint; caps concurrent requests.
class RemoteEmbeddingProvider : public EmbeddingProvider {
  public:
    RemoteEmbeddingProvider(std::string endpoint, std::string model, std::string api_key,
                            HttpPostFn post, RetryPolicy retry = {}, int max_in_flight = 4)
        : endpoint_(std::move(endpoint)), model_(std::move(model)), api_key_(std::move(api_key)),
          post_(std::move(post)), retry_(retry),
          semaphore_(max_in_flight > 0 ? max_in_flight : 1) {}

    EmbeddingVector embed(const std::string& text) override {
        nlohmann::json request = {{"model", model_}, {"input", nlohmann::json::array({text})}};
        HttpHeaders headers;
        if (!api_key_.empty()) headers.emplace_back("Authorization", "Bearer " + api_key_);
        HttpResult result = [&] {
            detail::SemaphoreGuard guard(semaphore_);
            return post_with_retry(post_, endpoint_ + "/embeddings", headers, request.dump(),
                                   retry_);
        }();
        nlohmann::json body = nlohmann::json::parse(result.body);
        EmbeddingVector vec{body.at("data").at(0).at("embedding").get<std::vector<double>>()};
        if (expected_dimension_ == 0) expected_dimension_ = vec.dimension();
        if (vec.dimension() != expected_dimension_) {
            throw ConfigError("embedding endpoint changed dimension from " +
                              std::to_string(expected_dimension_) + " to " +
                              std::to_string(vec.dimension()));
        }
        return vec;
    }

  private:
    std::string endpoint_;
    std::string model_;
    std::string api_key_;
    HttpPostFn post_;
    RetryPolicy retry_;
    detail::Semaphore semaphore_;
    size_t expected_dimension_ = 0;
};

inline nlohmann::json to_json(const Iri& source, const CandidateSet& set) {
    std::vector<std::string> classes;
    for (const auto& c : set.classes) classes.push_back(c.value());
    return {{"source_iri", source.value()},
            {"source_name", set.source_name},
            {"classes", classes},
            {"score", set.score},
            {"origin", to_string(set.origin)}};
}

inline CandidateSet candidate_from_json(const nlohmann::json& rec, Iri* source = nullptr) {
    CandidateSet set;
    if (source != nullptr) *source = Iri(rec.at("source_iri").get<std::string>());
    set.source_name = rec.at("source_name").get<std::string>();
    for (const auto& c : rec.at("classes")) set.classes.emplace_back(c.get<std::string>());
    set.score = rec.at("score").get<double>();
    set.origin = rec.at("origin") == "lexical" ? CandidateOrigin::Lexical
                                               : CandidateOrigin::Embedding;
    return set;
}

} // namespace cmom
