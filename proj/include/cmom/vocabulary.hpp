#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "cmom/owl.hpp"

namespace cmom {

/// Base confidence of a name given where it came from.
inline double base_weight(LabelProvenance provenance) {
    switch (provenance) {
    case LabelProvenance::LocalName: return 1.0;
    case LabelProvenance::Label: return 0.95;
    case LabelProvenance::ExactSynonym:
    case LabelProvenance::InternalSynonym: return 0.9;
    case LabelProvenance::OtherSynonym:
    case LabelProvenance::ExternalSynonym: return 0.85;
    case LabelProvenance::Formula: return 0.8;
    }
    return 0.0;
}

/// Penalizes classes with many names of the same provenance:
/// max(base - group_size/100, 0).
inline double corrected_weight(double base, int group_size) {
    return std::max(base - static_cast<double>(group_size) / 100.0, 0.0);
}

/// Lowercases and splits on non-alphanumeric runs. No stemming, no stopwords.
/// Throws EmptyNameError when nothing survives.
inline std::vector<std::string> normalize_name(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    if (tokens.empty()) throw EmptyNameError("name '" + std::string(text) + "' has no tokens");
    return tokens;
}

struct WeightedName {
    std::string text;
    std::vector<std::string> tokens;
    Iri class_iri;
    LabelProvenance provenance = LabelProvenance::Label;
    double weight = 0.0;
    std::string ontology_tag;

    [[nodiscard]] std::vector<std::string> token_set() const {
        auto set = tokens;
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        return set;
    }
};

enum class VocabularyKind { Source, Target };

/// Token-indexed list of weighted names; the target kind unifies every target
/// ontology into one vocabulary.
class Vocabulary {
  public:
    Vocabulary() = default;
    explicit Vocabulary(VocabularyKind kind) : kind_(kind) {}

    [[nodiscard]] VocabularyKind kind() const { return kind_; }
    [[nodiscard]] const std::vector<WeightedName>& names() const { return names_; }
    [[nodiscard]] const std::map<std::string, size_t>& class_counts() const { return class_counts_; }

    [[nodiscard]] size_t total_class_count() const {
        size_t total = 0;
        for (const auto& [tag, count] : class_counts_) total += count;
        return total;
    }

    void add(WeightedName name) {
        size_t index = names_.size();
        for (const auto& token : name.token_set()) token_index_[token].push_back(index);
        names_.push_back(std::move(name));
    }

    void record_ontology(const std::string& tag, size_t class_count) {
        class_counts_[tag] += class_count;
    }

    /// Indices of every name containing the token.
    [[nodiscard]] std::span<const size_t> names_with_token(const std::string& token) const {
        static const std::vector<size_t> none;
        auto it = token_index_.find(token);
        return it == token_index_.end() ? std::span<const size_t>(none)
                                        : std::span<const size_t>(it->second);
    }

    /// Names of one class, in insertion order.
    [[nodiscard]] std::vector<const WeightedName*> names_of(const Iri& class_iri) const {
        std::vector<const WeightedName*> out;
        for (const auto& n : names_) {
            if (n.class_iri == class_iri) out.push_back(&n);
        }
        return out;
    }

    [[nodiscard]] std::vector<Iri> class_iris() const {
        std::vector<Iri> out;
        for (const auto& n : names_) {
            if (out.empty() || !(out.back() == n.class_iri)) out.push_back(n.class_iri);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

  private:
    VocabularyKind kind_ = VocabularyKind::Target;
    std::vector<WeightedName> names_;
    std::unordered_map<std::string, std::vector<size_t>> token_index_;
    std::map<std::string, size_t> class_counts_;
};

/// One WeightedName per (class, name) pair with the group-corrected weight.
/// Names that normalize to zero tokens are skipped.
inline Vocabulary build_vocabulary(std::span<const Ontology> ontologies, VocabularyKind kind) {
    Vocabulary vocab(kind);
    for (const auto& onto : ontologies) {
        vocab.record_ontology(onto.namespace_tag, onto.total_class_count());
        for (const auto& [iri, cls] : onto.classes) {
            std::map<LabelProvenance, int> group_sizes;
            for (const auto& [text, prov] : cls.names) ++group_sizes[prov];
            for (const auto& [text, prov] : cls.names) {
                WeightedName name;
                name.text = text;
                try {
                    name.tokens = normalize_name(text);
                } catch (const EmptyNameError&) {
                    continue;
                }
                name.class_iri = iri;
                name.provenance = prov;
                name.weight = corrected_weight(base_weight(prov), group_sizes[prov]);
                name.ontology_tag = onto.namespace_tag;
                vocab.add(std::move(name));
            }
        }
    }
    return vocab;
}

inline nlohmann::json to_json(const WeightedName& name) {
    return {{"class_iri", name.class_iri.value()}, {"text", name.text},
            {"tokens", name.tokens},               {"provenance", to_string(name.provenance)},
            {"weight", name.weight},               {"ontology_tag", name.ontology_tag}};
}

/// Line-delimited dump; one record per name plus one leading record with the
/// per-ontology class counts.
inline std::string dump_vocabulary(const Vocabulary& vocab) {
    std::string out;
    nlohmann::json header = {{"kind", vocab.kind() == VocabularyKind::Source ? "source" : "target"},
                             {"class_counts", vocab.class_counts()}};
    out += header.dump();
    out += '\n';
    for (const auto& name : vocab.names()) {
        out += to_json(name).dump();
        out += '\n';
    }
    return out;
}

inline Vocabulary load_vocabulary(std::string_view text) {
    size_t pos = 0;
    auto next_line = [&]() -> std::string_view {
        if (pos >= text.size()) return {};
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        return line;
    };
    auto header_line = next_line();
    if (header_line.empty()) throw Error("vocabulary dump is empty");
    nlohmann::json header = nlohmann::json::parse(header_line);
    Vocabulary vocab(header.at("kind") == "source" ? VocabularyKind::Source
                                                   : VocabularyKind::Target);
    for (const auto& [tag, count] : header.at("class_counts").items()) {
        vocab.record_ontology(tag, count.get<size_t>());
    }
    while (pos <= text.size()) {
        auto line = next_line();
        if (line.empty()) {
            if (pos >= text.size()) break;
            continue;
        }
        nlohmann::json rec = nlohmann::json::parse(line);
        WeightedName name;
        name.class_iri = Iri(rec.at("class_iri").get<std::string>());
        name.text = rec.at("text").get<std::string>();
        name.tokens = rec.at("tokens").get<std::vector<std::string>>();
        name.provenance = provenance_from_string(rec.at("provenance").get<std::string>());
        name.weight = rec.at("weight").get<double>();
        name.ontology_tag = rec.at("ontology_tag").get<std::string>();
        vocab.add(std::move(name));
    }
    return vocab;
}

} // namespace cmom
