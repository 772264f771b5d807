#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "cmom/rdfxml.hpp"

namespace cmom {

/// The ubiquitous abnormal-modifier class; excluded from signatures because
/// its presence carries no pattern information.
inline constexpr std::string_view kAbnormalModifierSegment = "PATO_0000460";

/// Multiset of ontology tags with cardinality, e.g. {UBERON:2, PATO:1}.
class NamespaceSignature {
  public:
    NamespaceSignature() = default;

    void add(const std::string& tag, int count = 1) { counts_[tag] += count; }

    [[nodiscard]] const std::map<std::string, int>& counts() const { return counts_; }
    [[nodiscard]] bool empty() const { return counts_.empty(); }

    [[nodiscard]] int total() const {
        int sum = 0;
        for (const auto& [tag, count] : counts_) sum += count;
        return sum;
    }

    /// Sub-multiset test: every tag of this signature occurs in `other` at
    /// least as often.
    [[nodiscard]] bool subset_of(const NamespaceSignature& other) const {
        for (const auto& [tag, count] : counts_) {
            auto it = other.counts_.find(tag);
            if (it == other.counts_.end() || it->second < count) return false;
        }
        return true;
    }

    bool operator==(const NamespaceSignature&) const = default;

  private:
    std::map<std::string, int> counts_;
};

/// Ontology tag of an IRI per the OBO convention: the alphabetic prefix of the
/// final path segment, uppercased. Falls back to the whole segment (with a
/// warning) when no alphabetic prefix exists.
inline std::string namespace_tag(const Iri& iri, std::vector<std::string>* warnings = nullptr) {
    std::string_view seg = iri.segment();
    size_t cut = 0;
    while (cut < seg.size() && std::isalpha(static_cast<unsigned char>(seg[cut]))) ++cut;
    std::string tag(cut > 0 ? seg.substr(0, cut) : seg);
    if (cut == 0 && warnings != nullptr) {
        warnings->push_back("IRI " + iri.value() + " has no alphabetic tag prefix; using '" +
                            tag + "'");
    }
    for (char& c : tag) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return tag;
}

/// Namespace multiset of a class set. Property namespaces (RO, BFO) and the
/// abnormal modifier class are not counted.
inline NamespaceSignature namespace_signature(std::span<const Iri> class_iris,
                                              std::vector<std::string>* warnings = nullptr) {
    NamespaceSignature sig;
    for (const auto& iri : class_iris) {
        if (iri.segment() == kAbnormalModifierSegment) continue;
        std::string tag = namespace_tag(iri, warnings);
        if (tag == "RO" || tag == "BFO") continue;
        sig.add(tag);
    }
    return sig;
}

/// A reference logical definition usable as an in-context example.
struct MappingExample {
    ComplexMapping mapping;
    std::string owl_text;
    NamespaceSignature signature;

    static MappingExample from_mapping(ComplexMapping mapping,
                                       const std::map<Iri, std::string>* labels = nullptr) {
        MappingExample example{std::move(mapping), {}, {}};
        example.owl_text = serialize_mapping(example.mapping, labels);
        auto classes = example.mapping.expression.named_class_iris();
        example.signature = namespace_signature(classes);
        return example;
    }
};

struct PatternConfig {
    /// Keep at most this many matches; the closest signatures win.
    size_t max_examples = 10;
};

/// Keeps examples whose signature contains the candidate signature as a
/// sub-multiset, in pool order. The query's own source class never appears.
/// When more match than the cap, the ones with the smallest total-count
/// difference are kept (ties by pool order).
inline std::vector<MappingExample> filter_examples(std::span<const MappingExample> pool,
                                                   const NamespaceSignature& candidate_signature,
                                                   const Iri* query_source = nullptr,
                                                   const PatternConfig& config = {}) {
    struct Match {
        size_t pool_index;
        int distance;
    };
    std::vector<Match> matches;
    for (size_t i = 0; i < pool.size(); ++i) {
        const auto& example = pool[i];
        if (query_source != nullptr && example.mapping.source == *query_source) continue;
        if (!candidate_signature.subset_of(example.signature)) continue;
        matches.push_back({i, example.signature.total() - candidate_signature.total()});
    }
    if (matches.size() > config.max_examples) {
        std::stable_sort(matches.begin(), matches.end(),
                         [](const Match& a, const Match& b) { return a.distance < b.distance; });
        matches.resize(config.max_examples);
        std::sort(matches.begin(), matches.end(),
                  [](const Match& a, const Match& b) { return a.pool_index < b.pool_index; });
    }
    std::vector<MappingExample> kept;
    kept.reserve(matches.size());
    for (const auto& m : matches) kept.push_back(pool[m.pool_index]);
    return kept;
}

/// Harvests the logical definitions of an ontology into an example pool.
inline std::vector<MappingExample> harvest_examples(const Ontology& ontology,
                                                    const std::map<Iri, std::string>* labels = nullptr) {
    std::vector<MappingExample> pool;
    for (const auto& [iri, expr] : ontology.logical_definitions) {
        pool.push_back(MappingExample::from_mapping(ComplexMapping::make(iri, expr), labels));
    }
    return pool;
}

inline nlohmann::json signature_to_json(const NamespaceSignature& sig) {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& [tag, count] : sig.counts()) obj[tag] = count;
    return obj;
}

inline NamespaceSignature signature_from_json(const nlohmann::json& obj) {
    NamespaceSignature sig;
    for (const auto& [tag, count] : obj.items()) sig.add(tag, count.get<int>());
    return sig;
}

/// Line-delimited index of an example pool: {source_iri, signature, file}.
inline std::string dump_example_index(std::span<const MappingExample> pool,
                                      std::span<const std::string> files) {
    std::string out;
    for (size_t i = 0; i < pool.size(); ++i) {
        nlohmann::json rec = {{"source_iri", pool[i].mapping.source.value()},
                              {"signature", signature_to_json(pool[i].signature)},
                              {"file", i < files.size() ? files[i] : ""}};
        out += rec.dump();
        out += '\n';
    }
    return out;
}

} // namespace cmom
