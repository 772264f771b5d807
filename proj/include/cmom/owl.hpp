#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmom/errors.hpp"

namespace cmom {

/// An absolute IRI. Comparison is exact byte equality after whitespace trimming.
class Iri {
  public:
    Iri() = default;

    explicit Iri(std::string_view text) {
        size_t b = 0, e = text.size();
        while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
        value_.assign(text.substr(b, e - b));
        if (value_.empty()) throw Error("IRI is empty");
        if (value_.find("://") == std::string::npos) {
            throw Error("IRI '" + value_ + "' is not absolute (missing scheme separator)");
        }
    }

    [[nodiscard]] const std::string& value() const { return value_; }

    /// Final path segment: text after the last '/' or '#'.
    [[nodiscard]] std::string_view segment() const {
        size_t cut = value_.find_last_of("/#");
        return cut == std::string::npos ? std::string_view(value_)
                                        : std::string_view(value_).substr(cut + 1);
    }

    auto operator<=>(const Iri&) const = default;

  private:
    std::string value_;
};

struct IriHash {
    size_t operator()(const Iri& iri) const { return std::hash<std::string>()(iri.value()); }
};

/// Where a class name came from; drives its base confidence weight.
enum class LabelProvenance {
    LocalName,
    Label,
    ExactSynonym,
    InternalSynonym,
    OtherSynonym,
    ExternalSynonym,
    Formula,
};

inline std::string_view to_string(LabelProvenance p) {
    switch (p) {
    case LabelProvenance::LocalName: return "local-name";
    case LabelProvenance::Label: return "label";
    case LabelProvenance::ExactSynonym: return "exact-synonym";
    case LabelProvenance::InternalSynonym: return "internal-synonym";
    case LabelProvenance::OtherSynonym: return "other-synonym";
    case LabelProvenance::ExternalSynonym: return "external-synonym";
    case LabelProvenance::Formula: return "formula";
    }
    return "unknown";
}

inline LabelProvenance provenance_from_string(std::string_view s) {
    if (s == "local-name") return LabelProvenance::LocalName;
    if (s == "label") return LabelProvenance::Label;
    if (s == "exact-synonym") return LabelProvenance::ExactSynonym;
    if (s == "internal-synonym") return LabelProvenance::InternalSynonym;
    if (s == "other-synonym") return LabelProvenance::OtherSynonym;
    if (s == "external-synonym") return LabelProvenance::ExternalSynonym;
    if (s == "formula") return LabelProvenance::Formula;
    throw Error("unknown label provenance '" + std::string(s) + "'");
}

struct OntologyClass {
    Iri iri;
    std::vector<std::pair<std::string, LabelProvenance>> names;
    std::set<Iri> direct_superclasses;
    std::set<Iri> direct_subclasses;

    /// First rdfs:label, else derived local name, else IRI segment.
    [[nodiscard]] std::string main_label() const {
        for (const auto& [text, prov] : names) {
            if (prov == LabelProvenance::Label) return text;
        }
        for (const auto& [text, prov] : names) {
            if (prov == LabelProvenance::LocalName) return text;
        }
        return std::string(iri.segment());
    }
};

/// A class expression over named classes: Named | Intersection | Union |
/// SomeValuesFrom. Exactly the constructs logical definitions use; anything
/// else is rejected at parse time.
class ClassExpression {
  public:
    enum class Kind { Named, Intersection, Union, SomeValuesFrom };

    static ClassExpression named(Iri iri) {
        ClassExpression e(Kind::Named);
        e.iri_ = std::move(iri);
        return e;
    }

    static ClassExpression intersection(std::vector<ClassExpression> members) {
        if (members.size() < 2) throw Error("intersectionOf needs at least two members");
        ClassExpression e(Kind::Intersection);
        e.children_ = std::move(members);
        return e;
    }

    static ClassExpression union_of(std::vector<ClassExpression> members) {
        if (members.size() < 2) throw Error("unionOf needs at least two members");
        ClassExpression e(Kind::Union);
        e.children_ = std::move(members);
        return e;
    }

    static ClassExpression some_values_from(Iri property, ClassExpression filler) {
        ClassExpression e(Kind::SomeValuesFrom);
        e.iri_ = std::move(property);
        e.children_.push_back(std::move(filler));
        return e;
    }

    [[nodiscard]] Kind kind() const { return kind_; }

    /// Named: the class IRI. SomeValuesFrom: the property IRI.
    [[nodiscard]] const Iri& iri() const { return iri_; }

    [[nodiscard]] const std::vector<ClassExpression>& members() const { return children_; }

    [[nodiscard]] const ClassExpression& filler() const { return children_.front(); }

    bool operator==(const ClassExpression& other) const {
        return kind_ == other.kind_ && iri_ == other.iri_ && children_ == other.children_;
    }

    /// Named class IRIs in document order (properties excluded), duplicates kept.
    [[nodiscard]] std::vector<Iri> named_class_iris() const {
        std::vector<Iri> out;
        collect(out, /*classes=*/true, /*properties=*/false);
        return out;
    }

    /// Property IRIs of all existential restrictions, document order.
    [[nodiscard]] std::vector<Iri> property_iris() const {
        std::vector<Iri> out;
        collect(out, /*classes=*/false, /*properties=*/true);
        return out;
    }

    [[nodiscard]] bool contains_iri(const Iri& iri) const {
        if (kind_ != Kind::Intersection && kind_ != Kind::Union && iri_ == iri) return true;
        return std::any_of(children_.begin(), children_.end(),
                           [&](const ClassExpression& c) { return c.contains_iri(iri); });
    }

  private:
    explicit ClassExpression(Kind kind) : kind_(kind) {}

    void collect(std::vector<Iri>& out, bool classes, bool properties) const {
        switch (kind_) {
        case Kind::Named:
            if (classes) out.push_back(iri_);
            break;
        case Kind::SomeValuesFrom:
            if (properties) out.push_back(iri_);
            filler().collect(out, classes, properties);
            break;
        case Kind::Intersection:
        case Kind::Union:
            for (const auto& m : children_) m.collect(out, classes, properties);
            break;
        }
    }

    Kind kind_;
    Iri iri_;
    std::vector<ClassExpression> children_;
};

/// One complex equivalence mapping: source class = expression over target classes.
struct ComplexMapping {
    Iri source;
    ClassExpression expression;
    std::optional<double> confidence;

    static ComplexMapping make(Iri source, ClassExpression expression,
                               std::optional<double> confidence = std::nullopt) {
        if (expression.contains_iri(source)) {
            throw Error("mapping expression for " + source.value() + " references its own source");
        }
        return ComplexMapping{std::move(source), std::move(expression), confidence};
    }

    static constexpr std::string_view relation = "equivalence";

    bool operator==(const ComplexMapping& other) const {
        return source == other.source && expression == other.expression;
    }
};

struct Ontology {
    std::string namespace_tag;
    std::map<Iri, OntologyClass> classes;
    /// equivalentClass axioms in the supported subset, harvested at parse time.
    std::map<Iri, ClassExpression> logical_definitions;
    std::vector<std::string> warnings;

    [[nodiscard]] size_t total_class_count() const { return classes.size(); }

    [[nodiscard]] const OntologyClass* find(const Iri& iri) const {
        auto it = classes.find(iri);
        return it == classes.end() ? nullptr : &it->second;
    }
};

} // namespace cmom
