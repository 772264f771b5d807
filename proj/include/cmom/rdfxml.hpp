#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cmom/owl.hpp"
#include "cmom/xml.hpp"

namespace cmom {

namespace ns {
inline constexpr std::string_view rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view owl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view obo_in_owl = "http://www.geneontology.org/formats/oboInOwl#";
} // namespace ns

struct OwlParseOptions {
    /// Ontology tag (e.g. "UBERON"); derived from class IRIs when empty.
    std::string namespace_tag;
    /// Annotation property IRI -> provenance, for synonym-style properties.
    std::map<std::string, LabelProvenance> synonym_properties = default_synonym_properties();

    static std::map<std::string, LabelProvenance> default_synonym_properties() {
        const std::string obo_in_owl(ns::obo_in_owl);
        return {
            {obo_in_owl + "hasExactSynonym", LabelProvenance::ExactSynonym},
            {obo_in_owl + "hasRelatedSynonym", LabelProvenance::OtherSynonym},
            {obo_in_owl + "hasBroadSynonym", LabelProvenance::OtherSynonym},
            {obo_in_owl + "hasNarrowSynonym", LabelProvenance::OtherSynonym},
            {"http://purl.obolibrary.org/obo/chebi/formula", LabelProvenance::Formula},
        };
    }
};

namespace detail {

inline const std::string* resource_attr(const xml::Element& el) {
    if (const auto* r = el.attr(ns::rdf, "resource")) return r;
    return nullptr;
}

inline const std::string* about_attr(const xml::Element& el) {
    if (const auto* r = el.attr(ns::rdf, "about")) return r;
    return nullptr;
}

/// Builds a ClassExpression from the element standing for a class expression:
/// rdf:Description/owl:Class with rdf:about, anonymous owl:Class with
/// intersectionOf/unionOf, or owl:Restriction with someValuesFrom.
inline ClassExpression expression_from_element(const xml::Element& el) {
    const bool is_class = el.is(ns::owl, "Class") || el.is(ns::rdf, "Description");
    if (is_class) {
        if (const auto* about = about_attr(el)) return ClassExpression::named(Iri(*about));
        // Anonymous class: expect one intersectionOf/unionOf (or a lone child
        // expression element, which we dissolve).
        const xml::Element* combinator = nullptr;
        for (const auto& child : el.children) {
            if (child.is(ns::owl, "intersectionOf") || child.is(ns::owl, "unionOf")) {
                combinator = &child;
            } else if (child.is(ns::owl, "complementOf") || child.is(ns::owl, "oneOf")) {
                throw UnsupportedConstructError("owl:" + child.local, child.line);
            }
        }
        if (combinator != nullptr) {
            std::vector<ClassExpression> members;
            for (const auto& m : combinator->children) members.push_back(expression_from_element(m));
            if (members.empty() && !combinator->text.empty()) {
                throw UnsupportedConstructError("non-Collection " + combinator->name,
                                                combinator->line);
            }
            if (members.size() == 1) return std::move(members.front());
            return combinator->local == "intersectionOf"
                       ? ClassExpression::intersection(std::move(members))
                       : ClassExpression::union_of(std::move(members));
        }
        if (el.children.size() == 1) return expression_from_element(el.children.front());
        throw UnsupportedConstructError("anonymous class without intersectionOf/unionOf", el.line);
    }

    if (el.is(ns::owl, "Restriction")) {
        const xml::Element* on_property = nullptr;
        const xml::Element* some = nullptr;
        for (const auto& child : el.children) {
            if (child.is(ns::owl, "onProperty")) {
                on_property = &child;
            } else if (child.is(ns::owl, "someValuesFrom")) {
                some = &child;
            } else {
                throw UnsupportedConstructError("owl:" + child.local, child.line);
            }
        }
        if (on_property == nullptr) throw ParseError("owl:Restriction without onProperty", el.line);
        if (some == nullptr) {
            throw UnsupportedConstructError("owl:Restriction without someValuesFrom", el.line);
        }
        // Both attribute and nested-element property forms occur in the wild.
        const std::string* prop = resource_attr(*on_property);
        if (prop == nullptr && on_property->children.size() == 1) {
            prop = about_attr(on_property->children.front());
        }
        if (prop == nullptr) {
            throw ParseError("owl:onProperty without a property IRI", on_property->line);
        }

        ClassExpression filler = [&] {
            if (const auto* r = resource_attr(*some)) return ClassExpression::named(Iri(*r));
            if (some->children.size() != 1) {
                throw ParseError("owl:someValuesFrom expects one class expression", some->line);
            }
            return expression_from_element(some->children.front());
        }();
        return ClassExpression::some_values_from(Iri(*prop), std::move(filler));
    }

    throw UnsupportedConstructError(el.name, el.line);
}

inline ClassExpression expression_from_axiom(const xml::Element& equiv) {
    if (const auto* r = resource_attr(equiv)) return ClassExpression::named(Iri(*r));
    if (equiv.children.size() != 1) {
        throw ParseError("owl:equivalentClass expects one class expression", equiv.line);
    }
    return expression_from_element(equiv.children.front());
}

/// OBO-style local name: the IRI segment with '_' -> ' ', skipped when the
/// segment is an all-digit id or a PREFIX_DIGITS ontology id and therefore
/// carries no lexical content.
inline std::string derive_local_name(const Iri& iri) {
    std::string_view seg = iri.segment();
    if (seg.empty()) return {};
    std::vector<std::string_view> parts;
    size_t start = 0;
    for (size_t i = 0; i <= seg.size(); ++i) {
        if (i == seg.size() || seg[i] == '_') {
            parts.push_back(seg.substr(start, i - start));
            start = i + 1;
        }
    }
    auto all_digits = [](std::string_view s) {
        return !s.empty() &&
               std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
    };
    auto all_alpha = [](std::string_view s) {
        return !s.empty() &&
               std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalpha(c); });
    };
    bool numeric_id = std::all_of(parts.begin(), parts.end(), all_digits);
    bool obo_id = parts.size() >= 2 && all_alpha(parts.front()) &&
                  std::all_of(parts.begin() + 1, parts.end(), all_digits);
    if (numeric_id || obo_id) return {};
    std::string name;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) name.push_back(' ');
        name.append(parts[i]);
    }
    return name;
}

inline bool is_class_declaration(const xml::Element& el) { return el.is(ns::owl, "Class"); }

inline void collect_declarations(const xml::Element& root, std::vector<const xml::Element*>& out) {
    if (is_class_declaration(root)) {
        out.push_back(&root);
        return;
    }
    for (const auto& child : root.children) {
        if (is_class_declaration(child)) out.push_back(&child);
    }
}

} // namespace detail

/// Extracts every owl:Class with its labels, synonyms, asserted named
/// superclasses, and any equivalentClass axiom in the supported subset.
inline Ontology parse_ontology(std::string_view document, const OwlParseOptions& options = {}) {
    xml::Element root = xml::parse(document);
    Ontology onto;
    onto.namespace_tag = options.namespace_tag;

    std::vector<const xml::Element*> declarations;
    detail::collect_declarations(root, declarations);

    for (const xml::Element* decl : declarations) {
        const std::string* about = detail::about_attr(*decl);
        if (about == nullptr) {
            onto.warnings.push_back("owl:Class without an IRI skipped (line " +
                                    std::to_string(decl->line) + ")");
            continue;
        }
        Iri iri;
        try {
            iri = Iri(*about);
        } catch (const Error& e) {
            onto.warnings.push_back(std::string("class skipped: ") + e.what());
            continue;
        }
        bool fresh = onto.classes.find(iri) == onto.classes.end();
        OntologyClass& cls = onto.classes[iri];
        cls.iri = iri;

        if (fresh) {
            if (std::string local = detail::derive_local_name(iri); !local.empty()) {
                cls.names.emplace_back(std::move(local), LabelProvenance::LocalName);
            }
        }

        for (const auto& child : decl->children) {
            if (child.is(ns::rdfs, "label")) {
                if (!child.text.empty()) cls.names.emplace_back(child.text, LabelProvenance::Label);
            } else if (child.is(ns::rdfs, "subClassOf")) {
                // Named superclasses only; anonymous (expression) parents are
                // not part of the hierarchy we score against.
                if (const auto* r = detail::resource_attr(child)) {
                    Iri parent(*r);
                    if (parent != iri) cls.direct_superclasses.insert(std::move(parent));
                }
            } else if (child.is(ns::owl, "equivalentClass")) {
                try {
                    ClassExpression expr = detail::expression_from_axiom(child);
                    if (!expr.contains_iri(iri) && onto.logical_definitions.find(iri) ==
                                                       onto.logical_definitions.end()) {
                        onto.logical_definitions.emplace(iri, std::move(expr));
                    }
                } catch (const ParseError& e) {
                    onto.warnings.push_back("logical definition for " + iri.value() +
                                            " skipped: " + e.what());
                }
            } else {
                std::string property = child.ns_uri + child.local;
                auto it = options.synonym_properties.find(property);
                if (it != options.synonym_properties.end() && !child.text.empty()) {
                    cls.names.emplace_back(child.text, it->second);
                }
            }
        }
    }

    // direct_subclasses is the inverse of direct_superclasses over the
    // classes present in this document.
    for (auto& [iri, cls] : onto.classes) {
        for (const Iri& parent : cls.direct_superclasses) {
            auto it = onto.classes.find(parent);
            if (it != onto.classes.end()) it->second.direct_subclasses.insert(iri);
        }
    }

    if (onto.namespace_tag.empty()) {
        std::map<std::string, int> tags;
        for (const auto& [iri, cls] : onto.classes) {
            std::string_view seg = iri.segment();
            size_t cut = 0;
            while (cut < seg.size() && std::isalpha(static_cast<unsigned char>(seg[cut]))) ++cut;
            if (cut > 0) {
                std::string tag(seg.substr(0, cut));
                for (char& c : tag) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
                ++tags[tag];
            }
        }
        int best = 0;
        for (const auto& [tag, count] : tags) {
            if (count > best) {
                best = count;
                onto.namespace_tag = tag;
            }
        }
    }
    return onto;
}

/// Parses the single equivalentClass axiom declared for `class_iri`.
inline ComplexMapping parse_equivalence(std::string_view document, const Iri& class_iri) {
    xml::Element root = xml::parse(document);
    std::vector<const xml::Element*> declarations;
    detail::collect_declarations(root, declarations);

    std::vector<const xml::Element*> axioms;
    for (const xml::Element* decl : declarations) {
        const std::string* about = detail::about_attr(*decl);
        if (about == nullptr) continue;
        try {
            if (Iri(*about) != class_iri) continue;
        } catch (const Error&) {
            continue;
        }
        for (const auto& child : decl->children) {
            if (child.is(ns::owl, "equivalentClass")) axioms.push_back(&child);
        }
    }
    if (axioms.empty()) {
        throw ParseError("no owl:equivalentClass axiom for " + class_iri.value());
    }
    if (axioms.size() > 1) {
        throw ParseError("multiple owl:equivalentClass axioms for " + class_iri.value());
    }
    return ComplexMapping::make(class_iri, detail::expression_from_axiom(*axioms.front()));
}

namespace detail {

class MappingWriter {
  public:
    explicit MappingWriter(const std::map<Iri, std::string>* labels) : labels_(labels) {}

    std::string write(const ComplexMapping& mapping) {
        out_.clear();
        open_line(0, "<owl:Class rdf:about=\"" + xml::escape(mapping.source.value()) + "\">",
                  mapping.source);
        if (mapping.expression.kind() == ClassExpression::Kind::Named) {
            open_line(1,
                      "<owl:equivalentClass rdf:resource=\"" +
                          xml::escape(mapping.expression.iri().value()) + "\"/>",
                      mapping.expression.iri());
        } else {
            plain(1, "<owl:equivalentClass>");
            expression(mapping.expression, 2);
            plain(1, "</owl:equivalentClass>");
        }
        plain(0, "</owl:Class>");
        return out_;
    }

  private:
    void expression(const ClassExpression& e, int depth) {
        switch (e.kind()) {
        case ClassExpression::Kind::Named:
            open_line(depth, "<rdf:Description rdf:about=\"" + xml::escape(e.iri().value()) + "\"/>",
                      e.iri());
            break;
        case ClassExpression::Kind::Intersection:
        case ClassExpression::Kind::Union: {
            const char* tag =
                e.kind() == ClassExpression::Kind::Intersection ? "intersectionOf" : "unionOf";
            plain(depth, "<owl:Class>");
            plain(depth + 1, std::string("<owl:") + tag + " rdf:parseType=\"Collection\">");
            for (const auto& m : e.members()) expression(m, depth + 2);
            plain(depth + 1, std::string("</owl:") + tag + ">");
            plain(depth, "</owl:Class>");
            break;
        }
        case ClassExpression::Kind::SomeValuesFrom:
            plain(depth, "<owl:Restriction>");
            open_line(depth + 1,
                      "<owl:onProperty rdf:resource=\"" + xml::escape(e.iri().value()) + "\"/>",
                      e.iri());
            if (e.filler().kind() == ClassExpression::Kind::Named) {
                open_line(depth + 1,
                          "<owl:someValuesFrom rdf:resource=\"" +
                              xml::escape(e.filler().iri().value()) + "\"/>",
                          e.filler().iri());
            } else {
                plain(depth + 1, "<owl:someValuesFrom>");
                expression(e.filler(), depth + 2);
                plain(depth + 1, "</owl:someValuesFrom>");
            }
            plain(depth, "</owl:Restriction>");
            break;
        }
    }

    void plain(int depth, const std::string& line) {
        out_.append(static_cast<size_t>(depth) * 2, ' ');
        out_ += line;
        out_ += '\n';
    }

    void open_line(int depth, const std::string& line, const Iri& iri) {
        out_.append(static_cast<size_t>(depth) * 2, ' ');
        out_ += line;
        if (labels_ != nullptr) {
            auto it = labels_->find(iri);
            if (it != labels_->end()) out_ += "\t<!-- " + it->second + " -->";
        }
        out_ += '\n';
    }

    const std::map<Iri, std::string>* labels_;
    std::string out_;
};

} // namespace detail

/// Serializes a mapping as an owl:Class element wrapping one equivalentClass
/// axiom. When labels are given, entity lines carry them as trailing comments.
inline std::string serialize_mapping(const ComplexMapping& mapping,
                                     const std::map<Iri, std::string>* labels = nullptr) {
    return detail::MappingWriter(labels).write(mapping);
}

} // namespace cmom
