#pragma once

#include <map>
#include <string>

#include "cmom/owl.hpp"

namespace cmom {

namespace detail {

inline std::string manchester_name(const Iri& iri, const std::map<Iri, std::string>& labels) {
    auto it = labels.find(iri);
    if (it != labels.end()) return it->second;
    return std::string(iri.segment());
}

inline std::string manchester_expr(const ClassExpression& e,
                                   const std::map<Iri, std::string>& labels) {
    auto bracket = [&](const ClassExpression& member) {
        std::string rendered = manchester_expr(member, labels);
        return member.kind() == ClassExpression::Kind::Named ? rendered : "(" + rendered + ")";
    };
    switch (e.kind()) {
    case ClassExpression::Kind::Named:
        return manchester_name(e.iri(), labels);
    case ClassExpression::Kind::SomeValuesFrom:
        return manchester_name(e.iri(), labels) + " some " + bracket(e.filler());
    case ClassExpression::Kind::Intersection:
    case ClassExpression::Kind::Union: {
        const char* op = e.kind() == ClassExpression::Kind::Intersection ? " and " : " or ";
        std::string out;
        for (size_t i = 0; i < e.members().size(); ++i) {
            if (i > 0) out += op;
            out += bracket(e.members()[i]);
        }
        return out;
    }
    }
    return {};
}

} // namespace detail

/// Renders "EquivalentTo: ..." with `and`/`or`/`some`; non-atomic fillers and
/// nested operands are parenthesized. Unlabeled IRIs fall back to their final
/// IRI segment.
inline std::string to_manchester(const ComplexMapping& mapping,
                                 const std::map<Iri, std::string>& labels = {}) {
    return "EquivalentTo: " + detail::manchester_expr(mapping.expression, labels);
}

} // namespace cmom
