#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cmom/owl.hpp"

namespace cmom {

enum class NodeKind { Source, Class, Property };

enum class EdgeLabel { EquivalentClass, SomeValuesFrom, IntersectionOf, UnionOf };

inline std::string_view to_string(EdgeLabel label) {
    switch (label) {
    case EdgeLabel::EquivalentClass: return "equivalentClass";
    case EdgeLabel::SomeValuesFrom: return "someValuesFrom";
    case EdgeLabel::IntersectionOf: return "intersectionOf";
    case EdgeLabel::UnionOf: return "unionOf";
    }
    return "";
}

/// Graph form of a mapping: one node per IRI (the subject is node 0), one
/// labeled edge per construct application. Duplicate IRIs collapse.
struct MappingGraph {
    struct Node {
        Iri iri;
        NodeKind kind;
    };
    struct Edge {
        size_t from;
        size_t to;
        EdgeLabel label;
        auto operator<=>(const Edge&) const = default;
    };

    std::vector<Node> nodes;
    std::vector<Edge> edges;

    [[nodiscard]] size_t non_source_count() const { return nodes.empty() ? 0 : nodes.size() - 1; }
};

namespace detail {

class GraphBuilder {
  public:
    explicit GraphBuilder(const Iri& source) {
        graph_.nodes.push_back({source, NodeKind::Source});
        index_.emplace(source, 0);
    }

    MappingGraph build(const ClassExpression& expr) {
        attach(expr, 0, EdgeLabel::EquivalentClass);
        finish();
        return std::move(graph_);
    }

    MappingGraph build_star(std::span<const Iri> classes) {
        for (const auto& iri : classes) {
            size_t node = add_node(iri, NodeKind::Class);
            add_edge(0, node, EdgeLabel::EquivalentClass);
        }
        finish();
        return std::move(graph_);
    }

  private:
    void attach(const ClassExpression& expr, size_t from, EdgeLabel label) {
        switch (expr.kind()) {
        case ClassExpression::Kind::Named: {
            size_t node = add_node(expr.iri(), NodeKind::Class);
            add_edge(from, node, label);
            break;
        }
        case ClassExpression::Kind::SomeValuesFrom: {
            size_t node = add_node(expr.iri(), NodeKind::Property);
            add_edge(from, node, label);
            attach(expr.filler(), node, EdgeLabel::SomeValuesFrom);
            break;
        }
        case ClassExpression::Kind::Intersection:
        case ClassExpression::Kind::Union: {
            // Members attach to the enclosing node. A filler's members keep
            // the someValuesFrom label; elsewhere the construct's own label
            // distributes.
            EdgeLabel inner = label;
            if (label != EdgeLabel::SomeValuesFrom) {
                inner = expr.kind() == ClassExpression::Kind::Intersection
                            ? EdgeLabel::IntersectionOf
                            : EdgeLabel::UnionOf;
            }
            for (const auto& member : expr.members()) attach(member, from, inner);
            break;
        }
        }
    }

    size_t add_node(const Iri& iri, NodeKind kind) {
        auto it = index_.find(iri);
        if (it != index_.end()) {
            // Property use wins when one IRI plays both roles.
            if (kind == NodeKind::Property && graph_.nodes[it->second].kind == NodeKind::Class) {
                graph_.nodes[it->second].kind = NodeKind::Property;
            }
            return it->second;
        }
        graph_.nodes.push_back({iri, kind});
        index_.emplace(iri, graph_.nodes.size() - 1);
        return graph_.nodes.size() - 1;
    }

    void add_edge(size_t from, size_t to, EdgeLabel label) {
        edge_set_.insert({from, to, label});
    }

    void finish() {
        graph_.edges.assign(edge_set_.begin(), edge_set_.end());
    }

    MappingGraph graph_;
    std::map<Iri, size_t> index_;
    std::set<MappingGraph::Edge> edge_set_;
};

} // namespace detail

/// Graph transformation of a mapping: classes and properties become nodes,
/// constructs become labeled edges.
inline MappingGraph to_graph(const ComplexMapping& mapping) {
    return detail::GraphBuilder(mapping.source).build(mapping.expression);
}

/// Baseline form of a candidate set: the selected classes as independent
/// nodes under the source, with no logical structure.
inline MappingGraph star_graph(const Iri& source, std::span<const Iri> classes) {
    return detail::GraphBuilder(source).build_star(classes);
}

} // namespace cmom
