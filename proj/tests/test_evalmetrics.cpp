#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "cmom/evalmetrics.hpp"
#include "support/fixtures.hpp"
#include "support/ged_oracle.hpp"

using namespace cmom;
using testsupport::obo;

namespace {

Iri ex(const std::string& id) { return Iri("http://example.org/h#" + id); }

Hierarchy small_hierarchy() {
    Hierarchy h;
    h.add_relation(ex("Asub"), ex("A"));  // Asub is a direct subclass of A
    h.add_relation(ex("A"), ex("Asuper")); // Asuper is a direct superclass of A
    h.set_total_target_classes(1000);
    return h;
}

MappingGraph graph_of(const ClassExpression& expr, const std::string& source = "S") {
    return to_graph(ComplexMapping::make(ex(source), expr));
}

bool has_edge(const MappingGraph& g, const Iri& from, const Iri& to, EdgeLabel label) {
    auto index_of = [&](const Iri& iri) -> long {
        for (size_t i = 0; i < g.nodes.size(); ++i) {
            if (g.nodes[i].iri == iri) return static_cast<long>(i);
        }
        return -1;
    };
    long f = index_of(from), t = index_of(to);
    if (f < 0 || t < 0) return false;
    for (const auto& e : g.edges) {
        if (e.from == static_cast<size_t>(f) && e.to == static_cast<size_t>(t) && e.label == label) {
            return true;
        }
    }
    return false;
}

} // namespace

TEST_CASE("relaxed precision rewards specific predictions") {
    auto h = small_hierarchy();
    CHECK(relaxed_precision_entity(ex("A"), ex("A"), h) == 1.0);
    CHECK(relaxed_precision_entity(ex("Asub"), ex("A"), h) == 1.0);
    CHECK(relaxed_precision_entity(ex("Asuper"), ex("A"), h) == 0.5);
    CHECK(relaxed_precision_entity(ex("B"), ex("A"), h) == 0.0);
}

TEST_CASE("relaxed recall rewards general predictions") {
    auto h = small_hierarchy();
    CHECK(relaxed_recall_entity(ex("A"), ex("A"), h) == 1.0);
    CHECK(relaxed_recall_entity(ex("Asuper"), ex("A"), h) == 1.0);
    CHECK(relaxed_recall_entity(ex("Asub"), ex("A"), h) == 0.5);
    CHECK(relaxed_recall_entity(ex("B"), ex("A"), h) == 0.0);
}

TEST_CASE("class set scores are perfect on identical sets") {
    auto h = small_hierarchy();
    std::vector<Iri> set = {ex("A"), ex("B"), ex("C")};
    auto scores = class_set_scores(set, set, h);
    CHECK(scores.precision == 1.0);
    CHECK(scores.recall == 1.0);
    CHECK(scores.f1 == 1.0);
}

TEST_CASE("a direct superclass prediction loses half its precision") {
    auto h = small_hierarchy();
    std::vector<Iri> predicted = {ex("Asuper"), ex("B")};
    std::vector<Iri> reference = {ex("A"), ex("B")};
    auto scores = class_set_scores(predicted, reference, h);
    CHECK(scores.precision == 0.75);
    // The generalization still recalls the reference entity fully.
    CHECK(scores.recall == 1.0);
}

TEST_CASE("missing predictions lower recall via the reference denominator") {
    auto h = small_hierarchy();
    std::vector<Iri> predicted = {ex("A")};
    std::vector<Iri> reference = {ex("A"), ex("B")};
    auto scores = class_set_scores(predicted, reference, h);
    CHECK(scores.precision == 1.0);
    CHECK(scores.recall == 0.5);
}

TEST_CASE("an empty predicted set scores zero with a warning") {
    auto h = small_hierarchy();
    std::vector<Iri> reference = {ex("A")};
    std::vector<std::string> warnings;
    auto scores = class_set_scores({}, reference, h, &warnings);
    CHECK(scores.precision == 0.0);
    CHECK(scores.recall == 0.0);
    CHECK(scores.f1 == 0.0);
    CHECK(warnings.size() == 1);
}

TEST_CASE("the cortisol mapping transforms into nine nodes and eight edges") {
    auto g = to_graph(testsupport::cortisol_mapping());
    CHECK(g.nodes.size() == 9);
    CHECK(g.edges.size() == 8);
    CHECK(g.nodes[0].kind == NodeKind::Source);
    CHECK(g.nodes[0].iri == obo("HP_0008163"));

    CHECK(has_edge(g, obo("HP_0008163"), obo("BFO_0000051"), EdgeLabel::EquivalentClass));
    CHECK(has_edge(g, obo("BFO_0000051"), obo("PATO_0001997"), EdgeLabel::SomeValuesFrom));
    CHECK(has_edge(g, obo("BFO_0000051"), obo("RO_0000052"), EdgeLabel::SomeValuesFrom));
    CHECK(has_edge(g, obo("BFO_0000051"), obo("RO_0002573"), EdgeLabel::SomeValuesFrom));
    CHECK(has_edge(g, obo("RO_0000052"), obo("CHEBI_17650"), EdgeLabel::SomeValuesFrom));
    CHECK(has_edge(g, obo("RO_0000052"), obo("BFO_0000050"), EdgeLabel::SomeValuesFrom));
    CHECK(has_edge(g, obo("BFO_0000050"), obo("UBERON_0000178"), EdgeLabel::SomeValuesFrom));
    CHECK(has_edge(g, obo("RO_0002573"), obo("PATO_0000460"), EdgeLabel::SomeValuesFrom));

    int properties = 0;
    for (const auto& node : g.nodes) {
        if (node.kind == NodeKind::Property) ++properties;
    }
    CHECK(properties == 4);
}

TEST_CASE("a named equivalence is a two-node graph") {
    auto g = graph_of(ClassExpression::named(ex("B")));
    CHECK(g.nodes.size() == 2);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0].label == EdgeLabel::EquivalentClass);
}

TEST_CASE("a top-level intersection distributes its own label") {
    auto g = graph_of(ClassExpression::intersection(
        {ClassExpression::named(ex("B")), ClassExpression::named(ex("C"))}));
    CHECK(g.nodes.size() == 3);
    CHECK(has_edge(g, ex("S"), ex("B"), EdgeLabel::IntersectionOf));
    CHECK(has_edge(g, ex("S"), ex("C"), EdgeLabel::IntersectionOf));
}

TEST_CASE("duplicate IRIs collapse to one node") {
    auto g = graph_of(ClassExpression::intersection(
        {ClassExpression::some_values_from(ex("p"), ClassExpression::named(ex("B"))),
         ClassExpression::some_values_from(ex("q"), ClassExpression::named(ex("B")))}));
    // S, p, q, B
    CHECK(g.nodes.size() == 4);
}

TEST_CASE("the baseline star graph has independent class nodes") {
    std::vector<Iri> classes = {ex("B"), ex("C")};
    auto g = star_graph(ex("S"), classes);
    CHECK(g.nodes.size() == 3);
    REQUIRE(g.edges.size() == 2);
    CHECK(has_edge(g, ex("S"), ex("B"), EdgeLabel::EquivalentClass));
    CHECK(has_edge(g, ex("S"), ex("C"), EdgeLabel::EquivalentClass));
}

TEST_CASE("node substitution costs follow the hierarchy") {
    CostModel cm;
    Hierarchy h;
    h.add_relation(ex("C"), ex("R"));
    h.add_relation(ex("C"), ex("R2"));
    h.add_relation(ex("Csub"), ex("C"));
    h.set_total_target_classes(1000);

    MappingGraph::Node same_a{ex("C"), NodeKind::Class};
    MappingGraph::Node same_b{ex("C"), NodeKind::Class};
    CHECK(node_substitution_cost(same_a, same_b, h, cm) == 0.0);

    // C has three direct neighbors (R, R2, Csub) and is a direct subclass of R.
    MappingGraph::Node candidate{ex("C"), NodeKind::Class};
    MappingGraph::Node reference{ex("R"), NodeKind::Class};
    CHECK(node_substitution_cost(candidate, reference, h, cm) == 0.7 * 3.0 / 1000.0);

    MappingGraph::Node prop{ex("p"), NodeKind::Property};
    MappingGraph::Node other{ex("q"), NodeKind::Property};
    CHECK(node_substitution_cost(prop, other, h, cm) == 1.0);

    // Cross-kind substitution costs the candidate's sigma.
    MappingGraph::Node cls{ex("X"), NodeKind::Class};
    CHECK(node_substitution_cost(cls, other, h, cm) == 0.7);

    Hierarchy unconfigured;
    unconfigured.add_relation(ex("C"), ex("R"));
    CHECK_THROWS_AS(node_substitution_cost(candidate, reference, unconfigured, cm), ConfigError);
}

TEST_CASE("identical graphs have zero distance and score one") {
    auto h = small_hierarchy();
    CostModel cm;
    auto g = to_graph(testsupport::cortisol_mapping());
    auto result = ged(g, g, h, cm);
    CHECK(result.exact);
    CHECK(result.cost == 0.0);
    auto score = mapping_score(g, g, h, cm);
    CHECK(score.score == 1.0);
}

TEST_CASE("substituting one class beats deleting and inserting") {
    auto h = small_hierarchy();
    CostModel cm;
    auto reference = graph_of(ClassExpression::named(ex("B")));
    auto candidate = graph_of(ClassExpression::named(ex("C")));
    auto result = ged(candidate, reference, h, cm);
    CHECK(result.cost == 0.7); // vs node_delete 0.5 + node_insert 1.0 + edge edits
}

TEST_CASE("branch-and-bound equals exhaustive enumeration on random pairs") {
    std::mt19937_64 rng(321);
    CostModel cm;
    for (int round = 0; round < 60; ++round) {
        auto h = testsupport::random_hierarchy(rng);
        auto gc = testsupport::random_graph(rng, 6);
        auto gr = testsupport::random_graph(rng, 6);
        auto got = ged(gc, gr, h, cm);
        double want = testsupport::oracle_ged(gc, gr, h, cm);
        REQUIRE(got.exact);
        CHECK(got.cost == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("max ged prices the reference nodes by kind") {
    CostModel cm;
    // Reference: three class + one property non-source nodes, four edges.
    auto reference = graph_of(ClassExpression::intersection(
        {ClassExpression::named(ex("A")), ClassExpression::named(ex("B")),
         ClassExpression::some_values_from(ex("p"), ClassExpression::named(ex("C")))}));
    REQUIRE(reference.non_source_count() == 4);
    REQUIRE(reference.edges.size() == 4);
    // Candidate: four nodes, three edges.
    auto candidate = graph_of(ClassExpression::intersection(
        {ClassExpression::named(ex("A")), ClassExpression::named(ex("B")),
         ClassExpression::named(ex("C")), ClassExpression::named(ex("D"))}),
        "S2");
    REQUIRE(candidate.non_source_count() == 4);
    REQUIRE(candidate.edges.size() == 4);
    // Drop one candidate edge to match the stated shape.
    candidate.edges.pop_back();
    CHECK(max_ged(candidate, reference, cm) == 0.5 * 4 + (3 * 0.7 + 1 * 1.0));
    CHECK(max_ged(candidate, reference, cm) == 5.1);

    // Equal graphs with two class nodes and two edges.
    auto two = graph_of(ClassExpression::intersection(
        {ClassExpression::named(ex("A")), ClassExpression::named(ex("B"))}));
    CHECK(max_ged(two, two, cm) == 0.5 * 2 + 2 * 0.7);
    CHECK(max_ged(two, two, cm) == 2.4);

    // Candidate surplus nodes add the insertion cost.
    auto six = graph_of(ClassExpression::intersection(
        {ClassExpression::named(ex("A")), ClassExpression::named(ex("B")),
         ClassExpression::named(ex("C")), ClassExpression::named(ex("D")),
         ClassExpression::named(ex("E")), ClassExpression::named(ex("F"))}),
        "S2");
    CHECK(max_ged(six, two, cm) == 0.5 * 6 + 2 * 0.7 + 4 * 1.0);
}

TEST_CASE("disjoint graphs score near zero") {
    auto h = small_hierarchy();
    CostModel cm;
    auto reference = graph_of(ClassExpression::intersection(
        {ClassExpression::named(ex("A")), ClassExpression::named(ex("B"))}));
    auto candidate = graph_of(
        ClassExpression::some_values_from(ex("p"), ClassExpression::named(ex("Z"))), "S");
    auto score = mapping_score(candidate, reference, h, cm);
    double expected_ged = testsupport::oracle_ged(candidate, reference, h, cm);
    CHECK(score.ged == doctest::Approx(expected_ged).epsilon(1e-9));
    CHECK(score.score < 0.25);
    CHECK(score.score >= 0.0);
}

TEST_CASE("swapping two class positions is penalized but not maximal") {
    auto h = small_hierarchy();
    CostModel cm;
    auto make = [&](const std::string& inner, const std::string& leaf) {
        return graph_of(ClassExpression::some_values_from(
            ex("hasPart"),
            ClassExpression::intersection(
                {ClassExpression::named(ex(inner)),
                 ClassExpression::some_values_from(ex("inheresIn"),
                                                   ClassExpression::named(ex(leaf)))})));
    };
    auto reference = make("chin", "cleft");
    auto swapped = make("cleft", "chin");
    auto score = mapping_score(swapped, reference, h, cm);
    double expected_ged = testsupport::oracle_ged(swapped, reference, h, cm);
    CHECK(score.ged == doctest::Approx(expected_ged).epsilon(1e-9));
    CHECK(score.score > 0.0);
    CHECK(score.score < 1.0);
}

TEST_CASE("a correct bag of classes scores strictly below the structured mapping") {
    auto h = small_hierarchy();
    CostModel cm;
    auto mapping = testsupport::cortisol_mapping();
    auto reference = to_graph(mapping);
    auto star = star_graph(mapping.source, mapping.expression.named_class_iris());
    auto structured = mapping_score(reference, reference, h, cm);
    auto bag = mapping_score(star, reference, h, cm);
    CHECK(structured.score == 1.0);
    CHECK(bag.score < structured.score);
    CHECK(bag.score > 0.0);
}

TEST_CASE("replacing a class with its direct subclass costs its scaled sigma") {
    CostModel cm;
    Hierarchy h;
    h.add_relation(ex("Asub"), ex("A"));
    h.set_total_target_classes(1000);
    auto reference = graph_of(ClassExpression::intersection(
        {ClassExpression::named(ex("A")), ClassExpression::named(ex("B"))}));
    auto candidate = graph_of(ClassExpression::intersection(
        {ClassExpression::named(ex("Asub")), ClassExpression::named(ex("B"))}));
    auto result = ged(candidate, reference, h, cm);
    // Asub has one direct neighbor.
    CHECK(result.cost == doctest::Approx(0.7 * 1.0 / 1000.0).epsilon(1e-12));
}

TEST_CASE("an exhausted search budget needs the approximate flag") {
    CostModel cm;
    std::mt19937_64 rng(77);
    auto h = testsupport::random_hierarchy(rng);
    auto candidate = testsupport::random_graph(rng, 6);
    auto reference = testsupport::random_graph(rng, 6);

    GedOptions tiny;
    tiny.max_search_steps = 1;
    CHECK_THROWS_AS(ged(candidate, reference, h, cm, tiny), EvalError);

    tiny.allow_approximate = true;
    auto approx = ged(candidate, reference, h, cm, tiny);
    CHECK_FALSE(approx.exact);
    // The beam fallback never undercuts the true minimum.
    CHECK(approx.cost >= testsupport::oracle_ged(candidate, reference, h, cm) - 1e-9);
}

TEST_CASE("graphs beyond the exact bound need the approximate flag") {
    auto h = small_hierarchy();
    CostModel cm;
    std::vector<ClassExpression> members;
    for (int i = 0; i < 20; ++i) members.push_back(ClassExpression::named(ex("N" + std::to_string(i))));
    auto big = graph_of(ClassExpression::intersection(std::move(members)));
    auto reference = graph_of(ClassExpression::named(ex("A")));
    CHECK_THROWS_AS(ged(big, reference, h, cm), EvalError);

    GedOptions options;
    options.allow_approximate = true;
    auto approx = ged(big, reference, h, cm, options);
    CHECK_FALSE(approx.exact);
    CHECK(approx.cost > 0.0);
}

TEST_CASE("alignment metrics divide by valid and reference counts") {
    auto h = small_hierarchy();
    CostModel cm;
    auto reference = testsupport::cortisol_mapping();

    SUBCASE("all generated mappings perfect") {
        std::vector<ScoredMapping> results = {{reference.source, reference, reference},
                                              {ex("S2"), ComplexMapping::make(ex("S2"), reference.expression),
                                               ComplexMapping::make(ex("S2"), reference.expression)}};
        auto report = alignment_metrics(results, h, cm, 2);
        CHECK(report.precision == 1.0);
        CHECK(report.recall == 1.0);
        CHECK(report.f1 == 1.0);
        CHECK(report.class_precision == 1.0);
        CHECK(report.valid_count == 2);
    }

    SUBCASE("one invalid output of two references") {
        std::vector<ScoredMapping> results = {
            {reference.source, reference, reference},
            {ex("S2"), std::nullopt, ComplexMapping::make(ex("S2"), reference.expression),
             "invalid output"}};
        auto report = alignment_metrics(results, h, cm, 2);
        CHECK(report.valid_count == 1);
        CHECK(report.reference_count == 2);
        CHECK(report.precision == 1.0);
        CHECK(report.recall == 0.5);
        CHECK(report.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    }

    SUBCASE("no valid mappings flags the undefined precision") {
        std::vector<ScoredMapping> results = {
            {reference.source, std::nullopt, reference, "invalid output"}};
        auto report = alignment_metrics(results, h, cm, 1);
        CHECK(report.precision == 0.0);
        CHECK(report.precision_undefined);
    }
}

TEST_CASE("reports render as tsv plus summary json") {
    auto h = small_hierarchy();
    CostModel cm;
    auto reference = testsupport::cortisol_mapping();
    std::vector<ScoredMapping> results = {{reference.source, reference, reference}};
    auto report = alignment_metrics(results, h, cm, 1);
    auto tsv = report_to_tsv(report);
    CHECK(tsv.find("source_iri\tvalid\ts\tclass_prec\tclass_rec\tnotes") == 0);
    CHECK(tsv.find("http://purl.obolibrary.org/obo/HP_0008163\ttrue\t1.000000") != std::string::npos);
    auto summary = summary_to_json(report, "fixture", "full");
    CHECK(summary.at("F1") == 1.0);
    CHECK(summary.at("m_c") == 1);
    CHECK(summary.at("m_r") == 1);
}
