#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "cmom/patterns.hpp"
#include "support/fixtures.hpp"

using namespace cmom;
using testsupport::obo;

namespace {

NamespaceSignature sig(std::initializer_list<std::pair<std::string, int>> entries) {
    NamespaceSignature s;
    for (const auto& [tag, count] : entries) s.add(tag, count);
    return s;
}

MappingExample example_for(const std::string& source, std::initializer_list<std::string> class_ids) {
    std::vector<ClassExpression> members;
    for (const auto& id : class_ids) members.push_back(ClassExpression::named(obo(id)));
    ClassExpression expr = members.size() == 1
                               ? std::move(members.front())
                               : ClassExpression::intersection(std::move(members));
    return MappingExample::from_mapping(ComplexMapping::make(obo(source), std::move(expr)));
}

} // namespace

TEST_CASE("namespace signatures count tags with cardinality") {
    std::vector<Iri> iris = {obo("UBERON_0001255"), obo("UBERON_0000178"), obo("PATO_0001483")};
    CHECK(namespace_signature(iris) == sig({{"UBERON", 2}, {"PATO", 1}}));
}

TEST_CASE("the abnormal modifier class is never counted") {
    std::vector<Iri> iris = {obo("PATO_0000460")};
    CHECK(namespace_signature(iris).empty());
}

TEST_CASE("signature of the cortisol class set applies both exclusions") {
    std::vector<Iri> iris = {obo("PATO_0001997"), obo("CHEBI_17650"), obo("UBERON_0000178"),
                             obo("PATO_0000460")};
    CHECK(namespace_signature(iris) == sig({{"PATO", 1}, {"CHEBI", 1}, {"UBERON", 1}}));
}

TEST_CASE("property namespaces are excluded") {
    std::vector<Iri> iris = {obo("RO_0000052"), obo("BFO_0000051"), obo("GO_0008150")};
    CHECK(namespace_signature(iris) == sig({{"GO", 1}}));
}

TEST_CASE("an IRI without an alphabetic prefix falls back to the full segment") {
    std::vector<std::string> warnings;
    std::vector<Iri> iris = {Iri("http://example.org/x#123tag")};
    auto s = namespace_signature(iris, &warnings);
    CHECK(s == sig({{"123TAG", 1}}));
    CHECK(warnings.size() == 1);
}

TEST_CASE("signature exclusion rules are idempotent") {
    std::vector<Iri> iris = {obo("PATO_0001997"), obo("RO_0000052"), obo("PATO_0000460"),
                             obo("UBERON_0000178")};
    auto once = namespace_signature(iris);
    std::vector<Iri> survivors;
    for (const auto& iri : iris) {
        auto single = namespace_signature(std::span(&iri, 1));
        if (!single.empty()) survivors.push_back(iri);
    }
    CHECK(namespace_signature(survivors) == once);
}

TEST_CASE("filter keeps examples whose signature contains the candidate") {
    std::vector<MappingExample> pool = {
        example_for("HP_0000001", {"UBERON_0001255", "UBERON_0000178", "PATO_0001483", "GO_0008150"}),
        example_for("HP_0000002", {"GO_0008150", "PATO_0001483"}),
        example_for("HP_0000003", {"UBERON_0001255", "PATO_0001483"}),
    };
    auto kept = filter_examples(pool, sig({{"UBERON", 1}, {"PATO", 1}}));
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].mapping.source == obo("HP_0000001"));
    CHECK(kept[1].mapping.source == obo("HP_0000003"));
}

TEST_CASE("cardinality shortfalls drop the example") {
    std::vector<MappingExample> pool = {example_for("HP_0000002", {"GO_0008150", "PATO_0001483"})};
    CHECK(filter_examples(pool, sig({{"GO", 2}})).empty());
}

TEST_CASE("a signature equal to the example's is kept") {
    std::vector<MappingExample> pool = {example_for("HP_0000002", {"GO_0008150", "PATO_0001483"})};
    CHECK(filter_examples(pool, sig({{"GO", 1}, {"PATO", 1}})).size() == 1);
}

TEST_CASE("the query's own source class never appears in the result") {
    std::vector<MappingExample> pool = {
        example_for("HP_0000001", {"UBERON_0001255", "PATO_0001483"}),
        example_for("HP_0000002", {"UBERON_0000178", "PATO_0001997"}),
    };
    Iri query = obo("HP_0000001");
    auto kept = filter_examples(pool, sig({{"UBERON", 1}}), &query);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].mapping.source == obo("HP_0000002"));
}

TEST_CASE("truncation keeps the closest signatures in pool order") {
    std::vector<MappingExample> pool;
    // Three tight matches and many loose ones.
    pool.push_back(example_for("HP_0000100", {"GO_0000001", "PATO_0000010"}));
    for (int i = 0; i < 12; ++i) {
        pool.push_back(example_for("HP_00002" + std::to_string(10 + i),
                                   {"GO_0000001", "PATO_0000010", "UBERON_0000001",
                                    "UBERON_0000002", "CL_0000001"}));
    }
    pool.push_back(example_for("HP_0000101", {"GO_0000002", "PATO_0000011"}));

    PatternConfig config;
    config.max_examples = 3;
    auto kept = filter_examples(pool, sig({{"GO", 1}, {"PATO", 1}}), nullptr, config);
    REQUIRE(kept.size() == 3);
    CHECK(kept[0].mapping.source == obo("HP_0000100"));
    CHECK(kept[1].mapping.source == obo("HP_0000210"));
    CHECK(kept[2].mapping.source == obo("HP_0000101"));
}

TEST_CASE("sub-multiset test matches a brute-force counter on random pairs") {
    std::mt19937_64 rng(99);
    const std::vector<std::string> tags = {"GO", "PATO", "UBERON", "CL", "CHEBI"};
    for (int round = 0; round < 500; ++round) {
        std::map<std::string, int> a, b;
        for (const auto& tag : tags) {
            if (rng() % 2 == 0) a[tag] = 1 + static_cast<int>(rng() % 3);
            if (rng() % 2 == 0) b[tag] = 1 + static_cast<int>(rng() % 3);
        }
        NamespaceSignature sa, sb;
        for (const auto& [tag, count] : a) sa.add(tag, count);
        for (const auto& [tag, count] : b) sb.add(tag, count);

        bool expected = true;
        for (const auto& tag : tags) {
            int ca = a.count(tag) > 0 ? a.at(tag) : 0;
            int cb = b.count(tag) > 0 ? b.at(tag) : 0;
            if (ca > cb) expected = false;
        }
        CHECK(sa.subset_of(sb) == expected);
    }
}

TEST_CASE("harvested examples carry their own signature") {
    auto onto = parse_ontology(testsupport::cortisol_document());
    auto pool = harvest_examples(onto);
    REQUIRE(pool.size() == 1);
    CHECK(pool[0].mapping.source == testsupport::cortisol_source());
    CHECK(pool[0].signature == sig({{"PATO", 1}, {"CHEBI", 1}, {"UBERON", 1}}));
    // The serialized text parses back to the same mapping.
    auto back = parse_equivalence(pool[0].owl_text, pool[0].mapping.source);
    CHECK(back == pool[0].mapping);
}
