#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "cmom/owl.hpp"

namespace testsupport {

inline const std::string kObo = "http://purl.obolibrary.org/obo/";

inline cmom::Iri obo(const std::string& id) { return cmom::Iri(kObo + id); }

/// The decreased-circulating-cortisol-level logical definition, with the
/// original label comments.
inline const char* cortisol_document() {
    return R"(<owl:Class rdf:about="http://purl.obolibrary.org/obo/HP_0008163">	<!-- decreased circulating cortisol level -->
 <owl:equivalentClass>
  <owl:Restriction>
   <owl:onProperty rdf:resource="http://purl.obolibrary.org/obo/BFO_0000051"/>	<!-- has part -->
    <owl:someValuesFrom>
     <owl:Class>
      <owl:intersectionOf rdf:parseType="Collection">
       <rdf:Description rdf:about="http://purl.obolibrary.org/obo/PATO_0001997"/>	<!-- decreased amount -->
       <owl:Restriction>
        <owl:onProperty rdf:resource="http://purl.obolibrary.org/obo/RO_0000052"/>	<!-- inheres in -->
         <owl:someValuesFrom>
          <owl:Class>
           <owl:intersectionOf rdf:parseType="Collection">
            <rdf:Description rdf:about="http://purl.obolibrary.org/obo/CHEBI_17650"/>	<!-- cortisol -->
             <owl:Restriction>
              <owl:onProperty rdf:resource="http://purl.obolibrary.org/obo/BFO_0000050"/>	<!-- part of -->
              <owl:someValuesFrom rdf:resource="http://purl.obolibrary.org/obo/UBERON_0000178"/>	<!-- blood -->
            </owl:Restriction>
          </owl:intersectionOf>
         </owl:Class>
        </owl:someValuesFrom>
       </owl:Restriction>
       <owl:Restriction>
         <owl:onProperty rdf:resource="http://purl.obolibrary.org/obo/RO_0002573"/>	<!-- has modifier -->
         <owl:someValuesFrom rdf:resource="http://purl.obolibrary.org/obo/PATO_0000460"/>	<!-- abnormal -->
       </owl:Restriction>
      </owl:intersectionOf>
     </owl:Class>
    </owl:someValuesFrom>
  </owl:Restriction>
 </owl:equivalentClass>
</owl:Class>
)";
}

inline cmom::Iri cortisol_source() { return obo("HP_0008163"); }

inline cmom::ClassExpression cortisol_expression() {
    using CE = cmom::ClassExpression;
    std::vector<CE> inner;
    inner.push_back(CE::named(obo("CHEBI_17650")));
    inner.push_back(CE::some_values_from(obo("BFO_0000050"), CE::named(obo("UBERON_0000178"))));
    std::vector<CE> outer;
    outer.push_back(CE::named(obo("PATO_0001997")));
    outer.push_back(CE::some_values_from(obo("RO_0000052"), CE::intersection(std::move(inner))));
    outer.push_back(CE::some_values_from(obo("RO_0002573"), CE::named(obo("PATO_0000460"))));
    return CE::some_values_from(obo("BFO_0000051"), CE::intersection(std::move(outer)));
}

inline cmom::ComplexMapping cortisol_mapping() {
    return cmom::ComplexMapping::make(cortisol_source(), cortisol_expression());
}

inline std::map<cmom::Iri, std::string> cortisol_labels() {
    return {
        {obo("HP_0008163"), "decreased circulating cortisol level"},
        {obo("BFO_0000051"), "has part"},
        {obo("PATO_0001997"), "decreased amount"},
        {obo("RO_0000052"), "inheres in"},
        {obo("CHEBI_17650"), "cortisol"},
        {obo("BFO_0000050"), "part of"},
        {obo("UBERON_0000178"), "blood"},
        {obo("RO_0002573"), "has modifier"},
        {obo("PATO_0000460"), "abnormal"},
    };
}

/// Random expression tree over a small class/property pool, for round-trip
/// style properties.
inline cmom::ClassExpression random_expression(std::mt19937_64& rng, int depth) {
    using CE = cmom::ClassExpression;
    auto cls = [&rng] {
        return cmom::Iri("http://example.org/onto#C" + std::to_string(rng() % 12));
    };
    auto prop = [&rng] {
        return cmom::Iri("http://example.org/onto#p" + std::to_string(rng() % 4));
    };
    unsigned pick = depth <= 0 ? 0 : static_cast<unsigned>(rng() % 4);
    switch (pick) {
    case 1: {
        std::vector<CE> members;
        size_t n = 2 + rng() % 2;
        for (size_t i = 0; i < n; ++i) members.push_back(random_expression(rng, depth - 1));
        return CE::intersection(std::move(members));
    }
    case 2: {
        std::vector<CE> members;
        size_t n = 2 + rng() % 2;
        for (size_t i = 0; i < n; ++i) members.push_back(random_expression(rng, depth - 1));
        return CE::union_of(std::move(members));
    }
    case 3:
        return CE::some_values_from(prop(), random_expression(rng, depth - 1));
    default:
        return CE::named(cls());
    }
}

} // namespace testsupport
