#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "compograph/model.hpp"
#include "support/paper_example.hpp"

using namespace compograph;
using testsupport::concepts;
using testsupport::props;

TEST_CASE("normalize_id trims and upper-cases, idempotently") {
    CHECK(normalize_id("  city ") == "CITY");
    CHECK(normalize_id("City_Name") == "CITY_NAME");
    CHECK(normalize_id("") == "");

    std::mt19937 rng(7);
    std::uniform_int_distribution<int> len(0, 12), ch(32, 126);
    for (int i = 0; i < 500; ++i) {
        std::string s;
        for (int j = len(rng); j > 0; --j) s.push_back(static_cast<char>(ch(rng)));
        CHECK(normalize_id(normalize_id(s)) == normalize_id(s));
    }
}

TEST_CASE("validate_descriptor accepts WS1 against the full vocabulary") {
    ServiceDescriptor ws1{"WS1", concepts({"a", "b"}), concepts({"c", "d", "f"}),
                          props({"P1"}), props({"EF1", "EF2"})};
    CHECK(validate_descriptor(ws1, testsupport::example_vocab()).empty());
}

TEST_CASE("validate_descriptor flags empty outputs") {
    ServiceDescriptor d{"X", concepts({"a"}), {}, {}, {}};
    auto violations = validate_descriptor(d, {});
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].code == "empty-outputs");
}

TEST_CASE("validate_descriptor flags unknown propositions") {
    ServiceDescriptor d{"X", {}, concepts({"a"}), props({"P99"}), {}};
    auto violations = validate_descriptor(d, props({"P1"}));
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].code == "unknown-proposition");
}

TEST_CASE("validate_descriptor flags empty names") {
    ServiceDescriptor d{"", {}, concepts({"a"}), {}, {}};
    auto violations = validate_descriptor(d, {});
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].code == "empty-name");
}

TEST_CASE("concept_satisfies: identity, subsumption, directionality") {
    Taxonomy empty;
    CHECK(concept_satisfies(ConceptId("CITY"), ConceptId("CITY"), empty));

    Taxonomy tax;
    tax.add_edge(ConceptId("CARDIOLOGIST"), ConceptId("DOCTOR"));
    CHECK(concept_satisfies(ConceptId("CARDIOLOGIST"), ConceptId("DOCTOR"), tax));
    CHECK_FALSE(concept_satisfies(ConceptId("DOCTOR"), ConceptId("CARDIOLOGIST"), tax));
}

TEST_CASE("concept_satisfies is reflexive, transitive, false across roots") {
    Taxonomy tax;
    tax.add_edge(ConceptId("A"), ConceptId("B"));
    tax.add_edge(ConceptId("B"), ConceptId("C"));
    tax.add_edge(ConceptId("X"), ConceptId("Y"));
    for (const char* c : {"A", "B", "C", "X", "Y"})
        CHECK(concept_satisfies(ConceptId(c), ConceptId(c), tax));
    CHECK(concept_satisfies(ConceptId("A"), ConceptId("C"), tax));
    CHECK_FALSE(concept_satisfies(ConceptId("A"), ConceptId("Y"), tax));
    CHECK_FALSE(concept_satisfies(ConceptId("X"), ConceptId("C"), tax));
}

TEST_CASE("taxonomy rejects cycles and self-edges") {
    Taxonomy tax;
    tax.add_edge(ConceptId("A"), ConceptId("B"));
    tax.add_edge(ConceptId("B"), ConceptId("C"));
    CHECK_THROWS_AS(tax.add_edge(ConceptId("C"), ConceptId("A")), std::invalid_argument);
    CHECK_THROWS_AS(tax.add_edge(ConceptId("A"), ConceptId("A")), std::invalid_argument);
}

TEST_CASE("validate_request rejects empty goals") {
    Request req;
    req.provided = concepts({"a"});
    auto violations = validate_request(req);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].code == "empty-goals");
}
