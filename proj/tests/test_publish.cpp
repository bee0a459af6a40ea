#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "compograph/publish.hpp"
#include "support/paper_example.hpp"

using namespace compograph;
using testsupport::concepts;
using testsupport::props;

namespace {

struct Composed {
    Registry registry = testsupport::example_registry();
    Request request = testsupport::example_request();
    ExecutionPlan plan;
    SimulationTrace trace;

    Composed() {
        auto result = compose(registry, request);
        REQUIRE(result.ok());
        plan = execution_order(*result.graph);
        trace = simulate(plan, request, registry);
        REQUIRE(trace.success);
    }
};

}  // namespace

TEST_CASE("publishing the worked-example solution derives WSC1") {
    Composed c;
    auto published = publish_composite(c.registry, "WSC1", c.plan, c.request, c.trace);
    REQUIRE(std::holds_alternative<Registry>(published));
    const Registry& extended = std::get<Registry>(published);
    CHECK(extended.size() == 9);

    const ServiceDescriptor& wsc1 = extended.at("WSC1");
    CHECK(wsc1.inputs == concepts({"a", "b", "w"}));
    CHECK(wsc1.outputs == concepts({"t", "p"}));
    CHECK(wsc1.preconditions == props({"P1", "P2", "P3", "P4", "P5", "P6"}));
    CHECK(wsc1.effects == props({"EF1", "EF2", "EF3", "EF4", "EF5"}));

    // the composite is discoverable like any other service
    CHECK(extended.producers_of(ConceptId("t")) == std::set<std::string>{"WS3", "WSC1"});
}

TEST_CASE("publish never mutates the input registry") {
    Composed c;
    auto before_producers = c.registry.producers_of(ConceptId("t"));
    auto published = publish_composite(c.registry, "WSC1", c.plan, c.request, c.trace);
    REQUIRE(std::holds_alternative<Registry>(published));
    CHECK(c.registry.size() == 8);
    CHECK_FALSE(c.registry.contains("WSC1"));
    CHECK(c.registry.producers_of(ConceptId("t")) == before_producers);
}

TEST_CASE("single-service plan publishes a copy of the member under a new name") {
    Registry r = testsupport::example_registry();
    Request req;
    req.provided = concepts({"a"});
    req.goals = concepts({"f"});
    auto result = compose(r, req);
    REQUIRE(result.ok());
    ExecutionPlan plan = execution_order(*result.graph);
    SimulationTrace trace = simulate(plan, req, r);
    REQUIRE(trace.success);

    auto published = publish_composite(r, "WS7COPY", plan, req, trace);
    REQUIRE(std::holds_alternative<Registry>(published));
    const ServiceDescriptor& copy = std::get<Registry>(published).at("WS7COPY");
    // WS7 matches the sub-request exactly ({a} -> {f}) and beats WS1 on
    // similarity, so the composite mirrors WS7
    const ServiceDescriptor& ws7 = r.at("WS7");
    CHECK(copy.inputs == ws7.inputs);
    CHECK(copy.outputs == concepts({"f"}));
    CHECK(copy.preconditions == ws7.preconditions);
    CHECK(copy.effects == ws7.effects);
}

TEST_CASE("publishing under an existing name is a collision") {
    Composed c;
    auto published = publish_composite(c.registry, "WS1", c.plan, c.request, c.trace);
    REQUIRE(std::holds_alternative<PublishError>(published));
    CHECK(std::get<PublishError>(published).kind == PublishError::Kind::NameCollision);
}

TEST_CASE("unverified plans are rejected") {
    Composed c;
    SimulationTrace failed;
    failed.success = false;
    auto published = publish_composite(c.registry, "WSC1", c.plan, c.request, failed);
    REQUIRE(std::holds_alternative<PublishError>(published));
    CHECK(std::get<PublishError>(published).kind == PublishError::Kind::UnverifiedPlan);
}

TEST_CASE("internally established preconditions are subtracted") {
    // B's precondition is established by A's effect one stage earlier
    std::vector<ServiceDescriptor> services = {
        {"A", concepts({"x"}), concepts({"y"}), props({"PA"}), props({"PB"})},
        {"B", concepts({"y"}), concepts({"z"}), props({"PB"}), props({"PC"})},
    };
    auto loaded = Registry::load(services, Taxonomy{}, props({"PA", "PB", "PC"}));
    REQUIRE(loaded.ok());
    Request req;
    req.provided = concepts({"x"});
    req.goals = concepts({"z"});
    auto result = compose(*loaded.registry, req);
    REQUIRE(result.ok());
    ExecutionPlan plan = execution_order(*result.graph);
    SimulationTrace trace = simulate(plan, req, *loaded.registry);
    REQUIRE(trace.success);

    ServiceDescriptor d = derive_composite_descriptor("AB", plan, req, *loaded.registry);
    CHECK(d.preconditions == props({"PA"}));
    CHECK(d.effects == props({"PB", "PC"}));
    CHECK(d.inputs == concepts({"x"}));
    CHECK(d.outputs == concepts({"z"}));
}
