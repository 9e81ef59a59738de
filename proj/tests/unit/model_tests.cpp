// Model invariants: identifiers, path resolution, well-formedness,
// owned-identifier renaming and structural isomorphism.
#include <doctest.h>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "gforge/model.hpp"
#include "gforge/parser.hpp"
#include "helpers.hpp"
#include "support/paths.hpp"

using namespace gforge;
using namespace gforge::testing;

namespace {

ArchitectureModel fixture_model(const std::string& name) {
  return parse_model(read_text_file(fixture_path(name)), name);
}

bool has_kind(const std::vector<Violation>& violations,
              const std::string& kind) {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

// A component with one out point wired for reuse across cases.
ArchElement sample_proxy() {
  ArchElement element;
  element.name = "proxy";
  element.kind = ElementKind::Component;
  element.service_kind = ServiceKind::Atomic;
  element.stateless = true;
  element.idempotent = true;
  element.ports.push_back(
      Port{"ComsP0", {ConnectionPoint{"ComsIncC0", Direction::In},
                      ConnectionPoint{"ComsOutC0", Direction::Out}}});
  BehaviourBlock behaviour;
  behaviour.definitions.push_back(
      AbstractionDef{"fetch", true, {"req"},
                     {BehaviourStatement{"relay(req)", {"relay"}}}});
  behaviour.definitions.push_back(AbstractionDef{"relay", false, {}, {}});
  behaviour.composition = {"fetch", "relay"};
  element.behaviour = behaviour;
  element.metadata["tier"] = "gold";
  element.annotations.push_back({"reliability", "level", "3", false});
  return element;
}

}  // namespace

TEST_CASE("is_valid_identifier accepts the hyphenated grammar") {
  CHECK(is_valid_identifier("portal"));
  CHECK(is_valid_identifier("health-e-childGateway"));
  CHECK(is_valid_identifier("_hidden"));
  CHECK(is_valid_identifier("a1-b2"));
  CHECK(is_valid_identifier("X"));

  CHECK_FALSE(is_valid_identifier(""));
  CHECK_FALSE(is_valid_identifier("1abc"));
  CHECK_FALSE(is_valid_identifier("-lead"));
  CHECK_FALSE(is_valid_identifier("two words"));
  CHECK_FALSE(is_valid_identifier("a::b"));
  CHECK_FALSE(is_valid_identifier("${value}"));
}

TEST_CASE("resolve_path walks element, port, point in order") {
  const ArchitectureModel model = fixture_model("mammogrid.gdsl");

  const ConnectionPoint& point = resolve_path(
      model, {"mammogridDataProxy", "ComsP0", "ComsOutC0"});
  CHECK(point.name == "ComsOutC0");
  CHECK(point.direction == Direction::Out);

  const Error no_element = expect_error([&] {
    resolve_path(model, {"ghost", "ComsP0", "ComsOutC0"});
  });
  CHECK(no_element.code() == ErrorCode::UnknownElement);

  const Error no_port = expect_error([&] {
    resolve_path(model, {"mammogridDataProxy", "NoSuchPort", "ComsOutC0"});
  });
  CHECK(no_port.code() == ErrorCode::UnknownPort);

  const Error no_point = expect_error([&] {
    resolve_path(model, {"mammogridDataProxy", "ComsP0", "NoSuchPoint"});
  });
  CHECK(no_point.code() == ErrorCode::UnknownPoint);
}

TEST_CASE("check_well_formed: a healthy model reports nothing") {
  CHECK(check_well_formed(fixture_model("mammogrid.gdsl")).empty());
  CHECK(check_well_formed(fixture_model("healthechild.gdsl")).empty());
}

TEST_CASE("check_well_formed: duplicate names at every level") {
  ArchitectureModel model;
  model.name = "dup";
  model.elements.push_back(sample_proxy());
  model.elements.push_back(sample_proxy());  // same element name
  auto violations = check_well_formed(model);
  REQUIRE(has_kind(violations, "DuplicateName"));
  CHECK(violations[0].subject == "proxy");
  CHECK(violations[0].message == "duplicate element name 'proxy'");

  // Duplicate port inside one element.
  ArchitectureModel ports;
  ports.name = "dup-ports";
  ArchElement element = sample_proxy();
  element.ports.push_back(element.ports[0]);
  ports.elements.push_back(element);
  violations = check_well_formed(ports);
  REQUIRE(has_kind(violations, "DuplicateName"));
  CHECK(violations[0].subject == "proxy::ComsP0");

  // Duplicate point inside one port.
  ArchitectureModel points;
  points.name = "dup-points";
  ArchElement inner = sample_proxy();
  inner.ports[0].points.push_back(inner.ports[0].points[0]);
  points.elements.push_back(inner);
  violations = check_well_formed(points);
  REQUIRE(has_kind(violations, "DuplicateName"));
  CHECK(violations[0].subject == "proxy::ComsP0::ComsIncC0");

  // Duplicate abstraction definition.
  ArchitectureModel defs;
  defs.name = "dup-defs";
  ArchElement behaving = sample_proxy();
  behaving.behaviour->definitions.push_back(
      behaving.behaviour->definitions[0]);
  defs.elements.push_back(behaving);
  CHECK(has_kind(check_well_formed(defs), "DuplicateName"));
}

TEST_CASE("check_well_formed: composition must reference defined abstractions") {
  ArchitectureModel model;
  model.name = "loose";
  ArchElement element = sample_proxy();
  element.behaviour->composition.push_back("phantom");
  model.elements.push_back(element);
  const auto violations = check_well_formed(model);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].kind == "UnknownAbstraction");
  CHECK(violations[0].subject == "proxy");
  CHECK(violations[0].message ==
        "composition references undefined abstraction 'phantom'");
}

TEST_CASE("check_well_formed: attachment endpoints must resolve") {
  const ArchitectureModel model = fixture_model("malformed.gdsl");
  const auto violations = check_well_formed(model);
  REQUIRE_FALSE(violations.empty());
  CHECK(has_kind(violations, "DanglingAttachment"));
}

TEST_CASE("check_well_formed: attachments run out point to in point") {
  ArchitectureModel model;
  model.name = "wiring";
  model.elements.push_back(sample_proxy());
  ArchElement sink = sample_proxy();
  sink.name = "sink";
  model.elements.push_back(sink);

  SUBCASE("in-point source is a direction violation") {
    model.attachments.push_back({{"proxy", "ComsP0", "ComsIncC0"},
                                 {"sink", "ComsP0", "ComsIncC0"}});
    const auto violations = check_well_formed(model);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == "DirectionViolation");
    CHECK(violations[0].message ==
          "attachment source proxy::ComsP0::ComsIncC0 is not an out point");
  }

  SUBCASE("out-point target is a direction violation") {
    model.attachments.push_back({{"proxy", "ComsP0", "ComsOutC0"},
                                 {"sink", "ComsP0", "ComsOutC0"}});
    const auto violations = check_well_formed(model);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == "DirectionViolation");
  }

  SUBCASE("a point attached to itself is flagged") {
    model.attachments.push_back({{"proxy", "ComsP0", "ComsOutC0"},
                                 {"proxy", "ComsP0", "ComsOutC0"}});
    const auto violations = check_well_formed(model);
    CHECK(has_kind(violations, "SelfAttachment"));
  }

  SUBCASE("a repeated attachment is flagged once") {
    const Attachment wire{{"proxy", "ComsP0", "ComsOutC0"},
                          {"sink", "ComsP0", "ComsIncC0"}};
    model.attachments.push_back(wire);
    model.attachments.push_back(wire);
    const auto violations = check_well_formed(model);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == "DuplicateAttachment");
  }

  SUBCASE("properly oriented wiring is clean") {
    model.attachments.push_back({{"proxy", "ComsP0", "ComsOutC0"},
                                 {"sink", "ComsP0", "ComsIncC0"}});
    CHECK(check_well_formed(model).empty());
  }
}

TEST_CASE("rename_owned_identifiers rewrites structure, not prose") {
  const ArchElement source = sample_proxy();
  const std::map<Identifier, Identifier> rename{
      {"proxy", "proxyClone0"}, {"ComsP0", "P"}, {"fetch", "grab"}};
  const ArchElement renamed = rename_owned_identifiers(source, rename);

  CHECK(renamed.name == "proxyClone0");
  CHECK(renamed.ports[0].name == "P");
  // Points were not in the map, so they keep their names.
  CHECK(renamed.ports[0].points[0].name == "ComsIncC0");
  CHECK(renamed.behaviour->definitions[0].name == "grab");
  // The composition entry that referenced the renamed abstraction follows.
  CHECK(renamed.behaviour->composition ==
        std::vector<Identifier>{"grab", "relay"});
  // Invocation lists follow the map too.
  const std::map<Identifier, Identifier> relay_rename{{"relay", "route"}};
  const ArchElement rerouted =
      rename_owned_identifiers(source, relay_rename);
  CHECK(rerouted.behaviour->definitions[0].statements[0].invocations ==
        std::vector<Identifier>{"route"});

  // Statement text, metadata and annotations stay untouched.
  CHECK(renamed.behaviour->definitions[0].statements[0].text == "relay(req)");
  CHECK(renamed.metadata == source.metadata);
  CHECK(renamed.annotations == source.annotations);
}

TEST_CASE("structurally_isomorphic accepts a faithful clone") {
  const ArchElement source = sample_proxy();
  const std::map<Identifier, Identifier> rename{{"proxy", "proxyClone0"}};
  ArchElement clone = rename_owned_identifiers(source, rename);
  // Clones drop annotations and grow bookkeeping metadata; the
  // comparison must not care.
  clone.annotations.clear();
  clone.metadata["replica-group"] = "proxy";
  CHECK(structurally_isomorphic(source, clone, rename));
}

TEST_CASE("structurally_isomorphic rejects structural drift") {
  const ArchElement source = sample_proxy();
  const std::map<Identifier, Identifier> rename{{"proxy", "proxyClone0"}};

  SUBCASE("kind change") {
    ArchElement other = rename_owned_identifiers(source, rename);
    other.kind = ElementKind::Connector;
    CHECK_FALSE(structurally_isomorphic(source, other, rename));
  }
  SUBCASE("service property change") {
    ArchElement other = rename_owned_identifiers(source, rename);
    other.stateless = false;
    CHECK_FALSE(structurally_isomorphic(source, other, rename));
  }
  SUBCASE("extra port") {
    ArchElement other = rename_owned_identifiers(source, rename);
    other.ports.push_back(Port{"Spare", {}});
    CHECK_FALSE(structurally_isomorphic(source, other, rename));
  }
  SUBCASE("flipped point direction") {
    ArchElement other = rename_owned_identifiers(source, rename);
    other.ports[0].points[0].direction = Direction::Out;
    CHECK_FALSE(structurally_isomorphic(source, other, rename));
  }
  SUBCASE("behaviour drift") {
    ArchElement other = rename_owned_identifiers(source, rename);
    other.behaviour->definitions.push_back(AbstractionDef{"extra", false, {}, {}});
    CHECK_FALSE(structurally_isomorphic(source, other, rename));
  }
  SUBCASE("unmapped name mismatch") {
    ArchElement other = rename_owned_identifiers(source, rename);
    CHECK_FALSE(structurally_isomorphic(source, other, {}));
  }
}

TEST_CASE("anchored_annotations puts model-level entries first") {
  ArchitectureModel model;
  model.name = "anchored";
  model.annotations.push_back({"budget", "tier", "gold", false});
  ArchElement a = sample_proxy();
  ArchElement b = sample_proxy();
  b.name = "later";
  b.annotations.assign({{"privacy", "anonymize", "full", false}});
  model.elements.push_back(a);
  model.elements.push_back(b);

  const auto anchored = model.anchored_annotations();
  REQUIRE(anchored.size() == 3);
  CHECK(anchored[0].target == "");
  CHECK(anchored[0].annotation.category == "budget");
  CHECK(anchored[1].target == "proxy");
  CHECK(anchored[2].target == "later");
  CHECK(anchored[2].annotation.category == "privacy");
}
