#include "gforge/codegen.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gforge {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string lowercase(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return text;
}

const ArchElement* parent_of(const ArchitectureModel& model,
                             const ArchElement& element) {
  auto it = element.metadata.find("parent");
  if (it == element.metadata.end()) return nullptr;
  return model.find_element(it->second);
}

// Walks parent metadata up to the first-order element. Bounded by the
// element count so malformed parent cycles cannot hang us.
const ArchElement& first_order_ancestor(const ArchitectureModel& model,
                                        const ArchElement& element) {
  const ArchElement* current = &element;
  for (std::size_t hops = 0; hops <= model.elements.size(); ++hops) {
    const ArchElement* parent = parent_of(model, *current);
    if (!parent) return *current;
    current = parent;
  }
  return *current;
}

bool is_first_order(const ArchElement& element) {
  return element.metadata.find("parent") == element.metadata.end();
}

std::string manifest_kind(const ArchElement& element) {
  switch (element.service_kind) {
    case ServiceKind::Atomic: return "atomic";
    case ServiceKind::Composite: return "composite";
    case ServiceKind::Unspecified:
      return element.stateless ? "atomic" : "composite";
  }
  return "atomic";
}

ordered_json endpoints_json(const ArchElement& element,
                            const std::string& port_prefix) {
  ordered_json endpoints = ordered_json::array();
  for (const auto& port : element.ports)
    for (const auto& point : port.points)
      endpoints.push_back({{"port", port_prefix + port.name},
                           {"point", point.name},
                           {"direction", direction_name(point.direction)}});
  return endpoints;
}

ordered_json operations_json(const ArchElement& element,
                             const std::string& prefix) {
  ordered_json operations = ordered_json::array();
  if (element.behaviour)
    for (const auto& def : element.behaviour->definitions)
      operations.push_back(prefix + def.name);
  return operations;
}

ordered_json metadata_json(const ArchElement& element) {
  ordered_json metadata = ordered_json::object();
  for (const auto& [key, value] : element.metadata) metadata[key] = value;
  return metadata;
}

// Children (parent metadata) rendered as nested object descriptors.
ordered_json objects_json(const ArchitectureModel& model,
                          const ArchElement& owner) {
  ordered_json objects = ordered_json::array();
  for (const auto& element : model.elements) {
    const ArchElement* parent = parent_of(model, element);
    if (!parent || parent->name != owner.name) continue;
    ordered_json object = {{"service", element.name},
                           {"kind", manifest_kind(element)},
                           {"stateless", element.stateless},
                           {"operations", operations_json(element, "")},
                           {"endpoints", endpoints_json(element, "")}};
    ordered_json nested = objects_json(model, element);
    if (!nested.empty()) object["objects"] = std::move(nested);
    objects.push_back(std::move(object));
  }
  return objects;
}

// Wiring seen from `owner`: every attachment leaving it (or one of
// its children), expressed against first-order services and routed
// through connectors when one sits in between.
ordered_json wiring_json(const ArchitectureModel& model,
                         const ArchElement& owner) {
  ordered_json wiring = ordered_json::array();
  for (const auto& attachment : model.attachments) {
    const ArchElement* from = model.find_element(attachment.from.element);
    const ArchElement* to = model.find_element(attachment.to.element);
    if (!from || !to) continue;  // dangling; the checker reports these
    const ArchElement& source = first_order_ancestor(model, *from);
    if (source.name != owner.name) continue;
    const ArchElement& sink = first_order_ancestor(model, *to);
    if (sink.name == owner.name) continue;  // internal wiring

    if (sink.kind == ElementKind::Component) {
      wiring.push_back({{"to_service", sink.name}, {"via", nullptr}});
      continue;
    }
    // Route through the connector to whatever it feeds.
    bool fed_anything = false;
    for (const auto& onward : model.attachments) {
      const ArchElement* hop = model.find_element(onward.from.element);
      const ArchElement* dest = model.find_element(onward.to.element);
      if (!hop || !dest) continue;
      if (first_order_ancestor(model, *hop).name != sink.name) continue;
      const ArchElement& far = first_order_ancestor(model, *dest);
      if (far.name == sink.name || far.name == owner.name) continue;
      if (far.kind != ElementKind::Component) continue;
      wiring.push_back({{"to_service", far.name}, {"via", sink.name}});
      fed_anything = true;
    }
    if (!fed_anything)
      wiring.push_back({{"to_service", sink.name}, {"via", sink.name}});
  }
  return wiring;
}

std::string dump(const ordered_json& value) { return value.dump(2) + "\n"; }

std::vector<EmittedArtifact> emit_complex_objects(
    const ArchitectureModel& model) {
  std::vector<EmittedArtifact> artifacts;
  for (const auto& element : model.elements) {
    if (!is_first_order(element)) continue;
    if (element.kind == ElementKind::Component) {
      ordered_json manifest = {
          {"service", element.name},
          {"kind", manifest_kind(element)},
          {"stateless", element.stateless},
          {"operations", operations_json(element, "")},
          {"endpoints", endpoints_json(element, "")},
          {"wiring", wiring_json(model, element)},
          {"metadata", metadata_json(element)}};
      ordered_json objects = objects_json(model, element);
      if (!objects.empty()) manifest["objects"] = std::move(objects);
      artifacts.push_back(
          {element.name + ".manifest.json", dump(manifest)});
    } else {
      ordered_json routing = ordered_json::array();
      for (const auto& attachment : model.attachments) {
        if (attachment.from.element != element.name) continue;
        routing.push_back({{"service", attachment.to.element},
                           {"port", attachment.to.port},
                           {"point", attachment.to.point}});
      }
      ordered_json descriptor = {{"service", element.name},
                                 {"kind", "connector"},
                                 {"routing", std::move(routing)},
                                 {"metadata", metadata_json(element)}};
      artifacts.push_back(
          {element.name + ".connector.json", dump(descriptor)});
    }
  }
  return artifacts;
}

std::vector<EmittedArtifact> emit_monolith(const ArchitectureModel& model) {
  ordered_json operations = ordered_json::array();
  ordered_json endpoints = ordered_json::array();
  for (const auto& element : model.elements) {
    for (const auto& op : operations_json(element, element.name + "::"))
      operations.push_back(op);
    for (const auto& endpoint : endpoints_json(element, element.name + "::"))
      endpoints.push_back(endpoint);
  }
  ordered_json manifest = {{"service", model.name},
                           {"kind", "composite"},
                           {"stateless", false},
                           {"operations", std::move(operations)},
                           {"endpoints", std::move(endpoints)},
                           {"wiring", ordered_json::array()},
                           {"metadata", ordered_json::object()}};
  return {{model.name + ".manifest.json", dump(manifest)}};
}

}  // namespace

std::vector<EmittedArtifact> emit_manifests(const ArchitectureModel& model,
                                            Granularity granularity) {
  std::vector<EmittedArtifact> artifacts =
      granularity == Granularity::ComplexObjects ? emit_complex_objects(model)
                                                 : emit_monolith(model);

  ordered_json listing = ordered_json::array();
  std::set<std::string> seen;
  for (const auto& artifact : artifacts) {
    const std::string name = artifact.path.string();
    if (!seen.insert(lowercase(name)).second)
      throw Error(ErrorCode::NameCollision,
                  "artifact filename '" + name +
                      "' collides case-insensitively with another artifact");
    listing.push_back(name);
  }
  ordered_json index = {{"model", model.name},
                        {"stage", stage_name(model.stage)},
                        {"artifacts", std::move(listing)}};
  artifacts.push_back({"gesa-index.json", dump(index)});
  return artifacts;
}

std::string emit_graph(const ArchitectureModel& model) {
  std::ostringstream out;
  out << "digraph \"" << model.name << "\" {\n";
  out << "  rankdir=LR;\n";
  for (const auto& element : model.elements) {
    if (!is_first_order(element)) continue;
    out << "  \"" << element.name << "\" [shape="
        << (element.kind == ElementKind::Component ? "box" : "diamond")
        << "];\n";
  }
  for (const auto& attachment : model.attachments) {
    const ArchElement* from = model.find_element(attachment.from.element);
    const ArchElement* to = model.find_element(attachment.to.element);
    if (!from || !to) continue;
    out << "  \"" << first_order_ancestor(model, *from).name << "\" -> \""
        << first_order_ancestor(model, *to).name << "\" [label=\""
        << attachment.from.point << " → " << attachment.to.point
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::vector<std::filesystem::path> write_artifacts(
    const std::vector<EmittedArtifact>& artifacts,
    const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw Error(ErrorCode::IoError,
                "cannot create '" + out_dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto& artifact : artifacts) {
    const std::filesystem::path path = out_dir / artifact.path;
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    out << artifact.content;
    if (!out)
      throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
    written.push_back(path);
  }
  return written;
}

}  // namespace gforge
