// Copyright 2026 The tragame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tragame/instance_io.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

namespace tragame {
namespace {

int read_int(const YAML::Node& node, const std::string& what) {
  try {
    return node.as<int>();
  } catch (const YAML::Exception&) {
    throw InstanceFormatError(what + ": expected an integer");
  }
}

NodeId read_node(const YAML::Node& node, int label_base, int node_count,
                 const std::string& what) {
  const NodeId id = read_int(node, what) - label_base;
  if (id < 0 || id >= node_count) {
    throw InstanceFormatError(what + ": node label " + std::to_string(id + label_base) +
                              " outside [" + std::to_string(label_base) + ", " +
                              std::to_string(node_count - 1 + label_base) + "]");
  }
  return id;
}

}  // namespace

NetworkInstance parse_instance(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw InstanceFormatError(std::string("malformed instance file: ") + e.what());
  }
  if (!root.IsMap()) throw InstanceFormatError("instance file must be a mapping");
  if (!root["nodes"]) throw InstanceFormatError("missing `nodes`");
  const int node_count = read_int(root["nodes"], "nodes");
  if (node_count < 1 || node_count > kMaxNodes) {
    throw InstanceFormatError("nodes must be in [1, " + std::to_string(kMaxNodes) + "]");
  }
  const int label_base = root["label_base"] ? read_int(root["label_base"], "label_base") : 0;

  HearabilityGraph graph(node_count);
  if (const auto edges = root["edges"]) {
    if (!edges.IsSequence()) throw InstanceFormatError("`edges` must be a list");
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto edge = edges[k];
      const std::string what = "edges[" + std::to_string(k) + "]";
      if (!edge.IsSequence() || edge.size() != 2) {
        throw InstanceFormatError(what + ": expected a pair [i, j]");
      }
      const NodeId a = read_node(edge[0], label_base, node_count, what);
      const NodeId b = read_node(edge[1], label_base, node_count, what);
      if (a == b) throw InstanceFormatError(what + ": self-link");
      graph.add_edge(a, b);
    }
  }

  std::vector<E2eFlow> flows;
  const auto flow_list = root["flows"];
  if (!flow_list || !flow_list.IsSequence()) {
    throw InstanceFormatError("`flows` must be a list");
  }
  for (std::size_t k = 0; k < flow_list.size(); ++k) {
    const auto entry = flow_list[k];
    const std::string what = "flows[" + std::to_string(k) + "]";
    if (!entry.IsMap() || !entry["route"] || !entry["ac"]) {
      throw InstanceFormatError(what + ": expected {route: [...], ac: VO|BE}");
    }
    const auto route_node = entry["route"];
    if (!route_node.IsSequence()) throw InstanceFormatError(what + ".route must be a list");
    std::vector<NodeId> nodes;
    for (std::size_t h = 0; h < route_node.size(); ++h) {
      nodes.push_back(read_node(route_node[h], label_base, node_count, what + ".route"));
    }
    const auto ac = parse_access_category(entry["ac"].as<std::string>(""));
    if (!ac) throw InstanceFormatError(what + ".ac must be VO or BE");
    flows.push_back({static_cast<int>(k), Route(std::move(nodes)), *ac});
  }
  return NetworkInstance(std::move(graph), std::move(flows), label_base);
}

NetworkInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InstanceFormatError("cannot open instance file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

std::string format_instance(const NetworkInstance& instance) {
  std::ostringstream out;
  out << "nodes: " << instance.node_count() << "\n";
  out << "label_base: " << instance.label_base() << "\n";
  out << "edges: [";
  bool first = true;
  for (const auto& [a, b] : instance.graph().undirected_edges()) {
    out << (first ? "" : ", ") << "[" << instance.label(a) << ", " << instance.label(b) << "]";
    first = false;
  }
  out << "]\n";
  out << "flows:\n";
  for (const E2eFlow& flow : instance.flows()) {
    out << "  - {route: [";
    const auto& nodes = flow.route.nodes();
    for (std::size_t h = 0; h < nodes.size(); ++h) {
      out << (h ? ", " : "") << instance.label(nodes[h]);
    }
    out << "], ac: " << to_string(flow.intrinsic_ac) << "}\n";
  }
  return out.str();
}

void save_instance(const NetworkInstance& instance, const std::filesystem::path& path,
                   std::string_view header_comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file " + path.string());
  std::istringstream lines{std::string(header_comment)};
  for (std::string line; std::getline(lines, line);) out << "# " << line << "\n";
  out << format_instance(instance);
}

}  // namespace tragame
