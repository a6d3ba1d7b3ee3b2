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

#include "tragame/model.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace tragame {

std::string_view to_string(AccessCategory ac) {
  return ac == AccessCategory::kVO ? "VO" : "BE";
}

std::optional<AccessCategory> parse_access_category(std::string_view text) {
  if (text == "VO" || text == "vo") return AccessCategory::kVO;
  if (text == "BE" || text == "be") return AccessCategory::kBE;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// HearabilityGraph

HearabilityGraph::HearabilityGraph(int node_count) : node_count_(node_count) {
  if (node_count < 0 || node_count > kMaxNodes) {
    throw std::invalid_argument("node count must be in [0, " + std::to_string(kMaxNodes) +
                                "], got " + std::to_string(node_count));
  }
  out_.assign(node_count, 0);
}

void HearabilityGraph::add_link(NodeId from, NodeId to) {
  if (from < 0 || from >= node_count_ || to < 0 || to >= node_count_) {
    throw std::out_of_range("link (" + std::to_string(from) + ", " + std::to_string(to) +
                            ") outside node range");
  }
  if (from == to) {
    throw std::invalid_argument("self-link at node " + std::to_string(from));
  }
  out_[from] |= std::uint64_t{1} << to;
}

void HearabilityGraph::add_edge(NodeId a, NodeId b) {
  add_link(a, b);
  add_link(b, a);
}

bool HearabilityGraph::has_link(NodeId from, NodeId to) const {
  if (from < 0 || from >= node_count_ || to < 0 || to >= node_count_) return false;
  return (out_[from] >> to) & 1U;
}

std::vector<NodeId> HearabilityGraph::successors(NodeId node) const {
  std::vector<NodeId> result;
  for (NodeId j = 0; j < node_count_; ++j) {
    if (has_link(node, j)) result.push_back(j);
  }
  return result;
}

std::vector<std::pair<NodeId, NodeId>> HearabilityGraph::undirected_edges() const {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId a = 0; a < node_count_; ++a) {
    for (NodeId b = a + 1; b < node_count_; ++b) {
      if (has_link(a, b) || has_link(b, a)) edges.emplace_back(a, b);
    }
  }
  return edges;
}

std::vector<std::vector<int>> HearabilityGraph::hop_distances() const {
  std::vector<std::vector<int>> dist(node_count_, std::vector<int>(node_count_, -1));
  for (NodeId start = 0; start < node_count_; ++start) {
    std::queue<NodeId> frontier;
    dist[start][start] = 0;
    frontier.push(start);
    while (!frontier.empty()) {
      const NodeId u = frontier.front();
      frontier.pop();
      for (NodeId v = 0; v < node_count_; ++v) {
        if (dist[start][v] >= 0) continue;
        if (has_link(u, v) || has_link(v, u)) {
          dist[start][v] = dist[start][u] + 1;
          frontier.push(v);
        }
      }
    }
  }
  return dist;
}

bool HearabilityGraph::is_connected() const {
  if (node_count_ <= 1) return true;
  const auto dist = hop_distances();
  return std::none_of(dist[0].begin(), dist[0].end(), [](int d) { return d < 0; });
}

// ---------------------------------------------------------------------------
// Route

std::optional<std::size_t> Route::position(NodeId node) const {
  const auto it = std::find(nodes_.begin(), nodes_.end(), node);
  if (it == nodes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

NodeId Route::predecessor(NodeId node) const {
  const auto pos = position(node);
  if (!pos) throw std::out_of_range("node " + std::to_string(node) + " not on route");
  return *pos == 0 ? nodes_.front() : nodes_[*pos - 1];
}

NodeId Route::successor(NodeId node) const {
  const auto pos = position(node);
  if (!pos) throw std::out_of_range("node " + std::to_string(node) + " not on route");
  if (*pos + 1 >= nodes_.size()) {
    throw std::out_of_range("destination " + std::to_string(node) + " has no successor");
  }
  return nodes_[*pos + 1];
}

std::vector<NodeId> Route::prefix(NodeId node) const {
  const auto pos = position(node);
  if (!pos) throw std::out_of_range("node " + std::to_string(node) + " not on route");
  return {nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(*pos) + 1};
}

// ---------------------------------------------------------------------------
// AttackerSet

AttackerSet::AttackerSet(std::initializer_list<NodeId> members) {
  for (NodeId node : members) insert(node);
}

AttackerSet AttackerSet::full(int node_count) {
  if (node_count < 0 || node_count > kMaxNodes) throw std::invalid_argument("bad node count");
  return AttackerSet(node_count == 64 ? ~std::uint64_t{0}
                                      : (std::uint64_t{1} << node_count) - 1);
}

AttackerSet AttackerSet::from_members(const std::vector<NodeId>& members) {
  AttackerSet set;
  for (NodeId node : members) set.insert(node);
  return set;
}

void AttackerSet::insert(NodeId node) {
  if (node < 0 || node >= kMaxNodes) throw std::out_of_range("attacker id out of range");
  mask_ |= std::uint64_t{1} << node;
}

void AttackerSet::erase(NodeId node) {
  if (node < 0 || node >= kMaxNodes) throw std::out_of_range("attacker id out of range");
  mask_ &= ~(std::uint64_t{1} << node);
}

std::vector<NodeId> AttackerSet::members() const {
  std::vector<NodeId> result;
  for (std::uint64_t rest = mask_; rest != 0; rest &= rest - 1) {
    result.push_back(std::countr_zero(rest));
  }
  return result;
}

// ---------------------------------------------------------------------------
// NetworkInstance

NetworkInstance::NetworkInstance(HearabilityGraph graph, std::vector<E2eFlow> flows,
                                 int label_base)
    : graph_(std::move(graph)), flows_(std::move(flows)), label_base_(label_base) {}

const E2eFlow& NetworkInstance::flow(int flow_id) const {
  if (flow_id < 0 || flow_id >= static_cast<int>(flows_.size())) {
    throw std::out_of_range("unknown flow id " + std::to_string(flow_id));
  }
  return flows_[flow_id];
}

AttackerSet NetworkInstance::attackers_from_labels(std::initializer_list<int> labels) const {
  AttackerSet set;
  for (int label : labels) {
    const NodeId node = node_from_label(label);
    if (node < 0 || node >= node_count()) {
      throw std::out_of_range("node label " + std::to_string(label) + " outside instance");
    }
    set.insert(node);
  }
  return set;
}

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::has(Violation::Kind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::ostringstream out;
  for (std::size_t k = 0; k < violations.size(); ++k) {
    if (k) out << "; ";
    out << violations[k].message;
  }
  return out.str();
}

ValidationReport validate_instance(const NetworkInstance& instance) {
  ValidationReport report;
  const int n = instance.node_count();
  auto add = [&report](Violation::Kind kind, std::optional<int> flow_id,
                       std::optional<NodeId> node, std::string message) {
    report.violations.push_back({kind, flow_id, node, std::move(message)});
  };

  std::vector<bool> is_source(n, false);
  const auto& flows = instance.flows();
  for (std::size_t idx = 0; idx < flows.size(); ++idx) {
    const E2eFlow& flow = flows[idx];
    const std::string where = "flow " + std::to_string(flow.flow_id);
    if (flow.flow_id != static_cast<int>(idx)) {
      add(Violation::Kind::kFlowIdNotDense, flow.flow_id, std::nullopt,
          where + ": id differs from position " + std::to_string(idx));
    }
    const auto& nodes = flow.route.nodes();
    if (nodes.size() < 2) {
      add(Violation::Kind::kRouteTooShort, flow.flow_id, std::nullopt,
          where + ": route needs at least 2 nodes");
    }
    bool in_range = true;
    for (NodeId node : nodes) {
      if (node < 0 || node >= n) {
        add(Violation::Kind::kNodeOutOfRange, flow.flow_id, node,
            where + ": node " + std::to_string(node) + " out of range");
        in_range = false;
      }
    }
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      for (std::size_t b = a + 1; b < nodes.size(); ++b) {
        if (nodes[a] == nodes[b]) {
          add(Violation::Kind::kRepeatedNode, flow.flow_id, nodes[a],
              where + ": repeated node " + std::to_string(nodes[a]));
        }
      }
    }
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      if (nodes[k] == nodes[k + 1]) continue;  // already reported as repeated
      if (!instance.graph().has_link(nodes[k], nodes[k + 1])) {
        add(Violation::Kind::kMissingLink, flow.flow_id, nodes[k],
            where + ": missing link " + std::to_string(nodes[k]) + "->" +
                std::to_string(nodes[k + 1]));
      }
    }
    if (in_range && !nodes.empty()) is_source[nodes.front()] = true;
  }
  for (NodeId node = 0; node < n; ++node) {
    if (!is_source[node]) {
      add(Violation::Kind::kNodeWithoutFlow, std::nullopt, node,
          "node " + std::to_string(node) + " sources no flow");
    }
  }
  return report;
}

void require_valid(const NetworkInstance& instance) {
  const auto report = validate_instance(instance);
  if (!report.ok()) throw InvalidInstanceError("invalid instance: " + report.summary());
}

// ---------------------------------------------------------------------------
// Attack resolution

namespace {

HopAcTable resolve_unchecked(const NetworkInstance& instance, AttackerSet attackers) {
  HopAcTable table;
  table.hops.reserve(instance.flows().size());
  for (const E2eFlow& flow : instance.flows()) {
    const auto& nodes = flow.route.nodes();
    std::vector<HopEntry> hops;
    hops.reserve(nodes.size() - 1);
    // Source: only TRA+ is plausible.
    AccessCategory hac = flow.intrinsic_ac;
    if (attackers.contains(nodes.front()) && hac == AccessCategory::kBE) {
      hac = AccessCategory::kVO;
    }
    hops.push_back({nodes.front(), hac});
    // Transit: only TRA- is plausible. The destination never remaps.
    for (std::size_t k = 1; k + 1 < nodes.size(); ++k) {
      if (attackers.contains(nodes[k]) && hac == AccessCategory::kVO) {
        hac = AccessCategory::kBE;
      }
      hops.push_back({nodes[k], hac});
    }
    table.hops.push_back(std::move(hops));
  }
  return table;
}

}  // namespace

HopAcTable resolve_attacks(const NetworkInstance& instance, AttackerSet attackers) {
  require_valid(instance);
  if (instance.node_count() < kMaxNodes &&
      (attackers.mask() >> instance.node_count()) != 0) {
    throw std::out_of_range("attacker set references nodes outside the instance");
  }
  return resolve_unchecked(instance, attackers);
}

std::string_view to_string(TraEvent::Kind kind) {
  return kind == TraEvent::Kind::kUpgrade ? "TRA+" : "TRA-";
}

std::vector<TraEvent> tra_events(const NetworkInstance& instance, AttackerSet attackers) {
  const HopAcTable table = resolve_attacks(instance, attackers);
  std::vector<TraEvent> events;
  for (const E2eFlow& flow : instance.flows()) {
    const auto& hops = table.for_flow(flow.flow_id);
    AccessCategory incoming = flow.intrinsic_ac;
    for (const HopEntry& hop : hops) {
      if (hop.hac != incoming) {
        events.push_back({flow.flow_id, hop.node,
                          hop.hac == AccessCategory::kVO ? TraEvent::Kind::kUpgrade
                                                         : TraEvent::Kind::kDowngrade});
      }
      incoming = hop.hac;
    }
  }
  return events;
}

}  // namespace tragame
