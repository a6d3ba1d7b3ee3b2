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

#ifndef TRAGAME_MODEL_HPP_
#define TRAGAME_MODEL_HPP_

// Network model of a quasi-static multi-hop ad hoc network (hearability graph,
// routes, e2e-flows) and resolution of plausible opportunistic traffic
// remapping attacks into per-hop access categories.

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tragame {

using NodeId = int;

// Attacker sets are 64-bit masks, so instances are bounded by this.
inline constexpr int kMaxNodes = 64;

enum class AccessCategory : std::uint8_t { kBE = 0, kVO = 1 };

std::string_view to_string(AccessCategory ac);
std::optional<AccessCategory> parse_access_category(std::string_view text);

class InvalidInstanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Directed hearability graph G = <N, L> over dense node ids [0, node_count).
class HearabilityGraph {
 public:
  HearabilityGraph() = default;
  explicit HearabilityGraph(int node_count);

  int node_count() const { return node_count_; }

  // Adds the directed link (from, to). Self-links and out-of-range ids throw.
  void add_link(NodeId from, NodeId to);
  // Adds both (a, b) and (b, a).
  void add_edge(NodeId a, NodeId b);

  bool has_link(NodeId from, NodeId to) const;
  std::vector<NodeId> successors(NodeId node) const;

  // Undirected edge list (a < b) for every pair linked in either direction.
  std::vector<std::pair<NodeId, NodeId>> undirected_edges() const;

  // All-pairs hop distances on the undirected view of the graph. Unreachable
  // pairs get -1.
  std::vector<std::vector<int>> hop_distances() const;

  bool is_connected() const;

  bool operator==(const HearabilityGraph&) const = default;

 private:
  int node_count_ = 0;
  std::vector<std::uint64_t> out_;  // out_[i] bit j <=> (i, j) in L
};

// Ordered node sequence (s_r, ..., d_r). Structural checks live in
// validate_instance(); the queries below assume a well-formed route.
class Route {
 public:
  Route() = default;
  explicit Route(std::vector<NodeId> nodes) : nodes_(std::move(nodes)) {}
  Route(std::initializer_list<NodeId> nodes) : nodes_(nodes) {}

  const std::vector<NodeId>& nodes() const { return nodes_; }
  std::size_t length() const { return nodes_.size(); }
  std::size_t hop_count() const { return nodes_.empty() ? 0 : nodes_.size() - 1; }

  NodeId source() const { return nodes_.front(); }
  NodeId destination() const { return nodes_.back(); }

  bool contains(NodeId node) const { return position(node).has_value(); }
  std::optional<std::size_t> position(NodeId node) const;

  // pred_{r,i}; the source is its own predecessor.
  NodeId predecessor(NodeId node) const;
  // succ_{r,i}; undefined (throws) at the destination.
  NodeId successor(NodeId node) const;
  // P_{r,i}: nodes preceding or coinciding with `node`.
  std::vector<NodeId> prefix(NodeId node) const;

  bool operator==(const Route&) const = default;

 private:
  std::vector<NodeId> nodes_;
};

struct E2eFlow {
  int flow_id = 0;
  Route route;
  AccessCategory intrinsic_ac = AccessCategory::kBE;

  bool operator==(const E2eFlow&) const = default;
};

// A set of plausible opportunistic attackers, i.e. one strategy profile.
class AttackerSet {
 public:
  constexpr AttackerSet() = default;
  constexpr explicit AttackerSet(std::uint64_t mask) : mask_(mask) {}
  AttackerSet(std::initializer_list<NodeId> members);

  static AttackerSet full(int node_count);
  static AttackerSet from_members(const std::vector<NodeId>& members);

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr bool contains(NodeId node) const { return (mask_ >> node) & 1U; }
  constexpr bool empty() const { return mask_ == 0; }
  int size() const { return std::popcount(mask_); }

  void insert(NodeId node);
  void erase(NodeId node);
  // A^{[i]}: symmetric difference with {node}.
  constexpr AttackerSet toggled(NodeId node) const {
    return AttackerSet(mask_ ^ (std::uint64_t{1} << node));
  }

  std::vector<NodeId> members() const;
  bool is_subset_of(AttackerSet other) const { return (mask_ & ~other.mask_) == 0; }

  constexpr bool operator==(const AttackerSet&) const = default;
  constexpr auto operator<=>(const AttackerSet&) const = default;

 private:
  std::uint64_t mask_ = 0;
};

// The immutable world a game is played on.
class NetworkInstance {
 public:
  NetworkInstance() = default;
  NetworkInstance(HearabilityGraph graph, std::vector<E2eFlow> flows, int label_base = 0);

  int node_count() const { return graph_.node_count(); }
  const HearabilityGraph& graph() const { return graph_; }
  const std::vector<E2eFlow>& flows() const { return flows_; }
  const E2eFlow& flow(int flow_id) const;

  // Presentation offset: node id i is shown as i + label_base.
  int label_base() const { return label_base_; }
  int label(NodeId node) const { return node + label_base_; }
  NodeId node_from_label(int label) const { return label - label_base_; }
  AttackerSet attackers_from_labels(std::initializer_list<int> labels) const;

  bool operator==(const NetworkInstance&) const = default;

 private:
  HearabilityGraph graph_;
  std::vector<E2eFlow> flows_;
  int label_base_ = 0;
};

struct Violation {
  enum class Kind {
    kRouteTooShort,
    kNodeOutOfRange,
    kRepeatedNode,
    kMissingLink,
    kFlowIdNotDense,  // flow ids must equal their position (file order)
    kNodeWithoutFlow,
  };
  Kind kind;
  std::optional<int> flow_id;
  std::optional<NodeId> node;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(Violation::Kind kind) const;
  std::string summary() const;
};

ValidationReport validate_instance(const NetworkInstance& instance);

// Throws InvalidInstanceError carrying the report summary if invalid.
void require_valid(const NetworkInstance& instance);

struct HopEntry {
  NodeId node;          // transmitting node
  AccessCategory hac;   // AC field carried on the hop node -> successor

  bool operator==(const HopEntry&) const = default;
};

// Resolved h-flows: hops[flow_id] has one entry per non-destination route node.
struct HopAcTable {
  std::vector<std::vector<HopEntry>> hops;

  const std::vector<HopEntry>& for_flow(int flow_id) const { return hops.at(flow_id); }
  // AC with which the flow is recognized at its destination.
  AccessCategory arrival_ac(int flow_id) const { return hops.at(flow_id).back().hac; }

  bool operator==(const HopAcTable&) const = default;
};

HopAcTable resolve_attacks(const NetworkInstance& instance, AttackerSet attackers);

struct TraEvent {
  enum class Kind : std::uint8_t { kUpgrade, kDowngrade };
  int flow_id;
  NodeId node;
  Kind kind;

  bool operator==(const TraEvent&) const = default;
};

std::string_view to_string(TraEvent::Kind kind);

// Sorted by (flow_id, route position).
std::vector<TraEvent> tra_events(const NetworkInstance& instance, AttackerSet attackers);

}  // namespace tragame

#endif  // TRAGAME_MODEL_HPP_
