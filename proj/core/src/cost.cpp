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

#include "tragame/cost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tragame {

void validate(const RankParams& params) {
  if (params.interference_radius < 1) {
    throw std::invalid_argument("interference_radius must be >= 1");
  }
  const auto& w = params.weights;
  for (double x : {w.vo_behind_vo, w.vo_behind_be, w.be_behind_vo, w.be_behind_be}) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("competition weights must be finite and nonnegative");
    }
  }
}

std::vector<HFlowRef> competing_hflows(const NetworkInstance& instance,
                                       const HopAcTable& table, int flow_id,
                                       NodeId transmitting_node, const RankParams& params) {
  validate(params);
  const E2eFlow& flow = instance.flow(flow_id);
  const auto pos = flow.route.position(transmitting_node);
  if (!pos || *pos + 1 >= flow.route.length()) {
    throw std::out_of_range("node " + std::to_string(transmitting_node) +
                            " transmits no h-flow of flow " + std::to_string(flow_id));
  }
  const auto dist = instance.graph().hop_distances();
  const auto& near = dist[transmitting_node];

  std::vector<HFlowRef> result;
  for (std::size_t f = 0; f < table.hops.size(); ++f) {
    for (const HopEntry& hop : table.hops[f]) {
      if (static_cast<int>(f) == flow_id && hop.node == transmitting_node) continue;
      const int d = near[hop.node];
      if (d >= 0 && d <= params.interference_radius) {
        result.push_back({static_cast<int>(f), hop.node, hop.hac});
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

double hflow_rank(AccessCategory own_hac, std::span<const HFlowRef> competitors,
                  const CompetitionWeights& weights) {
  const auto vo = std::count_if(competitors.begin(), competitors.end(),
                                [](const HFlowRef& h) { return h.hac == AccessCategory::kVO; });
  const auto be = static_cast<std::ptrdiff_t>(competitors.size()) - vo;
  return 1.0 + weights.weight(own_hac, AccessCategory::kVO) * static_cast<double>(vo) +
         weights.weight(own_hac, AccessCategory::kBE) * static_cast<double>(be);
}

double aggregate(Aggregation how, std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (how == Aggregation::kMax) return *std::max_element(values.begin(), values.end());
  return std::accumulate(values.begin(), values.end(), 0.0);
}

double flow_cost(const NetworkInstance& instance, const HopAcTable& table, int flow_id,
                 const RankParams& params) {
  const E2eFlow& flow = instance.flow(flow_id);
  std::vector<double> ranks;
  for (const HopEntry& hop : table.for_flow(flow_id)) {
    const auto competitors = competing_hflows(instance, table, flow_id, hop.node, params);
    ranks.push_back(hflow_rank(hop.hac, competitors, params.weights));
  }
  const Aggregation how = flow.intrinsic_ac == AccessCategory::kVO
                              ? params.vo_flow_aggregation
                              : params.be_flow_aggregation;
  return aggregate(how, ranks);
}

CostVector node_costs(const NetworkInstance& instance, AttackerSet attackers,
                      const RankParams& params) {
  const HopAcTable table = resolve_attacks(instance, attackers);
  std::vector<std::vector<double>> per_node(instance.node_count());
  for (const E2eFlow& flow : instance.flows()) {
    per_node[flow.route.source()].push_back(flow_cost(instance, table, flow.flow_id, params));
  }
  CostVector costs(instance.node_count());
  for (int i = 0; i < instance.node_count(); ++i) {
    costs[i] = aggregate(params.node_aggregation, per_node[i]);
  }
  return costs;
}

std::string_view to_string(NodeStatus status) {
  switch (status) {
    case NodeStatus::kLose: return "lose";
    case NodeStatus::kDontLose: return "dont_lose";
    case NodeStatus::kMind: return "mind";
    case NodeStatus::kDontMind: return "dont_mind";
  }
  return "?";
}

std::optional<NodeStatus> parse_node_status(std::string_view text) {
  if (text == "lose") return NodeStatus::kLose;
  if (text == "dont_lose" || text == "don't lose") return NodeStatus::kDontLose;
  if (text == "mind") return NodeStatus::kMind;
  if (text == "dont_mind" || text == "don't mind") return NodeStatus::kDontMind;
  return std::nullopt;
}

std::vector<NodeStatus> classify_status(std::span<const double> baseline,
                                        std::span<const double> costs, AttackerSet attackers) {
  if (baseline.size() != costs.size()) throw std::invalid_argument("cost vector size mismatch");
  std::vector<NodeStatus> status(costs.size());
  for (std::size_t i = 0; i < costs.size(); ++i) {
    const bool increased = costs[i] > baseline[i];
    if (attackers.contains(static_cast<NodeId>(i))) {
      status[i] = increased ? NodeStatus::kLose : NodeStatus::kDontLose;
    } else {
      status[i] = increased ? NodeStatus::kMind : NodeStatus::kDontMind;
    }
  }
  return status;
}

std::vector<NodeStatus> classify_status(const NetworkInstance& instance, AttackerSet attackers,
                                        const RankParams& params) {
  return classify_status(node_costs(instance, AttackerSet{}, params),
                         node_costs(instance, attackers, params), attackers);
}

// ---------------------------------------------------------------------------
// CostModel

CostModel::CostModel(const NetworkInstance& instance, RankParams params)
    : node_count_(instance.node_count()), params_(params) {
  validate(params_);
  require_valid(instance);
  const auto dist = instance.graph().hop_distances();
  within_radius_.resize(node_count_);
  for (NodeId t = 0; t < node_count_; ++t) {
    for (NodeId u = 0; u < node_count_; ++u) {
      if (dist[t][u] >= 0 && dist[t][u] <= params_.interference_radius) {
        within_radius_[t].push_back(u);
      }
    }
  }
  for (const E2eFlow& flow : instance.flows()) {
    intrinsic_.push_back(flow.intrinsic_ac);
    source_.push_back(flow.route.source());
    flow_begin_.push_back(slots_.size());
    const auto& nodes = flow.route.nodes();
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      slots_.push_back({flow.flow_id, nodes[k], k == 0});
    }
  }
  flow_begin_.push_back(slots_.size());
  baseline_ = costs(AttackerSet{});
}

CostVector CostModel::costs(AttackerSet attackers) const {
  CostVector out(node_count_);
  costs_into(attackers, out);
  return out;
}

void CostModel::costs_into(AttackerSet attackers, std::span<double> out) const {
  if (out.size() != static_cast<std::size_t>(node_count_)) {
    throw std::invalid_argument("output span has wrong size");
  }
  // Resolve hacs slot by slot; same rules as resolve_attacks().
  std::vector<AccessCategory> hac(slots_.size());
  std::vector<int> vo_tx(node_count_, 0), be_tx(node_count_, 0);
  for (std::size_t f = 0; f + 1 < flow_begin_.size(); ++f) {
    AccessCategory current = intrinsic_[f];
    for (std::size_t s = flow_begin_[f]; s < flow_begin_[f + 1]; ++s) {
      const Slot& slot = slots_[s];
      if (attackers.contains(slot.node)) {
        if (slot.is_source && current == AccessCategory::kBE) {
          current = AccessCategory::kVO;
        } else if (!slot.is_source && current == AccessCategory::kVO) {
          current = AccessCategory::kBE;
        }
      }
      hac[s] = current;
      (current == AccessCategory::kVO ? vo_tx : be_tx)[slot.node]++;
    }
  }
  std::vector<int> near_vo(node_count_, 0), near_be(node_count_, 0);
  for (NodeId t = 0; t < node_count_; ++t) {
    for (NodeId u : within_radius_[t]) {
      near_vo[t] += vo_tx[u];
      near_be[t] += be_tx[u];
    }
  }

  std::vector<std::vector<double>> per_node(node_count_);
  std::vector<double> ranks;
  for (std::size_t f = 0; f + 1 < flow_begin_.size(); ++f) {
    ranks.clear();
    for (std::size_t s = flow_begin_[f]; s < flow_begin_[f + 1]; ++s) {
      const NodeId t = slots_[s].node;
      // Competitor counts exclude the h-flow itself.
      const bool own_vo = hac[s] == AccessCategory::kVO;
      const int vo_competitors = near_vo[t] - (own_vo ? 1 : 0);
      const int be_competitors = near_be[t] - (own_vo ? 0 : 1);
      const AccessCategory own = hac[s];
      ranks.push_back(1.0 + params_.weights.weight(own, AccessCategory::kVO) * vo_competitors +
                      params_.weights.weight(own, AccessCategory::kBE) * be_competitors);
    }
    const Aggregation how = intrinsic_[f] == AccessCategory::kVO
                                ? params_.vo_flow_aggregation
                                : params_.be_flow_aggregation;
    per_node[source_[f]].push_back(aggregate(how, ranks));
  }
  for (NodeId i = 0; i < node_count_; ++i) {
    out[i] = aggregate(params_.node_aggregation, per_node[i]);
  }
}

}  // namespace tragame
