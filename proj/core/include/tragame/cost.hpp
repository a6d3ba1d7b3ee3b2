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

#ifndef TRAGAME_COST_HPP_
#define TRAGAME_COST_HPP_

// Rank-based cost model.
//
// Every h-flow competes with the h-flows transmitted within
// `interference_radius` hops of its transmitting node. Its rank is
//
//   rank = 1 + #VO competitors + [own hac == BE] * #BE competitors
//
// i.e. a VO h-flow waits only behind VO traffic and a BE h-flow waits behind
// everything. Hop ranks are folded into a flow cost keyed by the flow's
// intrinsic AC (VO: delay-like sum, BE: bottleneck max), and flow costs are
// summed into the cost of the source node.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tragame/model.hpp"

namespace tragame {

enum class Aggregation : std::uint8_t { kSum, kMax };

// Competition weights: the rank of an h-flow with AC `own` grows by
// weight(own, other) for each competitor carrying AC `other`. The defaults
// give the formula in the header comment.
struct CompetitionWeights {
  double vo_behind_vo = 1.0;
  double vo_behind_be = 0.0;
  double be_behind_vo = 1.0;
  double be_behind_be = 1.0;

  double weight(AccessCategory own, AccessCategory other) const {
    if (own == AccessCategory::kVO) {
      return other == AccessCategory::kVO ? vo_behind_vo : vo_behind_be;
    }
    return other == AccessCategory::kVO ? be_behind_vo : be_behind_be;
  }
};

struct RankParams {
  int interference_radius = 2;
  CompetitionWeights weights;
  Aggregation vo_flow_aggregation = Aggregation::kSum;
  Aggregation be_flow_aggregation = Aggregation::kMax;
  Aggregation node_aggregation = Aggregation::kSum;
};

void validate(const RankParams& params);

using CostVector = std::vector<double>;

struct HFlowRef {
  int flow_id;
  NodeId node;  // transmitting node
  AccessCategory hac;

  auto operator<=>(const HFlowRef&) const = default;
};

// Competitors of the h-flow that `flow_id` sends from `transmitting_node`,
// sorted by (flow_id, node). Throws std::out_of_range if the node is not a
// non-destination node of the flow.
std::vector<HFlowRef> competing_hflows(const NetworkInstance& instance,
                                       const HopAcTable& table, int flow_id,
                                       NodeId transmitting_node, const RankParams& params);

double hflow_rank(AccessCategory own_hac, std::span<const HFlowRef> competitors,
                  const CompetitionWeights& weights = {});
inline double hflow_rank(const HFlowRef& hflow, std::span<const HFlowRef> competitors,
                         const CompetitionWeights& weights = {}) {
  return hflow_rank(hflow.hac, competitors, weights);
}

double aggregate(Aggregation how, std::span<const double> values);

double flow_cost(const NetworkInstance& instance, const HopAcTable& table, int flow_id,
                 const RankParams& params);

// Reference evaluation built from the operations above. CostModel computes the
// same vector much faster.
CostVector node_costs(const NetworkInstance& instance, AttackerSet attackers,
                      const RankParams& params);

enum class NodeStatus : std::uint8_t { kLose, kDontLose, kMind, kDontMind };

std::string_view to_string(NodeStatus status);
std::optional<NodeStatus> parse_node_status(std::string_view text);

// "Cost has increased" is a strict comparison against the baseline.
std::vector<NodeStatus> classify_status(std::span<const double> baseline,
                                        std::span<const double> costs, AttackerSet attackers);
std::vector<NodeStatus> classify_status(const NetworkInstance& instance, AttackerSet attackers,
                                        const RankParams& params);

// Precomputed evaluator for one instance. Immutable after construction, so it
// can be shared across threads.
class CostModel {
 public:
  explicit CostModel(const NetworkInstance& instance, RankParams params = {});

  int node_count() const { return node_count_; }
  const RankParams& params() const { return params_; }

  CostVector costs(AttackerSet attackers) const;
  // Writes node costs into `out` (size node_count()).
  void costs_into(AttackerSet attackers, std::span<double> out) const;

  // Cost vector of the all-neutral profile.
  const CostVector& baseline() const { return baseline_; }

  std::vector<NodeStatus> status(AttackerSet attackers) const {
    const CostVector c = costs(attackers);
    return classify_status(baseline_, c, attackers);
  }

 private:
  struct Slot {
    int flow;
    NodeId node;
    bool is_source;
  };

  int node_count_ = 0;
  RankParams params_;
  std::vector<AccessCategory> intrinsic_;
  std::vector<NodeId> source_;
  std::vector<std::size_t> flow_begin_;  // slots of flow f: [flow_begin_[f], flow_begin_[f+1])
  std::vector<Slot> slots_;
  std::vector<std::vector<NodeId>> within_radius_;  // includes the node itself
  CostVector baseline_;
};

}  // namespace tragame

#endif  // TRAGAME_COST_HPP_
