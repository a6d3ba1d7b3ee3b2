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

#ifndef TRAGAME_REST_HPP_
#define TRAGAME_REST_HPP_

// REST (Random Exploration until Satisfaction Threshold) multistage strategy.
//
// Stage k >= 1 derives A(k) from A(k-1):
//   * a node satisfied at k-1 keeps its behavior;
//   * a dissatisfied attacker turns neutral with probability
//     sigmoid(Lose - DontLose), a dissatisfied neutral turns attacker with
//     probability sigmoid(Mind - DontMind).
// After cost(A(k)) is known every node bumps exactly one counter: Lose/Mind
// if its cost rose relative to stage k-1 (by its role in A(k-1)), otherwise
// DontLose/DontMind. A node is satisfied at stage k >= m iff its cost is no
// larger than each of the previous m stage costs. Once every node is
// satisfied the profile is absorbing.
//
// Randomness: one uniform draw per dissatisfied node per stage, in ascending
// node id order; satisfied nodes draw nothing.

#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "tragame/cost.hpp"
#include "tragame/game.hpp"
#include "tragame/model.hpp"
#include "tragame/random.hpp"

namespace tragame {

struct RestParams {
  int m = 10;                          // satisfaction threshold (stages)
  double p = 0.95;                     // sigmoid ceiling
  double x0 = 1.0;                     // sigmoid horizontal scale
  std::int64_t max_stages = 100000;
  std::uint64_t seed = 1;
};

void validate(const RestParams& params);

// p / (1 + exp(-x / x0)).
double sigmoid(double x, double p, double x0);

// `history` holds stage costs oldest to newest; history.back() is the cost
// at stage k. Needs at least min(k, m) + 1 entries.
bool satisfied(std::span<const double> history, std::int64_t k, int m);

// Number of consecutive previous stages (up to m) whose cost is not below the
// current one. satisfied() <=> k >= m && satisfaction_age() == m.
int satisfaction_age(std::span<const double> history, std::int64_t k, int m);

struct RestNodeState {
  std::int64_t lose = 0;
  std::int64_t dont_lose = 0;
  std::int64_t mind = 0;
  std::int64_t dont_mind = 0;
  bool is_attacker = false;
  std::deque<double> cost_history;  // last m + 1 stage costs, newest at back
  int satisfaction_age = 0;
  bool satisfied = false;

  std::int64_t counter_total() const { return lose + dont_lose + mind + dont_mind; }
};

// Fills the cost vector of a profile.
using CostEvaluator = std::function<void(AttackerSet, std::span<double>)>;

CostEvaluator make_evaluator(const PayoffTable& table);
CostEvaluator make_evaluator(const CostModel& model);

// Advances from stage `stage - 1` to `stage`, mutating `states` and returning
// A(stage). `costs` receives cost(A(stage)).
AttackerSet rest_step(std::vector<RestNodeState>& states, AttackerSet previous,
                      std::int64_t stage, const CostEvaluator& evaluator,
                      const RestParams& params, Rng& rng, std::span<double> costs);

struct StageRecord {
  std::int64_t stage = 0;
  AttackerSet attackers;
  CostVector costs;
  std::uint64_t satisfied_mask = 0;

  int dissatisfied_count(int node_count) const;
};

enum class Terminal : std::uint8_t { kConverged, kTimeout };
std::string_view to_string(Terminal t);

struct RestTrace {
  std::vector<StageRecord> stages;  // empty unless recording was requested
  Terminal terminal = Terminal::kTimeout;
  AttackerSet final_attackers;      // A_inf when converged
  std::int64_t final_stage = 0;     // stage at which all nodes were satisfied
  std::vector<RestNodeState> final_states;

  bool converged() const { return terminal == Terminal::kConverged; }
};

class RestEngine {
 public:
  // Stage 0: A(0) = initial, counters zero, cost(A(0)) recorded.
  RestEngine(int node_count, CostEvaluator evaluator, RestParams params, AttackerSet initial);

  std::int64_t stage() const { return stage_; }
  AttackerSet attackers() const { return attackers_; }
  const CostVector& costs() const { return costs_; }
  const std::vector<RestNodeState>& states() const { return states_; }
  std::uint64_t satisfied_mask() const;
  bool all_satisfied() const;

  void step();
  StageRecord record() const;

 private:
  int node_count_;
  CostEvaluator evaluator_;
  RestParams params_;
  Rng rng_;
  std::int64_t stage_ = 0;
  AttackerSet attackers_;
  CostVector costs_;
  std::vector<RestNodeState> states_;
};

// Steps until all nodes are satisfied or params.max_stages is reached.
RestTrace run(int node_count, const CostEvaluator& evaluator, const RestParams& params,
              AttackerSet initial, bool record_stages = true);
RestTrace run(const NetworkInstance& instance, const RestParams& params, AttackerSet initial,
              const RankParams& rank_params = {}, bool record_stages = true);

}  // namespace tragame

#endif  // TRAGAME_REST_HPP_
