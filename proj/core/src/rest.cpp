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

#include "tragame/rest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace tragame {

void validate(const RestParams& params) {
  if (params.m < 1) throw std::invalid_argument("REST: m must be >= 1");
  if (!(params.p >= 0.0 && params.p <= 1.0)) {
    throw std::invalid_argument("REST: p must be in [0, 1]");
  }
  if (!(params.x0 > 0.0)) throw std::invalid_argument("REST: x0 must be positive");
  if (params.max_stages < 1) throw std::invalid_argument("REST: max_stages must be >= 1");
}

double sigmoid(double x, double p, double x0) {
  if (!(x0 > 0.0)) throw std::invalid_argument("sigmoid: x0 must be positive");
  return p / (1.0 + std::exp(-x / x0));
}

int satisfaction_age(std::span<const double> history, std::int64_t k, int m) {
  if (history.empty()) throw std::invalid_argument("satisfaction_age: empty history");
  const std::int64_t depth = std::min<std::int64_t>(k, m);
  if (static_cast<std::int64_t>(history.size()) < depth + 1) {
    throw std::invalid_argument("satisfaction_age: history shorter than min(k, m) + 1");
  }
  const double current = history.back();
  int age = 0;
  for (std::int64_t l = 1; l <= depth; ++l) {
    if (!(current <= history[history.size() - 1 - l])) break;
    ++age;
  }
  return age;
}

bool satisfied(std::span<const double> history, std::int64_t k, int m) {
  if (k < m) return false;
  return satisfaction_age(history, k, m) == m;
}

CostEvaluator make_evaluator(const PayoffTable& table) {
  return [&table](AttackerSet a, std::span<double> out) {
    const auto row = table.row(a);
    std::copy(row.begin(), row.end(), out.begin());
  };
}

CostEvaluator make_evaluator(const CostModel& model) {
  return [&model](AttackerSet a, std::span<double> out) { model.costs_into(a, out); };
}

namespace {

void record_cost(RestNodeState& state, double cost, std::int64_t stage, int m) {
  state.cost_history.push_back(cost);
  while (static_cast<int>(state.cost_history.size()) > m + 1) state.cost_history.pop_front();
  const std::vector<double> history(state.cost_history.begin(), state.cost_history.end());
  state.satisfaction_age = satisfaction_age(history, stage, m);
  state.satisfied = stage >= m && state.satisfaction_age == m;
}

}  // namespace

AttackerSet rest_step(std::vector<RestNodeState>& states, AttackerSet previous,
                      std::int64_t stage, const CostEvaluator& evaluator,
                      const RestParams& params, Rng& rng, std::span<double> costs) {
  if (stage < 1) throw std::invalid_argument("rest_step: stage must be >= 1");
  const int n = static_cast<int>(states.size());

  // Membership, decided on satisfaction at stage - 1.
  AttackerSet next = previous;
  for (NodeId i = 0; i < n; ++i) {
    const RestNodeState& s = states[i];
    if (s.satisfied) continue;
    const double u = rng.uniform01();
    if (previous.contains(i)) {
      const double flip = sigmoid(static_cast<double>(s.lose - s.dont_lose), params.p, params.x0);
      if (u < flip) next.erase(i);
    } else {
      const double flip = sigmoid(static_cast<double>(s.mind - s.dont_mind), params.p, params.x0);
      if (u < flip) next.insert(i);
    }
  }

  evaluator(next, costs);

  // Counter attribution by role in A(stage - 1); ties are "not increased".
  for (NodeId i = 0; i < n; ++i) {
    RestNodeState& s = states[i];
    const bool increased = costs[i] > s.cost_history.back();
    if (previous.contains(i)) {
      ++(increased ? s.lose : s.dont_lose);
    } else {
      ++(increased ? s.mind : s.dont_mind);
    }
    s.is_attacker = next.contains(i);
    record_cost(s, costs[i], stage, params.m);
  }
  return next;
}

int StageRecord::dissatisfied_count(int node_count) const {
  const std::uint64_t all =
      node_count >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << node_count) - 1;
  return std::popcount(all & ~satisfied_mask);
}

std::string_view to_string(Terminal t) {
  return t == Terminal::kConverged ? "converged" : "timeout";
}

RestEngine::RestEngine(int node_count, CostEvaluator evaluator, RestParams params,
                       AttackerSet initial)
    : node_count_(node_count),
      evaluator_(std::move(evaluator)),
      params_(params),
      rng_(params.seed),
      attackers_(initial),
      costs_(node_count),
      states_(node_count) {
  validate(params_);
  if (node_count < 1 || node_count > kMaxNodes) {
    throw std::invalid_argument("RestEngine: bad node count");
  }
  if (!initial.is_subset_of(AttackerSet::full(node_count))) {
    throw std::out_of_range("RestEngine: initial attackers outside the instance");
  }
  evaluator_(attackers_, costs_);
  for (NodeId i = 0; i < node_count_; ++i) {
    states_[i].is_attacker = attackers_.contains(i);
    record_cost(states_[i], costs_[i], 0, params_.m);
  }
}

std::uint64_t RestEngine::satisfied_mask() const {
  std::uint64_t mask = 0;
  for (NodeId i = 0; i < node_count_; ++i) {
    if (states_[i].satisfied) mask |= std::uint64_t{1} << i;
  }
  return mask;
}

bool RestEngine::all_satisfied() const {
  return std::all_of(states_.begin(), states_.end(),
                     [](const RestNodeState& s) { return s.satisfied; });
}

void RestEngine::step() {
  ++stage_;
  attackers_ = rest_step(states_, attackers_, stage_, evaluator_, params_, rng_, costs_);
}

StageRecord RestEngine::record() const {
  return {stage_, attackers_, costs_, satisfied_mask()};
}

RestTrace run(int node_count, const CostEvaluator& evaluator, const RestParams& params,
              AttackerSet initial, bool record_stages) {
  RestEngine engine(node_count, evaluator, params, initial);
  RestTrace trace;
  if (record_stages) trace.stages.push_back(engine.record());
  while (!engine.all_satisfied() && engine.stage() < params.max_stages) {
    engine.step();
    if (record_stages) trace.stages.push_back(engine.record());
  }
  trace.terminal = engine.all_satisfied() ? Terminal::kConverged : Terminal::kTimeout;
  trace.final_attackers = engine.attackers();
  trace.final_stage = engine.stage();
  trace.final_states = engine.states();
  return trace;
}

RestTrace run(const NetworkInstance& instance, const RestParams& params, AttackerSet initial,
              const RankParams& rank_params, bool record_stages) {
  const CostModel model(instance, rank_params);
  return run(instance.node_count(), make_evaluator(model), params, initial, record_stages);
}

}  // namespace tragame
