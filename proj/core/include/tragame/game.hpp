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

#ifndef TRAGAME_GAME_HPP_
#define TRAGAME_GAME_HPP_

// One-shot TRA game <N, 2^N, cost>: exhaustive payoff table, weak Nash and
// self-confirming equilibrium tests, response cases and regret flags.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tragame/cost.hpp"
#include "tragame/model.hpp"
#include "tragame/parallel.hpp"

namespace tragame {

inline constexpr int kDefaultEnumerationCap = 20;
inline constexpr double kDefaultDelta = 0.05;

class EnumerationTooLargeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline AttackerSet toggle(AttackerSet attackers, NodeId node) { return attackers.toggled(node); }

// a ~_delta b  <=>  |a - b| / max(a, b) < delta, with 0 ~ 0.
bool approx_equal(double a, double b, double delta);

// cost[A][i] for every bitmask A. Rows are stored contiguously.
class PayoffTable {
 public:
  // Builds from an arbitrary row evaluator; used by tests and by
  // build_payoff_table().
  template <typename RowFn>
  static PayoffTable from_rows(int node_count, RowFn&& row, int enumeration_cap,
                               int jobs = 1);

  int node_count() const { return node_count_; }
  std::uint64_t profile_count() const { return std::uint64_t{1} << node_count_; }

  std::span<const double> row(AttackerSet attackers) const {
    return {data_.data() + attackers.mask() * node_count_,
            static_cast<std::size_t>(node_count_)};
  }
  double cost(AttackerSet attackers, NodeId node) const {
    return data_[attackers.mask() * node_count_ + node];
  }

  // Sorted costs cost_i(A') over profiles A' with the given membership of i
  // where i's current behavior is a best response (cost_i(A') <= cost_i(A'^[i])).
  std::span<const double> best_response_costs(NodeId node, bool attacker) const {
    const auto& v = best_response_[2 * node + (attacker ? 1 : 0)];
    return {v.data(), v.size()};
  }

 private:
  void index_best_responses();

  int node_count_ = 0;
  std::vector<double> data_;
  std::vector<std::vector<double>> best_response_;
};

PayoffTable build_payoff_table(const NetworkInstance& instance, const RankParams& params = {},
                               int enumeration_cap = kDefaultEnumerationCap, int jobs = 1);
PayoffTable build_payoff_table(const CostModel& model,
                               int enumeration_cap = kDefaultEnumerationCap, int jobs = 1);

bool is_nash(const PayoffTable& table, AttackerSet attackers);
bool is_sce(const PayoffTable& table, AttackerSet attackers, double delta = kDefaultDelta);

struct EquilibriumCensus {
  std::vector<std::uint64_t> ne_profiles;   // ascending bitmasks
  std::vector<std::uint64_t> sce_profiles;  // ascending bitmasks
  double ne_fraction = 0.0;
  double sce_fraction = 0.0;
  double delta = kDefaultDelta;

  bool contains_ne(AttackerSet a) const;
  bool contains_sce(AttackerSet a) const;
};

EquilibriumCensus census(const PayoffTable& table, double delta = kDefaultDelta);

enum class ResponseCase : std::uint8_t {
  kAttackBest,     // (i)   i in A, cost_i(A) <= cost_i(A^[i])
  kAttackWorst,    // (ii)  i in A, cost_i(A) >  cost_i(A^[i])
  kNeutralBest,    // (iii) i not in A, <=
  kNeutralWorst,   // (iv)  i not in A, >
};

std::string_view to_string(ResponseCase c);

ResponseCase response_case(const PayoffTable& table, AttackerSet attackers, NodeId node);

struct RegretFlags {
  bool attacker_regret = false;
  bool neutral_regret = false;
};

std::vector<RegretFlags> regret_nodes(const PayoffTable& table, AttackerSet attackers);

// ---------------------------------------------------------------------------

template <typename RowFn>
PayoffTable PayoffTable::from_rows(int node_count, RowFn&& row, int enumeration_cap,
                                   int jobs) {
  if (node_count < 0 || node_count > enumeration_cap || node_count >= kMaxNodes) {
    throw EnumerationTooLargeError("exhaustive enumeration refused: " +
                                   std::to_string(node_count) + " nodes exceeds cap " +
                                   std::to_string(enumeration_cap));
  }
  PayoffTable table;
  table.node_count_ = node_count;
  const std::uint64_t rows = std::uint64_t{1} << node_count;
  table.data_.assign(rows * node_count, 0.0);
  parallel_for(rows, jobs, [&](std::size_t mask) {
    row(AttackerSet(mask),
        std::span<double>(table.data_.data() + mask * node_count, node_count));
  });
  table.index_best_responses();
  return table;
}

}  // namespace tragame

#endif  // TRAGAME_GAME_HPP_
