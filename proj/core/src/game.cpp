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

#include "tragame/game.hpp"

#include <algorithm>
#include <cmath>

namespace tragame {

bool approx_equal(double a, double b, double delta) {
  if (a == b) return true;
  const double larger = std::max(a, b);
  if (larger <= 0.0) return false;
  return std::abs(a - b) / larger < delta;
}

void PayoffTable::index_best_responses() {
  best_response_.assign(2 * node_count_, {});
  for (std::uint64_t mask = 0; mask < profile_count(); ++mask) {
    const AttackerSet a(mask);
    for (NodeId i = 0; i < node_count_; ++i) {
      const double c = cost(a, i);
      if (c <= cost(a.toggled(i), i)) {
        best_response_[2 * i + (a.contains(i) ? 1 : 0)].push_back(c);
      }
    }
  }
  for (auto& v : best_response_) std::sort(v.begin(), v.end());
}

PayoffTable build_payoff_table(const CostModel& model, int enumeration_cap, int jobs) {
  return PayoffTable::from_rows(
      model.node_count(),
      [&model](AttackerSet a, std::span<double> out) { model.costs_into(a, out); },
      enumeration_cap, jobs);
}

PayoffTable build_payoff_table(const NetworkInstance& instance, const RankParams& params,
                               int enumeration_cap, int jobs) {
  if (instance.node_count() > enumeration_cap) {
    throw EnumerationTooLargeError("exhaustive enumeration refused: " +
                                   std::to_string(instance.node_count()) +
                                   " nodes exceeds cap " + std::to_string(enumeration_cap));
  }
  return build_payoff_table(CostModel(instance, params), enumeration_cap, jobs);
}

bool is_nash(const PayoffTable& table, AttackerSet attackers) {
  for (NodeId i = 0; i < table.node_count(); ++i) {
    if (table.cost(attackers, i) > table.cost(attackers.toggled(i), i)) return false;
  }
  return true;
}

bool is_sce(const PayoffTable& table, AttackerSet attackers, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  for (NodeId i = 0; i < table.node_count(); ++i) {
    const double c = table.cost(attackers, i);
    const auto witnesses = table.best_response_costs(i, attackers.contains(i));
    // Similarity to c decreases monotonically away from c on either side, so
    // the two neighbours of c in sorted order decide existence.
    const auto it = std::lower_bound(witnesses.begin(), witnesses.end(), c);
    bool found = false;
    if (it != witnesses.end() && approx_equal(c, *it, delta)) found = true;
    if (!found && it != witnesses.begin() && approx_equal(c, *std::prev(it), delta)) {
      found = true;
    }
    if (!found) return false;
  }
  return true;
}

bool EquilibriumCensus::contains_ne(AttackerSet a) const {
  return std::binary_search(ne_profiles.begin(), ne_profiles.end(), a.mask());
}

bool EquilibriumCensus::contains_sce(AttackerSet a) const {
  return std::binary_search(sce_profiles.begin(), sce_profiles.end(), a.mask());
}

EquilibriumCensus census(const PayoffTable& table, double delta) {
  EquilibriumCensus result;
  result.delta = delta;
  for (std::uint64_t mask = 0; mask < table.profile_count(); ++mask) {
    const AttackerSet a(mask);
    if (is_nash(table, a)) result.ne_profiles.push_back(mask);
    if (is_sce(table, a, delta)) result.sce_profiles.push_back(mask);
  }
  const auto total = static_cast<double>(table.profile_count());
  result.ne_fraction = static_cast<double>(result.ne_profiles.size()) / total;
  result.sce_fraction = static_cast<double>(result.sce_profiles.size()) / total;
  return result;
}

std::string_view to_string(ResponseCase c) {
  switch (c) {
    case ResponseCase::kAttackBest: return "attack_best";
    case ResponseCase::kAttackWorst: return "attack_worst";
    case ResponseCase::kNeutralBest: return "neutral_best";
    case ResponseCase::kNeutralWorst: return "neutral_worst";
  }
  return "?";
}

ResponseCase response_case(const PayoffTable& table, AttackerSet attackers, NodeId node) {
  const bool best = table.cost(attackers, node) <= table.cost(attackers.toggled(node), node);
  if (attackers.contains(node)) {
    return best ? ResponseCase::kAttackBest : ResponseCase::kAttackWorst;
  }
  return best ? ResponseCase::kNeutralBest : ResponseCase::kNeutralWorst;
}

std::vector<RegretFlags> regret_nodes(const PayoffTable& table, AttackerSet attackers) {
  const int n = table.node_count();
  std::vector<RegretFlags> flags(n);
  const auto current = table.row(attackers);
  for (NodeId i = 0; i < n; ++i) {
    const AttackerSet other = attackers.toggled(i);
    const auto alt = table.row(other);
    if (!(alt[i] < current[i])) continue;
    if (attackers.contains(i)) {
      // Staying neutral would not have lowered any remaining attacker's cost.
      bool ok = true;
      for (NodeId j = 0; j < n && ok; ++j) {
        if (other.contains(j) && alt[j] < current[j]) ok = false;
      }
      flags[i].attacker_regret = ok;
    } else {
      // Attacking would not have raised any remaining neutral node's cost.
      bool ok = true;
      for (NodeId j = 0; j < n && ok; ++j) {
        if (!other.contains(j) && alt[j] > current[j]) ok = false;
      }
      flags[i].neutral_regret = ok;
    }
  }
  return flags;
}

}  // namespace tragame
