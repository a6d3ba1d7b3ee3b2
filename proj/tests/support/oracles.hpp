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

#ifndef TRAGAME_TESTS_ORACLES_HPP_
#define TRAGAME_TESTS_ORACLES_HPP_

// Brute-force reference implementations. They are written directly from the
// model's rules and deliberately share no code with the library beyond the
// plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "tragame/model.hpp"

namespace tragame::oracle {

using CostFn = std::function<std::vector<double>(std::uint64_t)>;

inline bool bit(std::uint64_t mask, int i) { return (mask >> i) & 1U; }

// Hop-level AC of every h-flow of every flow: entry h of flow f is the AC on
// the hop route[h] -> route[h+1].
inline std::vector<std::vector<AccessCategory>> resolve(const NetworkInstance& inst,
                                                        std::uint64_t attackers) {
  std::vector<std::vector<AccessCategory>> out;
  for (const E2eFlow& f : inst.flows()) {
    const auto& r = f.route.nodes();
    const int hops = static_cast<int>(r.size()) - 1;
    std::vector<AccessCategory> hac(hops, f.intrinsic_ac);
    bool upgraded = f.intrinsic_ac == AccessCategory::kBE && bit(attackers, r[0]);
    int downgrade_at = hops;  // hop index of the first downgrade, if any
    if (f.intrinsic_ac == AccessCategory::kVO || upgraded) {
      for (int h = 1; h < hops; ++h) {
        if (bit(attackers, r[h])) {
          downgrade_at = h;
          break;
        }
      }
    }
    for (int h = 0; h < hops; ++h) {
      if (upgraded) hac[h] = AccessCategory::kVO;
      if (h >= downgrade_at) hac[h] = AccessCategory::kBE;
    }
    out.push_back(hac);
  }
  return out;
}

// Single-source BFS over links taken in either direction.
inline int distance(const NetworkInstance& inst, NodeId from, NodeId to) {
  const int n = inst.node_count();
  std::vector<int> d(n, -1);
  std::deque<NodeId> q{from};
  d[from] = 0;
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop_front();
    if (u == to) return d[u];
    for (NodeId v = 0; v < n; ++v) {
      if (d[v] < 0 && (inst.graph().has_link(u, v) || inst.graph().has_link(v, u))) {
        d[v] = d[u] + 1;
        q.push_back(v);
      }
    }
  }
  return -1;
}

struct Competitors {
  int vo = 0;
  int be = 0;
};

inline Competitors competitors(const NetworkInstance& inst,
                               const std::vector<std::vector<AccessCategory>>& hac, int flow,
                               int hop, int radius) {
  const NodeId t = inst.flow(flow).route.nodes()[hop];
  Competitors c;
  for (const E2eFlow& g : inst.flows()) {
    const auto& r = g.route.nodes();
    for (std::size_t h = 0; h + 1 < r.size(); ++h) {
      if (g.flow_id == flow && static_cast<int>(h) == hop) continue;
      const int d = distance(inst, t, r[h]);
      if (d < 0 || d > radius) continue;
      (hac[g.flow_id][h] == AccessCategory::kVO ? c.vo : c.be)++;
    }
  }
  return c;
}

// Default rank model: VO waits behind VO only, BE behind everyone; VO flows
// cost the sum of hop ranks, BE flows the maximum; node cost is the sum over
// sourced flows.
inline std::vector<double> costs(const NetworkInstance& inst, std::uint64_t attackers,
                                 int radius = 2) {
  const auto hac = resolve(inst, attackers);
  std::vector<double> cost(inst.node_count(), 0.0);
  for (const E2eFlow& f : inst.flows()) {
    double sum = 0.0, worst = 0.0;
    for (std::size_t h = 0; h < hac[f.flow_id].size(); ++h) {
      const auto c = competitors(inst, hac, f.flow_id, static_cast<int>(h), radius);
      const double rank =
          1.0 + c.vo + (hac[f.flow_id][h] == AccessCategory::kBE ? c.be : 0);
      sum += rank;
      worst = std::max(worst, rank);
    }
    cost[f.route.source()] += f.intrinsic_ac == AccessCategory::kVO ? sum : worst;
  }
  return cost;
}

inline bool is_nash(int n, const CostFn& cost, std::uint64_t a) {
  const auto here = cost(a);
  for (int i = 0; i < n; ++i) {
    if (here[i] > cost(a ^ (std::uint64_t{1} << i))[i]) return false;
  }
  return true;
}

inline bool similar(double a, double b, double delta) {
  if (a == b) return true;
  return std::fabs(a - b) / std::max(a, b) < delta;
}

inline bool is_sce(int n, const CostFn& cost, std::uint64_t a, double delta) {
  const auto here = cost(a);
  for (int i = 0; i < n; ++i) {
    bool witnessed = false;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n) && !witnessed; ++b) {
      if (bit(a, i) != bit(b, i)) continue;
      const double cb = cost(b)[i];
      if (similar(here[i], cb, delta) && cb <= cost(b ^ (std::uint64_t{1} << i))[i]) {
        witnessed = true;
      }
    }
    if (!witnessed) return false;
  }
  return true;
}

}  // namespace tragame::oracle

#endif  // TRAGAME_TESTS_ORACLES_HPP_
