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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/small_instances.hpp"
#include "tragame/random.hpp"

namespace tragame {
namespace {

using testing::fixture;

PayoffTable random_table(int n, Rng& rng, int levels) {
  std::vector<double> data(n << n);
  for (double& c : data) c = 1.0 + static_cast<double>(rng.below(levels));
  return PayoffTable::from_rows(n, [&](AttackerSet a, std::span<double> out) {
    for (int i = 0; i < n; ++i) out[i] = data[a.mask() * n + i];
  }, kDefaultEnumerationCap);
}

oracle::CostFn table_fn(const PayoffTable& t) {
  return [&t](std::uint64_t a) {
    const auto row = t.row(AttackerSet(a));
    return std::vector<double>(row.begin(), row.end());
  };
}

TEST(Toggle, SymmetricDifference) {
  EXPECT_EQ(toggle(AttackerSet{2, 3}, 3), AttackerSet{2});
  EXPECT_EQ(toggle(AttackerSet{}, 0), AttackerSet{0});
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const AttackerSet a(rng.next());
    const auto i = static_cast<NodeId>(rng.below(64));
    EXPECT_EQ(toggle(toggle(a, i), i), a);
  }
}

TEST(Similarity, Definition) {
  EXPECT_TRUE(approx_equal(0.0, 0.0, 0.05));
  EXPECT_TRUE(approx_equal(100.0, 96.0, 0.05));
  EXPECT_FALSE(approx_equal(100.0, 95.0, 0.05));  // strict
  EXPECT_FALSE(approx_equal(0.0, 1.0, 0.05));
  EXPECT_TRUE(approx_equal(96.0, 100.0, 0.05));
}

TEST(PayoffTable, MatchesDirectEvaluation) {
  const auto& inst = fixture();
  const auto table = build_payoff_table(inst);
  EXPECT_EQ(table.profile_count(), 1024u);
  const CostModel model(inst);
  const auto empty = table.row(AttackerSet{});
  EXPECT_TRUE(std::equal(empty.begin(), empty.end(), model.baseline().begin()));
  Rng rng(2);
  for (int k = 0; k < 10; ++k) {
    const AttackerSet a(rng.below(1024));
    const auto direct = node_costs(inst, a, {});
    const auto row = table.row(a);
    EXPECT_TRUE(std::equal(row.begin(), row.end(), direct.begin())) << a.mask();
  }
}

TEST(PayoffTable, ParallelBuildIsIdentical) {
  const CostModel model(fixture());
  const auto serial = build_payoff_table(model, kDefaultEnumerationCap, 1);
  const auto parallel = build_payoff_table(model, kDefaultEnumerationCap, 4);
  for (std::uint64_t m = 0; m < 1024; ++m) {
    const auto a = serial.row(AttackerSet(m));
    const auto b = parallel.row(AttackerSet(m));
    ASSERT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST(PayoffTable, RefusesAboveCap) {
  EXPECT_THROW(build_payoff_table(fixture(), {}, 8), EnumerationTooLargeError);
  const auto big = testing::random_instances(1, 21, 3).front();
  EXPECT_THROW(build_payoff_table(big), EnumerationTooLargeError);
}

TEST(Equilibria, IndifferenceMakesEveryProfileNash) {
  for (int n : {1, 2}) {
    const auto t = PayoffTable::from_rows(
        n, [](AttackerSet, std::span<double> out) { std::fill(out.begin(), out.end(), 3.0); },
        kDefaultEnumerationCap);
    const auto c = census(t);
    EXPECT_EQ(c.ne_fraction, 1.0);
    EXPECT_EQ(c.sce_fraction, 1.0);
  }
}

TEST(Equilibria, ThreeNodeLineMatchesOracle) {
  HearabilityGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  const NetworkInstance line(g, {{0, Route{0, 1, 2}, AccessCategory::kVO},
                                 {1, Route{1, 0}, AccessCategory::kBE},
                                 {2, Route{2, 1, 0}, AccessCategory::kBE}});
  const auto table = build_payoff_table(line);
  const oracle::CostFn fn = [&](std::uint64_t a) { return oracle::costs(line, a); };
  for (std::uint64_t m = 0; m < 8; ++m) {
    EXPECT_EQ(is_nash(table, AttackerSet(m)), oracle::is_nash(3, fn, m)) << m;
    EXPECT_EQ(is_sce(table, AttackerSet(m), 0.05), oracle::is_sce(3, fn, m, 0.05)) << m;
  }
}

TEST(Equilibria, AllSmallInstancesMatchOracle) {
  int checked = 0;
  for (int n : {2, 3}) {
    for (const auto& inst : testing::all_small_instances(n)) {
      const auto table = build_payoff_table(inst);
      const oracle::CostFn fn = [&](std::uint64_t a) { return oracle::costs(inst, a); };
      for (std::uint64_t m = 0; m < table.profile_count(); ++m) {
        ASSERT_EQ(is_nash(table, AttackerSet(m)), oracle::is_nash(n, fn, m));
        for (double delta : {0.05, 0.2}) {
          ASSERT_EQ(is_sce(table, AttackerSet(m), delta), oracle::is_sce(n, fn, m, delta));
        }
      }
      ++checked;
    }
  }
  EXPECT_GT(checked, 500);
}

TEST(Equilibria, RandomTablesMatchOracle) {
  // Few cost levels produce many ties; many levels exercise the similarity ball.
  Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(5));
    const int levels = trial % 2 ? 3 : 1000;
    const auto table = random_table(n, rng, levels);
    const auto fn = table_fn(table);
    for (std::uint64_t m = 0; m < table.profile_count(); ++m) {
      ASSERT_EQ(is_nash(table, AttackerSet(m)), oracle::is_nash(n, fn, m));
      ASSERT_EQ(is_sce(table, AttackerSet(m), 0.01), oracle::is_sce(n, fn, m, 0.01));
      ASSERT_EQ(is_sce(table, AttackerSet(m), 0.3), oracle::is_sce(n, fn, m, 0.3));
    }
  }
}

TEST(Equilibria, RejectsNonPositiveDelta) {
  const auto table = build_payoff_table(fixture());
  EXPECT_THROW(is_sce(table, AttackerSet{}, 0.0), std::invalid_argument);
}

TEST(Census, FixtureRegression) {
  const auto c = census(build_payoff_table(fixture()), 0.05);
  EXPECT_EQ(c.ne_profiles.size(), 48u);
  EXPECT_EQ(c.sce_profiles.size(), 128u);
  EXPECT_DOUBLE_EQ(c.ne_fraction, 48.0 / 1024);
  EXPECT_DOUBLE_EQ(c.sce_fraction, 128.0 / 1024);
  EXPECT_TRUE(std::is_sorted(c.ne_profiles.begin(), c.ne_profiles.end()));
  EXPECT_TRUE(c.contains_ne(AttackerSet(c.ne_profiles.front())));
}

TEST(Census, NashInsideSceAndDeltaMonotone) {
  for (const auto& inst : testing::random_instances(6, 9, 70)) {
    const auto table = build_payoff_table(inst);
    EquilibriumCensus previous;
    for (double delta : {0.001, 0.01, 0.05, 0.1, 0.3, 0.9}) {
      const auto c = census(table, delta);
      ASSERT_TRUE(std::includes(c.sce_profiles.begin(), c.sce_profiles.end(),
                                c.ne_profiles.begin(), c.ne_profiles.end()));
      ASSERT_TRUE(std::includes(c.sce_profiles.begin(), c.sce_profiles.end(),
                                previous.sce_profiles.begin(), previous.sce_profiles.end()));
      previous = c;
    }
  }
}

TEST(Census, RelabelingInvariance) {
  const auto inst = testing::random_instances(1, 8, 321).front();
  std::vector<NodeId> perm(8);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(9);
  rng.shuffle(std::span<NodeId>(perm));
  HearabilityGraph g(8);
  for (auto [a, b] : inst.graph().undirected_edges()) g.add_edge(perm[a], perm[b]);
  std::vector<E2eFlow> flows;
  for (const E2eFlow& f : inst.flows()) {
    std::vector<NodeId> nodes;
    for (NodeId v : f.route.nodes()) nodes.push_back(perm[v]);
    flows.push_back({f.flow_id, Route(nodes), f.intrinsic_ac});
  }
  const NetworkInstance moved(g, flows);
  const auto c0 = census(build_payoff_table(inst));
  const auto c1 = census(build_payoff_table(moved));
  auto image = [&](std::vector<std::uint64_t> masks) {
    for (auto& m : masks) {
      AttackerSet out;
      for (NodeId v : AttackerSet(m).members()) out.insert(perm[v]);
      m = out.mask();
    }
    std::sort(masks.begin(), masks.end());
    return masks;
  };
  EXPECT_EQ(image(c0.ne_profiles), c1.ne_profiles);
  EXPECT_EQ(image(c0.sce_profiles), c1.sce_profiles);
}

TEST(ResponseCase, PartitionAndTies) {
  const auto table = build_payoff_table(fixture());
  for (std::uint64_t m = 0; m < 1024; ++m) {
    const AttackerSet a(m);
    for (NodeId i = 0; i < 10; ++i) {
      const auto rc = response_case(table, a, i);
      const bool best = table.cost(a, i) <= table.cost(a.toggled(i), i);
      if (a.contains(i)) {
        ASSERT_EQ(rc, best ? ResponseCase::kAttackBest : ResponseCase::kAttackWorst);
      } else {
        ASSERT_EQ(rc, best ? ResponseCase::kNeutralBest : ResponseCase::kNeutralWorst);
      }
    }
  }
  const auto flat = PayoffTable::from_rows(
      1, [](AttackerSet, std::span<double> out) { out[0] = 1.0; }, kDefaultEnumerationCap);
  EXPECT_EQ(response_case(flat, AttackerSet{0}, 0), ResponseCase::kAttackBest);
  EXPECT_EQ(to_string(ResponseCase::kNeutralWorst), "neutral_worst");
}

TEST(Regret, MatchesDefinitionAndVanishesAtNash) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(4));
    const auto table = random_table(n, rng, trial % 2 ? 3 : 50);
    for (std::uint64_t m = 0; m < table.profile_count(); ++m) {
      const AttackerSet a(m);
      const auto flags = regret_nodes(table, a);
      for (NodeId i = 0; i < n; ++i) {
        const AttackerSet b = a.toggled(i);
        bool att = a.contains(i) && table.cost(b, i) < table.cost(a, i);
        bool neu = !a.contains(i) && table.cost(b, i) < table.cost(a, i);
        for (NodeId j = 0; j < n; ++j) {
          if (b.contains(j) && table.cost(b, j) < table.cost(a, j)) att = false;
          if (!b.contains(j) && table.cost(b, j) > table.cost(a, j)) neu = false;
        }
        ASSERT_EQ(flags[i].attacker_regret, att);
        ASSERT_EQ(flags[i].neutral_regret, neu);
        if (is_nash(table, a)) {
          ASSERT_FALSE(flags[i].attacker_regret || flags[i].neutral_regret);
        }
      }
    }
  }
}

}  // namespace
}  // namespace tragame
