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

#ifndef TRAGAME_EXPERIMENTS_HPP_
#define TRAGAME_EXPERIMENTS_HPP_

// Random instance generation, Monte Carlo campaigns over REST, and the
// evaluation metrics built on them: NE/SCE hits, SCEHitExponent, the
// percentage improvement rating, m x x0 sweeps and status congruity.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tragame/cost.hpp"
#include "tragame/game.hpp"
#include "tragame/model.hpp"
#include "tragame/rest.hpp"

namespace tragame {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Topology : std::uint8_t { kFixedFile, kRandomGeometric };

struct InstanceGenParams {
  int node_count = 10;
  int min_hops = 2;
  int max_hops = 5;
  double vo_fraction = 0.5;
  Topology topology = Topology::kRandomGeometric;
  double radius = 0.4;             // unit-square link radius
  int topology_retries = 1000;     // resamples until connected
  int hop_retries = 100;           // hop-length redraws per source
  // kFixedFile: graph (and label base) taken from this instance.
  std::optional<NetworkInstance> fixed;
};

void validate(const InstanceGenParams& params);

// One flow per node, hop length uniform on [min_hops, max_hops], route uniform
// among the simple paths of that length from the source, and exactly
// round(vo_fraction * |N|) VO flows chosen uniformly.
NetworkInstance gen_instance(const InstanceGenParams& params, std::uint64_t seed);

// All simple paths with exactly `hops` hops starting at `source`, stopping
// after `limit` paths. Ascending-lexicographic order.
std::vector<std::vector<NodeId>> simple_paths(const HearabilityGraph& graph, NodeId source,
                                              int hops, std::size_t limit);

// ---------------------------------------------------------------------------
// Campaigns

struct InitialProfile {
  enum class Mode : std::uint8_t { kEmpty, kFull, kRandom, kExplicit };
  Mode mode = Mode::kRandom;
  AttackerSet members;  // kExplicit only

  AttackerSet draw(int node_count, Rng& rng) const;
};

struct CampaignConfig {
  RankParams rank;
  RestParams rest;      // rest.seed is ignored; per-run seeds are derived
  int runs = 100;
  double delta = kDefaultDelta;
  InitialProfile initial;
};

struct RunOutcome {
  bool converged = false;
  std::int64_t stages = 0;
  AttackerSet initial;
  AttackerSet final_attackers;
  // Shares over the nodes outside A(0); empty when A(0) = N.
  std::optional<double> initial_beneficiary;
  std::optional<double> eventual_beneficiary;
  int attacker_regret_nodes = 0;
  int neutral_regret_nodes = 0;
};

// Per-run seeding: Rng(derive_seed(seed, run)) draws A(0) first, then the
// REST seed.
RunOutcome run_once(const PayoffTable& table, std::span<const double> baseline,
                    const CampaignConfig& config, std::uint64_t seed, std::uint64_t run);

struct InstanceEvaluation {
  double ne_fraction = 0.0;
  double sce_fraction = 0.0;
  int runs = 0;
  int converged_runs = 0;
  int timeouts = 0;
  double ne_hits = 0.0;   // over converged runs
  double sce_hits = 0.0;  // over converged runs
  std::optional<double> sce_hit_exponent;
  double mean_convergence_stages = 0.0;
  double mean_final_attackers = 0.0;
  double mean_attacker_regret = 0.0;
  double mean_neutral_regret = 0.0;
  std::optional<double> initial_beneficiary_pct;
  std::optional<double> eventual_beneficiary_pct;

  bool improved() const {
    return initial_beneficiary_pct && eventual_beneficiary_pct &&
           *eventual_beneficiary_pct > *initial_beneficiary_pct;
  }
};

InstanceEvaluation evaluate_instance(const PayoffTable& table, const EquilibriumCensus& census,
                                     const CampaignConfig& config, std::uint64_t seed);
InstanceEvaluation evaluate_instance(const NetworkInstance& instance,
                                     const CampaignConfig& config, std::uint64_t seed);

struct HitsResult {
  double ne_hits = 0.0;
  double sce_hits = 0.0;
  double ne_fraction = 0.0;
  double sce_fraction = 0.0;
  int converged_runs = 0;
  int timeouts = 0;
};

HitsResult ne_sce_hits(const NetworkInstance& instance, const CampaignConfig& config,
                       std::uint64_t seed);

// ln(hits) / ln(fraction); hits == 1 uses ln(0.999). Empty (nondeterminate)
// when fraction is 0 or 1, or hits is 0.
std::optional<double> sce_hit_exponent(double sce_hits, double sce_fraction);

struct ImprovementResult {
  std::vector<std::pair<double, double>> scatter;  // (initial, eventual) per instance
  std::vector<bool> improved;
  int counted_instances = 0;
  double improved_share = 0.0;
};

// Instance k uses seed derive_seed(seed, k).
ImprovementResult improvement_rating(std::span<const NetworkInstance> instances,
                                     const CampaignConfig& config, std::uint64_t seed,
                                     int jobs = 1);

struct SweepCell {
  int m = 0;
  double x0 = 0.0;
  double mean_convergence_stages = 0.0;
  std::optional<double> mean_sce_hit_exponent;
  int determinate_instances = 0;
  int nondeterminate_instances = 0;
  double improvement_rating = 0.0;
  int timeouts = 0;
};

// Grid in m-major order. Every cell of instance k reuses derive_seed(seed, k),
// so cells differ only in (m, x0).
std::vector<SweepCell> sweep(std::span<const NetworkInstance> instances,
                             std::span<const int> m_values, std::span<const double> x0_values,
                             const CampaignConfig& base, std::uint64_t seed, int jobs = 1);

// ---------------------------------------------------------------------------
// Status classifiers and congruity

double congruity(std::span<const NodeStatus> a, std::span<const NodeStatus> b);

std::vector<NodeStatus> pd_heuristic_status(int node_count, AttackerSet attackers,
                                            int threshold);

}  // namespace tragame

#endif  // TRAGAME_EXPERIMENTS_HPP_
