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

#include "tragame/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tragame/parallel.hpp"

namespace tragame {

void validate(const InstanceGenParams& params) {
  const int n = params.topology == Topology::kFixedFile && params.fixed
                    ? params.fixed->node_count()
                    : params.node_count;
  if (params.topology == Topology::kFixedFile && !params.fixed) {
    throw std::invalid_argument("fixed topology requested without a fixture instance");
  }
  if (n < 2 || n > kMaxNodes) throw std::invalid_argument("node_count must be in [2, 64]");
  if (params.min_hops < 1 || params.max_hops > n - 1 || params.min_hops > params.max_hops) {
    throw std::invalid_argument("hop_length_range must lie within [1, node_count - 1]");
  }
  if (!(params.vo_fraction >= 0.0 && params.vo_fraction <= 1.0)) {
    throw std::invalid_argument("vo_fraction must be in [0, 1]");
  }
  if (!(params.radius > 0.0)) throw std::invalid_argument("radius must be positive");
  if (params.topology_retries < 1 || params.hop_retries < 1) {
    throw std::invalid_argument("retry bounds must be positive");
  }
}

std::vector<std::vector<NodeId>> simple_paths(const HearabilityGraph& graph, NodeId source,
                                              int hops, std::size_t limit) {
  std::vector<std::vector<NodeId>> paths;
  std::vector<NodeId> path{source};
  std::uint64_t visited = std::uint64_t{1} << source;
  auto extend = [&](auto&& self) -> void {
    if (paths.size() >= limit) return;
    if (static_cast<int>(path.size()) == hops + 1) {
      paths.push_back(path);
      return;
    }
    for (NodeId next : graph.successors(path.back())) {
      if ((visited >> next) & 1U) continue;
      visited |= std::uint64_t{1} << next;
      path.push_back(next);
      self(self);
      path.pop_back();
      visited &= ~(std::uint64_t{1} << next);
      if (paths.size() >= limit) return;
    }
  };
  extend(extend);
  return paths;
}

namespace {

constexpr std::size_t kPathEnumerationLimit = 200000;

HearabilityGraph random_geometric_graph(const InstanceGenParams& params, Rng& rng) {
  const int n = params.node_count;
  for (int attempt = 0; attempt < params.topology_retries; ++attempt) {
    std::vector<std::pair<double, double>> points(n);
    for (auto& [x, y] : points) {
      x = rng.uniform01();
      y = rng.uniform01();
    }
    HearabilityGraph graph(n);
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) {
        const double dx = points[a].first - points[b].first;
        const double dy = points[a].second - points[b].second;
        if (std::sqrt(dx * dx + dy * dy) <= params.radius) graph.add_edge(a, b);
      }
    }
    if (graph.is_connected()) return graph;
  }
  throw GenerationError("no connected geometric graph after " +
                        std::to_string(params.topology_retries) + " attempts (radius " +
                        std::to_string(params.radius) + ")");
}

// Randomized DFS returning the first simple path of the requested length.
std::optional<std::vector<NodeId>> random_path(const HearabilityGraph& graph, NodeId source,
                                               int hops, Rng& rng) {
  std::vector<NodeId> path{source};
  std::uint64_t visited = std::uint64_t{1} << source;
  auto extend = [&](auto&& self) -> bool {
    if (static_cast<int>(path.size()) == hops + 1) return true;
    auto next_nodes = graph.successors(path.back());
    rng.shuffle(std::span<NodeId>(next_nodes));
    for (NodeId next : next_nodes) {
      if ((visited >> next) & 1U) continue;
      visited |= std::uint64_t{1} << next;
      path.push_back(next);
      if (self(self)) return true;
      path.pop_back();
      visited &= ~(std::uint64_t{1} << next);
    }
    return false;
  };
  if (extend(extend)) return path;
  return std::nullopt;
}

}  // namespace

NetworkInstance gen_instance(const InstanceGenParams& params, std::uint64_t seed) {
  validate(params);
  Rng rng(seed);
  HearabilityGraph graph;
  int label_base = 0;
  if (params.topology == Topology::kFixedFile) {
    graph = params.fixed->graph();
    label_base = params.fixed->label_base();
  } else {
    graph = random_geometric_graph(params, rng);
  }
  const int n = graph.node_count();

  std::vector<E2eFlow> flows;
  for (NodeId source = 0; source < n; ++source) {
    std::optional<std::vector<NodeId>> chosen;
    for (int attempt = 0; attempt < params.hop_retries && !chosen; ++attempt) {
      const int hops = rng.between(params.min_hops, params.max_hops);
      auto paths = simple_paths(graph, source, hops, kPathEnumerationLimit);
      if (paths.size() >= kPathEnumerationLimit) {
        chosen = random_path(graph, source, hops, rng);
      } else if (!paths.empty()) {
        chosen = std::move(paths[rng.below(paths.size())]);
      }
    }
    if (!chosen) {
      throw GenerationError("no simple route of " + std::to_string(params.min_hops) + ".." +
                            std::to_string(params.max_hops) + " hops from node " +
                            std::to_string(source));
    }
    flows.push_back({source, Route(std::move(*chosen)), AccessCategory::kBE});
  }

  const auto vo_count = static_cast<std::size_t>(std::lround(params.vo_fraction * n));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<int>(order));
  for (std::size_t k = 0; k < vo_count; ++k) flows[order[k]].intrinsic_ac = AccessCategory::kVO;

  NetworkInstance instance(std::move(graph), std::move(flows), label_base);
  require_valid(instance);
  return instance;
}

// ---------------------------------------------------------------------------

AttackerSet InitialProfile::draw(int node_count, Rng& rng) const {
  const AttackerSet all = AttackerSet::full(node_count);
  switch (mode) {
    case Mode::kEmpty: return AttackerSet{};
    case Mode::kFull: return all;
    case Mode::kRandom: return AttackerSet(rng.next() & all.mask());
    case Mode::kExplicit: return members;
  }
  return AttackerSet{};
}

RunOutcome run_once(const PayoffTable& table, std::span<const double> baseline,
                    const CampaignConfig& config, std::uint64_t seed, std::uint64_t run) {
  const int n = table.node_count();
  Rng rng(derive_seed(seed, run));
  RunOutcome out;
  out.initial = config.initial.draw(n, rng);
  RestParams rest = config.rest;
  rest.seed = rng.next();
  const RestTrace trace = tragame::run(n, make_evaluator(table), rest, out.initial, false);
  out.converged = trace.converged();
  out.stages = trace.final_stage;
  out.final_attackers = trace.final_attackers;

  const auto start = table.row(out.initial);
  const auto end = table.row(out.final_attackers);
  int neutral = 0, initially_fine = 0, eventually_fine = 0;
  for (NodeId i = 0; i < n; ++i) {
    if (out.initial.contains(i)) continue;
    ++neutral;
    if (!(start[i] > baseline[i])) ++initially_fine;
    if (!out.final_attackers.contains(i) && !(end[i] > baseline[i])) ++eventually_fine;
  }
  if (neutral > 0) {
    out.initial_beneficiary = static_cast<double>(initially_fine) / neutral;
    if (out.converged) out.eventual_beneficiary = static_cast<double>(eventually_fine) / neutral;
  }
  if (out.converged) {
    for (const RegretFlags& f : regret_nodes(table, out.final_attackers)) {
      out.attacker_regret_nodes += f.attacker_regret;
      out.neutral_regret_nodes += f.neutral_regret;
    }
  }
  return out;
}

InstanceEvaluation evaluate_instance(const PayoffTable& table, const EquilibriumCensus& census,
                                     const CampaignConfig& config, std::uint64_t seed) {
  InstanceEvaluation eval;
  eval.ne_fraction = census.ne_fraction;
  eval.sce_fraction = census.sce_fraction;
  eval.runs = config.runs;
  const auto baseline = table.row(AttackerSet{});

  int ne = 0, sce = 0, benefit_runs = 0;
  double stages = 0.0, attackers = 0.0, att_regret = 0.0, neu_regret = 0.0;
  double initial_sum = 0.0, eventual_sum = 0.0;
  for (int r = 0; r < config.runs; ++r) {
    const RunOutcome out = run_once(table, baseline, config, seed, r);
    if (!out.converged) {
      ++eval.timeouts;
      continue;
    }
    ++eval.converged_runs;
    ne += census.contains_ne(out.final_attackers);
    sce += census.contains_sce(out.final_attackers);
    stages += static_cast<double>(out.stages);
    attackers += out.final_attackers.size();
    att_regret += out.attacker_regret_nodes;
    neu_regret += out.neutral_regret_nodes;
    if (out.initial_beneficiary && out.eventual_beneficiary) {
      ++benefit_runs;
      initial_sum += *out.initial_beneficiary;
      eventual_sum += *out.eventual_beneficiary;
    }
  }
  if (eval.converged_runs > 0) {
    const double c = eval.converged_runs;
    eval.ne_hits = ne / c;
    eval.sce_hits = sce / c;
    eval.mean_convergence_stages = stages / c;
    eval.mean_final_attackers = attackers / c;
    eval.mean_attacker_regret = att_regret / c;
    eval.mean_neutral_regret = neu_regret / c;
    eval.sce_hit_exponent = sce_hit_exponent(eval.sce_hits, eval.sce_fraction);
  }
  if (benefit_runs > 0) {
    eval.initial_beneficiary_pct = initial_sum / benefit_runs;
    eval.eventual_beneficiary_pct = eventual_sum / benefit_runs;
  }
  return eval;
}

InstanceEvaluation evaluate_instance(const NetworkInstance& instance,
                                     const CampaignConfig& config, std::uint64_t seed) {
  const PayoffTable table = build_payoff_table(instance, config.rank);
  return evaluate_instance(table, census(table, config.delta), config, seed);
}

HitsResult ne_sce_hits(const NetworkInstance& instance, const CampaignConfig& config,
                       std::uint64_t seed) {
  const InstanceEvaluation eval = evaluate_instance(instance, config, seed);
  return {eval.ne_hits,      eval.sce_hits,       eval.ne_fraction,
          eval.sce_fraction, eval.converged_runs, eval.timeouts};
}

std::optional<double> sce_hit_exponent(double sce_hits, double sce_fraction) {
  if (!(sce_hits >= 0.0 && sce_hits <= 1.0 && sce_fraction >= 0.0 && sce_fraction <= 1.0)) {
    throw std::invalid_argument("sce_hit_exponent: inputs must be fractions in [0, 1]");
  }
  if (sce_fraction == 0.0 || sce_fraction == 1.0) return std::nullopt;
  if (sce_hits == 1.0) return std::log(0.999) / std::log(sce_fraction);
  if (sce_hits == 0.0) return std::nullopt;
  return std::log(sce_hits) / std::log(sce_fraction);
}

ImprovementResult improvement_rating(std::span<const NetworkInstance> instances,
                                     const CampaignConfig& config, std::uint64_t seed,
                                     int jobs) {
  std::vector<InstanceEvaluation> evals(instances.size());
  parallel_for(instances.size(), jobs, [&](std::size_t k) {
    evals[k] = evaluate_instance(instances[k], config, derive_seed(seed, k));
  });
  ImprovementResult result;
  int improved = 0;
  for (const InstanceEvaluation& e : evals) {
    const bool counted = e.initial_beneficiary_pct && e.eventual_beneficiary_pct;
    result.scatter.emplace_back(e.initial_beneficiary_pct.value_or(NAN),
                                e.eventual_beneficiary_pct.value_or(NAN));
    result.improved.push_back(e.improved());
    result.counted_instances += counted;
    improved += e.improved();
  }
  if (!instances.empty()) {
    result.improved_share = static_cast<double>(improved) / static_cast<double>(instances.size());
  }
  return result;
}

std::vector<SweepCell> sweep(std::span<const NetworkInstance> instances,
                             std::span<const int> m_values, std::span<const double> x0_values,
                             const CampaignConfig& base, std::uint64_t seed, int jobs) {
  const std::size_t cells = m_values.size() * x0_values.size();
  // evals[k * cells + c]
  std::vector<InstanceEvaluation> evals(instances.size() * cells);
  parallel_for(instances.size(), jobs, [&](std::size_t k) {
    const PayoffTable table = build_payoff_table(instances[k], base.rank);
    const EquilibriumCensus eq = census(table, base.delta);
    for (std::size_t c = 0; c < cells; ++c) {
      CampaignConfig config = base;
      config.rest.m = m_values[c / x0_values.size()];
      config.rest.x0 = x0_values[c % x0_values.size()];
      evals[k * cells + c] = evaluate_instance(table, eq, config, derive_seed(seed, k));
    }
  });

  std::vector<SweepCell> grid;
  for (std::size_t c = 0; c < cells; ++c) {
    SweepCell cell;
    cell.m = m_values[c / x0_values.size()];
    cell.x0 = x0_values[c % x0_values.size()];
    double stage_sum = 0.0, exponent_sum = 0.0;
    int stage_runs = 0, improved = 0;
    for (std::size_t k = 0; k < instances.size(); ++k) {
      const InstanceEvaluation& e = evals[k * cells + c];
      stage_sum += e.mean_convergence_stages * e.converged_runs;
      stage_runs += e.converged_runs;
      cell.timeouts += e.timeouts;
      if (e.sce_hit_exponent) {
        ++cell.determinate_instances;
        exponent_sum += *e.sce_hit_exponent;
      } else {
        ++cell.nondeterminate_instances;
      }
      improved += e.improved();
    }
    if (stage_runs > 0) cell.mean_convergence_stages = stage_sum / stage_runs;
    if (cell.determinate_instances > 0) {
      cell.mean_sce_hit_exponent = exponent_sum / cell.determinate_instances;
    }
    if (!instances.empty()) {
      cell.improvement_rating = static_cast<double>(improved) / instances.size();
    }
    grid.push_back(cell);
  }
  return grid;
}

// ---------------------------------------------------------------------------

double congruity(std::span<const NodeStatus> a, std::span<const NodeStatus> b) {
  if (a.size() != b.size()) throw std::invalid_argument("congruity: length mismatch");
  if (a.empty()) throw std::invalid_argument("congruity: empty status vectors");
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i];
  return static_cast<double>(same) / static_cast<double>(a.size());
}

std::vector<NodeStatus> pd_heuristic_status(int node_count, AttackerSet attackers,
                                            int threshold) {
  if (threshold < 0 || threshold > node_count) {
    throw std::invalid_argument("PD threshold must be in [0, |N|]");
  }
  const bool crowded = attackers.size() > threshold;
  std::vector<NodeStatus> status(node_count);
  for (NodeId i = 0; i < node_count; ++i) {
    if (attackers.contains(i)) {
      status[i] = crowded ? NodeStatus::kLose : NodeStatus::kDontLose;
    } else {
      status[i] = crowded ? NodeStatus::kDontMind : NodeStatus::kMind;
    }
  }
  return status;
}

}  // namespace tragame
