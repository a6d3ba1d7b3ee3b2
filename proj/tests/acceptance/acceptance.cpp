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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Optional arguments select criteria by
// number, e.g. `acceptance 1 2 10`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "output.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/small_instances.hpp"
#include "tragame/cost.hpp"
#include "tragame/experiments.hpp"
#include "tragame/game.hpp"
#include "tragame/ground_truth.hpp"
#include "tragame/model.hpp"
#include "tragame/rest.hpp"

namespace tragame {
namespace {

namespace fs = std::filesystem;
using testing::fixture;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> check;
};

int jobs() { return static_cast<int>(std::max(1U, std::thread::hardware_concurrency())); }

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Ten-node campaign instances with the default generator.
std::vector<NetworkInstance> campaign_instances(int count, std::uint64_t master) {
  std::vector<NetworkInstance> out;
  for (int k = 0; k < count; ++k) out.push_back(gen_instance({}, derive_seed(master, k)));
  return out;
}

CampaignConfig campaign_config() {
  CampaignConfig c;
  c.rest.m = 10;
  c.rest.x0 = 1.0;
  c.rest.p = 0.95;
  c.rest.max_stages = 10000;
  c.runs = 100;
  c.initial.mode = InitialProfile::Mode::kRandom;
  return c;
}

// ---------------------------------------------------------------------------

Outcome attack_events() {
  const auto& inst = fixture();
  const auto events = tra_events(inst, inst.attackers_from_labels({2, 3, 5, 8}));
  const auto id = [&](int label) { return inst.node_from_label(label); };
  using K = TraEvent::Kind;
  const std::vector<TraEvent> expected{{0, id(3), K::kDowngrade},
                                       {1, id(2), K::kUpgrade},
                                       {1, id(5), K::kDowngrade},
                                       {7, id(8), K::kUpgrade},
                                       {7, id(5), K::kDowngrade}};
  std::vector<TraEvent> sorted = events, want = expected;
  const auto key = [](const TraEvent& e) { return std::tuple(e.flow_id, e.node, e.kind); };
  const auto less = [&](const TraEvent& a, const TraEvent& b) { return key(a) < key(b); };
  std::sort(sorted.begin(), sorted.end(), less);
  std::sort(want.begin(), want.end(), less);
  return {sorted == want, std::to_string(events.size()) + " events, expected 5"};
}

Outcome full_attack() {
  // Fixture, plus random instances that contain one-hop routes.
  std::vector<NetworkInstance> instances{fixture()};
  InstanceGenParams params;
  params.min_hops = 1;
  for (int k = 0; k < 50; ++k) instances.push_back(gen_instance(params, 900 + k));
  int flows = 0, bad = 0, one_hop = 0;
  for (const auto& inst : instances) {
    const AttackerSet all = AttackerSet::full(inst.node_count());
    const HopAcTable table = resolve_attacks(inst, all);
    for (const E2eFlow& f : inst.flows()) {
      ++flows;
      AccessCategory expected = AccessCategory::kBE;
      if (f.route.length() == 2) {
        ++one_hop;
        expected = AccessCategory::kVO;  // VO stays VO, BE is upgraded at its source
      }
      bad += table.arrival_ac(f.flow_id) != expected;
    }
  }
  return {bad == 0, std::to_string(flows) + " flows (" + std::to_string(one_hop) +
                        " single-hop), " + std::to_string(bad) + " wrong arrival ACs"};
}

Outcome oracle_equivalence() {
  std::vector<NetworkInstance> instances;
  for (int n : {2, 3}) {
    auto all = testing::all_small_instances(n);
    instances.insert(instances.end(), all.begin(), all.end());
  }
  const std::size_t exhaustive = instances.size();
  for (int n : {2, 3}) {
    InstanceGenParams params;
    params.node_count = n;
    params.min_hops = 1;
    params.max_hops = n - 1;
    params.radius = 0.8;
    for (int k = 0; k < 10; ++k) instances.push_back(gen_instance(params, derive_seed(5000 + n, k)));
  }
  long checks = 0, mismatches = 0;
  for (const auto& inst : instances) {
    const int n = inst.node_count();
    const auto table = build_payoff_table(inst);
    const oracle::CostFn fn = [&](std::uint64_t a) { return oracle::costs(inst, a); };
    for (std::uint64_t m = 0; m < table.profile_count(); ++m) {
      mismatches += is_nash(table, AttackerSet(m)) != oracle::is_nash(n, fn, m);
      ++checks;
      for (double delta : {0.05, 0.2, 0.5}) {
        mismatches += is_sce(table, AttackerSet(m), delta) != oracle::is_sce(n, fn, m, delta);
        ++checks;
      }
    }
  }
  return {mismatches == 0, std::to_string(exhaustive) + " exhaustive + " +
                               std::to_string(instances.size() - exhaustive) +
                               " random instances, " + std::to_string(checks) + " verdicts, " +
                               std::to_string(mismatches) + " mismatches"};
}

Outcome ne_within_sce() {
  const auto table = build_payoff_table(fixture());
  const auto c = census(table, 0.05);
  std::size_t violations = 0;
  for (std::uint64_t m : c.ne_profiles) violations += !c.contains_sce(AttackerSet(m));
  return {table.profile_count() == 1024 && violations == 0,
          std::to_string(c.ne_profiles.size()) + " NE, " + std::to_string(c.sce_profiles.size()) +
              " SCE of 1024, " + std::to_string(violations) + " violations"};
}

Outcome convergence() {
  const CostModel model(fixture());
  const auto evaluator = make_evaluator(model);
  RestParams params;
  params.p = 0.95;
  params.m = 10;
  params.x0 = 1.0;
  params.max_stages = 10000;
  int converged = 0, absorbed = 0;
  std::int64_t longest = 0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    params.seed = derive_seed(2025, r);
    RestEngine engine(model.node_count(), evaluator, params, AttackerSet{});
    while (!engine.all_satisfied() && engine.stage() < params.max_stages) engine.step();
    if (!engine.all_satisfied()) continue;
    ++converged;
    longest = std::max(longest, engine.stage());
    const AttackerSet settled = engine.attackers();
    bool stable = true;
    for (int extra = 0; extra < 100; ++extra) {
      engine.step();
      stable = stable && engine.attackers() == settled && engine.all_satisfied();
    }
    absorbed += stable;
  }
  return {converged == 100 && absorbed == 100,
          std::to_string(converged) + "/100 converged (max " + std::to_string(longest) +
              " stages), " + std::to_string(absorbed) + "/100 absorbed over 100 extra stages"};
}

Outcome cli_determinism() {
  const fs::path base = fs::temp_directory_path() / "tragame_acceptance_determinism";
  fs::remove_all(base);
  std::vector<std::string> traces;
  for (const char* run : {"first", "second"}) {
    const fs::path dir = base / run;
    const std::string cmd = std::string("\"") + TRAGAME_CLI_PATH +
                            "\" rest --runs 10 --seed 20250101 --out-dir \"" + dir.string() +
                            "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "rest command failed"};
    traces.push_back(cli::comparable_text(slurp(dir / "rest_trace.csv")) +
                     cli::comparable_text(slurp(dir / "rest_summary.csv")));
  }
  const std::string raw = slurp(base / "first" / "rest_trace.csv");
  const auto lines = std::count(raw.begin(), raw.end(), '\n');
  fs::remove_all(base);
  return {!traces[0].empty() && traces[0] == traces[1],
          "trace of " + std::to_string(lines) + " lines, " +
              (traces[0] == traces[1] ? "byte-identical" : "DIFFERENT") +
              " outside the timestamp line"};
}

Outcome sce_seeking() {
  const auto instances = campaign_instances(100, 7001);
  const CampaignConfig config = campaign_config();
  std::vector<InstanceEvaluation> evals(instances.size());
  parallel_for(instances.size(), jobs(), [&](std::size_t k) {
    evals[k] = evaluate_instance(instances[k], config, derive_seed(7002, k));
  });
  int determinate = 0, above = 0;
  double sum = 0.0;
  for (const auto& e : evals) {
    if (!e.sce_hit_exponent) continue;
    ++determinate;
    sum += *e.sce_hit_exponent;
    above += e.sce_hits >= e.sce_fraction;
  }
  const double share = determinate ? static_cast<double>(above) / determinate : 0.0;
  const double mean = determinate ? sum / determinate : 0.0;
  return {determinate > 0 && share >= 0.70 && mean < 1.0,
          std::to_string(above) + "/" + std::to_string(determinate) +
              " determinate instances with sce_hits >= sce_fraction (" + fmt(share) +
              ", need >= 0.70), mean SCEHitExponent " + fmt(mean) + " (need < 1)"};
}

Outcome defensibility() {
  const auto instances = campaign_instances(200, 8001);
  const auto result = improvement_rating(instances, campaign_config(), 8002, jobs());
  const int improved = static_cast<int>(std::count(result.improved.begin(),
                                                   result.improved.end(), true));
  return {result.improved_share >= 0.60,
          std::to_string(improved) + "/200 instances improved (" + fmt(result.improved_share) +
              ", need >= 0.60)"};
}

Outcome sweep_trend() {
  const auto instances = campaign_instances(50, 9001);
  const std::vector<int> ms{5, 10, 15, 20, 25};
  const std::vector<double> x0s{1.0};
  const auto grid = sweep(instances, ms, x0s, campaign_config(), 9002, jobs());
  bool increasing = true;
  std::string series;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k > 0) increasing = increasing && grid[k].mean_convergence_stages >
                                              grid[k - 1].mean_convergence_stages;
    series += (k ? ", " : "") + std::string("m=") + std::to_string(grid[k].m) + ": " +
              fmt(grid[k].mean_convergence_stages, 1);
  }
  return {grid.size() == ms.size() && increasing, "mean stages " + series};
}

Outcome numerics() {
  int failures = 0;
  for (double p : {0.5, 0.9, 0.95, 1.0}) {
    for (double x0 : {0.25, 1.0, 2.0, 10.0}) {
      failures += std::abs(sigmoid(0.0, p, x0) - p / 2) > 1e-12;
      failures += std::abs(sigmoid(50 * x0, p, x0) - p) > 1e-9;
      failures += std::abs(sigmoid(-50 * x0, p, x0)) > 1e-9;
    }
  }
  for (double f : {0.01, 0.125, 0.5, 0.9}) {
    const auto e = sce_hit_exponent(1.0, f);
    failures += !e || *e != std::log(0.999) / std::log(f);
  }
  for (double h : {0.0, 0.3, 1.0}) {
    failures += sce_hit_exponent(h, 0.0).has_value();
    failures += sce_hit_exponent(h, 1.0).has_value();
  }
  return {failures == 0, std::to_string(failures) + " numeric checks off"};
}

Outcome congruity_machinery() {
  const CostModel model(fixture());
  std::vector<AttackerSet> all;
  for (std::uint64_t m = 0; m < 1024; ++m) all.emplace_back(m);
  const auto corpus = model_corpus(model, all);
  const double self = model_congruity(corpus, model).mean;
  std::string pd;
  bool pd_ok = true;
  for (int t = 0; t <= 10; ++t) {
    const double v = pd_congruity(corpus, t).mean;
    pd_ok = pd_ok && v >= 0.0 && v <= 1.0;
    pd += (t ? " " : "") + fmt(v, 2);
  }
  const InformedGambler coin(std::vector<double>(10, 0.5), std::vector<double>(10, 0.5));
  double coin_sum = 0.0;
  for (const auto& [mask, truth] : corpus.profiles) {
    coin_sum += coin.expected_congruity(AttackerSet(mask), truth);
  }
  const double coin_mean = coin_sum / corpus.profiles.size();
  return {self == 1.0 && pd_ok && coin_mean == 0.5,
          "self " + fmt(self) + ", fair-coin gambler " + fmt(coin_mean) +
              ", PD thresholds 0..10: " + pd};
}

Outcome reference_report() {
  const fs::path dir = fs::temp_directory_path() / "tragame_acceptance_cost";
  fs::create_directories(dir);
  const fs::path out = dir / "cost.csv", err = dir / "cost.err";
  const std::string ref = (testing::data_dir() / "example_reference_status.csv").string();
  const std::string cmd = std::string("\"") + TRAGAME_CLI_PATH +
                          "\" cost -a 1,3,8,9 -a all --reference \"" + ref + "\" -o \"" +
                          out.string() + "\" 2> \"" + err.string() + "\"";
  const int code = std::system(cmd.c_str());
  const std::string csv = slurp(out), report = slurp(err);
  fs::remove_all(dir);
  const bool columns = csv.find("status_A389") != std::string::npos &&
                       csv.find("status_A1023") != std::string::npos &&
                       csv.find("reference_A389") != std::string::npos &&
                       csv.find("agree_A1023") != std::string::npos;
  const auto pos = report.find("reference agreement: ");
  const std::string agreement =
      pos == std::string::npos ? "missing"
                               : report.substr(pos + 21, report.find('\n', pos) - pos - 21);
  return {code == 0 && columns && pos != std::string::npos,
          "both status columns emitted, agreement with reference " + agreement +
              " (reported, not asserted)"};
}

}  // namespace
}  // namespace tragame

int main(int argc, char** argv) {
  using namespace tragame;
  const std::vector<Criterion> criteria{
      {1, "attack events for A={2,3,5,8}", 1, attack_events},
      {2, "full-attack arrival ACs", 1, full_attack},
      {3, "equilibrium oracle equivalence", 10, oracle_equivalence},
      {4, "NE within SCE census", 10, ne_within_sce},
      {5, "REST convergence and absorption", 60, convergence},
      {6, "rest CLI determinism", 60, cli_determinism},
      {7, "SCE-seeking trend", 30 * 60, sce_seeking},
      {8, "defensibility", 60 * 60, defensibility},
      {9, "sweep trend in m", 30 * 60, sweep_trend},
      {10, "sigmoid and exponent numerics", 1, numerics},
      {11, "congruity machinery", 10, congruity_machinery},
      {12, "reference classification report", 10, reference_report},
  };
  std::set<int> selected;
  for (int k = 1; k < argc; ++k) selected.insert(std::atoi(argv[k]));

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) {
      o.pass = false;
      o.detail += "; took longer than " + fmt(c.limit_seconds, 0) + " s";
    }
    failed += !o.pass;
    std::printf("%s  %2d  %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
