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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "output.hpp"
#include "tragame/cost.hpp"
#include "tragame/experiments.hpp"
#include "tragame/game.hpp"
#include "tragame/ground_truth.hpp"
#include "tragame/instance_io.hpp"
#include "tragame/model.hpp"
#include "tragame/parallel.hpp"
#include "tragame/random.hpp"
#include "tragame/rest.hpp"

namespace tragame::cli {
namespace {

namespace fs = std::filesystem;

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string default_instance_path() {
  return (fs::path(TRAGAME_DEFAULT_DATA_DIR) / "example_network.yaml").string();
}

std::string default_out_dir() {
  const char* env = std::getenv("TRAGAME_OUT_DIR");
  return env && *env ? env : ".";
}

// ---------------------------------------------------------------------------
// Option bundles

struct CommonOptions {
  std::string instance = default_instance_path();
  std::string out_dir = default_out_dir();
  std::string output = "-";
  Format format = Format::kCsv;
  std::uint64_t seed = 1;
  int jobs = 1;
};

const std::map<std::string, Format> kFormats{{"csv", Format::kCsv},
                                             {"json-lines", Format::kJsonLines}};
const std::map<std::string, Aggregation> kAggregations{{"sum", Aggregation::kSum},
                                                       {"max", Aggregation::kMax}};

void add_instance(CLI::App& app, CommonOptions& c) {
  app.add_option("--instance", c.instance, "Instance file (YAML)")->capture_default_str();
}

void add_format(CLI::App& app, CommonOptions& c) {
  app.add_option("--format", c.format, "Data format: csv or json-lines")
      ->transform(CLI::CheckedTransformer(kFormats))
      ->default_str("csv");
}

void add_output(CLI::App& app, CommonOptions& c) {
  app.add_option("-o,--output", c.output, "Data output file ('-' for standard output)")
      ->capture_default_str();
}

void add_out_dir(CLI::App& app, CommonOptions& c) {
  app.add_option("--out-dir", c.out_dir, "Output directory (default: $TRAGAME_OUT_DIR or .)");
}

void add_seed(CLI::App& app, CommonOptions& c) {
  app.add_option("--seed", c.seed, "Master seed")->capture_default_str();
}

void add_jobs(CLI::App& app, CommonOptions& c) {
  app.add_option("-j,--jobs", c.jobs, "Worker threads (0: all cores)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
}

void add_rank(CLI::App& app, RankParams& r) {
  auto* g = app.add_option_group("rank model");
  g->add_option("--interference-radius", r.interference_radius, "Competition radius in hops")
      ->capture_default_str();
  g->add_option("--w-vo-vo", r.weights.vo_behind_vo, "Rank weight of a VO competitor for VO")
      ->capture_default_str();
  g->add_option("--w-vo-be", r.weights.vo_behind_be, "Rank weight of a BE competitor for VO")
      ->capture_default_str();
  g->add_option("--w-be-vo", r.weights.be_behind_vo, "Rank weight of a VO competitor for BE")
      ->capture_default_str();
  g->add_option("--w-be-be", r.weights.be_behind_be, "Rank weight of a BE competitor for BE")
      ->capture_default_str();
  g->add_option("--vo-aggregation", r.vo_flow_aggregation, "VO flow cost: sum or max")
      ->transform(CLI::CheckedTransformer(kAggregations))
      ->default_str("sum");
  g->add_option("--be-aggregation", r.be_flow_aggregation, "BE flow cost: sum or max")
      ->transform(CLI::CheckedTransformer(kAggregations))
      ->default_str("max");
  g->add_option("--node-aggregation", r.node_aggregation, "Node cost: sum or max")
      ->transform(CLI::CheckedTransformer(kAggregations))
      ->default_str("sum");
}

void add_rest(CLI::App& app, RestParams& r) {
  auto* g = app.add_option_group("REST");
  g->add_option("--m", r.m, "Satisfaction threshold (stages)")->capture_default_str();
  g->add_option("--p", r.p, "Sigmoid ceiling")->capture_default_str();
  g->add_option("--x0", r.x0, "Sigmoid scale")->capture_default_str();
  g->add_option("--max-stages", r.max_stages, "Stage limit per run")->capture_default_str();
}

struct GenOptions {
  InstanceGenParams params;
  std::string topology = "random";
};

void add_generation(CLI::App& app, GenOptions& g) {
  auto* grp = app.add_option_group("instance generation");
  grp->add_option("--nodes", g.params.node_count, "Nodes per instance")->capture_default_str();
  grp->add_option("--min-hops", g.params.min_hops, "Shortest route (hops)")
      ->capture_default_str();
  grp->add_option("--max-hops", g.params.max_hops, "Longest route (hops)")
      ->capture_default_str();
  grp->add_option("--vo-fraction", g.params.vo_fraction, "Share of VO flows")
      ->capture_default_str();
  grp->add_option("--link-radius", g.params.radius, "Unit-square link radius")
      ->capture_default_str();
  grp->add_option("--topology-retries", g.params.topology_retries, "Resamples until connected")
      ->capture_default_str();
  grp->add_option("--topology", g.topology,
                  "random (geometric graph) or fixed (graph of --instance)")
      ->check(CLI::IsMember({"random", "fixed"}))
      ->capture_default_str();
}

// ---------------------------------------------------------------------------
// Helpers

NetworkInstance read_instance(const std::string& path) {
  NetworkInstance inst = load_instance(path);
  require_valid(inst);
  return inst;
}

std::string join_labels(const NetworkInstance& inst, AttackerSet a) {
  std::string s = "{";
  bool first = true;
  for (NodeId i : a.members()) {
    if (!first) s += ',';
    s += std::to_string(inst.label(i));
    first = false;
  }
  return s + "}";
}

std::string route_text(const NetworkInstance& inst, const Route& route) {
  std::string s;
  for (NodeId v : route.nodes()) {
    if (!s.empty()) s += '-';
    s += std::to_string(inst.label(v));
  }
  return s;
}

template <typename T>
T parse_integer(std::string_view text, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw CliError("bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

// none | all | mask:<bits> | list:<labels> | <labels>, labels comma-separated.
AttackerSet parse_attackers(const NetworkInstance& inst, std::string_view spec) {
  const AttackerSet all = AttackerSet::full(inst.node_count());
  if (spec == "none" || spec == "empty" || spec.empty()) return AttackerSet{};
  if (spec == "all" || spec == "full") return all;
  if (spec.starts_with("mask:")) {
    const AttackerSet a(parse_integer<std::uint64_t>(spec.substr(5), "attacker bitmask"));
    if (!a.is_subset_of(all)) {
      throw CliError("attacker bitmask " + std::string(spec.substr(5)) +
                     " names nodes outside the instance");
    }
    return a;
  }
  if (spec.starts_with("list:")) spec.remove_prefix(5);
  AttackerSet a;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', start), spec.size());
    const int label = parse_integer<int>(spec.substr(start, comma - start), "node label");
    const NodeId node = inst.node_from_label(label);
    if (node < 0 || node >= inst.node_count()) {
      throw CliError("node label " + std::to_string(label) + " is not in the instance");
    }
    a.insert(node);
    start = comma + 1;
  }
  return a;
}

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

// Opens the data stream: a file, or `fallback` for "-".
class DataSink {
 public:
  DataSink(const std::string& path, std::ostream& fallback) {
    if (path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw CliError("cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

fs::path prepare_out_dir(const std::string& dir) {
  const fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw CliError("cannot create output directory " + dir + ": " + ec.message());
  return p;
}

std::ofstream open_file(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw CliError("cannot write " + path.string());
  return out;
}

void describe_rank(OutputHeader& h, const RankParams& r) {
  h.add("interference_radius", std::to_string(r.interference_radius));
  h.add("rank_weights", format_double(r.weights.vo_behind_vo) + "," +
                            format_double(r.weights.vo_behind_be) + "," +
                            format_double(r.weights.be_behind_vo) + "," +
                            format_double(r.weights.be_behind_be));
  const auto agg = [](Aggregation a) { return a == Aggregation::kSum ? "sum" : "max"; };
  h.add("aggregation", std::string("vo=") + agg(r.vo_flow_aggregation) +
                           " be=" + agg(r.be_flow_aggregation) +
                           " node=" + agg(r.node_aggregation));
}

void describe_rest(OutputHeader& h, const RestParams& r) {
  h.add("m", std::to_string(r.m));
  h.add("p", format_double(r.p));
  h.add("x0", format_double(r.x0));
  h.add("max_stages", std::to_string(r.max_stages));
}

std::string ac_name(AccessCategory ac) { return std::string(to_string(ac)); }
std::string status_name(NodeStatus s) { return std::string(to_string(s)); }

Cell optional_cell(const std::optional<double>& v) {
  return v ? Cell(*v) : Cell(std::monostate{});
}

// ---------------------------------------------------------------------------
// gen

struct GenCommand {
  CommonOptions common;
  GenOptions gen;
  int count = 1;
  std::string prefix = "instance";

  void attach(CLI::App& app) {
    add_out_dir(app, common);
    add_seed(app, common);
    add_format(app, common);
    add_output(app, common);
    app.add_option("--instance", common.instance, "Graph source for --topology fixed")
        ->capture_default_str();
    add_generation(app, gen);
    app.add_option("-n,--count", count, "Instances to generate")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--prefix", prefix, "File name prefix")->capture_default_str();
  }

  int run(std::ostream& out, std::ostream&) {
    InstanceGenParams params = gen.params;
    if (gen.topology == "fixed") {
      params.topology = Topology::kFixedFile;
      params.fixed = read_instance(common.instance);
    }
    validate(params);
    const fs::path dir = prepare_out_dir(common.out_dir);

    OutputHeader h{"gen", {}};
    h.add("seed", std::to_string(common.seed));
    h.add("topology", gen.topology);
    if (gen.topology == "fixed") h.add("instance", common.instance);
    h.add("nodes", std::to_string(params.node_count));
    h.add("hops", std::to_string(params.min_hops) + ".." + std::to_string(params.max_hops));
    h.add("vo_fraction", format_double(params.vo_fraction));
    h.add("link_radius", format_double(params.radius));
    h.add("instance_seeds", "derive_seed(seed, k)");

    DataSink sink(common.output, out);
    TableWriter table(sink.stream(), common.format, h,
                      {"k", "file", "instance_seed", "nodes", "vo_flows", "links"});
    for (int k = 0; k < count; ++k) {
      const std::uint64_t s = derive_seed(common.seed, static_cast<std::uint64_t>(k));
      const NetworkInstance inst = gen_instance(params, s);
      char name[64];
      std::snprintf(name, sizeof name, "%s_%04d.yaml", prefix.c_str(), k);
      const fs::path path = dir / name;
      save_instance(inst, path,
                    "tragame " TRAGAME_VERSION " gen: master seed " +
                        std::to_string(common.seed) + ", index " + std::to_string(k) +
                        ", instance seed " + std::to_string(s));
      int vo = 0;
      for (const E2eFlow& f : inst.flows()) vo += f.intrinsic_ac == AccessCategory::kVO;
      table.row({std::int64_t{k}, path.string(), s, std::int64_t{inst.node_count()},
                 std::int64_t{vo},
                 static_cast<std::int64_t>(inst.graph().undirected_edges().size())});
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// resolve

struct ResolveCommand {
  CommonOptions common;
  std::string attackers = "none";

  void attach(CLI::App& app) {
    add_instance(app, common);
    add_format(app, common);
    add_output(app, common);
    app.add_option("-a,--attackers", attackers,
                   "Attacker set: labels '2,3,5,8', 'mask:<bits>', 'all' or 'none'")
        ->capture_default_str();
  }

  int run(std::ostream& out, std::ostream&) {
    const NetworkInstance inst = read_instance(common.instance);
    const AttackerSet a = parse_attackers(inst, attackers);
    const HopAcTable table = resolve_attacks(inst, a);
    const auto events = tra_events(inst, a);

    OutputHeader h{"resolve", {}};
    h.add("instance", common.instance);
    h.add("attackers", join_labels(inst, a));
    h.add("attacker_bitmask", std::to_string(a.mask()));
    DataSink sink(common.output, out);
    TableWriter w(sink.stream(), common.format, h,
                  {"flow", "route", "ac", "events", "hop_acs", "arrival_ac"});
    for (const E2eFlow& f : inst.flows()) {
      std::string ev;
      for (const TraEvent& e : events) {
        if (e.flow_id != f.flow_id) continue;
        if (!ev.empty()) ev += "; ";
        ev += std::string(to_string(e.kind)) + " at " + std::to_string(inst.label(e.node));
      }
      std::string hops;
      for (const HopEntry& hop : table.for_flow(f.flow_id)) {
        if (!hops.empty()) hops += ' ';
        hops += ac_name(hop.hac);
      }
      w.row({std::int64_t{inst.label(f.flow_id)}, route_text(inst, f.route),
             ac_name(f.intrinsic_ac), ev, hops, ac_name(table.arrival_ac(f.flow_id))});
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// cost

struct CostCommand {
  CommonOptions common;
  RankParams rank;
  std::vector<std::string> attackers;
  std::string reference;
  std::string corpus_out;
  bool corpus_all = false;

  void attach(CLI::App& app) {
    add_instance(app, common);
    add_format(app, common);
    add_output(app, common);
    add_rank(app, rank);
    app.add_option("-a,--attackers", attackers,
                   "Attacker set (repeatable); labels, 'mask:<bits>', 'all' or 'none'");
    app.add_option("--reference", reference,
                   "Reference statuses (ground-truth CSV) to diff against");
    app.add_option("--corpus-out", corpus_out,
                   "Write the model's statuses as a ground-truth CSV");
    app.add_flag("--corpus-all-profiles", corpus_all,
                 "With --corpus-out: cover every profile instead of the listed ones");
  }

  int run(std::ostream& out, std::ostream& err) {
    const NetworkInstance inst = read_instance(common.instance);
    const CostModel model(inst, rank);
    if (attackers.empty()) attackers.push_back("all");
    std::vector<AttackerSet> profiles;
    for (const auto& spec : attackers) profiles.push_back(parse_attackers(inst, spec));
    std::optional<GroundTruthCorpus> ref;
    if (!reference.empty()) {
      ref = load_ground_truth(reference);
      if (ref->node_count != inst.node_count()) {
        throw CliError("reference covers " + std::to_string(ref->node_count) +
                       " nodes, instance has " + std::to_string(inst.node_count()));
      }
    }

    OutputHeader h{"cost", {}};
    h.add("instance", common.instance);
    describe_rank(h, rank);
    if (ref) h.add("reference", reference);
    std::vector<std::string> columns{"node", "cost_all_neutral"};
    const bool single = profiles.size() == 1;
    for (std::size_t k = 0; k < profiles.size(); ++k) {
      const std::string suffix = single ? "" : "_A" + std::to_string(profiles[k].mask());
      h.add("profile" + suffix, join_labels(inst, profiles[k]) + " mask " +
                                     std::to_string(profiles[k].mask()));
      columns.push_back("cost_A" + (single ? "" : suffix.substr(2)));
      columns.push_back("status" + suffix);
      if (ref) {
        columns.push_back("reference" + suffix);
        columns.push_back("agree" + suffix);
      }
    }

    std::vector<CostVector> costs;
    std::vector<std::vector<NodeStatus>> status;
    std::vector<const std::vector<NodeStatus>*> truth;
    for (AttackerSet a : profiles) {
      costs.push_back(model.costs(a));
      status.push_back(classify_status(model.baseline(), costs.back(), a));
      if (ref) {
        const auto it = ref->profiles.find(a.mask());
        truth.push_back(it == ref->profiles.end() ? nullptr : &it->second);
      }
    }

    DataSink sink(common.output, out);
    TableWriter w(sink.stream(), common.format, h, columns);
    for (NodeId i = 0; i < inst.node_count(); ++i) {
      std::vector<Cell> row{std::int64_t{inst.label(i)}, model.baseline()[i]};
      for (std::size_t k = 0; k < profiles.size(); ++k) {
        row.emplace_back(costs[k][i]);
        row.emplace_back(status_name(status[k][i]));
        if (ref) {
          if (truth[k]) {
            row.emplace_back(status_name((*truth[k])[i]));
            row.emplace_back((*truth[k])[i] == status[k][i]);
          } else {
            row.emplace_back(std::monostate{});
            row.emplace_back(std::monostate{});
          }
        }
      }
      w.row(row);
    }

    if (ref) {
      int agree_total = 0, cells = 0;
      for (std::size_t k = 0; k < profiles.size(); ++k) {
        if (!truth[k]) {
          err << "reference has no profile " << join_labels(inst, profiles[k]) << '\n';
          continue;
        }
        int agree = 0;
        std::string diff;
        for (NodeId i = 0; i < inst.node_count(); ++i) {
          if ((*truth[k])[i] == status[k][i]) {
            ++agree;
          } else {
            diff += " " + std::to_string(inst.label(i)) + ":" + status_name(status[k][i]) +
                    "/" + status_name((*truth[k])[i]);
          }
        }
        agree_total += agree;
        cells += inst.node_count();
        err << "A=" << join_labels(inst, profiles[k]) << ": " << agree << "/"
            << inst.node_count() << " agree with reference"
            << (diff.empty() ? "" : "; differ (model/reference):" + diff) << '\n';
      }
      if (cells > 0) err << "reference agreement: " << agree_total << "/" << cells << '\n';
    }

    if (!corpus_out.empty()) {
      std::vector<AttackerSet> cover = profiles;
      if (corpus_all) {
        if (inst.node_count() > kDefaultEnumerationCap) {
          throw CliError("--corpus-all-profiles refused above " +
                         std::to_string(kDefaultEnumerationCap) + " nodes");
        }
        cover.clear();
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << inst.node_count()); ++m) {
          cover.emplace_back(m);
        }
      }
      auto file = open_file(corpus_out);
      file << "# tragame " TRAGAME_VERSION " model statuses for " << common.instance << '\n'
           << format_ground_truth(model_corpus(model, cover));
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// enumerate

struct EnumerateCommand {
  CommonOptions common;
  RankParams rank;
  double delta = kDefaultDelta;
  std::string profiles = "sce";

  void attach(CLI::App& app) {
    add_instance(app, common);
    add_format(app, common);
    add_output(app, common);
    add_jobs(app, common);
    add_rank(app, rank);
    app.add_option("--delta", delta, "SCE similarity tolerance")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app.add_option("--profiles", profiles, "Rows to list: all, ne or sce")
        ->check(CLI::IsMember({"all", "ne", "sce"}))
        ->capture_default_str();
  }

  int run(std::ostream& out, std::ostream& err) {
    const NetworkInstance inst = read_instance(common.instance);
    const PayoffTable table =
        build_payoff_table(inst, rank, kDefaultEnumerationCap, resolve_jobs(common.jobs));
    const EquilibriumCensus c = census(table, delta);

    OutputHeader h{"enumerate", {}};
    h.add("instance", common.instance);
    describe_rank(h, rank);
    h.add("delta", format_double(delta));
    h.add("profiles", profiles);
    DataSink sink(common.output, out);
    TableWriter w(sink.stream(), common.format, h,
                  {"attacker_bitmask", "attackers", "size", "is_ne", "is_sce",
                   "attacker_regret_nodes", "neutral_regret_nodes"});
    for (std::uint64_t m = 0; m < table.profile_count(); ++m) {
      const AttackerSet a(m);
      const bool ne = c.contains_ne(a);
      const bool sce = c.contains_sce(a);
      if ((profiles == "ne" && !ne) || (profiles == "sce" && !sce)) continue;
      std::int64_t ar = 0, nr = 0;
      for (const RegretFlags& f : regret_nodes(table, a)) {
        ar += f.attacker_regret;
        nr += f.neutral_regret;
      }
      w.row({m, join_labels(inst, a), std::int64_t{a.size()}, ne, sce, ar, nr});
    }
    const bool subset = std::includes(c.sce_profiles.begin(), c.sce_profiles.end(),
                                      c.ne_profiles.begin(), c.ne_profiles.end());
    err << "profiles " << table.profile_count() << ", NE " << c.ne_profiles.size() << " ("
        << format_double(c.ne_fraction) << "), SCE " << c.sce_profiles.size() << " ("
        << format_double(c.sce_fraction) << "), NE within SCE: " << (subset ? "yes" : "NO")
        << '\n';
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// rest

struct RestCommand {
  CommonOptions common;
  RankParams rank;
  RestParams rest;
  int runs = 1;
  std::string a0 = "random";
  double delta = kDefaultDelta;
  bool no_trace = false;

  RestCommand() { rest.max_stages = 10000; }

  void attach(CLI::App& app) {
    add_instance(app, common);
    add_format(app, common);
    add_out_dir(app, common);
    add_seed(app, common);
    add_jobs(app, common);
    add_rank(app, rank);
    add_rest(app, rest);
    app.add_option("--runs", runs, "Independent runs")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--a0", a0,
                   "Initial attackers: empty, full, random, list:<labels> or mask:<bits>")
        ->capture_default_str();
    app.add_option("--delta", delta, "SCE similarity tolerance for is_sce")
        ->capture_default_str();
    app.add_flag("--no-trace", no_trace, "Skip the per-stage trace file");
  }

  int run(std::ostream& out, std::ostream&) {
    validate(rest);
    const NetworkInstance inst = read_instance(common.instance);
    const int n = inst.node_count();
    const CostModel model(inst, rank);
    std::optional<PayoffTable> table;
    std::optional<EquilibriumCensus> eq;
    if (n <= kDefaultEnumerationCap) {
      table = build_payoff_table(model, kDefaultEnumerationCap, resolve_jobs(common.jobs));
      eq = census(*table, delta);
    }
    const CostEvaluator evaluator = table ? make_evaluator(*table) : make_evaluator(model);

    InitialProfile initial;
    if (a0 == "random") {
      initial.mode = InitialProfile::Mode::kRandom;
    } else if (a0 == "empty" || a0 == "none") {
      initial.mode = InitialProfile::Mode::kEmpty;
    } else if (a0 == "full" || a0 == "all") {
      initial.mode = InitialProfile::Mode::kFull;
    } else {
      initial.mode = InitialProfile::Mode::kExplicit;
      initial.members = parse_attackers(inst, a0);
    }

    struct RunRecord {
      AttackerSet initial;
      std::uint64_t rest_seed = 0;
      RestTrace trace;
    };
    std::vector<RunRecord> records(runs);
    parallel_for(records.size(), resolve_jobs(common.jobs), [&](std::size_t r) {
      Rng rng(derive_seed(common.seed, r));
      RunRecord& rec = records[r];
      rec.initial = initial.draw(n, rng);
      RestParams p = rest;
      p.seed = rec.rest_seed = rng.next();
      rec.trace = tragame::run(n, evaluator, p, rec.initial, !no_trace);
    });

    const fs::path dir = prepare_out_dir(common.out_dir);
    OutputHeader h{"rest", {}};
    h.add("instance", common.instance);
    h.add("seed", std::to_string(common.seed));
    h.add("run_seeds", "Rng(derive_seed(seed, run)) draws A(0), then the REST seed");
    h.add("runs", std::to_string(runs));
    h.add("a0", a0);
    describe_rest(h, rest);
    describe_rank(h, rank);
    const std::string ext(file_extension(common.format));

    if (!no_trace) {
      auto file = open_file(dir / ("rest_trace." + ext));
      std::vector<std::string> columns{"run", "stage", "attacker_bitmask", "attacker_count",
                                       "dissatisfied_count"};
      for (NodeId i = 0; i < n; ++i) columns.push_back("cost_" + std::to_string(inst.label(i)));
      TableWriter w(file, common.format, h, columns);
      for (std::size_t r = 0; r < records.size(); ++r) {
        for (const StageRecord& s : records[r].trace.stages) {
          std::vector<Cell> row{static_cast<std::int64_t>(r), s.stage, s.attackers.mask(),
                                std::int64_t{s.attackers.size()},
                                std::int64_t{s.dissatisfied_count(n)}};
          for (double c : s.costs) row.emplace_back(c);
          w.row(row);
        }
      }
    }

    int converged = 0, ne_hits = 0, sce_hits = 0;
    double stage_sum = 0.0;
    {
      auto file = open_file(dir / ("rest_summary." + ext));
      if (eq) h.add("delta", format_double(delta));
      TableWriter w(file, common.format, h,
                    {"run", "rest_seed", "terminal", "stages", "a0_bitmask", "a_inf_bitmask",
                     "a_inf", "is_ne", "is_sce"});
      for (std::size_t r = 0; r < records.size(); ++r) {
        const RestTrace& t = records[r].trace;
        Cell ne = std::monostate{}, sce = std::monostate{};
        if (t.converged()) {
          ++converged;
          stage_sum += static_cast<double>(t.final_stage);
          if (eq) {
            ne = eq->contains_ne(t.final_attackers);
            sce = eq->contains_sce(t.final_attackers);
            ne_hits += eq->contains_ne(t.final_attackers);
            sce_hits += eq->contains_sce(t.final_attackers);
          }
        }
        w.row({static_cast<std::int64_t>(r), records[r].rest_seed,
               std::string(to_string(t.terminal)), t.final_stage, records[r].initial.mask(),
               t.converged() ? Cell(t.final_attackers.mask()) : Cell(std::monostate{}),
               t.converged() ? Cell(join_labels(inst, t.final_attackers))
                             : Cell(std::monostate{}),
               ne, sce});
      }
    }

    out << "runs " << runs << ", converged " << converged << " ("
        << format_double(100.0 * converged / runs) << "%), timeouts " << runs - converged
        << '\n';
    if (converged > 0) {
      out << "mean convergence stages " << format_double(stage_sum / converged) << '\n';
      if (eq) {
        out << "NE hits " << ne_hits << "/" << converged << ", SCE hits " << sce_hits << "/"
            << converged << " (census: NE " << format_double(eq->ne_fraction) << ", SCE "
            << format_double(eq->sce_fraction) << ")\n";
      }
    }
    if (!no_trace) {
      // Mean attackers and dissatisfied nodes per stage; finished runs hold
      // their final values.
      std::int64_t longest = 0;
      for (const auto& rec : records) longest = std::max(longest, rec.trace.final_stage);
      out << "stage  mean_attackers  mean_dissatisfied\n";
      for (std::int64_t k = 0; k <= longest; k = k < 10 ? k + 1 : k * 2) {
        double att = 0.0, dis = 0.0;
        for (const auto& rec : records) {
          const auto& st = rec.trace.stages;
          const StageRecord& s = st[std::min<std::size_t>(k, st.size() - 1)];
          att += s.attackers.size();
          dis += s.dissatisfied_count(n);
        }
        char line[96];
        std::snprintf(line, sizeof line, "%5lld  %14.2f  %17.2f\n", static_cast<long long>(k),
                      att / runs, dis / runs);
        out << line;
      }
    }
    out << "wrote " << (dir / ("rest_summary." + ext)).string();
    if (!no_trace) out << ", " << (dir / ("rest_trace." + ext)).string();
    out << '\n';
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// sweep

struct SweepCommand {
  CommonOptions common;
  GenOptions gen;
  RankParams rank;
  RestParams rest;
  int instances = 100;
  std::vector<std::string> instance_files;
  int runs = 100;
  std::vector<int> m_values{5, 10, 15, 20, 25};
  std::vector<double> x0_values{0.5, 1.0, 2.0, 5.0};
  std::vector<int> outputs{5, 7, 8};
  double delta = kDefaultDelta;

  void attach(CLI::App& app) {
    add_out_dir(app, common);
    add_format(app, common);
    add_seed(app, common);
    add_jobs(app, common);
    add_rank(app, rank);
    add_rest(app, rest);
    add_generation(app, gen);
    app.add_option("--instance", common.instance, "Graph source for --topology fixed")
        ->capture_default_str();
    app.add_option("--instances", instances, "Random instances to generate")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--instance-files", instance_files,
                   "Use these instance files instead of generating");
    app.add_option("--runs", runs, "REST runs per instance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--m-values", m_values, "Grid values of m")->delimiter(',');
    app.add_option("--x0-values", x0_values, "Grid values of x0")->delimiter(',');
    app.add_option("--outputs", outputs,
                   "Which outputs: 5 (hits scatter), 7 (improvement scatter), 8 (grid)")
        ->delimiter(',')
        ->check(CLI::IsMember({5, 7, 8}));
    app.add_option("--delta", delta, "SCE similarity tolerance")->capture_default_str();
  }

  int run(std::ostream& out, std::ostream&) {
    validate(rest);
    std::vector<NetworkInstance> set;
    const std::uint64_t instance_seed = derive_seed(common.seed, 0);
    const std::uint64_t campaign_seed = derive_seed(common.seed, 1);
    if (!instance_files.empty()) {
      for (const auto& f : instance_files) set.push_back(read_instance(f));
    } else {
      InstanceGenParams params = gen.params;
      if (gen.topology == "fixed") {
        params.topology = Topology::kFixedFile;
        params.fixed = read_instance(common.instance);
      }
      validate(params);
      set.resize(instances);
      parallel_for(set.size(), resolve_jobs(common.jobs), [&](std::size_t k) {
        set[k] = gen_instance(params, derive_seed(instance_seed, k));
      });
    }
    const int jobs = resolve_jobs(common.jobs);
    CampaignConfig config;
    config.rank = rank;
    config.rest = rest;
    config.runs = runs;
    config.delta = delta;
    const fs::path dir = prepare_out_dir(common.out_dir);
    const std::string ext(file_extension(common.format));

    OutputHeader h{"sweep", {}};
    h.add("seed", std::to_string(common.seed));
    if (instance_files.empty()) {
      h.add("instances", std::to_string(set.size()) + " generated, instance k from seed " +
                             "derive_seed(derive_seed(seed, 0), k)");
      h.add("topology", gen.topology);
      h.add("nodes", std::to_string(gen.params.node_count));
      h.add("hops", std::to_string(gen.params.min_hops) + ".." +
                        std::to_string(gen.params.max_hops));
      h.add("vo_fraction", format_double(gen.params.vo_fraction));
      h.add("link_radius", format_double(gen.params.radius));
    } else {
      h.add("instances", std::to_string(set.size()) + " files");
    }
    h.add("campaign_seeds", "instance k runs from derive_seed(derive_seed(seed, 1), k)");
    h.add("runs", std::to_string(runs));
    h.add("a0", "random");
    h.add("delta", format_double(delta));
    describe_rank(h, rank);
    const auto wants = [&](int f) {
      return std::find(outputs.begin(), outputs.end(), f) != outputs.end();
    };

    if (wants(5) || wants(7)) {
      std::vector<InstanceEvaluation> evals(set.size());
      parallel_for(set.size(), jobs, [&](std::size_t k) {
        evals[k] = evaluate_instance(set[k], config, derive_seed(campaign_seed, k));
      });
      OutputHeader hb = h;
      describe_rest(hb, rest);
      if (wants(5)) {
        auto file = open_file(dir / ("fig5_scatter." + ext));
        TableWriter w(file, common.format, hb,
                      {"instance", "ne_fraction", "ne_hits", "sce_fraction", "sce_hits",
                       "sce_hit_exponent", "converged_runs", "timeouts",
                       "mean_convergence_stages"});
        int above = 0, determinate = 0;
        double exp_sum = 0.0;
        for (std::size_t k = 0; k < evals.size(); ++k) {
          const auto& e = evals[k];
          w.row({static_cast<std::int64_t>(k), e.ne_fraction, e.ne_hits, e.sce_fraction,
                 e.sce_hits, optional_cell(e.sce_hit_exponent), std::int64_t{e.converged_runs},
                 std::int64_t{e.timeouts}, e.mean_convergence_stages});
          if (e.sce_hit_exponent) {
            ++determinate;
            exp_sum += *e.sce_hit_exponent;
            above += e.sce_hits >= e.sce_fraction;
          }
        }
        out << "hits: " << above << "/" << determinate
            << " determinate instances with sce_hits >= sce_fraction";
        if (determinate) out << ", mean SCEHitExponent " << format_double(exp_sum / determinate);
        out << '\n';
      }
      if (wants(7)) {
        auto file = open_file(dir / ("fig7_scatter." + ext));
        TableWriter w(file, common.format, hb,
                      {"instance", "initial_beneficiary_pct", "eventual_beneficiary_pct",
                       "improved"});
        int improved = 0;
        for (std::size_t k = 0; k < evals.size(); ++k) {
          const auto& e = evals[k];
          w.row({static_cast<std::int64_t>(k), optional_cell(e.initial_beneficiary_pct),
                 optional_cell(e.eventual_beneficiary_pct), e.improved()});
          improved += e.improved();
        }
        out << "improvement: " << improved << "/" << evals.size() << " instances improved\n";
      }
    }
    if (wants(8)) {
      const auto grid = sweep(set, m_values, x0_values, config, campaign_seed, jobs);
      OutputHeader hg = h;
      hg.add("p", format_double(rest.p));
      hg.add("max_stages", std::to_string(rest.max_stages));
      auto file = open_file(dir / ("fig8_grid." + ext));
      TableWriter w(file, common.format, hg,
                    {"m", "x0", "mean_convergence_stages", "mean_sce_hit_exponent",
                     "determinate_instances", "nondeterminate_instances", "improvement_rating",
                     "timeouts"});
      for (const SweepCell& c : grid) {
        w.row({std::int64_t{c.m}, c.x0, c.mean_convergence_stages,
               optional_cell(c.mean_sce_hit_exponent), std::int64_t{c.determinate_instances},
               std::int64_t{c.nondeterminate_instances}, c.improvement_rating,
               std::int64_t{c.timeouts}});
      }
      out << "grid: " << grid.size() << " cells\n";
    }
    out << "wrote outputs to " << dir.string() << '\n';
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// congruity

struct CongruityCommand {
  CommonOptions common;
  RankParams rank;
  std::string ground_truth;
  std::vector<int> thresholds;

  void attach(CLI::App& app) {
    add_instance(app, common);
    add_format(app, common);
    add_output(app, common);
    add_rank(app, rank);
    app.add_option("--ground-truth", ground_truth, "Ground-truth status CSV")->required();
    app.add_option("--thresholds", thresholds, "PD-heuristic thresholds (default 0..|N|)")
        ->delimiter(',');
  }

  int run(std::ostream& out, std::ostream& err) {
    const NetworkInstance inst = read_instance(common.instance);
    const CostModel model(inst, rank);
    const GroundTruthCorpus corpus = load_ground_truth(ground_truth);
    if (thresholds.empty()) {
      thresholds.resize(inst.node_count() + 1);
      std::iota(thresholds.begin(), thresholds.end(), 0);
    }
    const CongruityReport m = model_congruity(corpus, model);
    const CongruityReport g = informed_gambler_congruity(corpus);
    std::vector<CongruityReport> pd;
    for (int t : thresholds) pd.push_back(pd_congruity(corpus, t));

    OutputHeader h{"congruity", {}};
    h.add("instance", common.instance);
    h.add("ground_truth", ground_truth);
    describe_rank(h, rank);
    std::vector<std::string> columns{"attacker_bitmask", "model", "gambler"};
    for (int t : thresholds) columns.push_back("pd_" + std::to_string(t));
    DataSink sink(common.output, out);
    TableWriter w(sink.stream(), common.format, h, columns);
    for (std::size_t k = 0; k < m.per_profile.size(); ++k) {
      std::vector<Cell> row{m.per_profile[k].first, m.per_profile[k].second,
                            g.per_profile[k].second};
      for (const auto& r : pd) row.emplace_back(r.per_profile[k].second);
      w.row(row);
    }
    err << "profiles " << m.per_profile.size() << ", mean congruity: model "
        << format_double(m.mean) << ", informed gambler " << format_double(g.mean);
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
      err << ", pd(" << thresholds[k] << ") " << format_double(pd[k].mean);
    }
    err << '\n';
    return kExitOk;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Traffic remapping attack games in multi-hop ad hoc networks", "tragame"};
  app.set_version_flag("--version", "tragame " TRAGAME_VERSION);
  app.require_subcommand(1);

  GenCommand gen;
  ResolveCommand resolve;
  CostCommand cost;
  EnumerateCommand enumerate;
  RestCommand rest;
  SweepCommand sweep_cmd;
  CongruityCommand congruity_cmd;

  auto* gen_app = app.add_subcommand("gen", "Generate random instances");
  auto* resolve_app = app.add_subcommand("resolve", "Report the attacks each flow experiences");
  auto* cost_app = app.add_subcommand("cost", "Node costs and statuses under attacker sets");
  auto* enumerate_app = app.add_subcommand("enumerate", "Equilibrium census over all profiles");
  auto* rest_app = app.add_subcommand("rest", "Run the REST multistage strategy");
  auto* sweep_app = app.add_subcommand("sweep", "Monte Carlo campaign and m x x0 grid");
  auto* congruity_app =
      app.add_subcommand("congruity", "Score classifiers against a ground-truth file");
  gen.attach(*gen_app);
  resolve.attach(*resolve_app);
  cost.attach(*cost_app);
  enumerate.attach(*enumerate_app);
  rest.attach(*rest_app);
  sweep_cmd.attach(*sweep_app);
  congruity_cmd.attach(*congruity_app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "tragame: " << msg << " (see --help)\n";
    return kExitUsage;
  }

  try {
    if (gen_app->parsed()) return gen.run(out, err);
    if (resolve_app->parsed()) return resolve.run(out, err);
    if (cost_app->parsed()) return cost.run(out, err);
    if (enumerate_app->parsed()) return enumerate.run(out, err);
    if (rest_app->parsed()) return rest.run(out, err);
    if (sweep_app->parsed()) return sweep_cmd.run(out, err);
    if (congruity_app->parsed()) return congruity_cmd.run(out, err);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "tragame: error: " << msg << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace tragame::cli
