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

#include "tragame/ground_truth.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tragame/experiments.hpp"

namespace tragame {

const std::vector<NodeStatus>& GroundTruthCorpus::truth(AttackerSet attackers) const {
  const auto it = profiles.find(attackers.mask());
  if (it == profiles.end()) {
    throw std::out_of_range("corpus has no profile " + std::to_string(attackers.mask()));
  }
  return it->second;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
T parse_number(std::string_view text, std::size_t line_no, const char* what) {
  T value{};
  text = trim(text);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw GroundTruthFormatError("line " + std::to_string(line_no) + ": bad " + what + " '" +
                                 std::string(text) + "'");
  }
  return value;
}

bool role_matches(NodeStatus status, bool attacker) {
  const bool attacker_status = status == NodeStatus::kLose || status == NodeStatus::kDontLose;
  return attacker_status == attacker;
}

}  // namespace

GroundTruthCorpus parse_ground_truth(std::string_view csv) {
  // Collect raw rows first; node_count is the largest node id + 1.
  struct Row {
    std::uint64_t mask;
    int node;
    NodeStatus status;
    std::size_t line;
  };
  std::vector<Row> rows;
  std::istringstream in{std::string(csv)};
  std::size_t line_no = 0;
  bool header_seen = false;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (view.starts_with("attacker_set_bitmask")) continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t pos; (pos = view.find(',', start)) != std::string_view::npos;
         start = pos + 1) {
      fields.push_back(view.substr(start, pos - start));
    }
    fields.push_back(view.substr(start));
    if (fields.size() != 3) {
      throw GroundTruthFormatError("line " + std::to_string(line_no) +
                                   ": expected 3 columns (attacker_set_bitmask,node_id,status)");
    }
    const auto mask = parse_number<std::uint64_t>(fields[0], line_no, "bitmask");
    const int node = parse_number<int>(fields[1], line_no, "node_id");
    const auto status = parse_node_status(trim(fields[2]));
    if (!status) {
      throw GroundTruthFormatError("line " + std::to_string(line_no) + ": unknown status '" +
                                   std::string(trim(fields[2])) + "'");
    }
    if (node < 0 || node >= kMaxNodes) {
      throw GroundTruthFormatError("line " + std::to_string(line_no) + ": node_id out of range");
    }
    rows.push_back({mask, node, *status, line_no});
  }
  if (rows.empty()) throw GroundTruthFormatError("ground-truth file has no rows");

  GroundTruthCorpus corpus;
  for (const Row& row : rows) corpus.node_count = std::max(corpus.node_count, row.node + 1);
  const AttackerSet all = AttackerSet::full(corpus.node_count);
  std::map<std::uint64_t, std::vector<int>> seen;
  for (const Row& row : rows) {
    const AttackerSet a(row.mask);
    if (!a.is_subset_of(all)) {
      throw GroundTruthFormatError("line " + std::to_string(row.line) +
                                   ": bitmask references nodes beyond node_count");
    }
    if (!role_matches(row.status, a.contains(row.node))) {
      throw GroundTruthFormatError("line " + std::to_string(row.line) + ": status '" +
                                   std::string(to_string(row.status)) +
                                   "' does not match the node's role in the profile");
    }
    auto& statuses = corpus.profiles[row.mask];
    auto& count = seen[row.mask];
    statuses.resize(corpus.node_count, NodeStatus::kDontMind);
    count.resize(corpus.node_count, 0);
    if (count[row.node]++ > 0) {
      throw GroundTruthFormatError("line " + std::to_string(row.line) + ": duplicate row");
    }
    statuses[row.node] = row.status;
  }
  for (const auto& [mask, count] : seen) {
    for (int c : count) {
      if (c != 1) {
        throw GroundTruthFormatError("profile " + std::to_string(mask) +
                                     " does not list every node exactly once");
      }
    }
  }
  return corpus;
}

GroundTruthCorpus load_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GroundTruthFormatError("cannot open ground-truth file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_ground_truth(buffer.str());
}

std::string format_ground_truth(const GroundTruthCorpus& corpus) {
  std::ostringstream out;
  out << "attacker_set_bitmask,node_id,status\n";
  for (const auto& [mask, statuses] : corpus.profiles) {
    for (std::size_t i = 0; i < statuses.size(); ++i) {
      out << mask << ',' << i << ',' << to_string(statuses[i]) << '\n';
    }
  }
  return out.str();
}

GroundTruthCorpus model_corpus(const CostModel& model, const std::vector<AttackerSet>& profiles) {
  GroundTruthCorpus corpus;
  corpus.node_count = model.node_count();
  for (AttackerSet a : profiles) corpus.profiles[a.mask()] = model.status(a);
  return corpus;
}

InformedGambler::InformedGambler(std::vector<double> q_attacker, std::vector<double> q_neutral)
    : q_attacker_(std::move(q_attacker)), q_neutral_(std::move(q_neutral)) {
  if (q_attacker_.size() != q_neutral_.size()) {
    throw std::invalid_argument("InformedGambler: probability vectors differ in length");
  }
}

InformedGambler InformedGambler::from_corpus(const GroundTruthCorpus& corpus) {
  const int n = corpus.node_count;
  std::vector<int> att(n, 0), lose(n, 0), neu(n, 0), mind(n, 0);
  for (const auto& [mask, statuses] : corpus.profiles) {
    const AttackerSet a(mask);
    for (NodeId i = 0; i < n; ++i) {
      if (a.contains(i)) {
        ++att[i];
        lose[i] += statuses[i] == NodeStatus::kLose;
      } else {
        ++neu[i];
        mind[i] += statuses[i] == NodeStatus::kMind;
      }
    }
  }
  std::vector<double> q_att(n), q_neu(n);
  for (NodeId i = 0; i < n; ++i) {
    // A role never observed carries no information: fair coin.
    q_att[i] = att[i] ? static_cast<double>(lose[i]) / att[i] : 0.5;
    q_neu[i] = neu[i] ? static_cast<double>(mind[i]) / neu[i] : 0.5;
  }
  return InformedGambler(std::move(q_att), std::move(q_neu));
}

double InformedGambler::expected_congruity(AttackerSet attackers,
                                           const std::vector<NodeStatus>& truth) const {
  if (truth.size() != q_attacker_.size()) {
    throw std::invalid_argument("expected_congruity: truth vector has wrong length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (attackers.contains(static_cast<NodeId>(i))) {
      sum += truth[i] == NodeStatus::kLose ? q_attacker_[i] : 1.0 - q_attacker_[i];
    } else {
      sum += truth[i] == NodeStatus::kMind ? q_neutral_[i] : 1.0 - q_neutral_[i];
    }
  }
  return sum / static_cast<double>(truth.size());
}

namespace {

template <typename Score>
CongruityReport score_corpus(const GroundTruthCorpus& corpus, Score&& score) {
  CongruityReport report;
  double sum = 0.0;
  for (const auto& [mask, truth] : corpus.profiles) {
    const double value = score(AttackerSet(mask), truth);
    report.per_profile.emplace_back(mask, value);
    sum += value;
  }
  if (!report.per_profile.empty()) report.mean = sum / report.per_profile.size();
  return report;
}

}  // namespace

CongruityReport informed_gambler_congruity(const GroundTruthCorpus& corpus) {
  const InformedGambler gambler = InformedGambler::from_corpus(corpus);
  return score_corpus(corpus, [&](AttackerSet a, const std::vector<NodeStatus>& truth) {
    return gambler.expected_congruity(a, truth);
  });
}

CongruityReport model_congruity(const GroundTruthCorpus& corpus, const CostModel& model) {
  if (corpus.node_count != model.node_count()) {
    throw std::invalid_argument("corpus node count " + std::to_string(corpus.node_count) +
                                " differs from the instance's " +
                                std::to_string(model.node_count()));
  }
  return score_corpus(corpus, [&](AttackerSet a, const std::vector<NodeStatus>& truth) {
    return congruity(model.status(a), truth);
  });
}

CongruityReport pd_congruity(const GroundTruthCorpus& corpus, int threshold) {
  return score_corpus(corpus, [&](AttackerSet a, const std::vector<NodeStatus>& truth) {
    return congruity(pd_heuristic_status(corpus.node_count, a, threshold), truth);
  });
}

}  // namespace tragame
