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

#ifndef TRAGAME_GROUND_TRUTH_HPP_
#define TRAGAME_GROUND_TRUTH_HPP_

// Externally produced node-status corpora (e.g. from a packet-level
// simulator) and the classifiers scored against them.
//
// CSV layout, one row per (profile, node):
//
//   attacker_set_bitmask,node_id,status
//   5,0,lose
//
// node_id is the dense 0-based id (bit node_id of the bitmask); status is one
// of lose, dont_lose, mind, dont_mind. Lines starting with '#' are ignored.

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tragame/cost.hpp"
#include "tragame/model.hpp"

namespace tragame {

class GroundTruthFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GroundTruthCorpus {
  int node_count = 0;
  std::map<std::uint64_t, std::vector<NodeStatus>> profiles;

  const std::vector<NodeStatus>& truth(AttackerSet attackers) const;
};

GroundTruthCorpus parse_ground_truth(std::string_view csv);
GroundTruthCorpus load_ground_truth(const std::filesystem::path& path);
std::string format_ground_truth(const GroundTruthCorpus& corpus);

// Corpus of the cost model's own statuses over the given profiles.
GroundTruthCorpus model_corpus(const CostModel& model, const std::vector<AttackerSet>& profiles);

// Biased-coin guesser that knows, per node, how often it ends up lose (as an
// attacker) or mind (as a neutral) across the corpus.
class InformedGambler {
 public:
  InformedGambler(std::vector<double> q_attacker, std::vector<double> q_neutral);
  static InformedGambler from_corpus(const GroundTruthCorpus& corpus);

  const std::vector<double>& q_attacker() const { return q_attacker_; }
  const std::vector<double>& q_neutral() const { return q_neutral_; }

  double expected_congruity(AttackerSet attackers, const std::vector<NodeStatus>& truth) const;

 private:
  std::vector<double> q_attacker_;
  std::vector<double> q_neutral_;
};

struct CongruityReport {
  std::vector<std::pair<std::uint64_t, double>> per_profile;  // ascending bitmask
  double mean = 0.0;
};

CongruityReport informed_gambler_congruity(const GroundTruthCorpus& corpus);
CongruityReport model_congruity(const GroundTruthCorpus& corpus, const CostModel& model);
CongruityReport pd_congruity(const GroundTruthCorpus& corpus, int threshold);

}  // namespace tragame

#endif  // TRAGAME_GROUND_TRUTH_HPP_
