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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "support/fixtures.hpp"
#include "tragame/experiments.hpp"

namespace tragame {
namespace {

using S = NodeStatus;
using testing::fixture;

std::vector<AttackerSet> every_profile(int n) {
  std::vector<AttackerSet> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) out.emplace_back(m);
  return out;
}

TEST(GroundTruth, ParseAndFormat) {
  const auto corpus = parse_ground_truth(
      "# from somewhere\n"
      "attacker_set_bitmask,node_id,status\n"
      "5,0,lose\n5,1,mind\n5,2,dont_lose\n"
      "\n"
      "0,2,dont_mind\n0,0,mind\n0,1,mind\n");
  EXPECT_EQ(corpus.node_count, 3);
  ASSERT_EQ(corpus.profiles.size(), 2u);
  EXPECT_EQ(corpus.truth(AttackerSet(5)), (std::vector<S>{S::kLose, S::kMind, S::kDontLose}));
  EXPECT_EQ(corpus.truth(AttackerSet{}), (std::vector<S>{S::kMind, S::kMind, S::kDontMind}));
  EXPECT_THROW(corpus.truth(AttackerSet(1)), std::out_of_range);

  const auto again = parse_ground_truth(format_ground_truth(corpus));
  EXPECT_EQ(again.node_count, corpus.node_count);
  EXPECT_EQ(again.profiles, corpus.profiles);
}

TEST(GroundTruth, HeaderIsOptional) {
  EXPECT_EQ(parse_ground_truth("1,0,dont_lose\n").node_count, 1);
}

TEST(GroundTruth, FormatErrors) {
  const char* bad[] = {
      "",
      "# only comments\n",
      "1,0\n",
      "x,0,lose\n",
      "1,0,winning\n",
      "1,0,mind\n",              // role mismatch
      "0,0,lose\n",              // role mismatch
      "2,0,dont_mind\n",         // bitmask beyond node_count
      "0,0,mind\n0,0,mind\n",    // duplicate
      "0,0,mind\n0,2,mind\n",    // node 1 missing
      "0,-1,mind\n",
  };
  for (const char* text : bad) {
    EXPECT_THROW(parse_ground_truth(text), GroundTruthFormatError) << text;
  }
  EXPECT_THROW(load_ground_truth("/nonexistent/truth.csv"), GroundTruthFormatError);
}

TEST(GroundTruth, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "tragame_gt_test.csv";
  const CostModel model(fixture());
  const auto corpus = model_corpus(model, {AttackerSet{}, AttackerSet{1, 3}});
  std::ofstream(path) << format_ground_truth(corpus);
  EXPECT_EQ(load_ground_truth(path).profiles, corpus.profiles);
  std::filesystem::remove(path);
}

TEST(Congruity, ModelAgainstItsOwnCorpus) {
  const CostModel model(fixture());
  const auto corpus = model_corpus(model, every_profile(model.node_count()));
  const auto report = model_congruity(corpus, model);
  EXPECT_EQ(report.per_profile.size(), 1024u);
  EXPECT_DOUBLE_EQ(report.mean, 1.0);

  const CostModel other(testing::random_instances(1, 9, 5)[0]);
  EXPECT_THROW(model_congruity(corpus, other), std::invalid_argument);
}

TEST(Congruity, PerfectGambler) {
  // Every attacker loses, every neutral minds: q = 1 for both roles.
  GroundTruthCorpus corpus;
  corpus.node_count = 3;
  for (AttackerSet a : every_profile(3)) {
    std::vector<S> t(3);
    for (NodeId i = 0; i < 3; ++i) t[i] = a.contains(i) ? S::kLose : S::kMind;
    corpus.profiles[a.mask()] = t;
  }
  const auto report = informed_gambler_congruity(corpus);
  EXPECT_DOUBLE_EQ(report.mean, 1.0);
}

TEST(Congruity, FairCoinGambler) {
  const InformedGambler gambler({0.5, 0.5, 0.5}, {0.5, 0.5, 0.5});
  EXPECT_DOUBLE_EQ(gambler.expected_congruity(AttackerSet{0}, {S::kLose, S::kMind, S::kDontMind}),
                   0.5);
  EXPECT_DOUBLE_EQ(
      gambler.expected_congruity(AttackerSet{0, 2}, {S::kDontLose, S::kDontMind, S::kLose}), 0.5);
  EXPECT_THROW(InformedGambler({0.5}, {0.5, 0.5}), std::invalid_argument);
}

TEST(Congruity, GamblerEstimatesRolesSeparately) {
  // Node 0 always loses as attacker and never minds as neutral; node 1 is
  // never an attacker, so its attacker coin stays fair.
  const auto corpus = parse_ground_truth(
      "0,0,dont_mind\n0,1,mind\n"
      "1,0,lose\n1,1,dont_mind\n");
  const auto g = InformedGambler::from_corpus(corpus);
  EXPECT_EQ(g.q_attacker(), (std::vector<double>{1.0, 0.5}));
  EXPECT_EQ(g.q_neutral(), (std::vector<double>{0.0, 0.5}));
  EXPECT_DOUBLE_EQ(informed_gambler_congruity(corpus).mean, 0.75);
}

TEST(Congruity, PdHeuristicMatchesDirectScoring) {
  const CostModel model(fixture());
  std::vector<AttackerSet> profiles;
  Rng rng(8);
  for (int k = 0; k < 40; ++k) profiles.push_back(AttackerSet(rng.next() & 0x3ff));
  const auto corpus = model_corpus(model, profiles);
  for (int threshold = 0; threshold <= 10; ++threshold) {
    const auto report = pd_congruity(corpus, threshold);
    double sum = 0.0;
    for (const auto& [mask, truth] : corpus.profiles) {
      sum += congruity(pd_heuristic_status(10, AttackerSet(mask), threshold), truth);
    }
    EXPECT_DOUBLE_EQ(report.mean, sum / corpus.profiles.size()) << threshold;
    EXPECT_GE(report.mean, 0.0);
    EXPECT_LE(report.mean, 1.0);
  }
}

}  // namespace
}  // namespace tragame
