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

#ifndef TRAGAME_TESTS_FIXTURES_HPP_
#define TRAGAME_TESTS_FIXTURES_HPP_

#include <algorithm>
#include <filesystem>
#include <vector>

#include "tragame/experiments.hpp"
#include "tragame/instance_io.hpp"
#include "tragame/model.hpp"

namespace tragame::testing {

inline std::filesystem::path data_dir() { return TRAGAME_TEST_DATA_DIR; }

// The ten-node example network, labels 1..10.
inline const NetworkInstance& fixture() {
  static const NetworkInstance inst = load_instance(data_dir() / "example_network.yaml");
  return inst;
}

inline std::vector<NetworkInstance> random_instances(int count, int nodes, std::uint64_t seed0,
                                                     int max_hops = 5) {
  InstanceGenParams params;
  params.node_count = nodes;
  params.max_hops = std::min(max_hops, nodes - 1);
  params.min_hops = std::min(params.min_hops, params.max_hops);
  if (nodes <= 4) params.radius = 0.8;
  std::vector<NetworkInstance> out;
  for (int k = 0; k < count; ++k) out.push_back(gen_instance(params, seed0 + k));
  return out;
}

}  // namespace tragame::testing

#endif  // TRAGAME_TESTS_FIXTURES_HPP_
