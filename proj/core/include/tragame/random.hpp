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

#ifndef TRAGAME_RANDOM_HPP_
#define TRAGAME_RANDOM_HPP_

// Portable pseudo-random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the value mappings below are our own so
// results do not depend on the standard library's distributions.

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace tragame {

// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

// Seed for the index-th independent stream under a master seed. Depends only
// on (master, index), so batches are order- and job-count independent.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform on [0, bound), bound > 0; rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound);
  // Uniform on [lo, hi].
  int between(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t k = items.size(); k > 1; --k) {
      std::swap(items[k - 1], items[below(k)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tragame

#endif  // TRAGAME_RANDOM_HPP_
