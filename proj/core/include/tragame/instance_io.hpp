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

#ifndef TRAGAME_INSTANCE_IO_HPP_
#define TRAGAME_INSTANCE_IO_HPP_

// Instance files:
//
//   nodes: 10
//   label_base: 1          # optional, default 0
//   edges: [[1, 3], ...]   # undirected, expanded to both directions
//   flows:
//     - {route: [1, 3, 4], ac: VO}
//
// Node references in `edges` and `route` are labels (id + label_base). Flow
// ids are assigned in file order.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tragame/model.hpp"

namespace tragame {

class InstanceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

NetworkInstance parse_instance(std::string_view text);
NetworkInstance load_instance(const std::filesystem::path& path);

// Canonical text form; parse_instance(format_instance(x)) == x.
std::string format_instance(const NetworkInstance& instance);
void save_instance(const NetworkInstance& instance, const std::filesystem::path& path,
                   std::string_view header_comment = {});

}  // namespace tragame

#endif  // TRAGAME_INSTANCE_IO_HPP_
