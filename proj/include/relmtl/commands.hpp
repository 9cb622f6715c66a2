// Copyright 2026 The relmtl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RELMTL_COMMANDS_HPP_
#define RELMTL_COMMANDS_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace relmtl::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,     // bad flags, bad config, incompatible regime/tasks
  kExitFormat = 3,     // malformed or inconsistent input files
  kExitRuntime = 4,    // anything else that failed while running
  kExitShortfall = 5,  // gen-dataset --strict could not fill every relation
};

/// Entry point of the `relmtl` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relmtl::cli

#endif  // RELMTL_COMMANDS_HPP_
