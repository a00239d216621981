// Copyright 2026 The Carryover Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CARRYOVER_TOOLS_CLI_CLI_H_
#define CARRYOVER_TOOLS_CLI_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace carryover::cli {

// When set, relative output paths are resolved against this directory.
inline constexpr const char* kOutputDirEnv = "CARRYOVER_OUTPUT_DIR";

// Runs one subcommand. args[0] is the program name. Returns the exit status;
// on failure a message goes to `err` and partial outputs are removed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace carryover::cli

#endif  // CARRYOVER_TOOLS_CLI_CLI_H_
