// Copyright 2026 The Breathline Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef BREATHLINE_TOOLS_CLI_H_
#define BREATHLINE_TOOLS_CLI_H_

#include <string>
#include <vector>

namespace breathline::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs the `breathline` command line. argv[0] is the program name.
int Run(int argc, const char* const* argv);
int Run(const std::vector<std::string>& args);

}  // namespace breathline::cli

#endif  // BREATHLINE_TOOLS_CLI_H_
