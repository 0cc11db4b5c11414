/*
 * Copyright 2026 The hierembed Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HIEREMBED_TOOLS_CLI_H_
#define HIEREMBED_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace hierembed::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFindings = 2;

// `args` excludes the program name. `color` allows ANSI styling; --plain
// turns it off.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err, bool color = false);

// Splices "key=value" lines of the file named by --config into the argument
// list right after the subcommand, so explicit flags (which come later and
// win) override the file.
std::vector<std::string> ExpandConfig(const std::vector<std::string>& args);

}  // namespace hierembed::cli

#endif  // HIEREMBED_TOOLS_CLI_H_
