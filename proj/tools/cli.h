// Copyright 2026 The spacct Authors
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


#ifndef SPACCT_TOOLS_CLI_H_
#define SPACCT_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace spacct {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCapacity = 3;

// Runs one command line (without the program name). Results go to `out`
// unless --out is given; diagnostics go to `err`, in red when `color`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err, bool color = false);

// Shortest round-trip decimal form, independent of the global locale.
std::string FormatNumber(double value);

}  // namespace spacct

#endif  // SPACCT_TOOLS_CLI_H_
