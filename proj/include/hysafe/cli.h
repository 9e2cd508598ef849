// Copyright 2026 The hysafe Authors
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

#ifndef HYSAFE_CLI_H_
#define HYSAFE_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace hysafe {

enum class ExitCode : int {
  kOk = 0,
  kFindings = 1,  // analysis found ERROR diagnostics
  kUsage = 2,     // usage, parse or domain failure
  kLimit = 3,     // internal resource limit exceeded
};

/// Runs one `hysafe` command. `args` excludes the program name. Reports go
/// to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace hysafe

#endif  // HYSAFE_CLI_H_
