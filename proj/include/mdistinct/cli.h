// Copyright 2026 The mdistinct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MDISTINCT_CLI_H_
#define MDISTINCT_CLI_H_

#include <ostream>

#include "absl/status/status.h"

namespace mdistinct {

// Exit codes: 0 ok, 1 usage, 2 invalid input or failed verification,
// 3 infeasible request, 4 internal cap exceeded.
int ExitCodeFor(const absl::Status& status);

// Entry point of the mdistinct tool; subcommands publish, attack, verify,
// simulate and baseline.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace mdistinct

#endif  // MDISTINCT_CLI_H_
