// Copyright 2025 The migr Authors. All Rights Reserved.
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace migr::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Run the migr command line: subcommands estimate-mi, build-sft, score,
/// evaluate, simulate. `args` excludes the program name. Subcommands stream
/// JSON Lines from `in` to `out` when --in/--out are omitted; diagnostics go
/// to `err`. Returns 0 on success, 1 on input or validation errors, 2 on
/// internal errors.
int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

}  // namespace migr::cli
