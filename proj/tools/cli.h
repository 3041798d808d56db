// Copyright 2026 The Authors.
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

#ifndef FAIRADMIT_TOOLS_CLI_H_
#define FAIRADMIT_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fairadmit/metrics.h"

namespace fairadmit::cli {

// Runs one command line (without the program name). Returns the exit status.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// 64-bit FNV-1a, used for the configuration digest in run manifests.
std::uint64_t Fnv1a(std::string_view bytes);

// Each entry is "ATTR=VALUE" or a bare "VALUE" that applies to every name in
// `attrs`. Later entries override earlier ones.
LambdaMap ParseLambda(const std::vector<std::string>& entries,
                      const std::vector<std::string>& attrs);

}  // namespace fairadmit::cli

#endif  // FAIRADMIT_TOOLS_CLI_H_
