// Copyright 2026 The nightbench Authors
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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "nightbench/attention.hpp"
#include "nightbench/spm.hpp"

namespace nightbench {

// Textual parameter dump:
//
//   nightbench-params 1 <kind> <tensor count>
//   <rows> <cols>
//   <row 0 values, space separated>
//   ...
//
// `kind` is `mam` or `spm`. Tensors appear in for_each_tensor order; values
// are printed with 17 significant digits so a dump round-trips exactly.
// Lines starting with '#' are ignored on read.

void write_params(std::ostream& out, const MamParams& p);
void write_params(std::ostream& out, const SpmParams& p);

MamParams read_mam_params(std::istream& in, std::string_view source = "<params>");
SpmParams read_spm_params(std::istream& in, std::string_view source = "<params>");

void save_params(const std::filesystem::path& path, const MamParams& p);
void save_params(const std::filesystem::path& path, const SpmParams& p);
MamParams load_mam_params(const std::filesystem::path& path);
SpmParams load_spm_params(const std::filesystem::path& path);

}  // namespace nightbench
