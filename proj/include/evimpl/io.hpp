// Copyright 2026 The evimpl Authors
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

#ifndef EVIMPL_IO_HPP_
#define EVIMPL_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "evimpl/environment.hpp"

namespace evimpl {

// Environment files are JSON objects with keys states, agents, outcomes,
// evidence, scf and optionally costs and cost_bound. Errors are reported as
// Error(kParse) with a JSON pointer (or line/column for syntax errors).
Environment parse_environment(std::string_view text);

// Canonical form: states in file order, agents ascending, articles by
// bitmask then label, two-space indent, trailing newline.
std::string serialize_environment(const Environment& env);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

Environment load_environment(const std::filesystem::path& path);

}  // namespace evimpl

#endif  // EVIMPL_IO_HPP_
