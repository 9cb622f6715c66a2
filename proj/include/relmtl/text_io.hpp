// Copyright 2026 The relmtl Authors.
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

#ifndef RELMTL_TEXT_IO_HPP_
#define RELMTL_TEXT_IO_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the file readers.
namespace relmtl::text {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

std::optional<double> parse_double(std::string_view s);
std::optional<std::uint64_t> parse_uint(std::string_view s);

/// Splits on runs of spaces/tabs; no empty fields.
std::vector<std::string_view> split_ws(std::string_view line);

/// Splits on a single delimiter, keeping empty fields.
std::vector<std::string_view> split_on(std::string_view line, char delim);

std::string_view trim(std::string_view s);

/// Strips a trailing '\r' left by CRLF files.
std::string_view chomp(std::string_view line);

}  // namespace relmtl::text

#endif  // RELMTL_TEXT_IO_HPP_
