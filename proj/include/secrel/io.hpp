// Copyright 2026-present the secrel authors
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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace secrel::io {

std::string read_file(const std::filesystem::path& path);

/// Writes through a temporary sibling file and renames it into place, so a
/// failed run never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Splits one delimited line. Double-quoted fields may contain the delimiter;
/// "" inside quotes is a literal quote.
std::vector<std::string> split_delimited(std::string_view line, char delimiter);

/// Quotes `field` if it contains the delimiter, a quote or a line break.
std::string quote_field(std::string_view field, char delimiter);

std::string_view trim(std::string_view text);

/// Lines of `text` without terminators; a trailing empty line is dropped.
std::vector<std::string_view> lines(std::string_view text);

/// Data rows of a tab-separated file: blank lines and '#' comments are skipped.
/// Each row carries its 1-based line number for diagnostics.
struct TsvRow {
    std::size_t line = 0;
    std::vector<std::string> fields;
};
std::vector<TsvRow> read_tsv(std::string_view text);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

}  // namespace secrel::io
