// Copyright 2026 The Lowpass Authors
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
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lowpass/tensor.hpp"

namespace lowpass::io {

// Every CSV file starts with "# lowpass-csv v1 <kind>" and then a column row.
inline constexpr std::string_view kCsvVersion = "v1";

void write_csv_preamble(std::ostream& os, std::string_view kind,
                        const std::vector<std::string>& columns);
// Reads back the kind from a preamble line; empty if it is not one.
std::string parse_csv_kind(std::string_view first_line);

// Shortest text that round-trips a double.
std::string format_double(double v);

// Matrix as rows of comma-separated values under a "row,c0,c1,..." header.
void write_matrix_csv(std::ostream& os, std::string_view kind, const Tensor& m);

// Binary PGM (P5). Values are scaled by the largest magnitude in the matrix
// so zero maps to black; an all-zero matrix is black.
void write_pgm(std::ostream& os, const Tensor& m);

// Opens for writing, creating parent directories; throws on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace lowpass::io
