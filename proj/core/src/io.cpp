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

#include "lowpass/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace lowpass::io {

namespace {
constexpr std::string_view kPrefix = "# lowpass-csv ";
}

void write_csv_preamble(std::ostream& os, std::string_view kind,
                        const std::vector<std::string>& columns) {
  os << kPrefix << kCsvVersion << ' ' << kind << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) os << ',';
    os << columns[i];
  }
  os << '\n';
}

std::string parse_csv_kind(std::string_view line) {
  if (line.substr(0, kPrefix.size()) != kPrefix) return {};
  line.remove_prefix(kPrefix.size());
  const auto space = line.find(' ');
  if (space == std::string_view::npos || line.substr(0, space) != kCsvVersion) return {};
  std::string_view kind = line.substr(space + 1);
  while (!kind.empty() && (kind.back() == '\r' || kind.back() == '\n')) {
    kind.remove_suffix(1);
  }
  return std::string(kind);
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return std::to_string(v);
  return std::string(buf, end);
}

void write_matrix_csv(std::ostream& os, std::string_view kind, const Tensor& m) {
  std::vector<std::string> columns{"row"};
  for (std::size_t c = 0; c < m.cols(); ++c) columns.push_back("c" + std::to_string(c));
  write_csv_preamble(os, kind, columns);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << r;
    for (std::size_t c = 0; c < m.cols(); ++c) os << ',' << format_double(m(r, c));
    os << '\n';
  }
}

void write_pgm(std::ostream& os, const Tensor& m) {
  double peak = 0.0;
  for (double v : m.values()) peak = std::max(peak, std::abs(v));
  os << "P5\n" << m.cols() << ' ' << m.rows() << "\n255\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const double level = peak > 0.0 ? std::abs(m(r, c)) / peak : 0.0;
      os.put(static_cast<char>(static_cast<unsigned char>(std::lround(level * 255.0))));
    }
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.precision(17);
  return out;
}

}  // namespace lowpass::io
