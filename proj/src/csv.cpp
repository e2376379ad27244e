// Copyright 2026 The piezo-rkhs Authors
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

#include "piezo_rkhs/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "piezo_rkhs/errors.hpp"

namespace piezo {

std::string format_double(double value) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
  file_ = std::fopen(path.c_str(), "wb");
  if (!file_) throw ValidationError("cannot open '" + path + "' for writing");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

CsvWriter::~CsvWriter() {
  if (file_) {
    flush_buffer();
    std::fclose(file_);
  }
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw DimensionError("CsvWriter: row width does not match header");
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    const int len = std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    buffer_.append(buf, static_cast<std::size_t>(len));
  }
  buffer_ += '\n';
  if (buffer_.size() > (1u << 20)) flush_buffer();
}

void CsvWriter::flush_buffer() {
  if (buffer_.empty()) return;
  const std::size_t written = std::fwrite(buffer_.data(), 1, buffer_.size(), file_);
  const bool ok = written == buffer_.size();
  buffer_.clear();
  if (!ok) throw ValidationError("write to '" + path_ + "' failed");
}

void CsvWriter::close() {
  if (!file_) return;
  flush_buffer();
  const int rc = std::fclose(file_);
  file_ = nullptr;
  if (rc != 0) throw ValidationError("closing '" + path_ + "' failed");
}

void write_plant_csv(const std::string& path, const PlantTrajectory& traj) {
  CsvWriter out(path, {"t", "x1", "x2"});
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    out.row({traj.t[i], traj.x[i](0), traj.x[i](1)});
  }
  out.close();
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  const std::size_t n = traj.alpha.empty() ? 0 : static_cast<std::size_t>(traj.alpha[0].size());
  std::vector<std::string> header{"t", "x1", "x2", "xhat1", "xhat2", "err_norm", "fhat_at_x1"};
  for (std::size_t j = 0; j < n; ++j) header.push_back("alpha_" + std::to_string(j));
  CsvWriter out(path, header);
  std::vector<double> row(header.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    row[0] = traj.t[i];
    row[1] = traj.x[i](0);
    row[2] = traj.x[i](1);
    row[3] = traj.xhat[i](0);
    row[4] = traj.xhat[i](1);
    row[5] = traj.err_norm[i];
    row[6] = traj.fhat_at_x1[i];
    for (std::size_t j = 0; j < n; ++j) row[7 + j] = traj.alpha[i](static_cast<Eigen::Index>(j));
    out.row(row);
  }
  out.close();
}

void write_function_csv(const std::string& path, const KernelBasis& basis,
                        const Eigen::VectorXd& alpha, const Nonlinearity& truth,
                        Interval omega, int grid_points) {
  if (grid_points < 2) throw DomainError("write_function_csv: grid_points must be >= 2");
  CsvWriter out(path, {"x", "f", "fhat", "abs_err", "in_omega"});
  const double span = omega.width();
  const double step = span / (grid_points - 1);
  // Flanks of |omega|/2 on each side at the same spacing.
  const int flank = grid_points / 2;
  for (int i = -flank; i < grid_points + flank; ++i) {
    const double x = i == grid_points - 1 ? omega.hi : omega.lo + step * i;
    const double f = truth(x);
    const double fhat = basis.evaluate(alpha, x);
    const bool inside = i >= 0 && i < grid_points;
    out.row({x, f, fhat, std::abs(f - fhat), inside ? 1.0 : 0.0});
  }
  out.close();
}

void write_pe_csv(const std::string& path, const PeAuditReport& report) {
  CsvWriter out(path, {"window_start", "center_index", "measure"});
  for (const auto& m : report.measures) {
    out.row({m.window_start, static_cast<double>(m.center_index), m.measure});
  }
  out.close();
}

std::size_t CsvTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ParseError(1, "missing column '" + std::string(name) + "'");
}

std::vector<double> CsvTable::column(std::string_view name) const {
  const std::size_t c = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t line_no = 0;
  bool have_header = false;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (text.empty()) break;
      throw ParseError(line_no, "row " + std::to_string(line_no) + ": empty line");
    }

    if (!have_header) {
      std::size_t start = 0;
      while (true) {
        const auto comma = line.find(',', start);
        table.header.emplace_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      have_header = true;
      continue;
    }

    std::vector<double> row;
    row.reserve(table.header.size());
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const std::string_view cell = line.substr(start, comma - start);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
        throw ParseError(line_no, "row " + std::to_string(line_no) + ": bad number '" +
                                      std::string(cell) + "'");
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (row.size() != table.header.size()) {
      throw ParseError(line_no, "row " + std::to_string(line_no) + ": expected " +
                                    std::to_string(table.header.size()) + " fields, got " +
                                    std::to_string(row.size()));
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw ParseError(1, "row 1: missing header");
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

}  // namespace piezo
