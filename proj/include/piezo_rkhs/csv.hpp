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

#pragma once

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "piezo_rkhs/estimator.hpp"
#include "piezo_rkhs/pe_analysis.hpp"

namespace piezo {

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double value);

/// Buffered CSV writer: comma separated, LF line endings.
class CsvWriter {
 public:
  /// Opens `path` for writing and emits the header row.
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();

  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);
  /// Flushes and reports write errors.
  void close();

 private:
  void flush_buffer();

  std::string path_;
  std::size_t columns_;
  std::string buffer_;
  std::FILE* file_ = nullptr;
};

void write_plant_csv(const std::string& path, const PlantTrajectory& traj);

/// Columns t,x1,x2,xhat1,xhat2,err_norm,fhat_at_x1,alpha_0..alpha_{n-1}.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Columns x,f,fhat,abs_err,in_omega over omega and flanks of |omega|/2 on
/// each side. `grid_points` samples omega itself.
void write_function_csv(const std::string& path, const KernelBasis& basis,
                        const Eigen::VectorXd& alpha, const Nonlinearity& truth,
                        Interval omega, int grid_points = 512);

/// Columns window_start,center_index,measure.
void write_pe_csv(const std::string& path, const PeAuditReport& report);

/// Numeric CSV with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a named column; ParseError (row 1) when absent.
  std::size_t column_index(std::string_view name) const;
  std::vector<double> column(std::string_view name) const;
};

/// Reads a numeric CSV. Malformed rows raise ParseError with the 1-based
/// line number.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(std::string_view text);

}  // namespace piezo
