// Copyright 2026 The dpspec Authors
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

#ifndef DPSPEC_MATRIX_IO_H_
#define DPSPEC_MATRIX_IO_H_

#include <filesystem>
#include <iosfwd>

#include <Eigen/Dense>

namespace dpspec {

// Dense real matrix file:
//   bytes 0..4   magic "DPSA1"
//   bytes 5..12  rows, uint64 little-endian
//   bytes 13..20 cols, uint64 little-endian
//   then rows * cols IEEE-754 doubles, little-endian, row-major.
inline constexpr char kDenseMatrixMagic[] = "DPSA1";

void WriteDenseMatrix(std::ostream& out, const Eigen::MatrixXd& m);
void WriteDenseMatrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);

// Throws ParseError on a bad magic or truncated payload.
Eigen::MatrixXd ReadDenseMatrix(std::istream& in);
Eigen::MatrixXd ReadDenseMatrix(const std::filesystem::path& path);

}  // namespace dpspec

#endif  // DPSPEC_MATRIX_IO_H_
