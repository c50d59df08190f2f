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

#include "dpspec/matrix_io.h"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "dpspec/error.h"

namespace dpspec {
namespace {

constexpr std::size_t kMagicSize = 5;

void PutU64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t GetU64(std::istream& in) {
  std::array<unsigned char, 8> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw ParseError("truncated matrix file", 0);
  }
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

}  // namespace

void WriteDenseMatrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out.write(kDenseMatrixMagic, kMagicSize);
  PutU64(out, static_cast<std::uint64_t>(m.rows()));
  PutU64(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      PutU64(out, std::bit_cast<std::uint64_t>(m(i, j)));
    }
  }
}

void WriteDenseMatrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write " + path.string());
  WriteDenseMatrix(out, m);
  if (!out) throw ParameterError("write failed for " + path.string());
}

Eigen::MatrixXd ReadDenseMatrix(std::istream& in) {
  char magic[kMagicSize];
  if (!in.read(magic, kMagicSize) || std::memcmp(magic, kDenseMatrixMagic, kMagicSize) != 0) {
    throw ParseError("not a DPSA1 matrix file", 0);
  }
  const std::uint64_t rows = GetU64(in);
  const std::uint64_t cols = GetU64(in);
  if (rows > (1ULL << 31) || cols > (1ULL << 31)) throw ParseError("implausible dimensions", 0);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = std::bit_cast<double>(GetU64(in));
    }
  }
  return m;
}

Eigen::MatrixXd ReadDenseMatrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open " + path.string());
  return ReadDenseMatrix(in);
}

}  // namespace dpspec
