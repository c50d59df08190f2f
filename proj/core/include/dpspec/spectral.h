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

#ifndef DPSPEC_SPECTRAL_H_
#define DPSPEC_SPECTRAL_H_

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dpspec {

using DenseMatrix = Eigen::MatrixXd;

enum class EmbeddingSource { kEigen, kLeftSingular, kPowerIterate };

// n x k matrix with orthonormal columns. Rows are node coordinates.
struct Embedding {
  DenseMatrix vectors;
  EmbeddingSource source = EmbeddingSource::kEigen;

  int n() const { return static_cast<int>(vectors.rows()); }
  int k() const { return static_cast<int>(vectors.cols()); }
  // ||U^T U - I||_F.
  double OrthonormalityError() const;
};

// Gaps below this are treated as degenerate by the bound evaluators.
inline constexpr double kDegenerateGap = 1e-9;

struct SpectrumSummary {
  std::vector<double> values;  // nonincreasing
  int k = 0;
  double eigengap = 0.0;             // values[k-1] - values[k]
  double normalized_eigengap = 0.0;  // eigengap / values[0]

  bool degenerate() const { return eigengap <= kDegenerateGap; }
};

SpectrumSummary Summarize(std::vector<double> descending_values, int k);

// Eigenvectors of the k algebraically largest eigenvalues of a symmetric
// matrix. Each column has its first nonzero coordinate positive. Throws
// ContractError if M is not symmetric within 1e-9 and ParameterError unless
// 1 <= k < n.
std::pair<Embedding, SpectrumSummary> TopKEigenvectors(const DenseMatrix& m, int k);

// All eigenvalues in nonincreasing order.
std::vector<double> SymmetricEigenvalues(const DenseMatrix& m);

// Largest absolute eigenvalue, i.e. the spectral norm of a symmetric matrix.
double SymmetricSpectralNorm(const DenseMatrix& m);

// Left singular vectors of the k largest singular values, same sign
// convention. Throws ParameterError unless 1 <= k <= min(n, m).
std::pair<Embedding, SpectrumSummary> TopKLeftSingular(const DenseMatrix& m, int k);

// Thin QR with diag(R) >= 0.
std::pair<DenseMatrix, DenseMatrix> ReducedQr(const DenseMatrix& y);

// Flips columns so that each one's first nonzero coordinate is positive.
void CanonicalizeSigns(DenseMatrix& vectors);

// ||U U^T - V V^T||_2 = largest principal-angle sine, in [0, 1].
double SubspaceDistance(const DenseMatrix& u, const DenseMatrix& v);
// ||U U^T - V V^T||_F.
double SubspaceDistanceFrobenius(const DenseMatrix& u, const DenseMatrix& v);

struct ProcrustesResult {
  DenseMatrix rotation;  // k x k orthonormal
  double residual = 0.0;  // ||V - U R||_F
};

// R = argmin over orthonormal R of ||V - U R||_F.
ProcrustesResult ProcrustesAlign(const DenseMatrix& u, const DenseMatrix& v);

// ||(I - X X^T) U||_2.
double ResidualProjectionNorm(const DenseMatrix& x, const DenseMatrix& u);

}  // namespace dpspec

#endif  // DPSPEC_SPECTRAL_H_
