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

#include "dpspec/spectral.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dpspec/error.h"

namespace dpspec {
namespace {

constexpr double kSymmetryTolerance = 1e-9;

void CheckSymmetric(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw ContractError("matrix is not square");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance) {
    throw ContractError("matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
  }
}

void CheckSameShape(const DenseMatrix& u, const DenseMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw ContractError("orthonormal bases must have the same shape");
  }
}

// Largest singular value of a tall matrix.
double TopSingularValue(const DenseMatrix& w) {
  if (w.size() == 0) return 0.0;
  Eigen::JacobiSVD<DenseMatrix> svd(w);
  return svd.singularValues()(0);
}

}  // namespace

double Embedding::OrthonormalityError() const {
  return (vectors.transpose() * vectors - DenseMatrix::Identity(k(), k())).norm();
}

SpectrumSummary Summarize(std::vector<double> descending_values, int k) {
  SpectrumSummary s;
  s.values = std::move(descending_values);
  s.k = k;
  if (k >= 1 && k < static_cast<int>(s.values.size())) {
    s.eigengap = s.values[k - 1] - s.values[k];
  } else if (k >= 1 && k == static_cast<int>(s.values.size())) {
    s.eigengap = s.values[k - 1];
  }
  s.eigengap = std::max(s.eigengap, 0.0);
  if (!s.values.empty() && s.values.front() != 0.0) {
    s.normalized_eigengap = s.eigengap / s.values.front();
  }
  return s;
}

void CanonicalizeSigns(DenseMatrix& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    const double scale = vectors.col(j).cwiseAbs().maxCoeff();
    const double threshold = 1e-12 * std::max(scale, 1e-300);
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      if (std::abs(vectors(i, j)) > threshold) {
        if (vectors(i, j) < 0.0) vectors.col(j) *= -1.0;
        break;
      }
    }
  }
}

std::pair<Embedding, SpectrumSummary> TopKEigenvectors(const DenseMatrix& m, int k) {
  CheckSymmetric(m);
  const int n = static_cast<int>(m.rows());
  if (k < 1 || k >= n) throw ParameterError("need 1 <= k < n");
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(m);
  if (solver.info() != Eigen::Success) throw ContractError("eigensolver failed");
  // Eigen returns ascending order.
  const auto& evals = solver.eigenvalues();
  std::vector<double> desc(evals.data(), evals.data() + n);
  std::reverse(desc.begin(), desc.end());
  DenseMatrix top(n, k);
  for (int j = 0; j < k; ++j) top.col(j) = solver.eigenvectors().col(n - 1 - j);
  CanonicalizeSigns(top);
  return {Embedding{std::move(top), EmbeddingSource::kEigen}, Summarize(std::move(desc), k)};
}

std::vector<double> SymmetricEigenvalues(const DenseMatrix& m) {
  CheckSymmetric(m);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ContractError("eigensolver failed");
  const auto& evals = solver.eigenvalues();
  std::vector<double> desc(evals.data(), evals.data() + evals.size());
  std::reverse(desc.begin(), desc.end());
  return desc;
}

double SymmetricSpectralNorm(const DenseMatrix& m) {
  const auto values = SymmetricEigenvalues(m);
  if (values.empty()) return 0.0;
  return std::max(std::abs(values.front()), std::abs(values.back()));
}

std::pair<Embedding, SpectrumSummary> TopKLeftSingular(const DenseMatrix& m, int k) {
  const int n = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  if (k < 1 || k > std::min(n, cols)) throw ParameterError("need 1 <= k <= min(n, m)");
  Eigen::BDCSVD<DenseMatrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  std::vector<double> desc(sv.data(), sv.data() + sv.size());
  DenseMatrix top = svd.matrixU().leftCols(k);
  CanonicalizeSigns(top);
  return {Embedding{std::move(top), EmbeddingSource::kLeftSingular},
          Summarize(std::move(desc), k)};
}

std::pair<DenseMatrix, DenseMatrix> ReducedQr(const DenseMatrix& y) {
  const Eigen::Index n = y.rows();
  const Eigen::Index k = y.cols();
  if (k > n) throw ParameterError("reduced QR needs rows >= cols");
  Eigen::HouseholderQR<DenseMatrix> qr(y);
  DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(n, k);
  DenseMatrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < k; ++j) {
    if (r(j, j) < 0.0) {
      r.row(j) *= -1.0;
      q.col(j) *= -1.0;
    }
  }
  return {std::move(q), std::move(r)};
}

double SubspaceDistance(const DenseMatrix& u, const DenseMatrix& v) {
  CheckSameShape(u, v);
  // For equal-dimension subspaces the projector difference has spectral norm
  // ||(I - U U^T) V||_2.
  const DenseMatrix w = v - u * (u.transpose() * v);
  return std::min(1.0, TopSingularValue(w));
}

double SubspaceDistanceFrobenius(const DenseMatrix& u, const DenseMatrix& v) {
  CheckSameShape(u, v);
  const DenseMatrix w = v - u * (u.transpose() * v);
  return std::sqrt(2.0) * w.norm();
}

ProcrustesResult ProcrustesAlign(const DenseMatrix& u, const DenseMatrix& v) {
  CheckSameShape(u, v);
  Eigen::JacobiSVD<DenseMatrix> svd(u.transpose() * v,
                                    Eigen::ComputeFullU | Eigen::ComputeFullV);
  ProcrustesResult out;
  out.rotation = svd.matrixU() * svd.matrixV().transpose();
  out.residual = (v - u * out.rotation).norm();
  return out;
}

double ResidualProjectionNorm(const DenseMatrix& x, const DenseMatrix& u) {
  if (x.rows() != u.rows()) throw ContractError("row counts differ");
  return TopSingularValue(u - x * (x.transpose() * u));
}

}  // namespace dpspec
