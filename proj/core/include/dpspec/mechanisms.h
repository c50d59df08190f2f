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

#ifndef DPSPEC_MECHANISMS_H_
#define DPSPEC_MECHANISMS_H_

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "dpspec/accounting.h"
#include "dpspec/graph.h"

namespace dpspec {

// Output of randomized response, optionally subsampled and shuffled. The
// released matrix is symmetric 0/1 with zero diagonal, so it is stored either
// densely or as a simple graph (sparse) when its expected density is low.
struct PerturbedGraph {
  std::variant<DenseMatrix, Graph> adjacency;
  double mu = 0.0;
  std::optional<double> subsample_rate;
  // Composition of every shuffle applied so far; identity if none.
  Permutation permutation;

  int n() const;
  bool is_sparse() const { return std::holds_alternative<Graph>(adjacency); }
  DenseMatrix ToDense() const;
  // 0/1 view as a graph (no labels).
  Graph ToGraph() const;
  std::int64_t NonzeroEntries() const;
};

// Flips every upper-triangle entry independently with probability mu and
// mirrors it. Requires 0 <= mu < 1/2.
PerturbedGraph RrPerturb(const Graph& g, double mu, std::uint64_t seed);

// Conjugates the adjacency by a fresh uniformly random permutation and
// records it.
PerturbedGraph ShuffleConjugate(const PerturbedGraph& pg, std::uint64_t seed);

// Entry (i, j) becomes B_ij * RR_mu(A_ij) with B_ij ~ Bernoulli(q_s), followed
// by a random shuffle. Stored sparse when q_s (mu + (1 - 2 mu) density(A))
// is below 0.1.
PerturbedGraph SubsamplePerturbShuffle(const Graph& g, double subsample_rate,
                                       double mu, std::uint64_t seed);

inline constexpr double kSparseDensityThreshold = 0.1;

// Z = A~ - E[A~ | A] = A~ - q_s (c A + mu (J - I)), with A brought into the
// shuffled coordinates of pg and q_s = 1 when no subsampling was applied.
DenseMatrix ResidualZ(const PerturbedGraph& pg, const Graph& g);

// Released sketch A Q + E. `projection` and `noise_free` are kept for tests
// and diagnostics only and must never be serialized with the release.
struct ProjectionSketch {
  DenseMatrix released;    // n x m
  DenseMatrix projection;  // Q, n x m
  double sigma_bar = 0.0;
  int m = 0;
};

// Q_ij ~ N(0, 1/m), E_ij ~ N(0, sigma_bar^2), drawn from independent
// substreams of `seed`.
ProjectionSketch ProjectedGaussian(const Graph& g,
                                   const GaussianProjectionParams& params,
                                   std::uint64_t seed);
// Same with a caller-supplied projection (test hook).
ProjectionSketch ProjectedGaussianWithProjection(const DenseMatrix& adjacency,
                                                 const DenseMatrix& projection,
                                                 double sigma_bar,
                                                 std::uint64_t seed);

struct PowerIterate {
  DenseMatrix x;  // n x k, orthonormal columns
  int iterations = 0;
  double sigma_bar = 0.0;
};

// X_0 = QR(Gaussian); X_i = QR(A X_{i-1} + Z_i) with Z_i ~ N(0, C^2
// sigma_bar^2) entrywise and fresh noise every iteration. When `trace` is
// non-null it receives X_0, ..., X_N.
PowerIterate NoisyPowerMethod(const DenseMatrix& adjacency, int k,
                              const PowerMethodParams& params, std::uint64_t seed,
                              std::vector<DenseMatrix>* trace = nullptr);
PowerIterate NoisyPowerMethod(const Graph& g, int k,
                              const PowerMethodParams& params, std::uint64_t seed);

}  // namespace dpspec

#endif  // DPSPEC_MECHANISMS_H_
