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

#include "dpspec/mechanisms.h"

#include <cmath>
#include <random>
#include <string>

#include "dpspec/error.h"
#include "dpspec/rng.h"
#include "dpspec/spectral.h"

namespace dpspec {
namespace {

void CheckMu(double mu) {
  if (!(mu >= 0.0 && mu < 0.5)) throw ParameterError("flip probability must lie in [0, 1/2)");
}

double EdgeDensity(const Graph& g) {
  const double n = g.num_nodes();
  if (n < 2) return 0.0;
  return static_cast<double>(g.num_edges()) / (0.5 * n * (n - 1.0));
}

DenseMatrix GaussianMatrix(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng) {
  DenseMatrix m(rows, cols);
  if (stddev == 0.0) {
    m.setZero();
    return m;
  }
  std::normal_distribution<double> normal(0.0, stddev);
  // Fill row by row so the layout of draws is independent of storage order.
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

}  // namespace

int PerturbedGraph::n() const {
  if (const auto* d = std::get_if<DenseMatrix>(&adjacency)) return static_cast<int>(d->rows());
  return std::get<Graph>(adjacency).num_nodes();
}

DenseMatrix PerturbedGraph::ToDense() const {
  if (const auto* d = std::get_if<DenseMatrix>(&adjacency)) return *d;
  return std::get<Graph>(adjacency).DenseAdjacency();
}

Graph PerturbedGraph::ToGraph() const {
  if (const auto* g = std::get_if<Graph>(&adjacency)) return Graph(g->num_nodes(), g->edges());
  const auto& d = std::get<DenseMatrix>(adjacency);
  std::vector<Edge> edges;
  for (int j = 0; j < d.cols(); ++j) {
    for (int i = 0; i < j; ++i) {
      if (d(i, j) != 0.0) edges.push_back({i, j});
    }
  }
  return Graph(static_cast<int>(d.rows()), std::move(edges));
}

std::int64_t PerturbedGraph::NonzeroEntries() const {
  if (const auto* g = std::get_if<Graph>(&adjacency)) {
    return 2 * static_cast<std::int64_t>(g->num_edges());
  }
  const auto& d = std::get<DenseMatrix>(adjacency);
  return static_cast<std::int64_t>((d.array() != 0.0).count());
}

PerturbedGraph RrPerturb(const Graph& g, double mu, std::uint64_t seed) {
  CheckMu(mu);
  const int n = g.num_nodes();
  DenseMatrix a = g.DenseAdjacency();
  Rng rng = MakeRng(DeriveSeed(seed, stream::kMechanism));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      if (unif(rng) < mu) {
        const double flipped = 1.0 - a(i, j);
        a(i, j) = flipped;
        a(j, i) = flipped;
      }
    }
  }
  PerturbedGraph out;
  out.adjacency = std::move(a);
  out.mu = mu;
  out.permutation = Permutation::Identity(n);
  return out;
}

PerturbedGraph ShuffleConjugate(const PerturbedGraph& pg, std::uint64_t seed) {
  const Permutation perm = Permutation::Random(pg.n(), DeriveSeed(seed, stream::kShuffle));
  PerturbedGraph out;
  out.mu = pg.mu;
  out.subsample_rate = pg.subsample_rate;
  if (const auto* d = std::get_if<DenseMatrix>(&pg.adjacency)) {
    out.adjacency = perm.Conjugate(*d);
  } else {
    out.adjacency = ApplyPermutation(std::get<Graph>(pg.adjacency), perm);
  }
  const Permutation previous =
      pg.permutation.size() == pg.n() ? pg.permutation : Permutation::Identity(pg.n());
  out.permutation = previous.Then(perm);
  return out;
}

PerturbedGraph SubsamplePerturbShuffle(const Graph& g, double subsample_rate,
                                       double mu, std::uint64_t seed) {
  if (!(subsample_rate > 0.0 && subsample_rate <= 1.0)) {
    throw ParameterError("subsample rate must lie in (0, 1]");
  }
  CheckMu(mu);
  const int n = g.num_nodes();
  const double expected_density =
      subsample_rate * (mu + (1.0 - 2.0 * mu) * EdgeDensity(g));
  const bool sparse = expected_density < kSparseDensityThreshold;

  Rng keep_rng = MakeRng(DeriveSeed(seed, stream::kSubsample));
  Rng flip_rng = MakeRng(DeriveSeed(seed, stream::kMechanism));
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const auto adj = g.AdjacencyLists();
  std::vector<char> row(n, 0);
  std::vector<Edge> edges;
  DenseMatrix dense;
  if (!sparse) dense = DenseMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int w : adj[i]) row[w] = 1;
    for (int j = i + 1; j < n; ++j) {
      const bool kept = unif(keep_rng) < subsample_rate;
      const bool flip = unif(flip_rng) < mu;
      const bool value = kept && (row[j] != 0) != flip;
      if (!value) continue;
      if (sparse) {
        edges.push_back({i, j});
      } else {
        dense(i, j) = 1.0;
        dense(j, i) = 1.0;
      }
    }
    for (int w : adj[i]) row[w] = 0;
  }
  PerturbedGraph pg;
  if (sparse) {
    pg.adjacency = Graph(n, std::move(edges));
  } else {
    pg.adjacency = std::move(dense);
  }
  pg.mu = mu;
  pg.subsample_rate = subsample_rate;
  pg.permutation = Permutation::Identity(n);
  return ShuffleConjugate(pg, seed);
}

DenseMatrix ResidualZ(const PerturbedGraph& pg, const Graph& g) {
  if (pg.n() != g.num_nodes()) throw ContractError("perturbed graph and graph differ in size");
  const int n = g.num_nodes();
  DenseMatrix a = g.DenseAdjacency();
  if (pg.permutation.size() == n && !pg.permutation.IsIdentity()) {
    a = pg.permutation.Conjugate(a);
  }
  const double qs = pg.subsample_rate.value_or(1.0);
  const double c = 1.0 - 2.0 * pg.mu;
  DenseMatrix expected = qs * (c * a);
  expected.array() += qs * pg.mu;
  expected.diagonal().setZero();
  return pg.ToDense() - expected;
}

ProjectionSketch ProjectedGaussianWithProjection(const DenseMatrix& adjacency,
                                                 const DenseMatrix& projection,
                                                 double sigma_bar,
                                                 std::uint64_t seed) {
  if (adjacency.rows() != adjacency.cols() || projection.rows() != adjacency.cols()) {
    throw ContractError("projection must have as many rows as the adjacency has columns");
  }
  if (!(sigma_bar >= 0.0)) throw ParameterError("noise scale must be non-negative");
  Rng noise_rng = MakeRng(DeriveSeed(seed, stream::kNoise));
  ProjectionSketch sketch;
  sketch.m = static_cast<int>(projection.cols());
  sketch.sigma_bar = sigma_bar;
  sketch.projection = projection;
  sketch.released = adjacency * projection +
                    GaussianMatrix(adjacency.rows(), projection.cols(), sigma_bar, noise_rng);
  return sketch;
}

ProjectionSketch ProjectedGaussian(const Graph& g,
                                   const GaussianProjectionParams& params,
                                   std::uint64_t seed) {
  if (params.m < 1) throw ParameterError("projection dimension must be >= 1");
  Rng proj_rng = MakeRng(DeriveSeed(seed, stream::kProjection));
  const DenseMatrix q =
      GaussianMatrix(g.num_nodes(), params.m, 1.0 / std::sqrt(static_cast<double>(params.m)), proj_rng);
  return ProjectedGaussianWithProjection(g.DenseAdjacency(), q, params.sigma_bar, seed);
}

PowerIterate NoisyPowerMethod(const DenseMatrix& adjacency, int k,
                              const PowerMethodParams& params, std::uint64_t seed,
                              std::vector<DenseMatrix>* trace) {
  const Eigen::Index n = adjacency.rows();
  if (adjacency.cols() != n) throw ContractError("adjacency must be square");
  if (k < 1 || k >= n) throw ParameterError("power method needs 1 <= k < n");
  if (params.iterations < 0) throw ParameterError("iteration count must be non-negative");
  if (!(params.sigma_bar >= 0.0)) throw ParameterError("noise scale must be non-negative");

  Rng init_rng = MakeRng(DeriveSeed(seed, stream::kInit));
  Rng noise_rng = MakeRng(DeriveSeed(seed, stream::kNoise));
  DenseMatrix x = ReducedQr(GaussianMatrix(n, k, 1.0, init_rng)).first;
  if (trace) trace->push_back(x);
  const double noise_scale = params.sensitivity * params.sigma_bar;
  for (int i = 0; i < params.iterations; ++i) {
    DenseMatrix y = adjacency * x;
    if (noise_scale > 0.0) y += GaussianMatrix(n, k, noise_scale, noise_rng);
    x = ReducedQr(y).first;
    if (trace) trace->push_back(x);
  }
  return {std::move(x), params.iterations, params.sigma_bar};
}

PowerIterate NoisyPowerMethod(const Graph& g, int k, const PowerMethodParams& params,
                              std::uint64_t seed) {
  return NoisyPowerMethod(g.DenseAdjacency(), k, params, seed);
}

}  // namespace dpspec
