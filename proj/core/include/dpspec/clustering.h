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

#ifndef DPSPEC_CLUSTERING_H_
#define DPSPEC_CLUSTERING_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dpspec/spectral.h"

namespace dpspec {

struct ClusterAssignment {
  std::vector<int> labels;  // values in 0..k-1
  DenseMatrix centers;      // k x d
  double inertia = 0.0;     // within-cluster sum of squares
  int iterations = 0;       // Lloyd iterations of the winning restart
  int restarts = 0;
};

struct KmeansOptions {
  int restarts = 10;
  int max_iter = 100;
  double tol = 1e-6;
};

// Lloyd's algorithm on the rows of `points`, seeded with D^2 sampling and
// restarted `restarts` times; the lowest-inertia run wins (earliest on ties).
// Ties between centers go to the lowest index. An emptied cluster takes the
// point farthest from its current center.
ClusterAssignment Kmeans(const DenseMatrix& points, int k, std::uint64_t seed,
                         const KmeansOptions& options = {});
inline ClusterAssignment Kmeans(const Embedding& emb, int k, std::uint64_t seed,
                                const KmeansOptions& options = {}) {
  return Kmeans(emb.vectors, k, seed, options);
}

// Sum of squared distances from each row to its labelled center.
double Inertia(const DenseMatrix& points, std::span<const int> labels,
               const DenseMatrix& centers);

// Per-label counts; labels must lie in 0..k-1.
std::vector<int> ClassCounts(std::span<const int> labels, int k);

// (1/n) min over label bijections of the Hamming distance, via a min-cost
// assignment on the confusion matrix.
double ErrorRateExact(std::span<const int> predicted, std::span<const int> truth);

// Count-based surrogate: 1 - (1/n) sum_i min(p_i, t_i) with both count
// vectors sorted in descending order. Never exceeds ErrorRateExact.
double ErrorRateCounts(std::span<const int> predicted_counts,
                       std::span<const int> truth_counts, int n);

struct ClusterGeometry {
  DenseMatrix centers;     // k x d, ground-truth class means
  double separation = 0.0;  // min pairwise center distance
  double radius = 0.0;      // max per-class RMS deviation from the center

  double margin() const { return 0.5 * separation - radius; }
};

// Throws ContractError when a class in 0..max(truth) is empty.
ClusterGeometry ComputeClusterGeometry(const DenseMatrix& embedding,
                                       std::span<const int> truth);

// Closed-form misclassification bound for one mechanism.
struct BoundReport {
  std::string mechanism;
  double value = 0.0;
  // Infinite or >= 1: the bound carries no information.
  bool vacuous = false;
  // Bound instantiates an O(.) statement with explicit proof-chain constants.
  bool up_to_constants = false;
  // Davis-Kahan side condition ||E||_2 <= (1 - 1/sqrt(2)) gap failed.
  bool perturbation_condition_violated = false;
  std::vector<std::pair<std::string, double>> inputs;
};

// ||U~ - U R||_F^2 / (n * margin^2); vacuous when margin <= 0.
BoundReport MarginBound(double embedding_residual_f, int n, const ClusterGeometry& geom);

// Randomized response with flip probability mu, eigengap delta_k of A.
BoundReport BoundRr(int n, int k, double mu, double delta_k, double eta,
                    const ClusterGeometry& geom);

// max{q mu (1 - q mu), q (1 - mu)(1 - q (1 - mu))}.
double SubsampledVmax(double subsample_rate, double mu);

BoundReport BoundSps(int n, int k, double subsample_rate, double mu, double delta_k,
                     double eta, const ClusterGeometry& geom);

// (2k / gap_q^2) sigma^2 (sqrt n + sqrt m + sqrt(2 log(2/eta)))^2 / (n margin^2).
BoundReport BoundGaussian(int n, int m, int k, double sigma_bar, double gap_q,
                          double eta, const ClusterGeometry& geom);

// tau = sigma (sqrt n + sqrt(2 log(2N/eta))) / delta_k * sqrt(k+1)/(sqrt(k+1)-sqrt k);
// bound = 2k tau^2 / (n margin^2).
BoundReport BoundPower(int n, int k, int iterations, double sigma_bar, double delta_k,
                       double eta, const ClusterGeometry& geom);

}  // namespace dpspec

#endif  // DPSPEC_CLUSTERING_H_
