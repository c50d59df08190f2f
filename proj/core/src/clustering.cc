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

#include "dpspec/clustering.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "dpspec/error.h"
#include "dpspec/hungarian.h"
#include "dpspec/rng.h"

namespace dpspec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double SquaredDistance(const DenseMatrix& points, Eigen::Index row,
                       const DenseMatrix& centers, Eigen::Index center) {
  return (points.row(row) - centers.row(center)).squaredNorm();
}

DenseMatrix SeedCenters(const DenseMatrix& points, int k, Rng& rng) {
  const Eigen::Index n = points.rows();
  DenseMatrix centers(k, points.cols());
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  centers.row(0) = points.row(first(rng));
  std::vector<double> d2(n);
  for (Eigen::Index i = 0; i < n; ++i) d2[i] = SquaredDistance(points, i, centers, 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double target = unif(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      std::uniform_int_distribution<Eigen::Index> any(0, n - 1);
      pick = any(rng);
    }
    centers.row(c) = points.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], SquaredDistance(points, i, centers, c));
    }
  }
  return centers;
}

// Returns whether any label changed.
bool AssignPoints(const DenseMatrix& points, const DenseMatrix& centers,
                  std::vector<int>& labels, std::vector<double>& dist) {
  bool changed = false;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    int best = 0;
    double best_d = kInf;
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
      const double d = SquaredDistance(points, i, centers, c);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    if (labels[i] != best) changed = true;
    labels[i] = best;
    dist[i] = best_d;
  }
  return changed;
}

ClusterAssignment LloydRun(const DenseMatrix& points, int k, Rng& rng,
                           const KmeansOptions& options) {
  const Eigen::Index n = points.rows();
  ClusterAssignment run;
  run.centers = SeedCenters(points, k, rng);
  run.labels.assign(n, -1);
  std::vector<double> dist(n, 0.0);
  AssignPoints(points, run.centers, run.labels, dist);
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    run.iterations = iter;
    DenseMatrix sums = DenseMatrix::Zero(k, points.cols());
    std::vector<int> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(run.labels[i]) += points.row(i);
      ++counts[run.labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      // Move the point farthest from its center into the empty cluster, taken
      // from a cluster that can spare it.
      Eigen::Index far = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (counts[run.labels[i]] > 1 && (far < 0 || dist[i] > dist[far])) far = i;
      }
      if (far < 0) break;
      const int from = run.labels[far];
      sums.row(from) -= points.row(far);
      --counts[from];
      sums.row(c) = points.row(far);
      counts[c] = 1;
      run.labels[far] = c;
      dist[far] = 0.0;
    }
    DenseMatrix next = run.centers;
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) next.row(c) = sums.row(c) / counts[c];
    }
    const double shift = (next - run.centers).rowwise().norm().maxCoeff();
    run.centers = std::move(next);
    const bool changed = AssignPoints(points, run.centers, run.labels, dist);
    if (!changed || shift <= options.tol) break;
  }
  run.inertia = std::accumulate(dist.begin(), dist.end(), 0.0);
  return run;
}

double Squared(double x) { return x * x; }

BoundReport VacuousReport(std::string mechanism) {
  BoundReport r;
  r.mechanism = std::move(mechanism);
  r.value = kInf;
  r.vacuous = true;
  return r;
}

void Finalize(BoundReport& r) {
  r.vacuous = !std::isfinite(r.value) || r.value >= 1.0;
}

}  // namespace

ClusterAssignment Kmeans(const DenseMatrix& points, int k, std::uint64_t seed,
                         const KmeansOptions& options) {
  const Eigen::Index n = points.rows();
  if (k < 1) throw ParameterError("k-means needs k >= 1");
  if (k > n) throw ParameterError("k-means needs k <= number of points");
  if (options.restarts < 1 || options.max_iter < 1) {
    throw ParameterError("k-means needs at least one restart and one iteration");
  }
  ClusterAssignment best;
  best.inertia = kInf;
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng = MakeRng(DeriveSeed(seed, static_cast<std::uint64_t>(r)));
    ClusterAssignment run = LloydRun(points, k, rng, options);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  best.restarts = options.restarts;
  return best;
}

double Inertia(const DenseMatrix& points, std::span<const int> labels,
               const DenseMatrix& centers) {
  if (static_cast<Eigen::Index>(labels.size()) != points.rows()) {
    throw ContractError("label count differs from point count");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    total += SquaredDistance(points, i, centers, labels[i]);
  }
  return total;
}

std::vector<int> ClassCounts(std::span<const int> labels, int k) {
  std::vector<int> counts(k, 0);
  for (int l : labels) {
    if (l < 0 || l >= k) throw ParameterError("label out of range");
    ++counts[l];
  }
  return counts;
}

double ErrorRateExact(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) throw ContractError("assignments differ in length");
  if (predicted.empty()) throw ContractError("empty assignment");
  int k = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] < 0 || truth[i] < 0) throw ParameterError("negative label");
    k = std::max({k, predicted[i] + 1, truth[i] + 1});
  }
  Eigen::MatrixXd confusion = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t i = 0; i < predicted.size(); ++i) confusion(predicted[i], truth[i]) += 1.0;
  const Assignment a = SolveAssignment(-confusion);
  const double matches = -a.cost;
  const double n = static_cast<double>(predicted.size());
  return std::clamp((n - matches) / n, 0.0, 1.0);
}

double ErrorRateCounts(std::span<const int> predicted_counts,
                       std::span<const int> truth_counts, int n) {
  if (n <= 0) throw ParameterError("n must be positive");
  std::vector<int> p(predicted_counts.begin(), predicted_counts.end());
  std::vector<int> t(truth_counts.begin(), truth_counts.end());
  if (std::accumulate(p.begin(), p.end(), 0) != n ||
      std::accumulate(t.begin(), t.end(), 0) != n) {
    throw ContractError("class counts must each sum to n");
  }
  const std::size_t k = std::max(p.size(), t.size());
  p.resize(k, 0);
  t.resize(k, 0);
  std::sort(p.begin(), p.end(), std::greater<>());
  std::sort(t.begin(), t.end(), std::greater<>());
  long overlap = 0;
  for (std::size_t i = 0; i < k; ++i) overlap += std::min(p[i], t[i]);
  return static_cast<double>(n - overlap) / n;
}

ClusterGeometry ComputeClusterGeometry(const DenseMatrix& embedding,
                                       std::span<const int> truth) {
  if (static_cast<Eigen::Index>(truth.size()) != embedding.rows()) {
    throw ContractError("label count differs from embedding rows");
  }
  int k = 0;
  for (int l : truth) {
    if (l < 0) throw ParameterError("negative label");
    k = std::max(k, l + 1);
  }
  const std::vector<int> counts = ClassCounts(truth, k);
  ClusterGeometry geom;
  geom.centers = DenseMatrix::Zero(k, embedding.cols());
  for (std::size_t i = 0; i < truth.size(); ++i) geom.centers.row(truth[i]) += embedding.row(i);
  for (int r = 0; r < k; ++r) {
    if (counts[r] == 0) throw ContractError("class " + std::to_string(r) + " is empty");
    geom.centers.row(r) /= counts[r];
  }
  std::vector<double> spread(k, 0.0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    spread[truth[i]] += (embedding.row(i) - geom.centers.row(truth[i])).squaredNorm();
  }
  for (int r = 0; r < k; ++r) {
    geom.radius = std::max(geom.radius, std::sqrt(spread[r] / counts[r]));
  }
  geom.separation = k >= 2 ? kInf : 0.0;
  for (int r = 0; r < k; ++r) {
    for (int s = r + 1; s < k; ++s) {
      geom.separation = std::min(geom.separation, (geom.centers.row(r) - geom.centers.row(s)).norm());
    }
  }
  return geom;
}

BoundReport MarginBound(double embedding_residual_f, int n, const ClusterGeometry& geom) {
  if (n <= 0) throw ParameterError("n must be positive");
  const double margin = geom.margin();
  if (!(margin > 0.0)) return VacuousReport("margin");
  BoundReport r;
  r.mechanism = "margin";
  r.value = Squared(embedding_residual_f) / (n * Squared(margin));
  r.inputs = {{"residual_f", embedding_residual_f}, {"n", n}, {"margin", margin}};
  Finalize(r);
  return r;
}

BoundReport BoundRr(int n, int k, double mu, double delta_k, double eta,
                    const ClusterGeometry& geom) {
  if (!(mu >= 0.0 && mu < 0.5)) throw ParameterError("mu must lie in [0, 1/2)");
  if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("eta must lie in (0, 1)");
  const double margin = geom.margin();
  if (delta_k <= kDegenerateGap || !(margin > 0.0)) return VacuousReport("rr_shuffle");
  const double v_max = mu * (1.0 - mu);
  const double log_term = std::log(2.0 * n / eta);
  const double z_norm = std::sqrt(2.0 * (n - 1.0) * v_max * log_term) + log_term / 3.0;
  const double root_k = std::sqrt(static_cast<double>(k));
  const double numerator = 2.0 * root_k / delta_k * std::sqrt(2.0 * (n - 1.0) * v_max * log_term) +
                           2.0 * root_k / (3.0 * delta_k) * log_term;
  BoundReport r;
  r.mechanism = "rr_shuffle";
  r.value = Squared(numerator) / Squared(margin);
  r.perturbation_condition_violated = z_norm > (1.0 - 1.0 / std::sqrt(2.0)) * delta_k;
  r.inputs = {{"n", n}, {"k", k}, {"mu", mu}, {"v_max", v_max},
              {"delta_k", delta_k}, {"eta", eta}, {"margin", margin}};
  Finalize(r);
  return r;
}

double SubsampledVmax(double subsample_rate, double mu) {
  const double q = subsample_rate;
  return std::max(q * mu * (1.0 - q * mu), q * (1.0 - mu) * (1.0 - q * (1.0 - mu)));
}

BoundReport BoundSps(int n, int k, double subsample_rate, double mu, double delta_k,
                     double eta, const ClusterGeometry& geom) {
  if (!(subsample_rate > 0.0 && subsample_rate <= 1.0)) {
    throw ParameterError("subsample rate must lie in (0, 1]");
  }
  if (!(mu >= 0.0 && mu < 0.5)) throw ParameterError("mu must lie in [0, 1/2)");
  if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("eta must lie in (0, 1)");
  const double margin = geom.margin();
  const double c = 1.0 - 2.0 * mu;
  const double gap = subsample_rate * c * delta_k;
  if (gap <= kDegenerateGap || !(margin > 0.0)) return VacuousReport("sps");
  const double v_max = SubsampledVmax(subsample_rate, mu);
  const double log_term = std::log(4.0 * n / eta);
  const double root_k = std::sqrt(static_cast<double>(k));
  const double numerator = 2.0 * root_k / gap * std::sqrt(2.0 * (n - 1.0) * v_max * log_term) +
                           std::sqrt(2.0 * k) / (3.0 * gap) * log_term;
  const double z_norm = std::sqrt(2.0 * (n - 1.0) * v_max * log_term) + log_term / 3.0;
  BoundReport r;
  r.mechanism = "sps";
  r.value = Squared(numerator) / Squared(margin);
  r.perturbation_condition_violated = z_norm > (1.0 - 1.0 / std::sqrt(2.0)) * gap;
  r.inputs = {{"n", n}, {"k", k}, {"q_s", subsample_rate}, {"mu", mu},
              {"v_max", v_max}, {"delta_k", delta_k}, {"eta", eta}, {"margin", margin}};
  Finalize(r);
  return r;
}

BoundReport BoundGaussian(int n, int m, int k, double sigma_bar, double gap_q,
                          double eta, const ClusterGeometry& geom) {
  if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("eta must lie in (0, 1)");
  if (!(sigma_bar >= 0.0)) throw ParameterError("sigma_bar must be non-negative");
  const double margin = geom.margin();
  if (gap_q <= kDegenerateGap || !(margin > 0.0)) return VacuousReport("projected_gaussian");
  const double noise = std::sqrt(static_cast<double>(n)) + std::sqrt(static_cast<double>(m)) +
                       std::sqrt(2.0 * std::log(2.0 / eta));
  BoundReport r;
  r.mechanism = "projected_gaussian";
  r.value = 2.0 * k / Squared(gap_q) * Squared(sigma_bar) * Squared(noise) / (n * Squared(margin));
  r.up_to_constants = true;
  r.perturbation_condition_violated = sigma_bar * noise > (1.0 - 1.0 / std::sqrt(2.0)) * gap_q;
  r.inputs = {{"n", n}, {"m", m}, {"k", k}, {"sigma_bar", sigma_bar},
              {"gap_q", gap_q}, {"eta", eta}, {"margin", margin}};
  Finalize(r);
  return r;
}

BoundReport BoundPower(int n, int k, int iterations, double sigma_bar, double delta_k,
                       double eta, const ClusterGeometry& geom) {
  if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("eta must lie in (0, 1)");
  if (iterations < 1) throw ParameterError("iteration count must be >= 1");
  if (!(sigma_bar >= 0.0)) throw ParameterError("sigma_bar must be non-negative");
  const double margin = geom.margin();
  if (delta_k <= kDegenerateGap || !(margin > 0.0)) return VacuousReport("power_method");
  const double rk1 = std::sqrt(k + 1.0);
  const double tau = sigma_bar *
                     (std::sqrt(static_cast<double>(n)) + std::sqrt(2.0 * std::log(2.0 * iterations / eta))) /
                     delta_k * (rk1 / (rk1 - std::sqrt(static_cast<double>(k))));
  BoundReport r;
  r.mechanism = "power_method";
  r.value = 2.0 * k * Squared(tau) / (n * Squared(margin));
  r.up_to_constants = true;
  r.inputs = {{"n", n}, {"k", k}, {"iterations", iterations}, {"sigma_bar", sigma_bar},
              {"delta_k", delta_k}, {"eta", eta}, {"margin", margin}, {"tau", tau}};
  Finalize(r);
  return r;
}

}  // namespace dpspec
