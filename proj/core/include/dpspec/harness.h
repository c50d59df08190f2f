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

#ifndef DPSPEC_HARNESS_H_
#define DPSPEC_HARNESS_H_

// Experiment driver: calibrate, privatize, embed, cluster and score, repeated
// over trials and an epsilon grid (or an ablation grid).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpspec/accounting.h"
#include "dpspec/clustering.h"
#include "dpspec/config.h"
#include "dpspec/graph.h"

namespace dpspec {

// Mechanism parameters after calibration for one (eps, delta, n).
struct CalibratedMechanism {
  Mechanism mechanism = Mechanism::kRrShuffle;
  PrivacyBudget budget;
  int n = 0;
  RrCalibration rr;                      // rr_shuffle, sps
  double subsample_rate = 1.0;           // sps
  GaussianProjectionParams projection;   // projected_gaussian
  PowerMethodParams power;               // power_method

  // The parameter reported in the CSV: mu or sigma_bar.
  double ReportedParam() const;
};

// Throws CalibrationError when the budget cannot be met.
CalibratedMechanism Calibrate(const ExperimentConfig& cfg, double eps, double delta, int n);

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  double err_exact = 0.0;
  double err_counts = 0.0;
  double inertia = 0.0;
  double runtime_ms = 0.0;
};

struct TrialOutput {
  TrialRecord record;
  // Predicted labels in original node order.
  std::vector<int> labels;
};

// One privatize -> embed -> k-means -> score pipeline on a labelled graph.
TrialOutput RunTrial(const Graph& g, const CalibratedMechanism& mech, int k,
                     std::uint64_t trial_seed, int kmeans_restarts = 10);

// Non-private reference: top-k eigenvectors of A, then k-means.
TrialOutput RunNonPrivateTrial(const Graph& g, int k, std::uint64_t trial_seed,
                               int kmeans_restarts = 10);

struct CurveRow {
  double eps = 0.0;
  double delta = 0.0;
  double param = 0.0;  // calibrated mu / sigma_bar, or the ablated value
  double err_mean = 0.0;
  double err_stderr = 0.0;
  int trials = 0;
  double runtime_ms = 0.0;  // mean wall time per trial
  bool infeasible = false;
  std::vector<TrialRecord> records;
};

struct TradeoffCurve {
  Mechanism mechanism = Mechanism::kRrShuffle;
  std::vector<CurveRow> rows;

  bool AllInfeasible() const;
};

// Graphs used by an experiment: one per trial for SBM datasets (redrawn from
// the trial seed), a single fixed graph for file datasets.
class DatasetSource {
 public:
  explicit DatasetSource(const DatasetSpec& spec);

  int num_nodes() const { return num_nodes_; }
  int num_communities() const { return num_communities_; }
  Graph ForTrial(std::uint64_t trial_seed) const;

 private:
  DatasetSpec spec_;
  std::optional<Graph> fixed_;
  int num_nodes_ = 0;
  int num_communities_ = 0;
};

// Seed of trial `index`; independent of execution order.
std::uint64_t TrialSeed(std::uint64_t master_seed, int index);

// Sweep over cfg.eps_grid. Infeasible grid points are flagged and skipped.
TradeoffCurve RunSweep(const ExperimentConfig& cfg);

// Power-method ablation at fixed eps over iteration counts (param = N).
TradeoffCurve RunAblationPowerIters(const ExperimentConfig& cfg, double eps,
                                    std::span<const int> iteration_grid);

// Projected-Gaussian ablation at fixed eps over projection dimensions
// (param = m).
TradeoffCurve RunAblationProjectionDim(const ExperimentConfig& cfg, double eps,
                                       std::span<const int> dimension_grid);

inline constexpr char kCurveCsvHeader[] =
    "eps,delta,param,err_mean,err_stderr,trials,runtime_ms";

// 10 significant digits, '.' separator, independent of the global locale.
std::string FormatNumber(double value);

std::string FormatCsv(const TradeoffCurve& curve);
// Throws ParameterError when the file cannot be written.
void EmitCsv(const TradeoffCurve& curve, const std::filesystem::path& path);

// Per-trial records: eps,param,trial,seed,err_exact,err_counts,inertia,runtime_ms.
std::string FormatTrialsCsv(const TradeoffCurve& curve);

// Parses a curve CSV produced by FormatCsv (records are not restored).
TradeoffCurve ParseCurveCsv(const std::string& text);

}  // namespace dpspec

#endif  // DPSPEC_HARNESS_H_
