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

#include "dpspec/harness.h"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <mutex>
#include <thread>

#include "dpspec/error.h"
#include "dpspec/mechanisms.h"
#include "dpspec/rng.h"
#include "dpspec/spectral.h"

namespace dpspec {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int ResolveK(const ExperimentConfig& cfg, const DatasetSource& source) {
  const int k = cfg.k > 0 ? cfg.k : source.num_communities();
  if (k < 2) throw ConfigError("cannot infer k: dataset has no labels");
  if (k >= source.num_nodes()) throw ConfigError("k must be smaller than n");
  return k;
}

double ResolveDelta(const ExperimentConfig& cfg, int n) {
  return cfg.delta ? *cfg.delta : DefaultDelta(n);
}

TrialOutput Score(const Graph& g, std::vector<int> labels, double inertia, int k,
                  std::uint64_t seed, double runtime_ms) {
  TrialOutput out;
  out.record.seed = seed;
  out.record.inertia = inertia;
  out.record.runtime_ms = runtime_ms;
  out.record.err_exact = ErrorRateExact(labels, g.labels());
  const int classes = std::max(k, g.num_communities());
  out.record.err_counts = ErrorRateCounts(ClassCounts(labels, classes),
                                          ClassCounts(g.labels(), classes), g.num_nodes());
  out.labels = std::move(labels);
  return out;
}

using Clock = std::chrono::steady_clock;

double ElapsedMs(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index
// writes only its own slot, so results do not depend on scheduling.
template <typename Fn>
void ParallelFor(int count, int threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> workers;
  for (int w = 0; w < std::min(threads, count); ++w) {
    workers.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  workers.clear();
  if (error) std::rethrow_exception(error);
}

CurveRow RunPoint(const ExperimentConfig& cfg, const DatasetSource& source, int k,
                  const CalibratedMechanism& mech) {
  CurveRow row;
  row.eps = mech.budget.eps;
  row.delta = mech.budget.delta;
  row.param = mech.ReportedParam();
  row.records.resize(cfg.trials);
  ParallelFor(cfg.trials, cfg.threads, [&](int t) {
    const std::uint64_t seed = TrialSeed(cfg.master_seed, t);
    const Graph g = source.ForTrial(seed);
    TrialOutput out = RunTrial(g, mech, k, seed, cfg.kmeans_restarts);
    out.record.trial = t;
    row.records[t] = out.record;
  });
  double sum = 0.0, time = 0.0;
  for (const TrialRecord& r : row.records) {
    sum += cfg.metric == ErrorMetric::kExact ? r.err_exact : r.err_counts;
    time += r.runtime_ms;
  }
  row.trials = cfg.trials;
  row.err_mean = sum / cfg.trials;
  row.runtime_ms = time / cfg.trials;
  if (cfg.trials > 1) {
    double ss = 0.0;
    for (const TrialRecord& r : row.records) {
      const double e = cfg.metric == ErrorMetric::kExact ? r.err_exact : r.err_counts;
      ss += (e - row.err_mean) * (e - row.err_mean);
    }
    row.err_stderr = std::sqrt(ss / (cfg.trials - 1)) / std::sqrt(static_cast<double>(cfg.trials));
  }
  return row;
}

CurveRow InfeasibleRow(double eps, double delta) {
  CurveRow row;
  row.eps = eps;
  row.delta = delta;
  row.param = kNaN;
  row.err_mean = kNaN;
  row.err_stderr = kNaN;
  row.runtime_ms = kNaN;
  row.infeasible = true;
  return row;
}

}  // namespace

double CalibratedMechanism::ReportedParam() const {
  switch (mechanism) {
    case Mechanism::kRrShuffle:
    case Mechanism::kSps:
      return rr.local.mu;
    case Mechanism::kProjectedGaussian:
      return projection.sigma_bar;
    case Mechanism::kPowerMethod:
      return power.sigma_bar;
  }
  return kNaN;
}

CalibratedMechanism Calibrate(const ExperimentConfig& cfg, double eps, double delta, int n) {
  CalibratedMechanism mech;
  mech.mechanism = cfg.mechanism;
  mech.budget = {eps, delta};
  mech.n = n;
  switch (cfg.mechanism) {
    case Mechanism::kRrShuffle:
      mech.rr = CalibrateRrShuffle(mech.budget, n);
      break;
    case Mechanism::kSps:
      mech.rr = CalibrateRrShuffle(mech.budget, n);
      mech.subsample_rate = cfg.subsample_rate;
      break;
    case Mechanism::kProjectedGaussian:
      mech.projection = GaussianProjectionSigma(mech.budget, n, cfg.projection_dim);
      break;
    case Mechanism::kPowerMethod:
      mech.power = PowerMethodSigma(mech.budget, cfg.power_iters);
      break;
  }
  return mech;
}

TrialOutput RunTrial(const Graph& g, const CalibratedMechanism& mech, int k,
                     std::uint64_t trial_seed, int kmeans_restarts) {
  const auto start = Clock::now();
  const std::uint64_t mech_seed = DeriveSeed(trial_seed, stream::kMechanism);
  KmeansOptions options;
  options.restarts = kmeans_restarts;
  const std::uint64_t kmeans_seed = DeriveSeed(trial_seed, stream::kKmeans);

  std::vector<int> labels;
  double inertia = 0.0;
  switch (mech.mechanism) {
    case Mechanism::kRrShuffle:
    case Mechanism::kSps: {
      const PerturbedGraph pg =
          mech.mechanism == Mechanism::kRrShuffle
              ? ShuffleConjugate(RrPerturb(g, mech.rr.local.mu, mech_seed), mech_seed)
              : SubsamplePerturbShuffle(g, mech.subsample_rate, mech.rr.local.mu, mech_seed);
      const auto [emb, spectrum] = TopKEigenvectors(pg.ToDense(), k);
      const ClusterAssignment ca = Kmeans(emb, k, kmeans_seed, options);
      // Row i of the embedding is original node permutation[i].
      labels = pg.permutation.Scatter(ca.labels);
      inertia = ca.inertia;
      break;
    }
    case Mechanism::kProjectedGaussian: {
      const ProjectionSketch sketch = ProjectedGaussian(g, mech.projection, mech_seed);
      const int kk = std::min<int>(k, static_cast<int>(sketch.released.cols()));
      const auto [emb, spectrum] = TopKLeftSingular(sketch.released, kk);
      const ClusterAssignment ca = Kmeans(emb, k, kmeans_seed, options);
      labels = ca.labels;
      inertia = ca.inertia;
      break;
    }
    case Mechanism::kPowerMethod: {
      const PowerIterate it = NoisyPowerMethod(g, k, mech.power, mech_seed);
      const ClusterAssignment ca = Kmeans(it.x, k, kmeans_seed, options);
      labels = ca.labels;
      inertia = ca.inertia;
      break;
    }
  }
  return Score(g, std::move(labels), inertia, k, trial_seed, ElapsedMs(start));
}

TrialOutput RunNonPrivateTrial(const Graph& g, int k, std::uint64_t trial_seed,
                               int kmeans_restarts) {
  const auto start = Clock::now();
  KmeansOptions options;
  options.restarts = kmeans_restarts;
  const auto [emb, spectrum] = TopKEigenvectors(g.DenseAdjacency(), k);
  const ClusterAssignment ca = Kmeans(emb, k, DeriveSeed(trial_seed, stream::kKmeans), options);
  return Score(g, ca.labels, ca.inertia, k, trial_seed, ElapsedMs(start));
}

bool TradeoffCurve::AllInfeasible() const {
  for (const CurveRow& r : rows) {
    if (!r.infeasible) return false;
  }
  return true;
}

DatasetSource::DatasetSource(const DatasetSpec& spec) : spec_(spec) {
  switch (spec.kind) {
    case DatasetKind::kSbm:
      spec.sbm.Validate();
      num_nodes_ = spec.sbm.n();
      num_communities_ = spec.sbm.k();
      return;
    case DatasetKind::kEdgeList:
      fixed_ = AttachLabels(LoadEdgeList(spec.edges), spec.labels);
      break;
    case DatasetKind::kCircles:
      fixed_ = LoadCirclesDropPolicy(spec.edges, spec.circles, spec.circle_count).graph;
      break;
  }
  if (spec.largest_component) fixed_ = LargestConnectedComponent(*fixed_);
  num_nodes_ = fixed_->num_nodes();
  num_communities_ = fixed_->num_communities();
}

Graph DatasetSource::ForTrial(std::uint64_t trial_seed) const {
  if (fixed_) return *fixed_;
  Graph g = SampleSbm(spec_.sbm, DeriveSeed(trial_seed, stream::kGraph));
  if (spec_.largest_component) g = LargestConnectedComponent(g);
  return g;
}

std::uint64_t TrialSeed(std::uint64_t master_seed, int index) {
  return DeriveSeed(master_seed, static_cast<std::uint64_t>(index));
}

TradeoffCurve RunSweep(const ExperimentConfig& cfg) {
  cfg.Validate();
  const DatasetSource source(cfg.dataset);
  const int k = ResolveK(cfg, source);
  const int n = source.num_nodes();
  const double delta = ResolveDelta(cfg, n);
  TradeoffCurve curve;
  curve.mechanism = cfg.mechanism;
  for (double eps : cfg.eps_grid.Values()) {
    try {
      const CalibratedMechanism mech = Calibrate(cfg, eps, delta, n);
      curve.rows.push_back(RunPoint(cfg, source, k, mech));
    } catch (const CalibrationError&) {
      curve.rows.push_back(InfeasibleRow(eps, delta));
    }
  }
  return curve;
}

TradeoffCurve RunAblationPowerIters(const ExperimentConfig& cfg, double eps,
                                    std::span<const int> iteration_grid) {
  ExperimentConfig local = cfg;
  local.mechanism = Mechanism::kPowerMethod;
  local.Validate();
  for (int iters : iteration_grid) {
    if (iters < 1) throw ParameterError("iteration counts must be >= 1");
  }
  const DatasetSource source(local.dataset);
  const int k = ResolveK(local, source);
  const int n = source.num_nodes();
  const double delta = ResolveDelta(local, n);
  TradeoffCurve table;
  table.mechanism = Mechanism::kPowerMethod;
  for (int iters : iteration_grid) {
    local.power_iters = iters;
    CurveRow row = RunPoint(local, source, k, Calibrate(local, eps, delta, n));
    row.param = iters;
    table.rows.push_back(std::move(row));
  }
  return table;
}

TradeoffCurve RunAblationProjectionDim(const ExperimentConfig& cfg, double eps,
                                       std::span<const int> dimension_grid) {
  ExperimentConfig local = cfg;
  local.mechanism = Mechanism::kProjectedGaussian;
  local.Validate();
  for (int m : dimension_grid) {
    if (m < 1) throw ParameterError("projection dimensions must be >= 1");
  }
  const DatasetSource source(local.dataset);
  const int k = ResolveK(local, source);
  const int n = source.num_nodes();
  const double delta = ResolveDelta(local, n);
  TradeoffCurve table;
  table.mechanism = Mechanism::kProjectedGaussian;
  for (int m : dimension_grid) {
    if (m < k) throw ParameterError("projection dimension must be at least k");
    local.projection_dim = m;
    CurveRow row = RunPoint(local, source, k, Calibrate(local, eps, delta, n));
    row.param = m;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 10);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf, ptr);
}

std::string FormatCsv(const TradeoffCurve& curve) {
  std::string out = kCurveCsvHeader;
  out += '\n';
  for (const CurveRow& r : curve.rows) {
    out += FormatNumber(r.eps) + ',' + FormatNumber(r.delta) + ',' + FormatNumber(r.param) + ',' +
           FormatNumber(r.err_mean) + ',' + FormatNumber(r.err_stderr) + ',' +
           std::to_string(r.trials) + ',' + FormatNumber(r.runtime_ms) + '\n';
  }
  return out;
}

void EmitCsv(const TradeoffCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write " + path.string());
  out << FormatCsv(curve);
  out.flush();
  if (!out) throw ParameterError("write failed for " + path.string());
}

std::string FormatTrialsCsv(const TradeoffCurve& curve) {
  std::string out = "eps,param,trial,seed,err_exact,err_counts,inertia,runtime_ms\n";
  for (const CurveRow& r : curve.rows) {
    for (const TrialRecord& t : r.records) {
      out += FormatNumber(r.eps) + ',' + FormatNumber(r.param) + ',' + std::to_string(t.trial) +
             ',' + std::to_string(t.seed) + ',' + FormatNumber(t.err_exact) + ',' +
             FormatNumber(t.err_counts) + ',' + FormatNumber(t.inertia) + ',' +
             FormatNumber(t.runtime_ms) + '\n';
    }
  }
  return out;
}

TradeoffCurve ParseCurveCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCurveCsvHeader) {
    throw ParseError("missing or unexpected CSV header", 1);
  }
  auto parse = [](const std::string& field, std::size_t line_no) {
    if (field == "nan") return kNaN;
    if (field == "inf") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw ParseError("bad number '" + field + "'", line_no);
    }
    return v;
  };
  TradeoffCurve curve;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 7) throw ParseError("expected 7 fields", line_no);
    CurveRow r;
    r.eps = parse(fields[0], line_no);
    r.delta = parse(fields[1], line_no);
    r.param = parse(fields[2], line_no);
    r.err_mean = parse(fields[3], line_no);
    r.err_stderr = parse(fields[4], line_no);
    r.trials = static_cast<int>(parse(fields[5], line_no));
    r.runtime_ms = parse(fields[6], line_no);
    r.infeasible = std::isnan(r.err_mean);
    curve.rows.push_back(std::move(r));
  }
  return curve;
}

}  // namespace dpspec
