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

// Acceptance checks. Usage: acceptance [criterion ...]; with no arguments
// every criterion runs. Prints one PASS/FAIL line per criterion and exits
// non-zero if any failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dpspec/accounting.h"
#include "dpspec/clustering.h"
#include "dpspec/config.h"
#include "dpspec/graph.h"
#include "dpspec/harness.h"
#include "dpspec/mechanisms.h"
#include "dpspec/rng.h"
#include "dpspec/spectral.h"
#include "oracles/brute_force.h"
#include "oracles/enumeration.h"
#include "oracles/precise.h"

namespace {

using namespace dpspec;

// Tolerances and budgets.
constexpr double kRoundTripTol = 1e-8;
constexpr double kPreciseRelTol = 1e-10;
constexpr double kEnumerationTol = 1e-12;
constexpr double kSpectrumTol = 1e-9;
constexpr double kMeanSigmas = 4.0;
constexpr double kVarianceSigmas = 3.0;
constexpr double kNormCoverage = 0.95;
constexpr double kBaselineErr = 0.02;
constexpr int kBaselineMinPass = 19;
constexpr double kGapLow = 0.35, kGapHigh = 0.55;
constexpr double kStderrSlack = 2.0;
constexpr double kTopEpsErr = 0.05;
constexpr double kPowerDistTol = 1e-6;
constexpr double kPowerR2 = 0.95;
constexpr double kPowerRateFactor = 1.5;

struct Result {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Result()> run;
};

const SbmParams kSbm3{{200, 200, 200}, 0.5, 0.1};

ExperimentConfig Sbm3Config(Mechanism m) {
  ExperimentConfig cfg;
  cfg.dataset.sbm = kSbm3;
  cfg.mechanism = m;
  cfg.k = 3;
  return cfg;
}

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

// Cor. 1 closed form evaluated without the validity guard.
double ClosedFormEps(double eps0, int n, double delta) {
  const double e = std::exp(eps0);
  return std::log1p(std::expm1(eps0) *
                    (4.0 * std::sqrt(2.0 * std::log(4.0 / delta)) / std::sqrt((e + 1.0) * n) +
                     4.0 / n));
}

Result Calibration() {
  const std::vector<int> ns{1000, 2000, 5000, 20000, 100000};
  const std::vector<double> fracs{0.05, 0.25, 0.5, 0.75, 1.0};
  const std::vector<double> eps_values{0.25, 0.5, 1.0, 4.0, 16.0};
  double worst_rt = 0.0, worst_rel = 0.0;
  int points = 0;
  for (int n : ns) {
    for (double delta : {1e-4, 1e-6, DefaultDelta(n)}) {
      const double top = ShuffleBoundMaxEps0(n, delta);
      for (std::size_t i = 0; i < fracs.size(); ++i) {
        const double eps0 = fracs[i] * top;
        const double eps = ShuffleEpsBound(eps0, n, delta);
        const RrLocalParams back = InvertShuffleBound({eps, delta}, n);
        worst_rt = std::max(worst_rt, std::abs(back.eps0 - eps0));
        worst_rt = std::max(worst_rt, std::abs(ShuffleEpsBound(back.eps0, n, delta) - eps));
        const double e = eps_values[i];
        const double sg = GaussianProjectionSigma({e, delta}, n, 50).sigma_bar;
        const double sp = PowerMethodSigma({e, delta}, 5).sigma_bar;
        const double og = oracle::ProjectionSigma(e, delta, n, 50);
        const double op = oracle::PowerSigma(e, delta, 5);
        worst_rel = std::max({worst_rel, std::abs(sg - og) / og, std::abs(sp - op) / op});
        ++points;
      }
    }
  }
  return {worst_rt <= kRoundTripTol && worst_rel <= kPreciseRelTol && points == 75,
          Fmt("%d grid points; max round-trip error %.2e (tol %.0e); max relative sigma error "
              "%.2e (tol %.0e)",
              points, worst_rt, kRoundTripTol, worst_rel, kPreciseRelTol)};
}

Result Tightness() {
  bool ok = true;
  double worst_ratio = 0.0;
  for (int n : {100, 600, 2000}) {
    for (double eps0 : {0.5, 1.0, 2.2}) {
      for (double target : {1e-4, DefaultDelta(n)}) {
        const double eps_cor = ClosedFormEps(eps0, n, target);
        const double d = HockeyStickDelta({n, eps0}, std::exp(eps_cor));
        worst_ratio = std::max(worst_ratio, d / target);
        ok = ok && d <= target;
      }
    }
  }
  double worst_enum = 0.0;
  for (double eps0 : {0.1, 0.5, 1.0, 2.2, 5.0}) {
    for (double alpha = 0.0; alpha <= 12.0; alpha += 0.25) {
      worst_enum = std::max(worst_enum, std::abs(HockeyStickDelta({3, eps0}, alpha) -
                                                 oracle::EnumeratedHockeyStick(3, eps0, alpha)));
    }
  }
  ok = ok && worst_enum <= kEnumerationTol;
  return {ok, Fmt("18 points; max delta(e^eps_cor)/delta_target = %.3g (must be <= 1); n=3 "
                  "profile max deviation from enumeration %.2e (tol %.0e)",
                  worst_ratio, worst_enum, kEnumerationTol)};
}

Result ShuffleInvariance() {
  double worst = 0.0;
  bool nnz_ok = true;
  for (int i = 0; i < 20; ++i) {
    const int b = 20 + 5 * i;
    const Graph g = SampleSbm({{b, b, b}, 0.5, 0.1}, DeriveSeed(300, i));
    const PerturbedGraph pg = RrPerturb(g, 0.05 + 0.01 * i, DeriveSeed(301, i));
    const PerturbedGraph sh = ShuffleConjugate(pg, DeriveSeed(302, i));
    const auto a = SymmetricEigenvalues(pg.ToDense());
    const auto s = SymmetricEigenvalues(sh.ToDense());
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - s[j]));
    nnz_ok = nnz_ok && pg.NonzeroEntries() == sh.NonzeroEntries();
  }
  return {worst <= kSpectrumTol && nnz_ok,
          Fmt("20 graphs; max eigenvalue drift %.2e (tol %.0e); nonzeros preserved: %s", worst,
              kSpectrumTol, nnz_ok ? "yes" : "no")};
}

Result DecompositionMoments() {
  const int n = 300, draws = 200;
  const double mu = 0.1;
  const double v = mu * (1 - mu);
  const Graph g = SampleSbm({{100, 100, 100}, 0.5, 0.1}, 400);
  DenseMatrix sum = DenseMatrix::Zero(n, n), sumsq = DenseMatrix::Zero(n, n);
  for (int d = 0; d < draws; ++d) {
    const DenseMatrix z = ResidualZ(RrPerturb(g, mu, DeriveSeed(401, d)), g);
    sum += z;
    sumsq += z.cwiseProduct(z);
  }
  const DenseMatrix mean = sum / draws;
  double max_mean = 0.0, pooled_var = 0.0;
  int exceed = 0;
  const double mean_tol = kMeanSigmas * std::sqrt(v / draws);
  const int pairs = n * (n - 1) / 2;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      max_mean = std::max(max_mean, std::abs(mean(i, j)));
      exceed += std::abs(mean(i, j)) > mean_tol;
      pooled_var += (sumsq(i, j) - draws * mean(i, j) * mean(i, j)) / (draws - 1);
    }
  }
  pooled_var /= pairs;
  // sd of a Bernoulli sample variance, averaged over independent entries
  const double mu4 = v * (1 - 3 * v);
  const double var_of_s2 = (mu4 - v * v * (draws - 3.0) / (draws - 1.0)) / draws;
  const double var_tol = v + kVarianceSigmas * std::sqrt(var_of_s2 / pairs);
  const bool ok = max_mean <= mean_tol && pooled_var <= var_tol;
  return {ok, Fmt("max |mean Z_ij| = %.4f vs %.4f (%d of %d entries exceed); pooled entry "
                  "variance %.5f vs %.5f",
                  max_mean, mean_tol, exceed, pairs, pooled_var, var_tol)};
}

Result SpectralNormBound() {
  const int n = 600, trials = 200;
  const double mu = 0.1, eta = 0.05;
  const double v = mu * (1 - mu);
  const double l = std::log(2.0 * n / eta);
  const double bound = std::sqrt(2.0 * (n - 1) * v * l) + l / 3.0;
  const Graph g = SampleSbm(kSbm3, 500);
  int within = 0;
  double largest = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double norm =
        SymmetricSpectralNorm(ResidualZ(RrPerturb(g, mu, DeriveSeed(501, t)), g));
    largest = std::max(largest, norm);
    within += norm <= bound;
  }
  const double frac = static_cast<double>(within) / trials;
  return {frac >= kNormCoverage, Fmt("%d/%d trials within %.2f (largest ||Z||_2 = %.2f)", within,
                                     trials, bound, largest)};
}

Result NonPrivateBaseline() {
  int good = 0;
  double worst_err = 0.0, gap_lo = 1.0, gap_hi = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::uint64_t seed = TrialSeed(600, t);
    const Graph g = SampleSbm(kSbm3, DeriveSeed(seed, stream::kGraph));
    const TrialOutput out = RunNonPrivateTrial(g, 3, seed);
    good += out.record.err_exact <= kBaselineErr;
    worst_err = std::max(worst_err, out.record.err_exact);
    const SpectrumSummary s = Summarize(SymmetricEigenvalues(g.DenseAdjacency()), 3);
    gap_lo = std::min(gap_lo, s.normalized_eigengap);
    gap_hi = std::max(gap_hi, s.normalized_eigengap);
  }
  const bool ok = good >= kBaselineMinPass && gap_lo >= kGapLow && gap_hi <= kGapHigh;
  return {ok, Fmt("%d/20 seeds with error <= %.2f (worst %.4f); normalized eigengap in "
                  "[%.4f, %.4f]",
                  good, kBaselineErr, worst_err, gap_lo, gap_hi)};
}

double CombinedStderr(const CurveRow& a, const CurveRow& b) {
  return std::sqrt(a.err_stderr * a.err_stderr + b.err_stderr * b.err_stderr);
}

Result PrivacyUtilityTrend() {
  const TradeoffCurve curve = RunSweep(Sbm3Config(Mechanism::kRrShuffle));
  bool ok = curve.rows.size() == 8;
  std::string errs;
  double worst_rise = -1.0;
  for (std::size_t i = 0; i < curve.rows.size(); ++i) {
    errs += Fmt("%s%.4f", i ? " " : "", curve.rows[i].err_mean);
    if (i == 0) continue;
    const double rise = curve.rows[i].err_mean - curve.rows[i - 1].err_mean;
    const double se = CombinedStderr(curve.rows[i], curve.rows[i - 1]);
    ok = ok && rise <= kStderrSlack * se;
    worst_rise = std::max(worst_rise, rise - kStderrSlack * se);
  }
  const double top = curve.rows.back().err_mean;
  ok = ok && top <= kTopEpsErr;
  return {ok, Fmt("errors [%s]; worst adjacent rise beyond 2 stderr %.4f; error at eps=16 "
                  "%.4f (max %.2f)",
                  errs.c_str(), worst_rise, top, kTopEpsErr)};
}

CurveRow SinglePoint(Mechanism m, double eps) {
  ExperimentConfig cfg = Sbm3Config(m);
  cfg.eps_grid = {eps, eps, 1};
  return RunSweep(cfg).rows.at(0);
}

Result MechanismOrdering() {
  const CurveRow rr = SinglePoint(Mechanism::kRrShuffle, 4.0);
  const CurveRow pg = SinglePoint(Mechanism::kProjectedGaussian, 4.0);
  const CurveRow pm = SinglePoint(Mechanism::kPowerMethod, 4.0);
  const double m1 = pg.err_mean - rr.err_mean, m2 = pm.err_mean - rr.err_mean;
  const bool ok = m1 >= -kStderrSlack * CombinedStderr(rr, pg) &&
                  m2 >= -kStderrSlack * CombinedStderr(rr, pm);
  return {ok, Fmt("eps=4: rr_shuffle %.4f, projected_gaussian %.4f, power_method %.4f",
                  rr.err_mean, pg.err_mean, pm.err_mean)};
}

Result PowerConvergence() {
  const Graph g = SampleSbm(kSbm3, 900);
  const DenseMatrix a = g.DenseAdjacency();
  const auto [u, spectrum] = TopKEigenvectors(a, 3);
  std::vector<DenseMatrix> trace;
  NoisyPowerMethod(a, 3, {200, 1.0, 0.0}, 901, &trace);
  std::vector<double> dist;
  for (const DenseMatrix& x : trace) dist.push_back(SubspaceDistance(x, u.vectors));
  int reached = -1;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] <= kPowerDistTol) {
      reached = static_cast<int>(i);
      break;
    }
  }
  // Fit log distance on the geometric phase: iterations 1.. until the
  // distance reaches the rounding floor.
  std::vector<double> xs, ys;
  for (std::size_t i = 1; i < dist.size() && dist[i] > 1e-12; ++i) {
    xs.push_back(static_cast<double>(i));
    ys.push_back(std::log(dist[i]));
  }
  const double nx = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / nx;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / nx;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double r2 = sxy * sxy / (sxx * syy);
  const auto& ev = spectrum.values;
  const double ratio = std::max(std::abs(ev[3]), std::abs(ev.back())) / ev[2];
  const double fitted = std::exp(slope);
  const bool rate_ok = std::abs(std::log(fitted / ratio)) <= std::log(kPowerRateFactor);
  const bool ok = reached >= 0 && reached <= 200 && xs.size() >= 3 && r2 > kPowerR2 && rate_ok;
  return {ok, Fmt("distance <= 1e-6 at iteration %d; log-linear fit over %zu iterations R^2 = "
                  "%.4f; fitted rate %.4f vs max(|l4|,|ln|)/l3 = %.4f",
                  reached, xs.size(), r2, fitted, ratio)};
}

Result AblationShapes() {
  const std::vector<int> iters{1, 2, 5, 10, 20, 50};
  const TradeoffCurve it =
      RunAblationPowerIters(Sbm3Config(Mechanism::kPowerMethod), 2.0, iters);
  std::size_t argmin = 0;
  std::string it_errs;
  for (std::size_t i = 0; i < it.rows.size(); ++i) {
    if (it.rows[i].err_mean < it.rows[argmin].err_mean) argmin = i;
    it_errs += Fmt("%s%d:%.4f", i ? " " : "", iters[i], it.rows[i].err_mean);
  }
  const bool u_shape = argmin > 0 && argmin + 1 < it.rows.size();

  const std::vector<int> dims{25, 50, 100, 200, 400};
  const TradeoffCurve pd =
      RunAblationProjectionDim(Sbm3Config(Mechanism::kProjectedGaussian), 10.0, dims);
  const CurveRow& m100 = pd.rows[2];
  const CurveRow& m400 = pd.rows[4];
  const double drop = m100.err_mean - m400.err_mean;
  const double se = CombinedStderr(m100, m400);
  const bool saturated = drop <= kStderrSlack * se;
  std::string pd_errs;
  for (std::size_t i = 0; i < pd.rows.size(); ++i) {
    pd_errs += Fmt("%s%d:%.4f", i ? " " : "", dims[i], pd.rows[i].err_mean);
  }
  return {u_shape && saturated,
          Fmt("iterations (eps=2) [%s] minimum at N=%d, interior: %s; projection (eps=10) [%s] "
              "err(100)-err(400) = %.4f vs 2 stderr = %.4f",
              it_errs.c_str(), iters[argmin], u_shape ? "yes" : "no", pd_errs.c_str(), drop,
              kStderrSlack * se)};
}

Result MetricOracle() {
  Rng rng = MakeRng(1100);
  int mismatches = 0, counts_violations = 0, instances = 0;
  for (int k = 2; k <= 6; ++k) {
    std::uniform_int_distribution<int> lab(0, k - 1);
    std::uniform_int_distribution<int> size(k, 40);
    for (int rep = 0; rep < 200; ++rep, ++instances) {
      const int n = size(rng);
      std::vector<int> pred(n), truth(n);
      for (int i = 0; i < n; ++i) {
        truth[i] = lab(rng);
        // mostly-correct predictions under a random relabeling, plus noise
        pred[i] = (lab(rng) == 0) ? lab(rng) : (truth[i] + rep) % k;
      }
      const double exact = ErrorRateExact(pred, truth);
      mismatches += exact != oracle::BruteForceErrorRate(pred, truth, k);
      counts_violations +=
          ErrorRateCounts(ClassCounts(pred, k), ClassCounts(truth, k), n) > exact;
    }
  }
  return {mismatches == 0 && counts_violations == 0,
          Fmt("%d instances; %d mismatches against k! enumeration; %d counts > exact", instances,
              mismatches, counts_violations)};
}

std::string StripRuntime(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

Result Determinism() {
  bool ok = true;
  std::string detail;
  for (Mechanism m : {Mechanism::kRrShuffle, Mechanism::kSps, Mechanism::kProjectedGaussian,
                      Mechanism::kPowerMethod}) {
    ExperimentConfig cfg = Sbm3Config(m);
    cfg.trials = 3;
    cfg.master_seed = 1200;
    const std::string first = StripRuntime(FormatCsv(RunSweep(cfg)));
    const std::string second = StripRuntime(FormatCsv(RunSweep(cfg)));
    const bool same = first == second;
    ok = ok && same;
    detail += Fmt("%s%s: %s", detail.empty() ? "" : "; ", std::string(MechanismName(m)).c_str(),
                  same ? "identical" : "DIFFERENT");
  }
  return {ok, detail + " (runtime_ms column excluded)"};
}

const std::vector<Criterion>& AllCriteria() {
  static const std::vector<Criterion> all{
      {1, "calibration correctness", 1.0, Calibration},
      {2, "accountant tightness", 30.0, Tightness},
      {3, "shuffle spectral invariance", 10.0, ShuffleInvariance},
      {4, "decomposition moments", 30.0, DecompositionMoments},
      {5, "spectral-norm bound", 120.0, SpectralNormBound},
      {6, "nonprivate baseline", 60.0, NonPrivateBaseline},
      {7, "privacy-utility trend", 600.0, PrivacyUtilityTrend},
      {8, "mechanism ordering at eps=4", 600.0, MechanismOrdering},
      {9, "power-method convergence", 30.0, PowerConvergence},
      {10, "ablation shapes", 900.0, AblationShapes},
      {11, "metric oracle equivalence", 10.0, MetricOracle},
      {12, "determinism", 600.0, Determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (const Criterion& c : AllCriteria()) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = r.pass && in_time;
    failed += !pass;
    std::printf("criterion %2d %s  %s: %s [%.2fs of %.0fs budget%s]\n", c.id,
                pass ? "PASS" : "FAIL", c.name, r.detail.c_str(), secs, c.budget_s,
                in_time ? "" : ", OVER BUDGET");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
