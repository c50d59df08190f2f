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

#include "dpspec/accounting.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dpspec/error.h"

namespace dpspec {
namespace {

constexpr double kBisectionTolerance = 1e-9;

double LogBinomialPmf(const std::vector<double>& log_factorial, int trials,
                      int successes, double log_p, double log_q) {
  return log_factorial[trials] - log_factorial[successes] -
         log_factorial[trials - successes] + successes * log_p +
         (trials - successes) * log_q;
}

std::vector<double> LogFactorials(int up_to) {
  std::vector<double> lf(up_to + 1, 0.0);
  for (int i = 1; i <= up_to; ++i) lf[i] = lf[i - 1] + std::log(static_cast<double>(i));
  return lf;
}

void CheckDeltaBelowOne(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("delta must lie in (0, 1) for Gaussian calibration");
  }
}

}  // namespace

void PrivacyBudget::Validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ParameterError("eps must be positive");
  if (!(delta > 0.0 && delta <= 1.0)) throw ParameterError("delta must lie in (0, 1]");
}

double DefaultDelta(int n) {
  if (n < 2) throw ParameterError("default delta needs n >= 2");
  return 1.0 / (static_cast<double>(n) * n);
}

RrLocalParams RrMuFromEps0(double eps0) {
  if (!(eps0 >= 0.0)) throw ParameterError("eps0 must be non-negative");
  // 1/(e^x + 1) written as e^-x / (1 + e^-x) keeps precision for large x.
  const double t = std::exp(-eps0);
  return {eps0, t / (1.0 + t)};
}

double ShuffleBoundMaxEps0(int n, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw ParameterError("delta must lie in (0, 1]");
  const double arg = n / (8.0 * std::log(2.0 / delta)) - 1.0;
  if (!(arg > 0.0)) return -std::numeric_limits<double>::infinity();
  return std::log(arg);
}

double ShuffleEpsBound(double eps0, int n, double delta) {
  if (!(eps0 >= 0.0)) throw ParameterError("eps0 must be non-negative");
  if (n < 2) throw ParameterError("shuffle bound needs n >= 2");
  const double max_eps0 = ShuffleBoundMaxEps0(n, delta);
  if (eps0 > max_eps0) {
    throw CalibrationError(
        "eps0 = " + std::to_string(eps0) +
        " violates eps0 <= log(n / (8 log(2/delta)) - 1) = " +
        std::to_string(max_eps0));
  }
  const double e = std::exp(eps0);
  const double amp = 4.0 * std::sqrt(2.0 * std::log(4.0 / delta)) /
                         std::sqrt((e + 1.0) * n) +
                     4.0 / n;
  return std::log1p(std::expm1(eps0) * amp);
}

RrLocalParams InvertShuffleBound(const PrivacyBudget& target, int n) {
  target.Validate();
  const double max_eps0 = ShuffleBoundMaxEps0(n, target.delta);
  if (!(max_eps0 >= 0.0)) {
    throw CalibrationError(
        "shuffle bound has an empty validity range for n = " + std::to_string(n) +
        ", delta = " + std::to_string(target.delta));
  }
  double lo = 0.0;
  double hi = max_eps0;
  if (ShuffleEpsBound(hi, n, target.delta) <= target.eps) {
    lo = hi;
  } else {
    while (hi - lo > kBisectionTolerance) {
      const double mid = 0.5 * (lo + hi);
      if (ShuffleEpsBound(mid, n, target.delta) <= target.eps) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }
  if (ShuffleEpsBound(lo, n, target.delta) > target.eps) {
    throw CalibrationError("bisection lost feasibility", ShuffleEpsBound(max_eps0, n, target.delta));
  }
  return RrMuFromEps0(lo);
}

RrCalibration CalibrateRrShuffle(const PrivacyBudget& target, int n) {
  target.Validate();
  RrCalibration best{RrMuFromEps0(target.eps), false};
  if (ShuffleBoundMaxEps0(n, target.delta) >= 0.0) {
    const RrLocalParams amplified = InvertShuffleBound(target, n);
    if (amplified.eps0 > best.local.eps0) best = {amplified, true};
  }
  return best;
}

void DominatingPair::Validate() const {
  if (n < 2) throw ParameterError("dominating pair needs n >= 2");
  if (!(eps0 >= 0.0) || !std::isfinite(eps0)) throw ParameterError("eps0 must be finite and >= 0");
}

double DominatingPair::CloneProbability() const {
  return 2.0 * RrMuFromEps0(eps0).mu;
}

double DominatingPair::DeltaProbability() const {
  return 1.0 - RrMuFromEps0(eps0).mu;
}

namespace {

struct PairMass {
  double p0;
  double p1;
};

// Masses of outcome (x, C + 1 - x) under both distributions.
class PairEvaluator {
 public:
  explicit PairEvaluator(const DominatingPair& pair)
      : trials_(pair.n - 2), lf_(LogFactorials(pair.n)) {
    pair.Validate();
    const double pc = pair.CloneProbability();
    log_pc_ = std::log(pc);
    log_qc_ = std::log1p(-pc);
    pd_ = pair.DeltaProbability();
  }

  int max_clones() const { return trials_; }

  double LogCloneMass(int c) const {
    if (log_pc_ == -std::numeric_limits<double>::infinity()) {
      return c == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    if (log_qc_ == -std::numeric_limits<double>::infinity()) {
      return c == trials_ ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    return LogBinomialPmf(lf_, trials_, c, log_pc_, log_qc_);
  }

  // Bin(c, 1/2) mass at a; zero off-support.
  double HalfMass(int c, int a) const {
    if (a < 0 || a > c) return 0.0;
    return std::exp(lf_[c] - lf_[a] - lf_[c - a] - c * std::log(2.0));
  }

  PairMass Mass(int c, int x, double clone_mass) const {
    const double a = HalfMass(c, x);
    const double am = HalfMass(c, x - 1);
    return {clone_mass * (a * (1.0 - pd_) + am * pd_),
            clone_mass * (a * pd_ + am * (1.0 - pd_))};
  }

 private:
  int trials_;
  std::vector<double> lf_;
  double log_pc_ = 0.0;
  double log_qc_ = 0.0;
  double pd_ = 0.0;
};

template <typename Fn>
void ForEachOutcome(const DominatingPair& pair, Fn&& fn) {
  PairEvaluator eval(pair);
  for (int c = 0; c <= eval.max_clones(); ++c) {
    const double log_clone = eval.LogCloneMass(c);
    if (log_clone < -745.0) continue;  // exp underflows to zero
    const double clone_mass = std::exp(log_clone);
    for (int x = 0; x <= c + 1; ++x) fn(eval.Mass(c, x, clone_mass));
  }
}

}  // namespace

double DominatingPair::P0(int x, int y) const {
  const int c = x + y - 1;
  if (x < 0 || y < 0 || c < 0 || c > n - 2) return 0.0;
  PairEvaluator eval(*this);
  return eval.Mass(c, x, std::exp(eval.LogCloneMass(c))).p0;
}

double DominatingPair::P1(int x, int y) const {
  const int c = x + y - 1;
  if (x < 0 || y < 0 || c < 0 || c > n - 2) return 0.0;
  PairEvaluator eval(*this);
  return eval.Mass(c, x, std::exp(eval.LogCloneMass(c))).p1;
}

double DominatingPair::TotalMass0() const {
  double total = 0.0;
  ForEachOutcome(*this, [&](PairMass m) { total += m.p0; });
  return total;
}

double DominatingPair::TotalMass1() const {
  double total = 0.0;
  ForEachOutcome(*this, [&](PairMass m) { total += m.p1; });
  return total;
}

double HockeyStickDelta(const DominatingPair& pair, double alpha) {
  if (!(alpha >= 0.0)) throw ParameterError("alpha must be non-negative");
  if (std::isinf(alpha)) return 0.0;
  double total = 0.0;
  ForEachOutcome(pair, [&](PairMass m) {
    const double d = m.p0 - alpha * m.p1;
    if (d > 0.0) total += d;
  });
  return std::clamp(total, 0.0, 1.0);
}

double NumericShuffleEps(const DominatingPair& pair, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw ParameterError("delta must lie in (0, 1]");
  if (HockeyStickDelta(pair, 1.0) <= delta) return 0.0;
  double lo = 0.0;
  double hi = pair.eps0;
  if (HockeyStickDelta(pair, std::exp(hi)) > delta) return pair.eps0;
  while (hi - lo > kBisectionTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (HockeyStickDelta(pair, std::exp(mid)) <= delta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double ProjectionInflation(int n, int m, double delta) {
  if (m < 1) throw ParameterError("projection dimension must be >= 1");
  if (n < 1) throw ParameterError("n must be >= 1");
  CheckDeltaBelowOne(delta);
  const double l = std::log(n / delta);
  return 1.0 + 2.0 * std::sqrt(l / m) + 2.0 * l / m;
}

GaussianProjectionParams GaussianProjectionSigma(const PrivacyBudget& budget,
                                                 int n, int m) {
  budget.Validate();
  CheckDeltaBelowOne(budget.delta);
  const double b = ProjectionInflation(n, m, budget.delta);
  const double inner = budget.eps + std::log(1.0 / (2.0 * budget.delta));
  if (!(inner > 0.0)) {
    throw CalibrationError("no admissible sigma: eps + log(1/(2 delta)) must be positive");
  }
  const double sigma = std::sqrt(b) / budget.eps * std::sqrt(2.0 * inner);
  return {m, sigma, b};
}

PowerMethodParams PowerMethodSigma(const PrivacyBudget& budget, int iterations) {
  budget.Validate();
  CheckDeltaBelowOne(budget.delta);
  if (iterations < 1) throw ParameterError("power method needs N >= 1");
  const double sigma =
      std::sqrt(4.0 * iterations * std::log(1.0 / budget.delta)) / budget.eps;
  return {iterations, 1.0, sigma};
}

}  // namespace dpspec
