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

#ifndef DPSPEC_ACCOUNTING_H_
#define DPSPEC_ACCOUNTING_H_

// Calibration of the three mechanisms to an (epsilon, delta) edge-DP target,
// and the numerical privacy profile of shuffled randomized response.

namespace dpspec {

struct PrivacyBudget {
  double eps = 1.0;
  double delta = 1e-6;

  // Throws ParameterError unless eps > 0 and 0 < delta <= 1.
  void Validate() const;
};

// delta = n^-2, the default used throughout the experiments.
double DefaultDelta(int n);

// Local randomized response: each potential edge is flipped with
// probability mu = 1 / (e^eps0 + 1).
struct RrLocalParams {
  double eps0 = 0.0;
  double mu = 0.5;

  double c() const { return 1.0 - 2.0 * mu; }
  double v_max() const { return mu * (1.0 - mu); }
};

RrLocalParams RrMuFromEps0(double eps0);

// Upper end of the eps0 range on which the closed-form shuffle bound holds:
// log(n / (8 log(2/delta)) - 1). Returns -infinity when the range is empty.
double ShuffleBoundMaxEps0(int n, double delta);

// Closed-form amplification bound for the shuffled RR adjacency matrix.
// Throws CalibrationError when eps0 lies outside [0, ShuffleBoundMaxEps0].
double ShuffleEpsBound(double eps0, int n, double delta);

// Largest eps0 in the validity range whose shuffle bound does not exceed
// target.eps, located by bisection to 1e-9 and re-checked forward. Throws
// CalibrationError if the validity range is empty.
RrLocalParams InvertShuffleBound(const PrivacyBudget& target, int n);

// How the RR flip probability for a target budget was obtained.
struct RrCalibration {
  RrLocalParams local;
  // True when the shuffle amplification bound was used; false when eps0 =
  // eps (the unshuffled randomizer alone already meets the target) gave the
  // smaller mu.
  bool amplified = false;
};

// Picks the smaller flip probability of the two admissible routes: shuffle
// amplification inside its validity range, or plain eps-RR. Never throws for
// a valid budget.
RrCalibration CalibrateRrShuffle(const PrivacyBudget& target, int n);

// Dominating pair (P0, P1) for shuffled randomized response over outcomes
// (x, y) with x + y - 1 = C:
//   C ~ Bin(n - 2, 2 / (e^eps0 + 1)), A ~ Bin(C, 1/2),
//   Delta ~ Bern(e^eps0 / (e^eps0 + 1)),
//   P0 = (A + Delta, C - A + 1 - Delta), P1 = (A + 1 - Delta, C - A + Delta).
struct DominatingPair {
  int n = 3;
  double eps0 = 0.0;

  void Validate() const;
  double CloneProbability() const;
  double DeltaProbability() const;

  // Probability masses of outcome (x, y) under P0 and P1; zero off-support.
  double P0(int x, int y) const;
  double P1(int x, int y) const;
  // Sum of all outcome masses, computed in log space.
  double TotalMass0() const;
  double TotalMass1() const;
};

// Hockey-stick divergence H_alpha(P0 || P1) = sum [P0 - alpha P1]_+, clamped
// to [0, 1]. Infinite alpha gives 0.
double HockeyStickDelta(const DominatingPair& pair, double alpha);

// Smallest eps with HockeyStickDelta(pair, e^eps) <= delta, found by
// bisection on [0, eps0]. Returns eps0 when even that is not enough.
double NumericShuffleEps(const DominatingPair& pair, double delta);

struct GaussianProjectionParams {
  int m = 50;
  double sigma_bar = 0.0;
  double b = 1.0;  // sensitivity inflation factor
};

// B = 1 + 2 sqrt(log(n/delta) / m) + (2/m) log(n/delta).
double ProjectionInflation(int n, int m, double delta);

// Minimal sigma_bar = sqrt(B)/eps * sqrt(2 (eps + log(1/(2 delta)))).
GaussianProjectionParams GaussianProjectionSigma(const PrivacyBudget& budget,
                                                 int n, int m);

struct PowerMethodParams {
  int iterations = 5;
  double sensitivity = 1.0;  // Frobenius sensitivity of A X for orthonormal X
  double sigma_bar = 0.0;
};

// sigma_bar = sqrt(4 N log(1/delta)) / eps, sensitivity 1.
PowerMethodParams PowerMethodSigma(const PrivacyBudget& budget, int iterations);

}  // namespace dpspec

#endif  // DPSPEC_ACCOUNTING_H_
