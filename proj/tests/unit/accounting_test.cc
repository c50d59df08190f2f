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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "dpspec/accounting.h"
#include "dpspec/error.h"
#include "oracles/enumeration.h"
#include "oracles/precise.h"

namespace dpspec {
namespace {

TEST(RrMu, ClosedForm) {
  EXPECT_DOUBLE_EQ(RrMuFromEps0(0.0).mu, 0.5);
  EXPECT_NEAR(RrMuFromEps0(2.2).mu, 0.0997, 1e-4);
  EXPECT_LT(RrMuFromEps0(50.0).mu, 1e-20);
  for (double e : {0.1, 1.0, 3.0, 10.0}) {
    const RrLocalParams p = RrMuFromEps0(e);
    EXPECT_NEAR(p.mu * (std::exp(e) + 1.0), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(p.c(), 1.0 - 2.0 * p.mu);
  }
  EXPECT_THROW(RrMuFromEps0(-0.1), ParameterError);
}

TEST(ShuffleBound, ZeroAtZero) { EXPECT_DOUBLE_EQ(ShuffleEpsBound(0.0, 1000, 1e-6), 0.0); }

TEST(ShuffleBound, MatchesPreciseEvaluation) {
  for (int n : {1000, 5000, 100000}) {
    for (double delta : {1e-4, 1e-6}) {
      const double top = ShuffleBoundMaxEps0(n, delta);
      EXPECT_NEAR(top, oracle::ShuffleMaxEps0(n, delta), 1e-12);
      for (double frac : {0.1, 0.5, 1.0}) {
        const double e0 = frac * top;
        EXPECT_NEAR(ShuffleEpsBound(e0, n, delta), oracle::ShuffleBound(e0, n, delta),
                    1e-12 * oracle::ShuffleBound(e0, n, delta));
      }
    }
  }
}

TEST(ShuffleBound, Monotonicity) {
  double prev = 0.0;
  for (double e0 = 0.05; e0 < 2.0; e0 += 0.05) {
    const double v = ShuffleEpsBound(e0, 5000, 1e-6);
    EXPECT_GT(v, prev);
    prev = v;
  }
  for (int n = 2000; n < 50000; n *= 2) {
    EXPECT_GT(ShuffleEpsBound(1.0, n, 1e-6), ShuffleEpsBound(1.0, 2 * n, 1e-6));
  }
}

TEST(ShuffleBound, OutsideValidityRegion) {
  // log(1000 / (8 log 2e6) - 1) is about 2.03
  EXPECT_THROW(ShuffleEpsBound(2.2, 1000, 1e-6), CalibrationError);
  try {
    ShuffleEpsBound(2.2, 1000, 1e-6);
  } catch (const CalibrationError& e) {
    EXPECT_NE(std::string(e.what()).find("log(n / (8 log(2/delta)) - 1)"), std::string::npos);
  }
}

TEST(InvertShuffle, RoundTrip) {
  const int n = 5000;
  const double delta = 1e-6;
  const double eps = ShuffleEpsBound(1.0, n, delta);
  const RrLocalParams p = InvertShuffleBound({eps, delta}, n);
  EXPECT_NEAR(p.eps0, 1.0, 1e-8);
  EXPECT_NEAR(ShuffleEpsBound(p.eps0, n, delta), eps, 1e-8);
}

TEST(InvertShuffle, CapsAtValidityEdge) {
  const int n = 600;
  const double delta = DefaultDelta(n);
  const RrLocalParams p = InvertShuffleBound({1.0, delta}, n);
  EXPECT_NEAR(p.eps0, oracle::ShuffleMaxEps0(n, delta), 1e-9);
}

TEST(InvertShuffle, EmptyRegionFails) {
  EXPECT_THROW(InvertShuffleBound({0.01, 1e-6}, 50), CalibrationError);
}

TEST(CalibrateRr, NeverWorseThanLocalRandomizer) {
  const int n = 600;
  const double delta = DefaultDelta(n);
  for (double eps : {0.2, 0.5, 1.0, 2.0, 8.0, 30.0}) {
    const RrCalibration c = CalibrateRrShuffle({eps, delta}, n);
    EXPECT_LE(c.local.mu, RrMuFromEps0(eps).mu);
    if (c.amplified) {
      EXPECT_LE(ShuffleEpsBound(c.local.eps0, n, delta), eps + 1e-12);
    }
  }
  EXPECT_LT(CalibrateRrShuffle({40.0, delta}, n).local.mu, 1e-15);
  EXPECT_FALSE(CalibrateRrShuffle({0.5, 1e-6}, 50).amplified);
}

TEST(DominatingPair, MassesSumToOne) {
  for (int n : {3, 50, 2000}) {
    const DominatingPair pair{n, 1.3};
    EXPECT_NEAR(pair.TotalMass0(), 1.0, 1e-10);
    EXPECT_NEAR(pair.TotalMass1(), 1.0, 1e-10);
  }
}

TEST(DominatingPair, MatchesEnumeration) {
  for (double eps0 : {0.3, 1.0, 2.2}) {
    const DominatingPair pair{3, eps0};
    for (const auto& [xy, masses] : oracle::EnumeratePair(3, eps0)) {
      EXPECT_NEAR(pair.P0(xy.first, xy.second), masses.first, 1e-14);
      EXPECT_NEAR(pair.P1(xy.first, xy.second), masses.second, 1e-14);
    }
    for (double alpha : {0.0, 0.5, 1.0, 1.5, 2.0, std::exp(eps0), 10.0}) {
      EXPECT_NEAR(HockeyStickDelta(pair, alpha), oracle::EnumeratedHockeyStick(3, eps0, alpha),
                  1e-12);
    }
  }
  for (int n : {4, 7, 12}) {
    const DominatingPair pair{n, 1.0};
    for (double alpha : {1.0, 1.7, 2.5}) {
      EXPECT_NEAR(HockeyStickDelta(pair, alpha), oracle::EnumeratedHockeyStick(n, 1.0, alpha),
                  1e-12);
    }
  }
}

TEST(HockeyStick, Limits) {
  const DominatingPair pair{100, 1.0};
  EXPECT_NEAR(HockeyStickDelta(pair, 0.0), 1.0, 1e-12);
  EXPECT_EQ(HockeyStickDelta(pair, std::numeric_limits<double>::infinity()), 0.0);
  double tv = 0.0;
  for (const auto& [xy, masses] : oracle::EnumeratePair(100, 1.0)) {
    tv += std::abs(masses.first - masses.second);
  }
  EXPECT_NEAR(HockeyStickDelta(pair, 1.0), tv / 2, 1e-12);
  double prev = 1.0;
  for (double a = 0.0; a < 4.0; a += 0.1) {
    const double d = HockeyStickDelta(pair, a);
    EXPECT_LE(d, prev + 1e-15);
    EXPECT_GE(d, 0.0);
    prev = d;
  }
  EXPECT_THROW(HockeyStickDelta(pair, -1.0), ParameterError);
}

TEST(HockeyStick, TighterThanClosedForm) {
  const int n = 5000;
  const double delta = 1e-6;
  for (double eps0 : {0.5, 1.0, 2.0}) {
    const double eps_cor = ShuffleEpsBound(eps0, n, delta);
    const DominatingPair pair{n, eps0};
    EXPECT_LE(HockeyStickDelta(pair, std::exp(eps_cor)), delta);
    EXPECT_LE(NumericShuffleEps(pair, delta), eps_cor);
  }
}

TEST(GaussianProjection, MatchesPreciseEvaluation) {
  const GaussianProjectionParams p = GaussianProjectionSigma({1.0, 1e-5}, 552, 50);
  EXPECT_NEAR(p.b, oracle::ProjectionB(552, 50, 1e-5), 1e-12);
  EXPECT_NEAR(p.b, 2.91, 0.01);
  EXPECT_NEAR(p.sigma_bar, oracle::ProjectionSigma(1.0, 1e-5, 552, 50), 1e-12);
  // log(1/(2 delta)) as written gives 8.29; 8.53 corresponds to log(1/delta)
  EXPECT_NEAR(p.sigma_bar, 8.29, 0.01);
  EXPECT_EQ(p.m, 50);
}

TEST(GaussianProjection, Limits) {
  // log(n/delta) = 1
  EXPECT_NEAR(ProjectionInflation(1, 50, std::exp(-1.0)), 1.0 + 2.0 / std::sqrt(50.0) + 2.0 / 50,
              1e-15);
  const double b_large_m = ProjectionInflation(600, 100000000, 1e-6);
  EXPECT_NEAR(b_large_m, 1.0, 1e-3);
  double prev = std::numeric_limits<double>::infinity();
  for (double eps = 0.1; eps < 20; eps *= 1.5) {
    const double s = GaussianProjectionSigma({eps, 1e-6}, 600, 50).sigma_bar;
    EXPECT_LT(s, prev);
    prev = s;
  }
  EXPECT_THROW(GaussianProjectionSigma({1.0, 1.0}, 600, 50), ParameterError);
  EXPECT_THROW(GaussianProjectionSigma({0.1, 0.9}, 600, 50), CalibrationError);
  EXPECT_THROW(GaussianProjectionSigma({1.0, 1e-6}, 600, 0), ParameterError);
}

TEST(PowerSigma, ClosedForm) {
  EXPECT_NEAR(PowerMethodSigma({2.0, std::exp(-1.0)}, 1).sigma_bar, 1.0, 1e-15);
  EXPECT_NEAR(PowerMethodSigma({1.0, 1e-6}, 5).sigma_bar, 16.62, 0.005);
  EXPECT_NEAR(PowerMethodSigma({1.0, 1e-6}, 5).sigma_bar, oracle::PowerSigma(1.0, 1e-6, 5), 1e-12);
  const double base = PowerMethodSigma({1.0, 1e-6}, 1).sigma_bar;
  for (int n : {2, 5, 10, 50}) {
    EXPECT_NEAR(PowerMethodSigma({1.0, 1e-6}, n).sigma_bar / base, std::sqrt(n), 1e-12);
  }
  EXPECT_EQ(PowerMethodSigma({1.0, 1e-6}, 5).sensitivity, 1.0);
  EXPECT_THROW(PowerMethodSigma({1.0, 1.0}, 5), ParameterError);
  EXPECT_THROW(PowerMethodSigma({1.0, 1e-6}, 0), ParameterError);
}

TEST(Budget, Validation) {
  EXPECT_THROW(PrivacyBudget({0.0, 1e-6}).Validate(), ParameterError);
  EXPECT_THROW(PrivacyBudget({1.0, 0.0}).Validate(), ParameterError);
  EXPECT_THROW(PrivacyBudget({1.0, 1.5}).Validate(), ParameterError);
  EXPECT_DOUBLE_EQ(DefaultDelta(600), 1.0 / 360000.0);
}

}  // namespace
}  // namespace dpspec
