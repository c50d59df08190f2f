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

#ifndef DPSPEC_CONFIG_H_
#define DPSPEC_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dpspec/graph.h"

namespace dpspec {

enum class Mechanism { kRrShuffle, kSps, kProjectedGaussian, kPowerMethod };

std::string_view MechanismName(Mechanism m);
// Throws ConfigError for unknown names.
Mechanism ParseMechanism(std::string_view name);

enum class ErrorMetric { kExact, kCounts };

enum class DatasetKind { kSbm, kEdgeList, kCircles };

struct DatasetSpec {
  DatasetKind kind = DatasetKind::kSbm;
  SbmParams sbm{{200, 200, 200}, 0.5, 0.1};
  std::filesystem::path edges;
  std::filesystem::path labels;   // edge_list only
  std::filesystem::path circles;  // circles only
  int circle_count = 4;
  bool largest_component = false;
};

// Log-equidistant grid of `count` points from `min` to `max` inclusive.
struct EpsGrid {
  double min = 0.5;
  double max = 16.0;
  int count = 8;

  std::vector<double> Values() const;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  Mechanism mechanism = Mechanism::kRrShuffle;
  int k = 0;  // 0: number of ground-truth communities
  EpsGrid eps_grid;
  std::optional<double> delta;  // unset: n^-2
  int trials = 20;
  int projection_dim = 50;
  int power_iters = 5;
  double subsample_rate = 0.5;
  std::uint64_t master_seed = 1;
  int kmeans_restarts = 10;
  ErrorMetric metric = ErrorMetric::kExact;
  int threads = 1;

  // Throws ConfigError on inconsistent values.
  void Validate() const;
};

// Line-based "key = value" text; '#' starts a comment, list values are
// comma-separated and unknown keys are rejected. Relative paths are resolved
// against `base_dir`. Throws ConfigError (with the line number) on problems.
ExperimentConfig ParseConfig(const std::string& text,
                             const std::filesystem::path& base_dir = {});
ExperimentConfig LoadConfig(const std::filesystem::path& path);

// Serializes back to the config syntax (paths as given).
std::string FormatConfig(const ExperimentConfig& cfg);

}  // namespace dpspec

#endif  // DPSPEC_CONFIG_H_
