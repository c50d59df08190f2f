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

// dpspec command line driver.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpspec/accounting.h"
#include "dpspec/config.h"
#include "dpspec/error.h"
#include "dpspec/graph.h"
#include "dpspec/harness.h"
#include "dpspec/matrix_io.h"
#include "dpspec/mechanisms.h"
#include "dpspec/rng.h"
#include "dpspec/spectral.h"

namespace {

using namespace dpspec;

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

void WriteText(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write " + path);
  out << text;
  if (!out.flush()) throw ParameterError("write failed for " + path);
}

struct CommonOverrides {
  std::optional<int> trials;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;

  void Apply(ExperimentConfig& cfg) const {
    if (trials) cfg.trials = *trials;
    if (threads) cfg.threads = *threads;
    if (seed) cfg.master_seed = *seed;
  }
};

void AddOverrides(CLI::App* cmd, CommonOverrides& o) {
  cmd->add_option("--trials", o.trials, "override trials per point");
  cmd->add_option("--threads", o.threads, "worker threads per point");
  cmd->add_option("--seed", o.seed, "override master seed");
}

int EmitCurve(const TradeoffCurve& curve, const std::string& out, const std::string& trials_out) {
  WriteText(FormatCsv(curve), out);
  if (!trials_out.empty()) WriteText(FormatTrialsCsv(curve), trials_out);
  return curve.AllInfeasible() && !curve.rows.empty() ? kExitInfeasible : 0;
}

// Dataset for the single-graph subcommands: an edge list if given, else one
// draw from the config's dataset.
Graph LoadInputGraph(const std::string& edges, const std::string& config, std::uint64_t seed) {
  if (!edges.empty()) return LoadEdgeList(edges).graph;
  ExperimentConfig cfg;
  if (!config.empty()) cfg = LoadConfig(config);
  return DatasetSource(cfg.dataset).ForTrial(TrialSeed(seed, 0));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge-private spectral clustering experiments"};
  app.require_subcommand(1);

  // sweep
  std::string sweep_config, sweep_out, sweep_trials_out;
  CommonOverrides sweep_over;
  auto* sweep = app.add_subcommand("sweep", "privacy-utility sweep over an eps grid");
  sweep->add_option("--config", sweep_config, "config file")->required();
  sweep->add_option("--out", sweep_out, "curve CSV path (default stdout)");
  sweep->add_option("--trials-out", sweep_trials_out, "per-trial CSV path");
  AddOverrides(sweep, sweep_over);

  // ablations
  std::string ab_config, ab_out, ab_trials_out;
  double ab_eps = 0.0;
  std::vector<int> ab_grid;
  CommonOverrides ab_over;
  auto* ablate_iters = app.add_subcommand("ablate-iters", "noisy power method iteration ablation");
  auto* ablate_dim = app.add_subcommand("ablate-dim", "projection dimension ablation");
  for (auto* cmd : {ablate_iters, ablate_dim}) {
    cmd->add_option("--config", ab_config, "config file")->required();
    cmd->add_option("--eps", ab_eps, "privacy budget")->required();
    cmd->add_option("--grid", ab_grid, "comma separated grid")->required()->delimiter(',');
    cmd->add_option("--out", ab_out, "CSV path (default stdout)");
    cmd->add_option("--trials-out", ab_trials_out, "per-trial CSV path");
    AddOverrides(cmd, ab_over);
  }

  // account
  std::string acc_mechanism = "rr_shuffle";
  int acc_n = 0;
  std::vector<double> acc_eps;
  std::optional<double> acc_delta;
  int acc_m = 50, acc_iters = 5;
  auto* account = app.add_subcommand("account", "print the calibration table");
  account->add_option("--mechanism", acc_mechanism, "mechanism, or 'all'");
  account->add_option("--n", acc_n, "number of nodes")->required();
  account->add_option("--eps", acc_eps, "comma separated eps values")->required()->delimiter(',');
  account->add_option("--delta", acc_delta, "delta (default n^-2)");
  account->add_option("--m", acc_m, "projection dimension");
  account->add_option("--iters", acc_iters, "power iterations");

  // spectrum
  std::string spec_edges, spec_config;
  int spec_k = 3;
  std::uint64_t spec_seed = 1;
  auto* spectrum = app.add_subcommand("spectrum", "adjacency spectrum and eigengap");
  spectrum->add_option("--edges", spec_edges, "edge list");
  spectrum->add_option("--config", spec_config, "config whose dataset to draw");
  spectrum->add_option("--k", spec_k, "number of clusters");
  spectrum->add_option("--seed", spec_seed, "seed for synthetic graphs");

  // privatize
  std::string pv_edges, pv_config, pv_mechanism = "rr_shuffle", pv_out;
  double pv_eps = 1.0;
  std::optional<double> pv_delta;
  int pv_k = 3, pv_m = 50, pv_iters = 5;
  double pv_rate = 0.5;
  std::uint64_t pv_seed = 1;
  auto* privatize = app.add_subcommand("privatize", "release a private view of a graph");
  privatize->add_option("--edges", pv_edges, "edge list");
  privatize->add_option("--config", pv_config, "config whose dataset to draw");
  privatize->add_option("--mechanism", pv_mechanism, "mechanism");
  privatize->add_option("--eps", pv_eps, "privacy budget")->required();
  privatize->add_option("--delta", pv_delta, "delta (default n^-2)");
  privatize->add_option("--k", pv_k, "power method dimension");
  privatize->add_option("--m", pv_m, "projection dimension");
  privatize->add_option("--iters", pv_iters, "power iterations");
  privatize->add_option("--subsample-rate", pv_rate, "sps subsampling rate");
  privatize->add_option("--seed", pv_seed, "seed");
  privatize->add_option("--out", pv_out, "output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      ExperimentConfig cfg = LoadConfig(sweep_config);
      sweep_over.Apply(cfg);
      return EmitCurve(RunSweep(cfg), sweep_out, sweep_trials_out);
    }
    if (*ablate_iters || *ablate_dim) {
      ExperimentConfig cfg = LoadConfig(ab_config);
      ab_over.Apply(cfg);
      const TradeoffCurve table = *ablate_iters ? RunAblationPowerIters(cfg, ab_eps, ab_grid)
                                                : RunAblationProjectionDim(cfg, ab_eps, ab_grid);
      return EmitCurve(table, ab_out, ab_trials_out);
    }
    if (*account) {
      if (acc_n < 2) throw ParameterError("--n must be >= 2");
      const double delta = acc_delta ? *acc_delta : DefaultDelta(acc_n);
      std::vector<Mechanism> mechs;
      if (acc_mechanism == "all") {
        mechs = {Mechanism::kRrShuffle, Mechanism::kProjectedGaussian, Mechanism::kPowerMethod};
      } else {
        mechs = {ParseMechanism(acc_mechanism)};
      }
      ExperimentConfig cfg;
      cfg.projection_dim = acc_m;
      cfg.power_iters = acc_iters;
      std::string out = "mechanism,eps,delta,n,param_name,param_value\n";
      bool any_feasible = false;
      for (Mechanism m : mechs) {
        cfg.mechanism = m;
        const char* name = (m == Mechanism::kRrShuffle || m == Mechanism::kSps) ? "mu" : "sigma_bar";
        for (double eps : acc_eps) {
          double value = std::nan("");
          try {
            value = Calibrate(cfg, eps, delta, acc_n).ReportedParam();
            any_feasible = true;
          } catch (const CalibrationError&) {
          }
          out += std::string(MechanismName(m)) + ',' + FormatNumber(eps) + ',' +
                 FormatNumber(delta) + ',' + std::to_string(acc_n) + ',' + name + ',' +
                 FormatNumber(value) + '\n';
        }
      }
      std::cout << out;
      return any_feasible ? 0 : kExitInfeasible;
    }
    if (*spectrum) {
      const Graph g = LoadInputGraph(spec_edges, spec_config, spec_seed);
      const SpectrumSummary s = Summarize(SymmetricEigenvalues(g.DenseAdjacency()), spec_k);
      std::string out = "index,eigenvalue\n";
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        out += std::to_string(i + 1) + ',' + FormatNumber(s.values[i]) + '\n';
      }
      out += "# k=" + std::to_string(spec_k) + " eigengap=" + FormatNumber(s.eigengap) +
             " normalized_eigengap=" + FormatNumber(s.normalized_eigengap) + '\n';
      std::cout << out;
      return 0;
    }
    if (*privatize) {
      const Graph g = LoadInputGraph(pv_edges, pv_config, pv_seed);
      ExperimentConfig cfg;
      cfg.mechanism = ParseMechanism(pv_mechanism);
      cfg.projection_dim = pv_m;
      cfg.power_iters = pv_iters;
      cfg.subsample_rate = pv_rate;
      const int n = g.num_nodes();
      const CalibratedMechanism mech =
          Calibrate(cfg, pv_eps, pv_delta ? *pv_delta : DefaultDelta(n), n);
      const std::uint64_t seed = DeriveSeed(pv_seed, stream::kMechanism);
      switch (mech.mechanism) {
        case Mechanism::kRrShuffle:
          SaveEdgeList(ShuffleConjugate(RrPerturb(g, mech.rr.local.mu, seed), seed).ToGraph(),
                       pv_out);
          break;
        case Mechanism::kSps:
          SaveEdgeList(
              SubsamplePerturbShuffle(g, mech.subsample_rate, mech.rr.local.mu, seed).ToGraph(),
              pv_out);
          break;
        case Mechanism::kProjectedGaussian:
          WriteDenseMatrix(pv_out, ProjectedGaussian(g, mech.projection, seed).released);
          break;
        case Mechanism::kPowerMethod:
          WriteDenseMatrix(pv_out, NoisyPowerMethod(g, pv_k, mech.power, seed).x);
          break;
      }
      std::cerr << MechanismName(mech.mechanism) << " param=" << FormatNumber(mech.ReportedParam())
                << '\n';
      return 0;
    }
  } catch (const CalibrationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
