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

#include "dpspec/config.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <locale>
#include <map>
#include <set>
#include <sstream>

#include "dpspec/error.h"

namespace dpspec {
namespace {

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> SplitList(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = s.find(',', pos);
    out.push_back(Trim(s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

[[noreturn]] void Fail(std::size_t line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double ToDouble(const std::string& v, std::size_t line) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) Fail(line, "not a number: '" + v + "'");
  return out;
}

long long ToInt(const std::string& v, std::size_t line) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) Fail(line, "not an integer: '" + v + "'");
  return out;
}

bool ToBool(const std::string& v, std::size_t line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  Fail(line, "not a boolean: '" + v + "'");
}

std::filesystem::path ResolvePath(const std::string& v, const std::filesystem::path& base) {
  std::filesystem::path p(v);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p;
}

}  // namespace

std::string_view MechanismName(Mechanism m) {
  switch (m) {
    case Mechanism::kRrShuffle: return "rr_shuffle";
    case Mechanism::kSps: return "sps";
    case Mechanism::kProjectedGaussian: return "projected_gaussian";
    case Mechanism::kPowerMethod: return "power_method";
  }
  return "unknown";
}

Mechanism ParseMechanism(std::string_view name) {
  for (Mechanism m : {Mechanism::kRrShuffle, Mechanism::kSps, Mechanism::kProjectedGaussian,
                      Mechanism::kPowerMethod}) {
    if (MechanismName(m) == name) return m;
  }
  throw ConfigError("unknown mechanism '" + std::string(name) + "'");
}

std::vector<double> EpsGrid::Values() const {
  std::vector<double> v;
  if (count == 1) return {min};
  const double lo = std::log(min), hi = std::log(max);
  for (int i = 0; i < count; ++i) {
    v.push_back(i == count - 1 ? max : std::exp(lo + (hi - lo) * i / (count - 1)));
  }
  if (!v.empty()) v.front() = min;
  return v;
}

void ExperimentConfig::Validate() const {
  if (!(eps_grid.min > 0.0)) throw ConfigError("eps_min must be positive");
  if (eps_grid.count < 1) throw ConfigError("eps_count must be >= 1");
  if (eps_grid.count > 1 && !(eps_grid.min < eps_grid.max)) {
    throw ConfigError("eps_min must be smaller than eps_max");
  }
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (projection_dim < 1) throw ConfigError("projection_dim must be >= 1");
  if (power_iters < 1) throw ConfigError("power_iters must be >= 1");
  if (!(subsample_rate > 0.0 && subsample_rate <= 1.0)) {
    throw ConfigError("subsample_rate must lie in (0, 1]");
  }
  if (delta && !(*delta > 0.0 && *delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
  if (k < 0 || k == 1) throw ConfigError("k must be >= 2 (or 0 to infer)");
  if (kmeans_restarts < 1) throw ConfigError("kmeans_restarts must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (dataset.kind == DatasetKind::kSbm) {
    try {
      dataset.sbm.Validate();
    } catch (const ParameterError& e) {
      throw ConfigError(e.what());
    }
    if (dataset.sbm.k() < 2) throw ConfigError("SBM datasets need at least two blocks");
  } else if (dataset.edges.empty()) {
    throw ConfigError("file datasets need 'edges'");
  }
  if (dataset.kind == DatasetKind::kEdgeList && dataset.labels.empty()) {
    throw ConfigError("edge_list datasets need 'labels'");
  }
  if (dataset.kind == DatasetKind::kCircles) {
    if (dataset.circles.empty()) throw ConfigError("circles datasets need 'circles'");
    if (dataset.circle_count < 2) throw ConfigError("circle_count must be >= 2");
  }
}

ExperimentConfig ParseConfig(const std::string& text, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  using Setter = std::function<void(const std::string&, std::size_t)>;
  const std::map<std::string, Setter, std::less<>> setters = {
      {"dataset", [&](const std::string& v, std::size_t l) {
         if (v == "sbm") cfg.dataset.kind = DatasetKind::kSbm;
         else if (v == "edge_list") cfg.dataset.kind = DatasetKind::kEdgeList;
         else if (v == "circles") cfg.dataset.kind = DatasetKind::kCircles;
         else Fail(l, "dataset must be sbm, edge_list or circles");
       }},
      {"sbm_sizes", [&](const std::string& v, std::size_t l) {
         cfg.dataset.sbm.sizes.clear();
         for (const auto& s : SplitList(v)) cfg.dataset.sbm.sizes.push_back(static_cast<int>(ToInt(s, l)));
       }},
      {"sbm_p", [&](const std::string& v, std::size_t l) { cfg.dataset.sbm.p = ToDouble(v, l); }},
      {"sbm_q", [&](const std::string& v, std::size_t l) { cfg.dataset.sbm.q = ToDouble(v, l); }},
      {"edges", [&](const std::string& v, std::size_t) { cfg.dataset.edges = ResolvePath(v, base_dir); }},
      {"labels", [&](const std::string& v, std::size_t) { cfg.dataset.labels = ResolvePath(v, base_dir); }},
      {"circles", [&](const std::string& v, std::size_t) { cfg.dataset.circles = ResolvePath(v, base_dir); }},
      {"circle_count", [&](const std::string& v, std::size_t l) { cfg.dataset.circle_count = static_cast<int>(ToInt(v, l)); }},
      {"largest_component", [&](const std::string& v, std::size_t l) { cfg.dataset.largest_component = ToBool(v, l); }},
      {"mechanism", [&](const std::string& v, std::size_t l) {
         try {
           cfg.mechanism = ParseMechanism(v);
         } catch (const ConfigError& e) {
           Fail(l, e.what());
         }
       }},
      {"k", [&](const std::string& v, std::size_t l) { cfg.k = static_cast<int>(ToInt(v, l)); }},
      {"eps_min", [&](const std::string& v, std::size_t l) { cfg.eps_grid.min = ToDouble(v, l); }},
      {"eps_max", [&](const std::string& v, std::size_t l) { cfg.eps_grid.max = ToDouble(v, l); }},
      {"eps_count", [&](const std::string& v, std::size_t l) { cfg.eps_grid.count = static_cast<int>(ToInt(v, l)); }},
      {"delta", [&](const std::string& v, std::size_t l) {
         if (v == "auto" || v == "n^-2") cfg.delta.reset();
         else cfg.delta = ToDouble(v, l);
       }},
      {"trials", [&](const std::string& v, std::size_t l) { cfg.trials = static_cast<int>(ToInt(v, l)); }},
      {"projection_dim", [&](const std::string& v, std::size_t l) { cfg.projection_dim = static_cast<int>(ToInt(v, l)); }},
      {"power_iters", [&](const std::string& v, std::size_t l) { cfg.power_iters = static_cast<int>(ToInt(v, l)); }},
      {"subsample_rate", [&](const std::string& v, std::size_t l) { cfg.subsample_rate = ToDouble(v, l); }},
      {"master_seed", [&](const std::string& v, std::size_t l) {
         cfg.master_seed = static_cast<std::uint64_t>(ToInt(v, l));
       }},
      {"kmeans_restarts", [&](const std::string& v, std::size_t l) { cfg.kmeans_restarts = static_cast<int>(ToInt(v, l)); }},
      {"metric", [&](const std::string& v, std::size_t l) {
         if (v == "exact") cfg.metric = ErrorMetric::kExact;
         else if (v == "counts") cfg.metric = ErrorMetric::kCounts;
         else Fail(l, "metric must be exact or counts");
       }},
      {"threads", [&](const std::string& v, std::size_t l) { cfg.threads = static_cast<int>(ToInt(v, l)); }},
  };

  std::set<std::string, std::less<>> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    const std::string body = Trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) Fail(line, "expected 'key = value'");
    const std::string key = Trim(body.substr(0, eq));
    const std::string value = Trim(body.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) Fail(line, "unknown key '" + key + "'");
    if (!seen.insert(key).second) Fail(line, "duplicate key '" + key + "'");
    if (value.empty()) Fail(line, "empty value for '" + key + "'");
    it->second(value, line);
  }
  cfg.Validate();
  return cfg;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str(), path.parent_path());
}

std::string FormatConfig(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(17);
  switch (cfg.dataset.kind) {
    case DatasetKind::kSbm: {
      out << "dataset = sbm\nsbm_sizes = ";
      for (std::size_t i = 0; i < cfg.dataset.sbm.sizes.size(); ++i) {
        out << (i ? "," : "") << cfg.dataset.sbm.sizes[i];
      }
      out << "\nsbm_p = " << cfg.dataset.sbm.p << "\nsbm_q = " << cfg.dataset.sbm.q << '\n';
      break;
    }
    case DatasetKind::kEdgeList:
      out << "dataset = edge_list\nedges = " << cfg.dataset.edges.string()
          << "\nlabels = " << cfg.dataset.labels.string() << '\n';
      break;
    case DatasetKind::kCircles:
      out << "dataset = circles\nedges = " << cfg.dataset.edges.string()
          << "\ncircles = " << cfg.dataset.circles.string()
          << "\ncircle_count = " << cfg.dataset.circle_count << '\n';
      break;
  }
  out << "largest_component = " << (cfg.dataset.largest_component ? "true" : "false") << '\n'
      << "mechanism = " << MechanismName(cfg.mechanism) << '\n'
      << "k = " << cfg.k << '\n'
      << "eps_min = " << cfg.eps_grid.min << '\n'
      << "eps_max = " << cfg.eps_grid.max << '\n'
      << "eps_count = " << cfg.eps_grid.count << '\n';
  if (cfg.delta) {
    out << "delta = " << *cfg.delta << '\n';
  } else {
    out << "delta = n^-2\n";
  }
  out << "trials = " << cfg.trials << '\n'
      << "projection_dim = " << cfg.projection_dim << '\n'
      << "power_iters = " << cfg.power_iters << '\n'
      << "subsample_rate = " << cfg.subsample_rate << '\n'
      << "master_seed = " << cfg.master_seed << '\n'
      << "kmeans_restarts = " << cfg.kmeans_restarts << '\n'
      << "metric = " << (cfg.metric == ErrorMetric::kExact ? "exact" : "counts") << '\n'
      << "threads = " << cfg.threads << '\n';
  return out.str();
}

}  // namespace dpspec
