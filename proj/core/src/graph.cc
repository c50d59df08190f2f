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

#include "dpspec/graph.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "dpspec/error.h"
#include "dpspec/rng.h"

namespace dpspec {
namespace {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string_view> Tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

bool ParseInt(std::string_view token, std::int64_t& out) {
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

// Calls fn(line_number, tokens) for every non-blank, non-comment line.
template <typename Fn>
void ForEachDataLine(const std::string& text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string_view line(text.data() + pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto tokens = Tokenize(line);
    if (tokens.empty() || tokens.front().front() == '#') {
      if (nl == text.size()) break;
      continue;
    }
    fn(line_no, tokens);
    if (nl == text.size()) break;
  }
}

struct RawEdges {
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;  // in file order
  std::size_t self_loops = 0;
};

RawEdges ParseRawEdges(const std::string& text) {
  RawEdges raw;
  ForEachDataLine(text, [&](std::size_t line_no, const auto& tokens) {
    if (tokens.size() != 2) {
      throw ParseError("expected two node ids, got " +
                           std::to_string(tokens.size()) + " fields",
                       line_no);
    }
    std::int64_t u = 0, v = 0;
    if (!ParseInt(tokens[0], u) || !ParseInt(tokens[1], v)) {
      throw ParseError("node ids must be integers", line_no);
    }
    raw.pairs.emplace_back(u, v);
  });
  return raw;
}

}  // namespace

Graph::Graph(int num_nodes, std::vector<Edge> edges,
             std::optional<std::vector<int>> labels)
    : num_nodes_(num_nodes), edges_(std::move(edges)), labels_(std::move(labels)) {
  if (num_nodes_ < 0) throw ParameterError("negative node count");
  for (Edge& e : edges_) {
    if (e.u == e.v) throw ParameterError("self-loop at node " + std::to_string(e.u));
    if (e.u < 0 || e.v < 0 || e.u >= num_nodes_ || e.v >= num_nodes_) {
      throw ParameterError("edge endpoint out of range");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  if (labels_) {
    if (static_cast<int>(labels_->size()) != num_nodes_) {
      throw ParameterError("label vector length differs from node count");
    }
    int max_label = -1;
    for (int l : *labels_) {
      if (l < 0) throw ParameterError("negative label");
      max_label = std::max(max_label, l);
    }
    num_communities_ = max_label + 1;
    if (num_nodes_ > 0 && num_communities_ < 2) {
      throw ParameterError("labelled graphs need at least two communities");
    }
  }
}

const std::vector<int>& Graph::labels() const {
  if (!labels_) throw ContractError("graph has no labels");
  return *labels_;
}

std::vector<int> Graph::Degrees() const {
  std::vector<int> deg(num_nodes_, 0);
  for (const Edge& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

std::vector<std::vector<int>> Graph::AdjacencyLists() const {
  std::vector<std::vector<int>> adj(num_nodes_);
  for (const Edge& e : edges_) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  return adj;
}

bool Graph::HasEdge(int u, int v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

DenseMatrix Graph::DenseAdjacency() const {
  DenseMatrix a = DenseMatrix::Zero(num_nodes_, num_nodes_);
  for (const Edge& e : edges_) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return a;
}

int SbmParams::n() const {
  return std::accumulate(sizes.begin(), sizes.end(), 0);
}

void SbmParams::Validate() const {
  if (sizes.empty()) throw ParameterError("SBM needs at least one community");
  for (int s : sizes) {
    if (s <= 0) throw ParameterError("SBM community sizes must be positive");
  }
  if (!(q >= 0.0 && q < p && p <= 1.0)) {
    throw ParameterError("SBM probabilities must satisfy 0 <= q < p <= 1");
  }
}

double SbmParams::ExpectedNonzeroEntries() const {
  double within = 0.0;
  for (int s : sizes) within += 0.5 * s * (s - 1.0);
  const double total = 0.5 * n() * (n() - 1.0);
  return 2.0 * (p * within + q * (total - within));
}

Graph SampleSbm(const SbmParams& params, std::uint64_t seed) {
  params.Validate();
  const int n = params.n();
  std::vector<int> labels;
  labels.reserve(n);
  for (int b = 0; b < params.k(); ++b) labels.insert(labels.end(), params.sizes[b], b);

  Rng rng = MakeRng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double prob = labels[i] == labels[j] ? params.p : params.q;
      if (unif(rng) < prob) edges.push_back({i, j});
    }
  }
  std::optional<std::vector<int>> lab;
  if (params.k() >= 2) lab = std::move(labels);
  return Graph(n, std::move(edges), std::move(lab));
}

LoadedGraph ParseEdgeList(const std::string& text) {
  RawEdges raw = ParseRawEdges(text);
  LoadedGraph out;
  std::unordered_map<std::int64_t, int> index;
  auto intern = [&](std::int64_t id) {
    auto [it, inserted] = index.try_emplace(id, static_cast<int>(out.original_ids.size()));
    if (inserted) out.original_ids.push_back(id);
    return it->second;
  };
  std::vector<Edge> edges;
  edges.reserve(raw.pairs.size());
  for (auto [a, b] : raw.pairs) {
    const int u = intern(a);
    const int v = intern(b);
    if (u == v) {
      ++out.self_loops_dropped;
      continue;
    }
    edges.push_back({std::min(u, v), std::max(u, v)});
  }
  const std::size_t before = edges.size();
  out.graph = Graph(static_cast<int>(out.original_ids.size()), std::move(edges));
  out.duplicate_edges = before - out.graph.num_edges();
  return out;
}

LoadedGraph LoadEdgeList(const std::filesystem::path& path) {
  return ParseEdgeList(ReadFile(path));
}

Graph AttachLabels(const LoadedGraph& loaded,
                   const std::filesystem::path& labels_path) {
  const std::string text = ReadFile(labels_path);
  std::unordered_map<std::int64_t, int> node_of;
  for (std::size_t i = 0; i < loaded.original_ids.size(); ++i) {
    node_of.emplace(loaded.original_ids[i], static_cast<int>(i));
  }
  std::map<std::string, int, std::less<>> label_ids;
  std::vector<std::string> label_order;
  std::vector<int> labels(loaded.graph.num_nodes(), -1);
  ForEachDataLine(text, [&](std::size_t line_no, const auto& tokens) {
    if (tokens.size() != 2) throw ParseError("expected \"node label\"", line_no);
    std::int64_t id = 0;
    if (!ParseInt(tokens[0], id)) throw ParseError("node id must be an integer", line_no);
    auto node = node_of.find(id);
    if (node == node_of.end()) return;  // labelled node absent from the graph
    auto [it, inserted] =
        label_ids.try_emplace(std::string(tokens[1]), static_cast<int>(label_ids.size()));
    labels[node->second] = it->second;
  });
  for (int l : labels) {
    if (l < 0) throw ParameterError("labels file does not cover every node");
  }
  return Graph(loaded.graph.num_nodes(), loaded.graph.edges(), std::move(labels));
}

std::string FormatEdgeList(const Graph& g) {
  std::string out;
  for (const Edge& e : g.edges()) {
    out += std::to_string(e.u);
    out += ' ';
    out += std::to_string(e.v);
    out += '\n';
  }
  return out;
}

void SaveEdgeList(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write " + path.string());
  out << FormatEdgeList(g);
  if (!out) throw ParameterError("write failed for " + path.string());
}

LoadedGraph CirclesDropPolicy(const std::string& edge_list_text,
                              const std::string& circles_text,
                              int circle_count) {
  if (circle_count < 1) throw ParameterError("circle_count must be positive");
  struct Circle {
    std::string name;
    std::vector<std::int64_t> members;
  };
  std::vector<Circle> circles;
  ForEachDataLine(circles_text, [&](std::size_t line_no, const auto& tokens) {
    Circle c{std::string(tokens[0]), {}};
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      std::int64_t id = 0;
      if (!ParseInt(tokens[i], id)) throw ParseError("circle member must be an integer", line_no);
      c.members.push_back(id);
    }
    std::sort(c.members.begin(), c.members.end());
    c.members.erase(std::unique(c.members.begin(), c.members.end()), c.members.end());
    circles.push_back(std::move(c));
  });
  if (static_cast<int>(circles.size()) < circle_count) {
    throw ParameterError("requested " + std::to_string(circle_count) +
                         " circles but file has " + std::to_string(circles.size()));
  }
  std::stable_sort(circles.begin(), circles.end(), [](const Circle& a, const Circle& b) {
    if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
    return a.name < b.name;
  });
  circles.resize(circle_count);

  std::map<std::int64_t, std::vector<int>> membership;  // ordered by id
  for (int c = 0; c < circle_count; ++c) {
    for (std::int64_t id : circles[c].members) membership[id].push_back(c);
  }
  LoadedGraph out;
  std::unordered_map<std::int64_t, int> node_of;
  std::vector<int> labels;
  for (const auto& [id, cs] : membership) {
    if (cs.size() != 1) continue;
    node_of.emplace(id, static_cast<int>(out.original_ids.size()));
    out.original_ids.push_back(id);
    labels.push_back(cs.front());
  }

  RawEdges raw = ParseRawEdges(edge_list_text);
  std::vector<Edge> edges;
  for (auto [a, b] : raw.pairs) {
    if (a == b) {
      ++out.self_loops_dropped;
      continue;
    }
    auto ia = node_of.find(a);
    auto ib = node_of.find(b);
    if (ia == node_of.end() || ib == node_of.end()) continue;
    edges.push_back({std::min(ia->second, ib->second), std::max(ia->second, ib->second)});
  }
  const std::size_t before = edges.size();
  out.graph = Graph(static_cast<int>(out.original_ids.size()), std::move(edges),
                    std::move(labels));
  out.duplicate_edges = before - out.graph.num_edges();
  return out;
}

LoadedGraph LoadCirclesDropPolicy(const std::filesystem::path& edge_list_path,
                                  const std::filesystem::path& circles_path,
                                  int circle_count) {
  return CirclesDropPolicy(ReadFile(edge_list_path), ReadFile(circles_path),
                           circle_count);
}

Graph InducedSubgraph(const Graph& g, std::span<const int> nodes) {
  std::vector<int> new_index(g.num_nodes(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const int v = nodes[i];
    if (v < 0 || v >= g.num_nodes()) throw ParameterError("node out of range");
    if (new_index[v] >= 0) throw ParameterError("duplicate node in subgraph list");
    new_index[v] = static_cast<int>(i);
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (new_index[e.u] >= 0 && new_index[e.v] >= 0) {
      edges.push_back({new_index[e.u], new_index[e.v]});
    }
  }
  std::optional<std::vector<int>> labels;
  if (g.has_labels()) {
    std::vector<int> l;
    l.reserve(nodes.size());
    for (int v : nodes) l.push_back(g.labels()[v]);
    labels = std::move(l);
  }
  return Graph(static_cast<int>(nodes.size()), std::move(edges), std::move(labels));
}

Graph LargestConnectedComponent(const Graph& g, std::vector<int>* kept_nodes) {
  if (g.num_nodes() == 0) throw ParameterError("empty graph has no components");
  const auto adj = g.AdjacencyLists();
  std::vector<int> comp(g.num_nodes(), -1);
  std::vector<int> sizes;
  for (int s = 0; s < g.num_nodes(); ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(sizes.size());
    int count = 0;
    std::queue<int> frontier;
    frontier.push(s);
    comp[s] = id;
    while (!frontier.empty()) {
      const int v = frontier.front();
      frontier.pop();
      ++count;
      for (int w : adj[v]) {
        if (comp[w] < 0) {
          comp[w] = id;
          frontier.push(w);
        }
      }
    }
    sizes.push_back(count);
  }
  // Components are numbered by their smallest node, so the first maximum wins
  // ties.
  const int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<int> nodes;
  for (int v = 0; v < g.num_nodes(); ++v) {
    if (comp[v] == best) nodes.push_back(v);
  }
  if (kept_nodes) *kept_nodes = nodes;
  return InducedSubgraph(g, nodes);
}

Permutation::Permutation(std::vector<int> order) : order_(std::move(order)) {
  std::vector<char> seen(order_.size(), 0);
  for (int v : order_) {
    if (v < 0 || v >= size() || seen[v]) throw ParameterError("not a permutation");
    seen[v] = 1;
  }
}

Permutation Permutation::Identity(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  return Permutation(std::move(order));
}

Permutation Permutation::Random(int n, std::uint64_t seed) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng = MakeRng(seed);
  // Explicit Fisher-Yates so the result does not depend on the standard
  // library's shuffle implementation.
  for (int i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<int> pick(0, i);
    std::swap(order[i], order[pick(rng)]);
  }
  return Permutation(std::move(order));
}

bool Permutation::IsIdentity() const {
  for (int i = 0; i < size(); ++i) {
    if (order_[i] != i) return false;
  }
  return true;
}

Permutation Permutation::Inverse() const {
  std::vector<int> inv(order_.size());
  for (int i = 0; i < size(); ++i) inv[order_[i]] = i;
  return Permutation(std::move(inv));
}

Permutation Permutation::Then(const Permutation& then) const {
  if (then.size() != size()) throw ParameterError("permutation size mismatch");
  std::vector<int> composed(order_.size());
  for (int i = 0; i < size(); ++i) composed[i] = order_[then.order_[i]];
  return Permutation(std::move(composed));
}

DenseMatrix Permutation::Matrix() const {
  DenseMatrix p = DenseMatrix::Zero(size(), size());
  for (int i = 0; i < size(); ++i) p(i, order_[i]) = 1.0;
  return p;
}

DenseMatrix Permutation::Conjugate(const DenseMatrix& m) const {
  if (m.rows() != size() || m.cols() != size()) {
    throw ContractError("conjugation needs a square matrix of matching size");
  }
  DenseMatrix out(size(), size());
  for (int j = 0; j < size(); ++j) {
    for (int i = 0; i < size(); ++i) out(i, j) = m(order_[i], order_[j]);
  }
  return out;
}

std::vector<int> Permutation::Gather(std::span<const int> values) const {
  if (static_cast<int>(values.size()) != size()) throw ParameterError("size mismatch");
  std::vector<int> out(values.size());
  for (int i = 0; i < size(); ++i) out[i] = values[order_[i]];
  return out;
}

std::vector<int> Permutation::Scatter(std::span<const int> values) const {
  if (static_cast<int>(values.size()) != size()) throw ParameterError("size mismatch");
  std::vector<int> out(values.size());
  for (int i = 0; i < size(); ++i) out[order_[i]] = values[i];
  return out;
}

Graph ApplyPermutation(const Graph& g, const Permutation& perm) {
  if (perm.size() != g.num_nodes()) throw ParameterError("permutation size mismatch");
  const Permutation inv = perm.Inverse();
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const Edge& e : g.edges()) edges.push_back({inv[e.u], inv[e.v]});
  std::optional<std::vector<int>> labels;
  if (g.has_labels()) labels = perm.Gather(g.labels());
  return Graph(g.num_nodes(), std::move(edges), std::move(labels));
}

std::pair<Graph, Permutation> PermuteGraph(const Graph& g, std::uint64_t seed) {
  Permutation perm = Permutation::Random(g.num_nodes(), seed);
  Graph out = ApplyPermutation(g, perm);
  return {std::move(out), std::move(perm)};
}

}  // namespace dpspec
