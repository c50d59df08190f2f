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

#ifndef DPSPEC_GRAPH_H_
#define DPSPEC_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dpspec {

using DenseMatrix = Eigen::MatrixXd;

// Unordered node pair stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Undirected simple graph on nodes 0..n-1 with optional ground-truth
// community labels. Immutable after construction.
class Graph {
 public:
  Graph() = default;

  // Pairs are normalized to u < v, sorted and deduplicated. Throws
  // ParameterError on self-loops, out-of-range endpoints or invalid labels
  // (labels must lie in 0..k-1 with k >= 2).
  Graph(int num_nodes, std::vector<Edge> edges,
        std::optional<std::vector<int>> labels = std::nullopt);

  int num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_labels() const { return labels_.has_value(); }
  // Requires has_labels().
  const std::vector<int>& labels() const;
  // Number of communities (max label + 1); 0 without labels.
  int num_communities() const { return num_communities_; }

  std::vector<int> Degrees() const;
  std::vector<std::vector<int>> AdjacencyLists() const;
  bool HasEdge(int u, int v) const;

  // Symmetric 0/1 matrix with zero diagonal.
  DenseMatrix DenseAdjacency() const;

 private:
  int num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::optional<std::vector<int>> labels_;
  int num_communities_ = 0;
};

struct SbmParams {
  std::vector<int> sizes;  // one entry per community
  double p = 0.0;          // within-community edge probability
  double q = 0.0;          // cross-community edge probability

  int k() const { return static_cast<int>(sizes.size()); }
  int n() const;
  // Throws ParameterError unless sizes are positive, k >= 1 and
  // 0 <= q < p <= 1.
  void Validate() const;
  // Expected number of nonzero adjacency entries (ordered pairs).
  double ExpectedNonzeroEntries() const;
};

// Nodes are laid out block by block; labels are block indices.
Graph SampleSbm(const SbmParams& params, std::uint64_t seed);

// Result of reading an edge-list file.
struct LoadedGraph {
  Graph graph;
  // original_ids[i] is the file id of compacted node i.
  std::vector<std::int64_t> original_ids;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicate_edges = 0;
};

// Whitespace-separated "u v" integer lines; blank lines and lines starting
// with '#' are skipped. Nodes are compacted in order of first appearance.
// Throws ParseError carrying the offending line number.
LoadedGraph LoadEdgeList(const std::filesystem::path& path);
LoadedGraph ParseEdgeList(const std::string& text);

// Attaches labels from a "node label" file to a loaded graph. Labels may be
// arbitrary tokens; they are numbered in order of first appearance. Every
// node must be labelled.
Graph AttachLabels(const LoadedGraph& loaded,
                   const std::filesystem::path& labels_path);

// Writes "u v" lines sorted by (u, v).
void SaveEdgeList(const Graph& g, const std::filesystem::path& path);
std::string FormatEdgeList(const Graph& g);

// Facebook-style circles: each line is "name id id ...". Selects the
// `circle_count` largest circles (ties: smaller name first), keeps nodes that
// belong to exactly one selected circle and returns the induced subgraph with
// the circle rank as label. Kept nodes are ordered by ascending original id.
LoadedGraph LoadCirclesDropPolicy(const std::filesystem::path& edge_list_path,
                                  const std::filesystem::path& circles_path,
                                  int circle_count);
LoadedGraph CirclesDropPolicy(const std::string& edge_list_text,
                              const std::string& circles_text,
                              int circle_count);

// Induced subgraph on `nodes` (listed in the order they should appear).
Graph InducedSubgraph(const Graph& g, std::span<const int> nodes);

// Largest connected component; ties go to the component holding the smallest
// node index. `kept_nodes`, when given, receives the retained node indices.
Graph LargestConnectedComponent(const Graph& g,
                                std::vector<int>* kept_nodes = nullptr);

// A permutation of 0..n-1 in "row" form: node i of the permuted graph is node
// order[i] of the original, so the permuted adjacency is P A P^T with P having
// rows e_{order[i]}^T.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> order);

  static Permutation Identity(int n);
  static Permutation Random(int n, std::uint64_t seed);

  int size() const { return static_cast<int>(order_.size()); }
  int operator[](int i) const { return order_[i]; }
  const std::vector<int>& order() const { return order_; }
  bool IsIdentity() const;

  Permutation Inverse() const;
  // Permutation equivalent to applying `this` first and `then` second.
  Permutation Then(const Permutation& then) const;

  DenseMatrix Matrix() const;
  // P M P^T for a square M.
  DenseMatrix Conjugate(const DenseMatrix& m) const;
  // Values indexed by new position from values indexed by original node.
  std::vector<int> Gather(std::span<const int> values) const;
  // Values indexed by original node from values indexed by new position.
  std::vector<int> Scatter(std::span<const int> values) const;

 private:
  std::vector<int> order_;
};

Graph ApplyPermutation(const Graph& g, const Permutation& perm);

// Uniformly random relabelling; labels follow their nodes.
std::pair<Graph, Permutation> PermuteGraph(const Graph& g, std::uint64_t seed);

}  // namespace dpspec

#endif  // DPSPEC_GRAPH_H_
