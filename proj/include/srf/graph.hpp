#ifndef SRF_GRAPH_HPP
#define SRF_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "srf/rng.hpp"

namespace srf {

/// Undirected node-attributed graph. Edges are stored deduplicated with
/// i < j; finalize() sorts, validates and builds the neighbor index.
struct Graph {
  int num_nodes = 0;
  std::vector<std::pair<int, int>> edges;
  Eigen::MatrixXd features;        // num_nodes x F (F may be 0)
  std::vector<int> node_labels;    // empty or length num_nodes
  std::optional<int> label;
  std::string id;

  /// Sorts and dedupes edges, validates invariants (endpoints in range,
  /// no self-loops) and rebuilds the CSR neighbor index. Must be called
  /// after any structural mutation; all factories and loaders do.
  void finalize();

  std::span<const int> neighbors(int v) const {
    return {adjacency_.data() + offsets_[v],
            adjacency_.data() + offsets_[v + 1]};
  }
  int degree(int v) const { return offsets_[v + 1] - offsets_[v]; }
  int feature_dim() const { return static_cast<int>(features.cols()); }
  std::int64_t num_edges() const {
    return static_cast<std::int64_t>(edges.size());
  }

  bool operator==(const Graph& other) const;

 private:
  std::vector<int> offsets_;
  std::vector<int> adjacency_;
};

enum class TaskKind { graph_classification, node_classification };

std::string to_string(TaskKind task);
TaskKind task_from_string(const std::string& name);

struct Dataset {
  std::vector<Graph> graphs;
  TaskKind task = TaskKind::graph_classification;
  int num_classes = 0;
  std::vector<int> train_idx, val_idx, test_idx;

  /// Checks split disjointness/range and label ranges; throws on violation.
  void validate() const;
};

/// Complete binary trees of the given depth; the root (node 0) must match
/// its neighbor-count one-hot against the leaf carrying the same count and
/// predict that leaf's class. Labels are stored as graph labels with the
/// root readout in mind. num_classes = 2^depth.
Dataset gen_tree_neighbors_match(int depth, int n_train, int n_test,
                                 RngState& rng);

/// Direct lookup of the label from leaf features, bypassing any model.
int tree_neighbors_match_oracle(const Graph& g);

/// Circulant-skip-link graphs: cycle plus skip-s chords, one class per
/// skip length, per_class independently relabeled copies each.
Dataset gen_csl(int n_nodes, const std::vector<int>& skips, int per_class,
                RngState& rng);
std::vector<int> csl_default_skips();

enum class FeatureMode { gaussian, constant };

Graph gen_random_graph(int n, double p, FeatureMode mode, int feature_dim,
                       RngState& rng);

/// Relabels nodes by pi: node v becomes pi[v]. Throws if pi is not a
/// bijection on [0, N).
Graph permute(const Graph& g, const std::vector<int>& pi);

std::vector<int> random_permutation(int n, RngState& rng);

/// 1-WL color refinement from uniform initial colors. Returns the sorted
/// (color, count) histogram after min(max_iters, N) rounds, which is at
/// or past the refinement fixpoint; colors are content-derived hashes so
/// histograms are comparable across graphs. max_iters <= 0 means N rounds.
std::vector<std::pair<std::uint64_t, int>> wl1(const Graph& g,
                                               int max_iters = 0);

bool wl1_equivalent(const Graph& a, const Graph& b, int max_iters = 0);

/// JSON dataset container, the CLI's sole ingestion path. Parse errors
/// carry the offending graph id or field.
Dataset load_graph_json(const std::string& path);
void save_graph_json(const Dataset& ds, const std::string& path);

}  // namespace srf

#endif  // SRF_GRAPH_HPP
