#include "srf/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace srf {

namespace {

std::uint64_t hash_mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return hash_mix(h ^ hash_mix(v));
}

}  // namespace

void Graph::finalize() {
  if (num_nodes < 0) throw std::invalid_argument("graph: negative node count");
  for (auto& [i, j] : edges) {
    if (i == j) {
      throw std::invalid_argument("graph " + id + ": self-loop at node " +
                                  std::to_string(i));
    }
    if (i < 0 || j < 0 || i >= num_nodes || j >= num_nodes) {
      throw std::invalid_argument("graph " + id + ": edge endpoint out of range");
    }
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (features.size() > 0 && features.rows() != num_nodes) {
    throw std::invalid_argument("graph " + id + ": feature row count mismatch");
  }
  if (!node_labels.empty() &&
      node_labels.size() != static_cast<std::size_t>(num_nodes)) {
    throw std::invalid_argument("graph " + id + ": node label count mismatch");
  }

  offsets_.assign(num_nodes + 1, 0);
  for (const auto& [i, j] : edges) {
    ++offsets_[i + 1];
    ++offsets_[j + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adjacency_.assign(offsets_.back(), 0);
  std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [i, j] : edges) {
    adjacency_[cursor[i]++] = j;
    adjacency_[cursor[j]++] = i;
  }
  for (int v = 0; v < num_nodes; ++v) {
    std::sort(adjacency_.begin() + offsets_[v],
              adjacency_.begin() + offsets_[v + 1]);
  }
}

bool Graph::operator==(const Graph& other) const {
  return num_nodes == other.num_nodes && edges == other.edges &&
         features.rows() == other.features.rows() &&
         features.cols() == other.features.cols() &&
         features == other.features && node_labels == other.node_labels &&
         label == other.label && id == other.id;
}

std::string to_string(TaskKind task) {
  return task == TaskKind::graph_classification ? "graph_classification"
                                                : "node_classification";
}

TaskKind task_from_string(const std::string& name) {
  if (name == "graph_classification") return TaskKind::graph_classification;
  if (name == "node_classification") return TaskKind::node_classification;
  throw std::runtime_error("unknown task kind: " + name);
}

void Dataset::validate() const {
  const int n = static_cast<int>(graphs.size());
  std::vector<char> seen(n, 0);
  for (const auto* split : {&train_idx, &val_idx, &test_idx}) {
    for (int idx : *split) {
      if (idx < 0 || idx >= n) {
        throw std::invalid_argument("dataset: split index out of range");
      }
      if (seen[idx]++) {
        throw std::invalid_argument("dataset: splits are not disjoint");
      }
    }
  }
  for (const auto& g : graphs) {
    if (g.label && (*g.label < 0 || *g.label >= num_classes)) {
      throw std::invalid_argument("graph " + g.id + ": label out of range");
    }
    for (int y : g.node_labels) {
      if (y < 0 || y >= num_classes) {
        throw std::invalid_argument("graph " + g.id +
                                    ": node label out of range");
      }
    }
  }
}

namespace {

Graph make_tree_nm_instance(int depth, RngState& rng, const std::string& id) {
  const int leaves = 1 << depth;
  const int nodes = (1 << (depth + 1)) - 1;
  const int first_leaf = leaves - 1;
  const int feature_dim = 2 * leaves;  // [class one-hot | count one-hot]

  Graph g;
  g.num_nodes = nodes;
  g.id = id;
  g.edges.reserve(nodes - 1);
  for (int v = 1; v < nodes; ++v) {
    g.edges.emplace_back((v - 1) / 2, v);
  }
  g.features = Eigen::MatrixXd::Zero(nodes, feature_dim);

  std::vector<int> counts = random_permutation(leaves, rng);
  std::vector<int> classes = random_permutation(leaves, rng);
  const int root_count = static_cast<int>(rng.next_u64() % leaves);
  int label = -1;
  for (int l = 0; l < leaves; ++l) {
    const int v = first_leaf + l;
    g.features(v, classes[l]) = 1.0;
    g.features(v, leaves + counts[l]) = 1.0;
    if (counts[l] == root_count) label = classes[l];
  }
  g.features(0, leaves + root_count) = 1.0;
  g.label = label;
  g.finalize();
  return g;
}

}  // namespace

Dataset gen_tree_neighbors_match(int depth, int n_train, int n_test,
                                 RngState& rng) {
  if (depth < 2 || depth > 8) {
    throw std::invalid_argument("tree-nm: depth must be in [2, 8]");
  }
  if (n_train < 1 || n_test < 0) {
    throw std::invalid_argument("tree-nm: invalid dataset sizes");
  }
  Dataset ds;
  ds.task = TaskKind::graph_classification;
  ds.num_classes = 1 << depth;
  ds.graphs.reserve(n_train + n_test);
  for (int t = 0; t < n_train + n_test; ++t) {
    ds.graphs.push_back(
        make_tree_nm_instance(depth, rng, "tree" + std::to_string(t)));
    (t < n_train ? ds.train_idx : ds.test_idx).push_back(t);
  }
  ds.validate();
  return ds;
}

int tree_neighbors_match_oracle(const Graph& g) {
  const int leaves = g.feature_dim() / 2;
  int root_count = -1;
  for (int c = 0; c < leaves; ++c) {
    if (g.features(0, leaves + c) == 1.0) root_count = c;
  }
  if (root_count < 0) throw std::invalid_argument("tree-nm: malformed root");
  const int first_leaf = leaves - 1;
  for (int l = 0; l < leaves; ++l) {
    const int v = first_leaf + l;
    if (g.features(v, leaves + root_count) == 1.0) {
      for (int c = 0; c < leaves; ++c) {
        if (g.features(v, c) == 1.0) return c;
      }
    }
  }
  throw std::invalid_argument("tree-nm: no matching leaf");
}

std::vector<int> csl_default_skips() {
  return {2, 3, 4, 5, 6, 9, 11, 12, 13, 16};
}

Dataset gen_csl(int n_nodes, const std::vector<int>& skips, int per_class,
                RngState& rng) {
  if (n_nodes < 5) throw std::invalid_argument("csl: need at least 5 nodes");
  if (per_class < 1) throw std::invalid_argument("csl: per_class must be >= 1");
  for (std::size_t a = 0; a < skips.size(); ++a) {
    if (skips[a] < 2 || 2 * skips[a] >= n_nodes) {
      throw std::invalid_argument("csl: skip " + std::to_string(skips[a]) +
                                  " out of range for n=" +
                                  std::to_string(n_nodes));
    }
    for (std::size_t b = a + 1; b < skips.size(); ++b) {
      if (skips[a] == skips[b]) {
        throw std::invalid_argument("csl: duplicate skip length");
      }
    }
  }

  Dataset ds;
  ds.task = TaskKind::graph_classification;
  ds.num_classes = static_cast<int>(skips.size());
  const int n_train = (per_class * 3) / 5;
  const int n_val = per_class / 5;
  for (int cls = 0; cls < ds.num_classes; ++cls) {
    const int s = skips[cls];
    Graph base;
    base.num_nodes = n_nodes;
    for (int i = 0; i < n_nodes; ++i) {
      base.edges.emplace_back(i, (i + 1) % n_nodes);
      base.edges.emplace_back(i, (i + s) % n_nodes);
    }
    base.features = Eigen::MatrixXd(n_nodes, 0);
    base.label = cls;
    base.finalize();
    for (int copy = 0; copy < per_class; ++copy) {
      Graph g = permute(base, random_permutation(n_nodes, rng));
      g.id = "csl_s" + std::to_string(s) + "_" + std::to_string(copy);
      const int idx = static_cast<int>(ds.graphs.size());
      if (copy < n_train) {
        ds.train_idx.push_back(idx);
      } else if (copy < n_train + n_val) {
        ds.val_idx.push_back(idx);
      } else {
        ds.test_idx.push_back(idx);
      }
      ds.graphs.push_back(std::move(g));
    }
  }
  ds.validate();
  return ds;
}

Graph gen_random_graph(int n, double p, FeatureMode mode, int feature_dim,
                       RngState& rng) {
  if (n < 1) throw std::invalid_argument("gnp: need at least one node");
  if (p <= 0.0 || p >= 1.0) {
    throw std::invalid_argument("gnp: p must lie strictly in (0, 1)");
  }
  if (feature_dim < 0) throw std::invalid_argument("gnp: negative feature dim");
  Graph g;
  g.num_nodes = n;
  g.id = "gnp";
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.next_unit() < p) g.edges.emplace_back(i, j);
    }
  }
  if (mode == FeatureMode::gaussian && feature_dim > 0) {
    g.features = sample_matrix(rng, n, feature_dim, Dist::gaussian);
  } else if (feature_dim > 0) {
    g.features = Eigen::MatrixXd::Ones(n, feature_dim);
  } else {
    g.features = Eigen::MatrixXd(n, 0);
  }
  g.finalize();
  return g;
}

Graph permute(const Graph& g, const std::vector<int>& pi) {
  if (pi.size() != static_cast<std::size_t>(g.num_nodes)) {
    throw std::invalid_argument("permute: size mismatch");
  }
  std::vector<char> hit(g.num_nodes, 0);
  for (int v : pi) {
    if (v < 0 || v >= g.num_nodes || hit[v]++) {
      throw std::invalid_argument("permute: not a bijection on [0, N)");
    }
  }
  Graph out;
  out.num_nodes = g.num_nodes;
  out.id = g.id;
  out.label = g.label;
  out.edges.reserve(g.edges.size());
  for (const auto& [i, j] : g.edges) {
    out.edges.emplace_back(pi[i], pi[j]);
  }
  out.features = Eigen::MatrixXd(g.features.rows(), g.features.cols());
  for (int v = 0; v < g.num_nodes; ++v) {
    if (g.features.cols() > 0) out.features.row(pi[v]) = g.features.row(v);
  }
  if (!g.node_labels.empty()) {
    out.node_labels.assign(g.num_nodes, 0);
    for (int v = 0; v < g.num_nodes; ++v) {
      out.node_labels[pi[v]] = g.node_labels[v];
    }
  }
  out.finalize();
  return out;
}

std::vector<int> random_permutation(int n, RngState& rng) {
  std::vector<int> pi(n);
  std::iota(pi.begin(), pi.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_u64() % (i + 1));
    std::swap(pi[i], pi[j]);
  }
  return pi;
}

std::vector<std::pair<std::uint64_t, int>> wl1(const Graph& g, int max_iters) {
  const int n = g.num_nodes;
  std::vector<std::pair<std::uint64_t, int>> hist;
  if (n == 0) return hist;

  // Same round count for every graph of equal size keeps the
  // content-derived colors comparable across graphs.
  int rounds = max_iters > 0 ? std::min(max_iters, n) : n;
  std::vector<std::uint64_t> color(n, 0x517cc1b727220a95ULL);
  std::vector<std::uint64_t> next(n);
  std::vector<std::uint64_t> nbr;
  for (int r = 0; r < rounds; ++r) {
    for (int v = 0; v < n; ++v) {
      nbr.clear();
      for (int u : g.neighbors(v)) nbr.push_back(color[u]);
      std::sort(nbr.begin(), nbr.end());
      std::uint64_t h = hash_combine(0x7761736d, color[v]);
      for (std::uint64_t c : nbr) h = hash_combine(h, c);
      next[v] = h;
    }
    color.swap(next);
  }

  std::sort(color.begin(), color.end());
  for (std::size_t i = 0; i < color.size();) {
    std::size_t j = i;
    while (j < color.size() && color[j] == color[i]) ++j;
    hist.emplace_back(color[i], static_cast<int>(j - i));
    i = j;
  }
  return hist;
}

bool wl1_equivalent(const Graph& a, const Graph& b, int max_iters) {
  return wl1(a, max_iters) == wl1(b, max_iters);
}

namespace {

using nlohmann::json;

json graph_to_json(const Graph& g) {
  json jg;
  jg["id"] = g.id;
  jg["n"] = g.num_nodes;
  json edges = json::array();
  for (const auto& [i, j] : g.edges) edges.push_back({i, j});
  jg["edges"] = std::move(edges);
  json x = json::array();
  for (int v = 0; v < g.num_nodes; ++v) {
    json row = json::array();
    for (int f = 0; f < g.feature_dim(); ++f) row.push_back(g.features(v, f));
    x.push_back(std::move(row));
  }
  jg["x"] = std::move(x);
  if (g.label) jg["y"] = *g.label;
  if (!g.node_labels.empty()) jg["node_y"] = g.node_labels;
  return jg;
}

Graph graph_from_json(const json& jg) {
  Graph g;
  g.id = jg.value("id", "");
  try {
    g.num_nodes = jg.at("n").get<int>();
    for (const auto& e : jg.at("edges")) {
      if (!e.is_array() || e.size() != 2) {
        throw std::runtime_error("edge is not a pair");
      }
      g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    const auto& x = jg.at("x");
    const int rows = static_cast<int>(x.size());
    if (rows != g.num_nodes) {
      throw std::runtime_error("feature row count does not match n");
    }
    const int cols = rows > 0 ? static_cast<int>(x[0].size()) : 0;
    g.features = Eigen::MatrixXd(g.num_nodes, cols);
    for (int v = 0; v < rows; ++v) {
      if (static_cast<int>(x[v].size()) != cols) {
        throw std::runtime_error("ragged feature rows");
      }
      for (int f = 0; f < cols; ++f) g.features(v, f) = x[v][f].get<double>();
    }
    if (jg.contains("y")) g.label = jg.at("y").get<int>();
    if (jg.contains("node_y")) {
      g.node_labels = jg.at("node_y").get<std::vector<int>>();
    }
    g.finalize();
  } catch (const std::exception& e) {
    throw std::runtime_error("graph '" + g.id + "': " + e.what());
  }
  return g;
}

}  // namespace

Dataset load_graph_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  json root;
  try {
    in >> root;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("parse error in " + path + ": " + e.what());
  }
  Dataset ds;
  try {
    ds.task = task_from_string(root.at("task").get<std::string>());
    ds.num_classes = root.at("num_classes").get<int>();
    for (const auto& jg : root.at("graphs")) {
      ds.graphs.push_back(graph_from_json(jg));
    }
    if (root.contains("splits")) {
      const auto& sp = root.at("splits");
      ds.train_idx = sp.value("train", std::vector<int>{});
      ds.val_idx = sp.value("val", std::vector<int>{});
      ds.test_idx = sp.value("test", std::vector<int>{});
    }
    ds.validate();
  } catch (const std::exception& e) {
    throw std::runtime_error("parse error in " + path + ": " + e.what());
  }
  return ds;
}

void save_graph_json(const Dataset& ds, const std::string& path) {
  json root;
  root["task"] = to_string(ds.task);
  root["num_classes"] = ds.num_classes;
  json graphs = json::array();
  for (const auto& g : ds.graphs) graphs.push_back(graph_to_json(g));
  root["graphs"] = std::move(graphs);
  root["splits"] = {{"train", ds.train_idx},
                    {"val", ds.val_idx},
                    {"test", ds.test_idx}};

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path);
    out << root.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace srf
