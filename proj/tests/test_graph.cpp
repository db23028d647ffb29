#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "srf/graph.hpp"
#include "srf/rng.hpp"

using namespace srf;

namespace {

Graph triangle() {
  Graph g;
  g.num_nodes = 3;
  g.edges = {{0, 1}, {1, 2}, {0, 2}};
  g.features = Eigen::MatrixXd(3, 0);
  g.finalize();
  return g;
}

Graph path3() {
  Graph g;
  g.num_nodes = 3;
  g.edges = {{0, 1}, {1, 2}};
  g.features = Eigen::MatrixXd(3, 0);
  g.finalize();
  return g;
}

std::vector<int> sorted_degrees(const Graph& g) {
  std::vector<int> deg;
  for (int v = 0; v < g.num_nodes; ++v) deg.push_back(g.degree(v));
  std::sort(deg.begin(), deg.end());
  return deg;
}

}  // namespace

TEST_SUITE_BEGIN("graph");

TEST_CASE("graph invariants are enforced") {
  Graph g;
  g.num_nodes = 3;
  g.edges = {{1, 0}, {0, 1}, {2, 1}};  // unsorted + duplicate
  g.features = Eigen::MatrixXd(3, 0);
  g.finalize();
  CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
  CHECK(g.degree(1) == 2);

  Graph bad = g;
  bad.edges.push_back({2, 2});
  CHECK_THROWS_AS(bad.finalize(), std::invalid_argument);
  Graph oob = g;
  oob.edges.push_back({0, 7});
  CHECK_THROWS_AS(oob.finalize(), std::invalid_argument);
}

TEST_CASE("tree-nm structure at small depths") {
  RngState rng(1);
  const Dataset ds = gen_tree_neighbors_match(2, 10, 5, rng);
  CHECK(ds.graphs.size() == 15);
  CHECK(ds.train_idx.size() == 10);
  CHECK(ds.test_idx.size() == 5);
  CHECK(ds.num_classes == 4);
  for (const auto& g : ds.graphs) {
    CHECK(g.num_nodes == 7);
    int leaves = 0;
    for (int v = 0; v < g.num_nodes; ++v) leaves += g.degree(v) == 1;
    CHECK(leaves == 4);
    CHECK(g.degree(0) == 2);  // root
  }

  RngState rng3(2);
  const Dataset ds3 = gen_tree_neighbors_match(3, 4, 0, rng3);
  for (const auto& g : ds3.graphs) CHECK(g.num_nodes == 15);

  RngState bad(3);
  CHECK_THROWS_AS(gen_tree_neighbors_match(1, 4, 0, bad),
                  std::invalid_argument);
  CHECK_THROWS_AS(gen_tree_neighbors_match(9, 4, 0, bad),
                  std::invalid_argument);
}

TEST_CASE("tree-nm labels match the direct leaf oracle") {
  RngState rng(4);
  for (int depth : {2, 3, 4}) {
    const Dataset ds = gen_tree_neighbors_match(depth, 50, 0, rng);
    for (const auto& g : ds.graphs) {
      REQUIRE(g.label.has_value());
      CHECK(*g.label == tree_neighbors_match_oracle(g));
    }
  }
}

TEST_CASE("csl structure and defaults") {
  RngState rng(5);
  const Dataset ds = gen_csl(41, csl_default_skips(), 15, rng);
  CHECK(ds.graphs.size() == 150);
  CHECK(ds.num_classes == 10);
  CHECK(ds.train_idx.size() == 90);
  CHECK(ds.val_idx.size() == 30);
  CHECK(ds.test_idx.size() == 30);
  for (const auto& g : ds.graphs) {
    CHECK(g.num_nodes == 41);
    CHECK(g.num_edges() == 82);
    for (int v = 0; v < g.num_nodes; ++v) CHECK(g.degree(v) == 4);
  }

  RngState bad(6);
  CHECK_THROWS_AS(gen_csl(41, {1, 2}, 3, bad), std::invalid_argument);
  CHECK_THROWS_AS(gen_csl(41, {2, 21}, 3, bad), std::invalid_argument);
  CHECK_THROWS_AS(gen_csl(41, {2, 2}, 3, bad), std::invalid_argument);
}

TEST_CASE("csl copies of one class are relabelings of each other") {
  RngState rng(7);
  const Dataset ds = gen_csl(11, {2, 3}, 4, rng);
  const Graph& a = ds.graphs[0];
  const Graph& b = ds.graphs[1];
  CHECK(a.label == b.label);
  CHECK(sorted_degrees(a) == sorted_degrees(b));
  CHECK(wl1_equivalent(a, b));
}

TEST_CASE("csl classes are 1-WL indistinguishable") {
  RngState rng(8);
  const Dataset ds = gen_csl(41, {2, 3}, 1, rng);
  CHECK(wl1_equivalent(ds.graphs[0], ds.graphs[1]));
}

TEST_CASE("gnp edge counts near the binomial mean") {
  RngState rng(9);
  const Graph g = gen_random_graph(100, 0.05, FeatureMode::gaussian, 4, rng);
  // mean 247.5, sd ~15.3
  CHECK(g.num_edges() > 247.5 - 4 * 15.4);
  CHECK(g.num_edges() < 247.5 + 4 * 15.4);
  CHECK(g.features.rows() == 100);
  CHECK(g.features.cols() == 4);

  RngState c1(10), c2(10);
  const Graph a = gen_random_graph(30, 0.2, FeatureMode::constant, 2, c1);
  const Graph b = gen_random_graph(30, 0.2, FeatureMode::constant, 2, c2);
  CHECK(a == b);  // determinism
  for (int v = 1; v < a.num_nodes; ++v) {
    CHECK(a.features.row(v) == a.features.row(0));
  }

  RngState bad(11);
  CHECK_THROWS_AS(gen_random_graph(10, 0.0, FeatureMode::constant, 1, bad),
                  std::invalid_argument);
  CHECK_THROWS_AS(gen_random_graph(10, 1.0, FeatureMode::constant, 1, bad),
                  std::invalid_argument);
}

TEST_CASE("permute round trips and identities") {
  RngState rng(12);
  const Graph g = gen_random_graph(12, 0.3, FeatureMode::gaussian, 3, rng);

  std::vector<int> identity(12);
  for (int i = 0; i < 12; ++i) identity[i] = i;
  CHECK(permute(g, identity) == g);

  Graph two;
  two.num_nodes = 2;
  two.edges = {{0, 1}};
  two.features = Eigen::MatrixXd(2, 0);
  two.finalize();
  const Graph swapped = permute(two, {1, 0});
  CHECK(swapped.edges == two.edges);

  const auto pi = random_permutation(12, rng);
  std::vector<int> inv(12);
  for (int i = 0; i < 12; ++i) inv[pi[i]] = i;
  CHECK(permute(permute(g, pi), inv) == g);

  CHECK_THROWS_AS(permute(g, std::vector<int>{0, 0, 1}),
                  std::invalid_argument);
  std::vector<int> repeat(12, 3);
  CHECK_THROWS_AS(permute(g, repeat), std::invalid_argument);
}

TEST_CASE("wl1 separates what degree refinement separates") {
  CHECK_FALSE(wl1_equivalent(triangle(), path3()));
  CHECK(wl1(triangle()).size() == 1);   // uniform colors
  CHECK(wl1(path3()).size() == 2);      // endpoints vs middle
}

TEST_CASE("wl1 is isomorphism and permutation invariant") {
  RngState rng(13);
  for (int t = 0; t < 10; ++t) {
    const Graph g =
        gen_random_graph(20, 0.2, FeatureMode::constant, 0, rng);
    const Graph h = permute(g, random_permutation(20, rng));
    CHECK(wl1(g) == wl1(h));
  }
}

TEST_CASE("wl1 distinguishes regular graphs of different degree") {
  RngState rng(14);
  const Dataset cycles = gen_csl(11, {2}, 1, rng);  // 4-regular
  Graph ring;  // 2-regular
  ring.num_nodes = 11;
  for (int i = 0; i < 11; ++i) ring.edges.push_back({i, (i + 1) % 11});
  ring.features = Eigen::MatrixXd(11, 0);
  ring.finalize();
  CHECK_FALSE(wl1_equivalent(cycles.graphs[0], ring));
}

TEST_CASE("json round trips") {
  const std::string path = "/tmp/srf_test_ds.json";

  Dataset empty;
  empty.task = TaskKind::graph_classification;
  empty.num_classes = 0;
  save_graph_json(empty, path);
  const Dataset empty2 = load_graph_json(path);
  CHECK(empty2.graphs.empty());

  Dataset small;
  small.task = TaskKind::node_classification;
  small.num_classes = 2;
  Graph g;
  g.id = "pair";
  g.num_nodes = 2;
  g.edges = {{0, 1}};
  g.features = Eigen::MatrixXd(2, 2);
  g.features << 0.25, -1.75, 3.5, 0.125;
  g.node_labels = {0, 1};
  g.finalize();
  small.graphs.push_back(g);
  small.train_idx = {0};
  save_graph_json(small, path);
  const Dataset small2 = load_graph_json(path);
  CHECK(small2.graphs[0] == small.graphs[0]);
  CHECK(small2.task == TaskKind::node_classification);
  CHECK(small2.train_idx == std::vector<int>{0});

  RngState rng(15);
  Dataset ten;
  ten.task = TaskKind::graph_classification;
  ten.num_classes = 3;
  for (int t = 0; t < 10; ++t) {
    Graph r = gen_random_graph(8, 0.4, FeatureMode::gaussian, 3, rng);
    r.id = "g" + std::to_string(t);
    r.label = t % 3;
    ten.graphs.push_back(std::move(r));
    ten.train_idx.push_back(t);
  }
  save_graph_json(ten, path);
  const Dataset ten2 = load_graph_json(path);
  REQUIRE(ten2.graphs.size() == 10);
  for (int t = 0; t < 10; ++t) {
    CHECK(ten2.graphs[t] == ten.graphs[t]);
  }
  std::filesystem::remove(path);
}

TEST_CASE("json loader reports malformed input") {
  const std::string path = "/tmp/srf_test_bad.json";
  auto write = [&](const std::string& text) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs(text.c_str(), f);
    std::fclose(f);
  };

  write("not json at all {{{");
  CHECK_THROWS_AS(load_graph_json(path), std::runtime_error);

  write(R"({"task":"graph_classification","num_classes":1,
        "graphs":[{"id":"bad","n":2,"edges":[[0,5]],"x":[[],[]]}]})");
  CHECK_THROWS_WITH_AS(load_graph_json(path),
                       doctest::Contains("bad"), std::runtime_error);

  write(R"({"task":"graph_classification","num_classes":1,
        "graphs":[{"id":"ragged","n":2,"edges":[[0,1]],"x":[[1.0],[1.0,2.0]]}]})");
  CHECK_THROWS_WITH_AS(load_graph_json(path),
                       doctest::Contains("ragged"), std::runtime_error);

  CHECK_THROWS_AS(load_graph_json("/tmp/definitely_missing_file.json"),
                  std::runtime_error);
  std::filesystem::remove(path);
}

TEST_CASE("dataset validation rejects bad splits and labels") {
  Dataset ds;
  ds.num_classes = 2;
  Graph g;
  g.num_nodes = 1;
  g.features = Eigen::MatrixXd(1, 0);
  g.label = 1;
  g.finalize();
  ds.graphs.push_back(g);
  ds.train_idx = {0};
  ds.validate();

  Dataset overlap = ds;
  overlap.test_idx = {0};
  CHECK_THROWS_AS(overlap.validate(), std::invalid_argument);

  Dataset range = ds;
  range.train_idx = {1};
  CHECK_THROWS_AS(range.validate(), std::invalid_argument);

  Dataset label = ds;
  label.graphs[0].label = 5;
  CHECK_THROWS_AS(label.validate(), std::invalid_argument);
}

TEST_SUITE_END();
