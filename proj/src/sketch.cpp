#include "srf/sketch.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace srf {

std::string to_string(SketchKind kind) {
  switch (kind) {
    case SketchKind::dense_ag: return "dense_ag";
    case SketchKind::srm_ag: return "srm_ag";
    case SketchKind::identity: return "identity";
  }
  return "unknown";
}

SketchKind sketch_kind_from_string(const std::string& name) {
  if (name == "dense_ag") return SketchKind::dense_ag;
  if (name == "srm_ag") return SketchKind::srm_ag;
  if (name == "identity") return SketchKind::identity;
  throw std::invalid_argument("unknown sketch kind: " + name);
}

Eigen::MatrixXd apply_ag(const Eigen::MatrixXd& phi, RngState& rng) {
  return detail::apply_ag_with(phi, [&rng] { return rng.next_gaussian(); });
}

Eigen::MatrixXd apply_korder(const Eigen::MatrixXd& phi, int k,
                             RngState& rng) {
  if (k < 1) throw std::invalid_argument("apply_korder: k must be positive");
  Eigen::MatrixXd z(phi.rows(), k * phi.cols());
  for (int m = 0; m < k; ++m) {
    RngState block = rng.split(m);
    z.middleCols(m * phi.cols(), phi.cols()) = apply_ag(phi, block);
  }
  return z;
}

Eigen::MatrixXd apply_srm_ag(const Eigen::MatrixXd& phi, RngState& rng) {
  const auto srm =
      StructuredRandomMatrix::sample(rng, static_cast<int>(phi.rows()));
  return detail::apply_srm_ag_with(phi, srm,
                                   [&rng] { return rng.next_gaussian(); });
}

Eigen::MatrixXd apply_sketch(const Eigen::MatrixXd& phi,
                             const SketchOperator& op) {
  if (op.order < 1) {
    throw std::invalid_argument("sketch: order must be positive");
  }
  if (op.kind == SketchKind::identity) {
    if (op.order != 1) {
      throw std::invalid_argument("sketch: identity kind forces order 1");
    }
    return phi;
  }
  RngState rng(op.seed, streams::sketch);
  if (op.kind == SketchKind::dense_ag) {
    return apply_korder(phi, op.order, rng);
  }
  Eigen::MatrixXd z(phi.rows(), op.order * phi.cols());
  for (int m = 0; m < op.order; ++m) {
    RngState block = rng.split(m);
    z.middleCols(m * phi.cols(), phi.cols()) = apply_srm_ag(phi, block);
  }
  return z;
}

Eigen::MatrixXd effective_features(const Graph& g) {
  const auto& x = g.features;
  bool featureless = x.cols() == 0;
  if (!featureless && g.num_nodes > 1) {
    featureless = true;
    for (Eigen::Index v = 1; v < x.rows() && featureless; ++v) {
      if (x.row(v) != x.row(0)) featureless = false;
    }
  }
  if (featureless) return Eigen::MatrixXd::Ones(g.num_nodes, 1);
  return x;
}

SrfEmbedding compute_srf(const Graph& g, const FeatureMap& map,
                         const SketchOperator& op) {
  // The identical-rows degeneration only matters when the map was fitted
  // for the constant input; a dataset-level map keeps the raw width.
  Eigen::MatrixXd x = effective_features(g);
  if (x.cols() != map.input_dim && g.feature_dim() == map.input_dim) {
    x = g.features;
  }
  const Eigen::MatrixXd phi = embed(map, x);
  SrfEmbedding out;
  out.z = apply_sketch(phi, op);
  out.graph_id = g.id;
  out.kernel = {map.kind.family, map.output_dim, map.kind.bandwidth};
  out.sketch = op;
  out.map_seed = map.seed;
  out.bandwidth_used = map.kind.bandwidth;
  return out;
}

SrfEmbedding compute_srf(const Graph& g, const SrfConfig& cfg) {
  const Eigen::MatrixXd x = effective_features(g);
  KernelKind kind{cfg.kernel.family, cfg.kernel.bandwidth};
  if (kind.family != KernelFamily::linear && cfg.kernel.bandwidth <= 0.0) {
    kind.bandwidth =
        x.rows() < 2 ? 1.0 : median_bandwidth(x, kind.family).value;
  }
  RngState map_rng(cfg.map_seed, streams::feature_map);
  const FeatureMap map = fit_feature_map(
      map_rng, kind, static_cast<int>(x.cols()), cfg.kernel.feature_dim);
  SrfEmbedding out = compute_srf(g, map, cfg.sketch);
  out.kernel = cfg.kernel;
  out.bandwidth_used = kind.bandwidth;
  return out;
}

std::vector<SrfEmbedding> srf_for_dataset(const Dataset& ds,
                                          const SrfConfig& cfg) {
  std::vector<SrfEmbedding> out;
  if (ds.graphs.empty()) return out;

  const int f_eff = std::max(1, ds.graphs[0].feature_dim());
  KernelKind kind{cfg.kernel.family, cfg.kernel.bandwidth};
  if (kind.family != KernelFamily::linear && cfg.kernel.bandwidth <= 0.0) {
    // Pool node rows across graphs (capped) for one dataset-level median.
    Eigen::Index rows = 0;
    constexpr Eigen::Index kCap = 2048;
    for (const auto& g : ds.graphs) {
      rows += g.num_nodes;
      if (rows >= kCap) break;
    }
    rows = std::min(rows, kCap);
    Eigen::MatrixXd pool(rows, f_eff);
    Eigen::Index at = 0;
    for (const auto& g : ds.graphs) {
      if (at >= rows) break;
      const Eigen::MatrixXd x = g.feature_dim() == 0
                                    ? Eigen::MatrixXd::Ones(g.num_nodes, 1)
                                    : g.features;
      const Eigen::Index take = std::min<Eigen::Index>(x.rows(), rows - at);
      pool.middleRows(at, take) = x.topRows(take);
      at += take;
    }
    kind.bandwidth = rows < 2 ? 1.0 : median_bandwidth(pool, kind.family).value;
  } else if (kind.bandwidth <= 0.0) {
    kind.bandwidth = 1.0;
  }

  RngState map_rng(cfg.map_seed, streams::feature_map);
  const FeatureMap map =
      fit_feature_map(map_rng, kind, f_eff, cfg.kernel.feature_dim);

  out.reserve(ds.graphs.size());
  for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
    SketchOperator op = cfg.sketch;
    op.seed = derive_seed(cfg.sketch.seed, i);
    SrfEmbedding e = compute_srf(ds.graphs[i], map, op);
    e.kernel = cfg.kernel;
    e.kernel.bandwidth = kind.bandwidth;
    e.map_seed = cfg.map_seed;
    e.bandwidth_used = kind.bandwidth;
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

using nlohmann::json;

json kernel_config_to_json(const KernelConfig& kc) {
  return {{"family", to_string(kc.family)},
          {"feature_dim", kc.feature_dim},
          {"bandwidth", kc.bandwidth}};
}

KernelConfig kernel_config_from_json(const json& j) {
  KernelConfig kc;
  kc.family = kernel_family_from_string(j.at("family").get<std::string>());
  kc.feature_dim = j.at("feature_dim").get<int>();
  kc.bandwidth = j.at("bandwidth").get<double>();
  return kc;
}

json sketch_op_to_json(const SketchOperator& op) {
  return {{"kind", to_string(op.kind)},
          {"order", op.order},
          {"seed", op.seed}};
}

SketchOperator sketch_op_from_json(const json& j) {
  SketchOperator op;
  op.kind = sketch_kind_from_string(j.at("kind").get<std::string>());
  op.order = j.at("order").get<int>();
  op.seed = j.at("seed").get<std::uint64_t>();
  return op;
}

}  // namespace

void save_embeddings_json(const std::vector<SrfEmbedding>& embeddings,
                          const std::string& dataset_path,
                          const std::string& path) {
  json root;
  root["dataset"] = dataset_path;
  json items = json::array();
  for (const auto& e : embeddings) {
    json je;
    je["graph_id"] = e.graph_id;
    je["kernel"] = kernel_config_to_json(e.kernel);
    je["sketch"] = sketch_op_to_json(e.sketch);
    je["map_seed"] = e.map_seed;
    je["bandwidth_used"] = e.bandwidth_used;
    je["n"] = e.z.rows();
    je["width"] = e.z.cols();
    json z = json::array();
    for (Eigen::Index i = 0; i < e.z.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < e.z.cols(); ++j) row.push_back(e.z(i, j));
      z.push_back(std::move(row));
    }
    je["z"] = std::move(z);
    items.push_back(std::move(je));
  }
  root["embeddings"] = std::move(items);

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write embeddings: " + path);
    out << root.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

EmbeddingFile load_embeddings_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embeddings: " + path);
  json root;
  try {
    in >> root;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("parse error in " + path + ": " + e.what());
  }
  EmbeddingFile file;
  try {
    file.dataset_path = root.value("dataset", "");
    for (const auto& je : root.at("embeddings")) {
      SrfEmbedding e;
      e.graph_id = je.at("graph_id").get<std::string>();
      e.kernel = kernel_config_from_json(je.at("kernel"));
      e.sketch = sketch_op_from_json(je.at("sketch"));
      e.map_seed = je.at("map_seed").get<std::uint64_t>();
      e.bandwidth_used = je.at("bandwidth_used").get<double>();
      const int n = je.at("n").get<int>();
      const int width = je.at("width").get<int>();
      const auto& z = je.at("z");
      if (static_cast<int>(z.size()) != n) {
        throw std::runtime_error("embedding row count mismatch");
      }
      e.z = Eigen::MatrixXd(n, width);
      for (int i = 0; i < n; ++i) {
        if (static_cast<int>(z[i].size()) != width) {
          throw std::runtime_error("ragged embedding rows");
        }
        for (int j = 0; j < width; ++j) e.z(i, j) = z[i][j].get<double>();
      }
      file.embeddings.push_back(std::move(e));
    }
  } catch (const std::exception& e) {
    throw std::runtime_error("parse error in " + path + ": " + e.what());
  }
  return file;
}

}  // namespace srf
