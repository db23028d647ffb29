#ifndef SRF_SKETCH_HPP
#define SRF_SKETCH_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "srf/graph.hpp"
#include "srf/kernels.hpp"
#include "srf/rng.hpp"
#include "srf/srm.hpp"

namespace srf {

enum class SketchKind { dense_ag, srm_ag, identity };

std::string to_string(SketchKind kind);
SketchKind sketch_kind_from_string(const std::string& name);

/// Cross-node sketch spec. The identity kind forces order 1; output width
/// is order * D for input width D.
struct SketchOperator {
  SketchKind kind = SketchKind::dense_ag;
  int order = 1;  // k
  std::uint64_t seed = 0;
};

namespace detail {

/// Additive Gaussian sketch with an injectable noise source: rows of G are
/// drawn row-by-row, applied and discarded, never materialized, so memory
/// stays O(N*D).
template <class NoiseFn>
Eigen::MatrixXd apply_ag_with(const Eigen::MatrixXd& phi, NoiseFn&& noise) {
  const Eigen::Index n = phi.rows();
  Eigen::MatrixXd z = phi;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::RowVectorXd acc(phi.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    acc.setZero();
    for (Eigen::Index p = 0; p < n; ++p) {
      acc += noise() * phi.row(p);
    }
    z.row(i) += scale * acc;
  }
  return z;
}

/// SRM-backed sketch with injectable scaling-diagonal noise. The structured
/// surrogate for G/sqrt(N) is S * diag(g) with S a 3-block sign SD-product
/// and g i.i.d. N(0,1), matching the dense sketch's second moments while
/// applying in O(N log N) per column.
template <class NoiseFn>
Eigen::MatrixXd apply_srm_ag_with(const Eigen::MatrixXd& phi,
                                  const StructuredRandomMatrix& srm,
                                  NoiseFn&& diag_noise) {
  const Eigen::Index n = phi.rows();
  Eigen::VectorXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) g[i] = diag_noise();
  return phi + srm.apply_columns(g.asDiagonal() * phi);
}

}  // namespace detail

/// (I + G/sqrt(N)) Phi with fresh i.i.d. N(0,1) G; Phi is left unmodified.
Eigen::MatrixXd apply_ag(const Eigen::MatrixXd& phi, RngState& rng);

/// Horizontal concatenation of k independent AG sketches; block m draws
/// from rng.split(m), so any block is recoverable standalone.
Eigen::MatrixXd apply_korder(const Eigen::MatrixXd& phi, int k, RngState& rng);

/// Structured variant of apply_ag; agrees with a dense materialization of
/// its operator to within round-off and costs O(N log N) per column.
Eigen::MatrixXd apply_srm_ag(const Eigen::MatrixXd& phi, RngState& rng);

/// Dispatch on the operator spec: k blocks from split streams of
/// RngState(op.seed, streams::sketch). Identity returns Phi (order must
/// be 1).
Eigen::MatrixXd apply_sketch(const Eigen::MatrixXd& phi,
                             const SketchOperator& op);

struct KernelConfig {
  KernelFamily family = KernelFamily::rbf;
  int feature_dim = 16;  // D
  double bandwidth = 0.0;  // <= 0 means median heuristic
};

struct SrfConfig {
  KernelConfig kernel;
  SketchOperator sketch;
  std::uint64_t map_seed = 0;
};

/// Z = S^(k)(E(X)) plus the provenance needed to recompute it.
struct SrfEmbedding {
  Eigen::MatrixXd z;  // N x (k*D)
  std::string graph_id;
  KernelConfig kernel;
  SketchOperator sketch;
  std::uint64_t map_seed = 0;
  double bandwidth_used = 1.0;
  int width() const { return static_cast<int>(z.cols()); }
};

/// Features used by the SRF pipeline: the graph's own features, except
/// that featureless inputs (F = 0 or all rows identical) degenerate to a
/// constant 1 per node.
Eigen::MatrixXd effective_features(const Graph& g);

SrfEmbedding compute_srf(const Graph& g, const FeatureMap& map,
                         const SketchOperator& op);
SrfEmbedding compute_srf(const Graph& g, const SrfConfig& cfg);

/// Embeddings for a whole dataset: one feature map fitted per dataset
/// (bandwidth from pooled rows), independent per-graph sketch streams
/// derived from cfg.sketch.seed and the graph index.
std::vector<SrfEmbedding> srf_for_dataset(const Dataset& ds,
                                          const SrfConfig& cfg);

/// Sidecar container: embeddings for every graph of a dataset, keyed by
/// graph id, with seeds and configs recorded.
void save_embeddings_json(const std::vector<SrfEmbedding>& embeddings,
                          const std::string& dataset_path,
                          const std::string& path);
struct EmbeddingFile {
  std::string dataset_path;
  std::vector<SrfEmbedding> embeddings;
};
EmbeddingFile load_embeddings_json(const std::string& path);

}  // namespace srf

#endif  // SRF_SKETCH_HPP
