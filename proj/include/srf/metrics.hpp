#ifndef SRF_METRICS_HPP
#define SRF_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "srf/gnn.hpp"
#include "srf/graph.hpp"
#include "srf/kernels.hpp"
#include "srf/sketch.hpp"

namespace srf {

inline constexpr const char* kVersion = "0.1.0";

/// FNV-1a over a canonical string, for CSV provenance columns.
std::uint64_t fnv1a_hash(const std::string& text);

struct PropReport {
  std::string id;
  std::string detail;
  std::int64_t trials = 0;
  double statistic = 0.0;
  double standard_error = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::uint64_t seed = 0;
};

std::string prop_reports_to_json(const std::vector<PropReport>& reports);
void write_prop_reports_json(const std::vector<PropReport>& reports,
                             const std::string& path);

// ---------------------------------------------------------------------
// Proposition harnesses
// ---------------------------------------------------------------------

struct UnbiasednessOptions {
  KernelFamily family = KernelFamily::rbf;
  SketchKind sketch = SketchKind::dense_ag;
  int n = 32;
  int f = 8;
  int d = 8;
  int pairs = 10;
  std::int64_t trials = 20000;
  double threshold_sigmas = 4.0;
  std::uint64_t seed = 1;
};

/// Prop 1: mean of z_i'z_j over joint (feature map, sketch) draws vs the
/// exact kernel; statistic is the max standardized deviation over pairs.
PropReport check_unbiasedness(const UnbiasednessOptions& opts);

struct DistortionReport {
  int n = 0;
  int pair_count = 0;
  int skipped = 0;  // degenerate pairs with phi_i = phi_j
  double q01 = 0.0, q50 = 0.0, q99 = 0.0;  // ratio quantiles
  double fitted_c = 0.0;       // 99th percentile of |ratio - 1|
  double fraction_in_band = 0.0;  // within [1 - 4/sqrt(N), 1 + 4/sqrt(N)]
};

struct DistortionOptions {
  KernelFamily family = KernelFamily::rbf;
  int f = 8;
  int d = 8;
  std::vector<int> n_list = {64, 256, 1024};
  int pairs_per_n = 200;
  std::uint64_t seed = 1;
};

struct DistortionResult {
  std::vector<DistortionReport> reports;
  double slope = 0.0;  // log-log slope of fitted_c vs N
  PropReport summary;
};

/// Prop 2: ratio |z_i - z_j| / |phi_i - phi_j| statistics per N plus the
/// decay slope of the fitted c.
DistortionResult check_distortion(const DistortionOptions& opts);

struct CrossNodeOptions {
  int n = 8;
  int d = 3;
  double delta = 1e-3;
  std::uint64_t seed = 1;
};

/// Prop 3: perturbing row p of Phi moves every z_i by G_ip * delta /
/// sqrt(N); checks the realized sensitivities against the regenerated G
/// and that all are nonzero.
PropReport check_cross_node(const CrossNodeOptions& opts);

struct UniquenessOptions {
  SketchKind sketch = SketchKind::dense_ag;
  int n = 64;
  int d = 8;
  int k = 1;
  int draws = 100;
  std::uint64_t seed = 1;
};

/// Prop 4: constant node features, min pairwise row distance > 0 in every
/// draw; statistic is the smallest distance seen.
PropReport check_uniqueness(const UniquenessOptions& opts);

struct EquivarianceOptions {
  KernelFamily family = KernelFamily::rbf;
  int n = 32;
  int f = 8;
  int d = 8;
  std::vector<std::int64_t> m_list = {100, 1000, 10000};
  int reps = 3;
  double threshold_sigmas = 6.0;
  std::uint64_t seed = 1;
  bool force_identity_perm = false;  // test hook: Delta must be exactly 0
};

struct EquivarianceResult {
  std::vector<double> delta_per_m;  // averaged over reps
  double slope = 0.0;
  double max_standardized = 0.0;  // at the largest M
  PropReport summary;
};

/// Prop 5: Delta(M) = max-entry |mean_M srf(P X) - P mean_M srf(X)| with a
/// shared fitted feature map, resampling only the sketch.
EquivarianceResult check_equivariance(const EquivarianceOptions& opts);

struct SrmAgreementOptions {
  std::vector<int> n_list = {3, 8, 17, 32, 64};
  int d = 5;
  int vectors = 100;
  double tolerance = 1e-10;
  std::uint64_t seed = 1;
};

/// Appendix check: SRM fast apply vs dense materialization.
PropReport check_srm_agreement(const SrmAgreementOptions& opts);

// ---------------------------------------------------------------------
// Synthetic experiments
// ---------------------------------------------------------------------

struct VariantSpec {
  std::string name;           // "baseline", "ablation", "ag1", ...
  bool use_srf = false;
  KernelFamily family = KernelFamily::laplacian;
  SketchKind sketch = SketchKind::dense_ag;
  int k = 1;
  int d = 64;
  int width() const { return use_srf ? k * d : 0; }
  std::string kernel_name() const {
    return use_srf ? to_string(family) : "";
  }
};

/// Table-1 style variant grid: baseline, identity ablation, and
/// S_AG^(1)/S_AG^(8) for the three kernels (k*D = 64 throughout).
std::vector<VariantSpec> expressiveness_variants();
/// Oversquashing default set: baseline, ablation, and one k=4 sketch per
/// kernel.
std::vector<VariantSpec> oversquash_variants();

struct BenchRow {
  std::string variant;
  std::string kernel;
  int k = 0;
  int r = 0;      // oversquashing radius (0 elsewhere)
  int seed = 0;
  double accuracy = 0.0;
};

struct ExpressivenessOptions {
  int n_nodes = 41;
  std::vector<int> skips = csl_default_skips();
  int per_class = 15;
  int seeds = 5;
  std::uint64_t base_seed = 1;
  std::vector<VariantSpec> variants = expressiveness_variants();
  int layers = 4;
  int hidden = 32;
  double learning_rate = 3e-3;
  int epochs = 200;
  int batch_size = 30;
  int early_stop_plateau = 25;
  int threads = 0;  // 0 = library default
};

std::vector<BenchRow> run_expressiveness(const ExpressivenessOptions& opts);

struct OversquashOptions {
  std::vector<int> r_list = {2, 3, 5, 6};
  int n_train = 4000;
  int n_test = 500;
  int seeds = 3;
  std::uint64_t base_seed = 1;
  std::vector<VariantSpec> variants = oversquash_variants();
  int hidden = 32;
  double learning_rate = 3e-3;
  int epochs_shallow = 15;  // r <= 3
  int epochs_deep = 50;     // r >= 4
  int batch_size = 64;
  int threads = 0;
};

std::vector<BenchRow> run_oversquashing(const OversquashOptions& opts);

struct EnergyRow {
  std::string variant;
  int k = 0;
  int layer = 0;
  int seed = 0;
  double energy = 0.0;
};

struct OversmoothOptions {
  int depth = 32;
  int n = 200;
  double p = 0.05;
  int f = 32;
  int d = 16;                       // per-block D; width grows with k
  std::vector<int> k_list = {1, 2, 4, 8};
  int seeds = 5;
  int hidden = 32;
  std::uint64_t base_seed = 1;
};

/// Untrained depth-`depth` models on G(n, p) with N(0,1) features; rows
/// hold the per-layer Dirichlet energies for baseline, ablation and the
/// laplacian-kernel k sweep.
std::vector<EnergyRow> run_oversmoothing(const OversmoothOptions& opts);

// ---------------------------------------------------------------------
// CSV output (all files carry config_hash and version columns)
// ---------------------------------------------------------------------

void write_expressiveness_csv(const std::vector<BenchRow>& rows,
                              std::uint64_t config_hash,
                              const std::string& path);
void write_oversquash_csv(const std::vector<BenchRow>& rows,
                          std::uint64_t config_hash, const std::string& path);
void write_oversmooth_csv(const std::vector<EnergyRow>& rows,
                          std::uint64_t config_hash, const std::string& path);

}  // namespace srf

#endif  // SRF_METRICS_HPP
