#include "srf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace srf {

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string prop_reports_to_json(const std::vector<PropReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    arr.push_back({{"id", r.id},
                   {"detail", r.detail},
                   {"trials", r.trials},
                   {"statistic", r.statistic},
                   {"standard_error", r.standard_error},
                   {"threshold", r.threshold},
                   {"passed", r.passed},
                   {"seed", r.seed},
                   {"version", kVersion}});
  }
  return arr.dump(2);
}

void write_prop_reports_json(const std::vector<PropReport>& reports,
                             const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << prop_reports_to_json(reports) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

namespace {

std::vector<std::pair<int, int>> draw_pairs(RngState& rng, int n, int count) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(count);
  while (static_cast<int>(pairs.size()) < count) {
    const int i = static_cast<int>(rng.next_u64() % n);
    int j = static_cast<int>(rng.next_u64() % (n - 1));
    if (j >= i) ++j;
    if (std::find(pairs.begin(), pairs.end(), std::make_pair(i, j)) ==
        pairs.end()) {
      pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * (sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(sorted.size() - 1, lo + 1);
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

double loglog_slope(const std::vector<double>& xs,
                    const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(std::max(ys[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Eigen::MatrixXd sketch_once(const Eigen::MatrixXd& phi, SketchKind kind,
                            RngState& rng) {
  switch (kind) {
    case SketchKind::srm_ag: return apply_srm_ag(phi, rng);
    case SketchKind::dense_ag: return apply_ag(phi, rng);
    case SketchKind::identity: return phi;
  }
  return phi;
}

}  // namespace

PropReport check_unbiasedness(const UnbiasednessOptions& opts) {
  RngState data_rng(opts.seed, streams::dataset);
  const Eigen::MatrixXd x =
      sample_matrix(data_rng, opts.n, opts.f, Dist::gaussian);
  KernelKind kind{opts.family, 1.0};
  if (kind.family != KernelFamily::linear) {
    kind.bandwidth = median_bandwidth(x, kind.family).value;
  }
  const auto pairs = draw_pairs(data_rng, opts.n, opts.pairs);

  std::vector<double> sum(pairs.size(), 0.0), sumsq(pairs.size(), 0.0);
  const RngState map_base(opts.seed, streams::feature_map);
  const RngState sketch_base(opts.seed, streams::sketch);
  for (std::int64_t t = 0; t < opts.trials; ++t) {
    RngState map_rng = map_base.split(t);
    const FeatureMap map = fit_feature_map(map_rng, kind, opts.f, opts.d);
    const Eigen::MatrixXd phi = embed(map, x);
    RngState sk = sketch_base.split(t);
    const Eigen::MatrixXd z = sketch_once(phi, opts.sketch, sk);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const double v = z.row(pairs[p].first).dot(z.row(pairs[p].second));
      sum[p] += v;
      sumsq[p] += v * v;
    }
  }

  PropReport report;
  report.id = opts.sketch == SketchKind::srm_ag ? "SRM-P1" : "P1";
  report.trials = opts.trials;
  report.threshold = opts.threshold_sigmas;
  report.seed = opts.seed;
  double worst = 0.0, worst_se = 0.0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const double mean = sum[p] / opts.trials;
    const double var =
        (sumsq[p] - sum[p] * sum[p] / opts.trials) / (opts.trials - 1);
    const double se = std::sqrt(std::max(var, 1e-300) / opts.trials);
    const double target =
        kappa_exact(kind, x.row(pairs[p].first), x.row(pairs[p].second));
    const double dev = std::abs(mean - target) / se;
    if (dev > worst) {
      worst = dev;
      worst_se = se;
    }
  }
  report.statistic = worst;
  report.standard_error = worst_se;
  report.passed = worst <= opts.threshold_sigmas;
  report.detail = to_string(opts.family) + " kernel, " +
                  to_string(opts.sketch) + ", max standardized deviation " +
                  std::to_string(worst) + " over " +
                  std::to_string(pairs.size()) + " pairs";
  return report;
}

DistortionResult check_distortion(const DistortionOptions& opts) {
  DistortionResult result;
  std::vector<double> fitted;
  bool coverage_ok = true;

  for (std::size_t ni = 0; ni < opts.n_list.size(); ++ni) {
    const int n = opts.n_list[ni];
    if (n < 16) throw std::invalid_argument("check_distortion: N must be >= 16");
    RngState data_rng = RngState(opts.seed, streams::dataset).split(ni);
    const Eigen::MatrixXd x = sample_matrix(data_rng, n, opts.f, Dist::gaussian);
    KernelKind kind{opts.family, 1.0};
    if (kind.family != KernelFamily::linear) {
      kind.bandwidth = median_bandwidth(x, kind.family).value;
    }
    RngState map_rng = RngState(opts.seed, streams::feature_map).split(ni);
    const FeatureMap map = fit_feature_map(map_rng, kind, opts.f, opts.d);
    const Eigen::MatrixXd phi = embed(map, x);
    RngState sk = RngState(opts.seed, streams::sketch).split(ni);
    const Eigen::MatrixXd z = apply_ag(phi, sk);

    DistortionReport rep;
    rep.n = n;
    const double band = 4.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> ratios, devs;
    const auto pairs = draw_pairs(data_rng, n, opts.pairs_per_n);
    int in_band = 0;
    for (const auto& [i, j] : pairs) {
      const double denom = (phi.row(i) - phi.row(j)).norm();
      if (denom <= 0.0) {
        ++rep.skipped;  // claim holds trivially for coincident embeddings
        continue;
      }
      const double ratio = (z.row(i) - z.row(j)).norm() / denom;
      ratios.push_back(ratio);
      devs.push_back(std::abs(ratio - 1.0));
      if (std::abs(ratio - 1.0) <= band) ++in_band;
    }
    rep.pair_count = static_cast<int>(ratios.size());
    std::sort(ratios.begin(), ratios.end());
    std::sort(devs.begin(), devs.end());
    rep.q01 = quantile_sorted(ratios, 0.01);
    rep.q50 = quantile_sorted(ratios, 0.50);
    rep.q99 = quantile_sorted(ratios, 0.99);
    rep.fitted_c = quantile_sorted(devs, 0.99);
    rep.fraction_in_band =
        rep.pair_count > 0 ? static_cast<double>(in_band) / rep.pair_count : 0.0;
    coverage_ok = coverage_ok && rep.fraction_in_band >= 0.99;
    fitted.push_back(rep.fitted_c);
    result.reports.push_back(rep);
  }

  std::vector<double> ns(opts.n_list.begin(), opts.n_list.end());
  result.slope = loglog_slope(ns, fitted);

  result.summary.id = "P2";
  result.summary.trials = opts.pairs_per_n;
  result.summary.statistic = result.slope;
  result.summary.threshold = 0.99;
  result.summary.seed = opts.seed;
  result.summary.passed =
      coverage_ok && result.slope >= -0.7 && result.slope <= -0.3;
  std::string cov;
  for (const auto& r : result.reports) {
    cov += " N=" + std::to_string(r.n) + ":" +
           std::to_string(r.fraction_in_band);
  }
  result.summary.detail = "coverage" + cov + "; fitted-c slope " +
                          std::to_string(result.slope) +
                          " (accept [-0.7,-0.3], coverage >= 0.99)";
  return result;
}

PropReport check_cross_node(const CrossNodeOptions& opts) {
  RngState data_rng(opts.seed, streams::dataset);
  const Eigen::MatrixXd phi =
      sample_matrix(data_rng, opts.n, opts.d, Dist::gaussian);
  const double root_n = std::sqrt(static_cast<double>(opts.n));

  // Replays the same stream as apply_ag, which consumes G row-major.
  RngState replay(opts.seed, streams::sketch);
  Eigen::MatrixXd g(opts.n, opts.n);
  for (int i = 0; i < opts.n; ++i) {
    for (int p = 0; p < opts.n; ++p) g(i, p) = replay.next_gaussian();
  }

  RngState base(opts.seed, streams::sketch);
  const Eigen::MatrixXd z0 = apply_ag(phi, base);

  PropReport report;
  report.id = "P3";
  report.trials = static_cast<std::int64_t>(opts.n) * opts.n;
  report.threshold = 0.0;
  report.seed = opts.seed;
  double min_sensitivity = std::numeric_limits<double>::infinity();
  double max_err = 0.0;
  for (int p = 0; p < opts.n; ++p) {
    Eigen::MatrixXd phi2 = phi;
    phi2.row(p).array() += opts.delta;
    RngState rng2(opts.seed, streams::sketch);
    const Eigen::MatrixXd z1 = apply_ag(phi2, rng2);
    for (int i = 0; i < opts.n; ++i) {
      const double observed = z1(i, 0) - z0(i, 0);
      const double expected =
          (g(i, p) / root_n + (i == p ? 1.0 : 0.0)) * opts.delta;
      max_err = std::max(max_err, std::abs(observed - expected));
      min_sensitivity = std::min(min_sensitivity, std::abs(observed));
    }
  }
  report.statistic = min_sensitivity;
  report.standard_error = max_err;
  report.passed = min_sensitivity > 0.0 && max_err <= 1e-12;
  report.detail = "min |dz_i/drow_p| = " + std::to_string(min_sensitivity) +
                  ", max deviation from G_ip*delta/sqrt(N) = " +
                  std::to_string(max_err);
  return report;
}

PropReport check_uniqueness(const UniquenessOptions& opts) {
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(opts.n, 1);
  const KernelKind kind{KernelFamily::rbf, 1.0};
  const RngState map_base(opts.seed, streams::feature_map);

  PropReport report;
  report.id = opts.sketch == SketchKind::srm_ag ? "SRM-P4" : "P4";
  report.trials = opts.draws;
  report.threshold = 1e-12;
  report.seed = opts.seed;

  double global_min = std::numeric_limits<double>::infinity();
  int ok = 0;
  for (int t = 0; t < opts.draws; ++t) {
    RngState map_rng = map_base.split(t);
    const FeatureMap map = fit_feature_map(map_rng, kind, 1, opts.d);
    const Eigen::MatrixXd phi = embed(map, ones);
    SketchOperator op{opts.sketch, opts.k, derive_seed(opts.seed, t)};
    const Eigen::MatrixXd z = apply_sketch(phi, op);
    double min_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < opts.n; ++i) {
      for (int j = i + 1; j < opts.n; ++j) {
        min_dist = std::min(min_dist, (z.row(i) - z.row(j)).norm());
      }
    }
    global_min = std::min(global_min, min_dist);
    ok += min_dist > 1e-12;
  }
  report.statistic = global_min;
  report.passed = ok == opts.draws;
  report.detail = std::to_string(ok) + "/" + std::to_string(opts.draws) +
                  " draws with distinct rows (constant features, N=" +
                  std::to_string(opts.n) + "); min pairwise distance " +
                  std::to_string(global_min);
  return report;
}

EquivarianceResult check_equivariance(const EquivarianceOptions& opts) {
  RngState data_rng(opts.seed, streams::dataset);
  const Eigen::MatrixXd x =
      sample_matrix(data_rng, opts.n, opts.f, Dist::gaussian);
  KernelKind kind{opts.family, 1.0};
  if (kind.family != KernelFamily::linear) {
    kind.bandwidth = median_bandwidth(x, kind.family).value;
  }
  RngState map_rng(opts.seed, streams::feature_map);
  const FeatureMap map = fit_feature_map(map_rng, kind, opts.f, opts.d);
  const Eigen::MatrixXd phi = embed(map, x);

  const std::int64_t m_max =
      *std::max_element(opts.m_list.begin(), opts.m_list.end());
  std::vector<std::vector<double>> deltas(
      opts.reps, std::vector<double>(opts.m_list.size(), 0.0));
  double max_standardized = 0.0;

  for (int rep = 0; rep < opts.reps; ++rep) {
    RngState perm_rng = RngState(opts.seed, streams::dataset).split(100 + rep);
    std::vector<int> pi = random_permutation(opts.n, perm_rng);
    if (opts.force_identity_perm) {
      for (int v = 0; v < opts.n; ++v) pi[v] = v;
    }
    Eigen::MatrixXd phi_p(opts.n, opts.d);
    for (int v = 0; v < opts.n; ++v) phi_p.row(pi[v]) = phi.row(v);

    Eigen::MatrixXd sum_d = Eigen::MatrixXd::Zero(opts.n, opts.d);
    Eigen::MatrixXd sum_d2 = Eigen::MatrixXd::Zero(opts.n, opts.d);
    const RngState sketch_base = RngState(opts.seed, streams::sketch).split(rep);
    std::size_t checkpoint = 0;
    for (std::int64_t t = 0; t < m_max; ++t) {
      RngState s1 = sketch_base.split(t);
      RngState s2 = s1;  // identical stream on both sides
      const Eigen::MatrixXd za = apply_ag(phi_p, s1);
      const Eigen::MatrixXd zb = apply_ag(phi, s2);
      Eigen::MatrixXd zb_p(opts.n, opts.d);
      for (int v = 0; v < opts.n; ++v) zb_p.row(pi[v]) = zb.row(v);
      const Eigen::MatrixXd d = za - zb_p;
      sum_d += d;
      sum_d2 += d.cwiseProduct(d);
      while (checkpoint < opts.m_list.size() &&
             t + 1 == opts.m_list[checkpoint]) {
        deltas[rep][checkpoint] =
            (sum_d / static_cast<double>(t + 1)).cwiseAbs().maxCoeff();
        ++checkpoint;
      }
    }

    // Per-entry standardized deviation at the largest M.
    const double m = static_cast<double>(m_max);
    for (int i = 0; i < opts.n; ++i) {
      for (int j = 0; j < opts.d; ++j) {
        const double mean = sum_d(i, j) / m;
        const double var = (sum_d2(i, j) - sum_d(i, j) * sum_d(i, j) / m) /
                           std::max(1.0, m - 1);
        const double se = std::sqrt(std::max(var, 0.0) / m);
        if (se > 0.0) {
          max_standardized = std::max(max_standardized, std::abs(mean) / se);
        } else if (mean != 0.0) {
          max_standardized = std::numeric_limits<double>::infinity();
        }
      }
    }
  }

  EquivarianceResult result;
  result.delta_per_m.assign(opts.m_list.size(), 0.0);
  for (std::size_t mi = 0; mi < opts.m_list.size(); ++mi) {
    for (int rep = 0; rep < opts.reps; ++rep) {
      result.delta_per_m[mi] += deltas[rep][mi];
    }
    result.delta_per_m[mi] /= opts.reps;
  }
  std::vector<double> ms(opts.m_list.begin(), opts.m_list.end());
  result.slope = loglog_slope(ms, result.delta_per_m);
  result.max_standardized = max_standardized;

  result.summary.id = "P5";
  result.summary.trials = m_max;
  result.summary.statistic = result.slope;
  result.summary.standard_error = max_standardized;
  result.summary.threshold = opts.threshold_sigmas;
  result.summary.seed = opts.seed;
  result.summary.passed = result.slope >= -0.7 && result.slope <= -0.3 &&
                          max_standardized <= opts.threshold_sigmas;
  result.summary.detail =
      "Delta decay slope " + std::to_string(result.slope) +
      " (accept [-0.7,-0.3]); max per-entry standardized deviation " +
      std::to_string(max_standardized);
  return result;
}

PropReport check_srm_agreement(const SrmAgreementOptions& opts) {
  PropReport report;
  report.id = "SRM-dense";
  report.threshold = opts.tolerance;
  report.seed = opts.seed;
  double worst = 0.0;
  std::int64_t trials = 0;
  for (int n : opts.n_list) {
    RngState rng = RngState(opts.seed, streams::sketch).split(n);
    const auto srm = StructuredRandomMatrix::sample(rng, n);
    const Eigen::MatrixXd dense = srm.materialize();
    for (int t = 0; t < opts.vectors; ++t) {
      const Eigen::VectorXd v =
          sample_matrix(rng, n, 1, Dist::gaussian).col(0);
      const Eigen::VectorXd fast = srm.apply(v);
      const Eigen::VectorXd ref = dense * v;
      const double err =
          (fast - ref).norm() / std::max(1e-300, ref.norm());
      worst = std::max(worst, err);
      ++trials;
    }
  }
  report.trials = trials;
  report.statistic = worst;
  report.passed = worst <= opts.tolerance;
  report.detail = "max relative error fast-apply vs dense materialization " +
                  std::to_string(worst) + " over N <= " +
                  std::to_string(opts.n_list.back());
  return report;
}

// ---------------------------------------------------------------------
// Synthetic experiments
// ---------------------------------------------------------------------

std::vector<VariantSpec> expressiveness_variants() {
  std::vector<VariantSpec> variants;
  variants.push_back({"baseline", false, KernelFamily::laplacian,
                      SketchKind::dense_ag, 1, 64});
  variants.push_back({"ablation", true, KernelFamily::laplacian,
                      SketchKind::identity, 1, 64});
  for (auto family :
       {KernelFamily::linear, KernelFamily::laplacian, KernelFamily::rbf}) {
    variants.push_back({"ag1", true, family, SketchKind::dense_ag, 1, 64});
  }
  for (auto family :
       {KernelFamily::linear, KernelFamily::laplacian, KernelFamily::rbf}) {
    variants.push_back({"ag8", true, family, SketchKind::dense_ag, 8, 8});
  }
  return variants;
}

std::vector<VariantSpec> oversquash_variants() {
  std::vector<VariantSpec> variants;
  variants.push_back({"baseline", false, KernelFamily::laplacian,
                      SketchKind::dense_ag, 1, 64});
  variants.push_back({"ablation", true, KernelFamily::laplacian,
                      SketchKind::identity, 1, 64});
  for (auto family :
       {KernelFamily::linear, KernelFamily::laplacian, KernelFamily::rbf}) {
    variants.push_back({"ag4", true, family, SketchKind::dense_ag, 4, 16});
  }
  return variants;
}

namespace {

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

std::uint64_t cell_seed(std::uint64_t base, const VariantSpec& v, int seed) {
  const std::string key =
      v.name + "/" + v.kernel_name() + "/k" + std::to_string(v.k) + "/s" +
      std::to_string(seed);
  return derive_seed(base, fnv1a_hash(key));
}

}  // namespace

std::vector<BenchRow> run_expressiveness(const ExpressivenessOptions& opts) {
  set_threads(opts.threads);
  RngState ds_rng(opts.base_seed, streams::dataset);
  const Dataset ds = gen_csl(opts.n_nodes, opts.skips, opts.per_class, ds_rng);

  struct Cell {
    int variant;
    int seed;
  };
  std::vector<Cell> cells;
  for (std::size_t v = 0; v < opts.variants.size(); ++v) {
    for (int s = 0; s < opts.seeds; ++s) {
      cells.push_back({static_cast<int>(v), s});
    }
  }
  std::vector<BenchRow> rows(cells.size());
  std::exception_ptr error;

#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < cells.size(); ++c) {
    try {
      const VariantSpec& variant = opts.variants[cells[c].variant];
      const std::uint64_t seed =
          cell_seed(opts.base_seed, variant, cells[c].seed);
      std::vector<Eigen::MatrixXd> z;
      if (variant.use_srf) {
        SrfConfig cfg;
        cfg.kernel = {variant.family, variant.d, 0.0};
        cfg.sketch = {variant.sketch, variant.k, seed};
        cfg.map_seed = seed;
        for (auto& e : srf_for_dataset(ds, cfg)) z.push_back(std::move(e.z));
      }
      GnnConfig gnn;
      gnn.layers = opts.layers;
      gnn.hidden = opts.hidden;
      gnn.srf_width = variant.width();
      gnn.readout = Readout::sum_pool_graph;
      gnn.epochs = opts.epochs;
      gnn.batch_size = opts.batch_size;
      gnn.learning_rate = opts.learning_rate;
      gnn.seed = seed;
      gnn.early_stop_plateau = opts.early_stop_plateau;
      const TrainResult result = train(gnn, ds, z);
      rows[c] = {variant.name, variant.kernel_name(),
                 variant.use_srf ? variant.k : 0, 0, cells[c].seed,
                 result.best_test_acc};
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

std::vector<BenchRow> run_oversquashing(const OversquashOptions& opts) {
  set_threads(opts.threads);
  std::vector<BenchRow> rows;
  for (int r : opts.r_list) {
    RngState ds_rng = RngState(opts.base_seed, streams::dataset).split(r);
    const Dataset ds =
        gen_tree_neighbors_match(r, opts.n_train, opts.n_test, ds_rng);

    struct Cell {
      int variant;
      int seed;
    };
    std::vector<Cell> cells;
    for (std::size_t v = 0; v < opts.variants.size(); ++v) {
      for (int s = 0; s < opts.seeds; ++s) {
        cells.push_back({static_cast<int>(v), s});
      }
    }
    std::vector<BenchRow> r_rows(cells.size());
    std::exception_ptr error;

#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < cells.size(); ++c) {
      try {
        const VariantSpec& variant = opts.variants[cells[c].variant];
        const std::uint64_t seed = derive_seed(
            cell_seed(opts.base_seed, variant, cells[c].seed), r);
        std::vector<Eigen::MatrixXd> z;
        if (variant.use_srf) {
          SrfConfig cfg;
          cfg.kernel = {variant.family, variant.d, 0.0};
          cfg.sketch = {variant.sketch, variant.k, seed};
          cfg.map_seed = seed;
          for (auto& e : srf_for_dataset(ds, cfg)) {
            z.push_back(std::move(e.z));
          }
        }
        GnnConfig gnn;
        gnn.layers = r + 1;  // the signal needs r hops to reach the root
        gnn.hidden = opts.hidden;
        gnn.srf_width = variant.width();
        gnn.readout = Readout::root_node;
        gnn.epochs = r <= 3 ? opts.epochs_shallow : opts.epochs_deep;
        gnn.batch_size = opts.batch_size;
        gnn.learning_rate = opts.learning_rate;
        gnn.seed = seed;
        gnn.early_stop_plateau = 5;
        const TrainResult result = train(gnn, ds, z);
        r_rows[c] = {variant.name, variant.kernel_name(),
                     variant.use_srf ? variant.k : 0, r, cells[c].seed,
                     result.best_test_acc};
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    rows.insert(rows.end(), r_rows.begin(), r_rows.end());
  }
  return rows;
}

std::vector<EnergyRow> run_oversmoothing(const OversmoothOptions& opts) {
  std::vector<EnergyRow> rows;
  struct Variant {
    std::string name;
    bool use_srf;
    KernelFamily family;
    SketchKind sketch;
    int k;
  };
  std::vector<Variant> variants = {
      {"baseline", false, KernelFamily::laplacian, SketchKind::dense_ag, 0},
      {"ablation", true, KernelFamily::laplacian, SketchKind::identity, 1},
      {"linear_k4", true, KernelFamily::linear, SketchKind::dense_ag, 4},
      {"rbf_k4", true, KernelFamily::rbf, SketchKind::dense_ag, 4},
  };
  for (int k : opts.k_list) {
    variants.push_back({"lap_k" + std::to_string(k), true,
                        KernelFamily::laplacian, SketchKind::dense_ag, k});
  }

  for (int s = 0; s < opts.seeds; ++s) {
    RngState graph_rng = RngState(opts.base_seed, streams::dataset).split(s);
    Graph g = gen_random_graph(opts.n, opts.p, FeatureMode::gaussian, opts.f,
                               graph_rng);
    Dataset ds;
    ds.graphs.push_back(std::move(g));
    ds.num_classes = 2;
    const Graph& graph = ds.graphs[0];

    for (const auto& variant : variants) {
      const std::uint64_t seed =
          derive_seed(opts.base_seed,
                      fnv1a_hash(variant.name + "/s" + std::to_string(s)));
      std::vector<Eigen::MatrixXd> z;
      if (variant.use_srf) {
        SrfConfig cfg;
        cfg.kernel = {variant.family, opts.d, 0.0};
        cfg.sketch = {variant.sketch, variant.k, seed};
        cfg.map_seed = seed;
        for (auto& e : srf_for_dataset(ds, cfg)) z.push_back(std::move(e.z));
      }
      GnnConfig gnn;
      gnn.layers = opts.depth;
      gnn.hidden = opts.hidden;
      gnn.srf_width = variant.use_srf ? variant.k * opts.d : 0;
      gnn.normalize_hidden = true;  // measurement protocol, untrained
      gnn.seed = seed;
      RngState init_rng(seed, streams::init);
      const GnnModel model = init_model(gnn, opts.f, ds.num_classes, init_rng);
      const Forward fwd =
          forward(model, graph, variant.use_srf ? &z[0] : nullptr);
      for (int layer = 0; layer <= opts.depth; ++layer) {
        rows.push_back({variant.name, variant.use_srf ? variant.k : 0, layer,
                        s, dirichlet_energy(fwd.hidden[layer], graph)});
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------------
// CSV output
// ---------------------------------------------------------------------

namespace {

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path + ".tmp");
  if (!out) throw std::runtime_error("cannot write csv: " + path);
  out.precision(12);
  return out;
}

void commit_csv(std::ofstream& out, const std::string& path) {
  out.close();
  std::filesystem::rename(path + ".tmp", path);
}

}  // namespace

void write_expressiveness_csv(const std::vector<BenchRow>& rows,
                              std::uint64_t config_hash,
                              const std::string& path) {
  auto out = open_csv(path);
  out << "variant,kernel,k,seed,accuracy,config_hash,version\n";
  for (const auto& r : rows) {
    out << r.variant << ',' << r.kernel << ',' << r.k << ',' << r.seed << ','
        << r.accuracy << ',' << config_hash << ',' << kVersion << '\n';
  }
  commit_csv(out, path);
}

void write_oversquash_csv(const std::vector<BenchRow>& rows,
                          std::uint64_t config_hash, const std::string& path) {
  auto out = open_csv(path);
  out << "variant,r,seed,accuracy,config_hash,version\n";
  for (const auto& r : rows) {
    out << r.variant << (r.kernel.empty() ? "" : "_" + r.kernel) << ',' << r.r
        << ',' << r.seed << ',' << r.accuracy << ',' << config_hash << ','
        << kVersion << '\n';
  }
  commit_csv(out, path);
}

void write_oversmooth_csv(const std::vector<EnergyRow>& rows,
                          std::uint64_t config_hash, const std::string& path) {
  auto out = open_csv(path);
  out << "variant,k,layer,energy,seed,config_hash,version\n";
  for (const auto& r : rows) {
    out << r.variant << ',' << r.k << ',' << r.layer << ',' << r.energy << ','
        << r.seed << ',' << config_hash << ',' << kVersion << '\n';
  }
  commit_csv(out, path);
}

}  // namespace srf
