#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "srf/metrics.hpp"

using namespace srf;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("unbiasedness harness passes at reduced scale") {
  UnbiasednessOptions opts;
  opts.n = 16;
  opts.pairs = 5;
  opts.trials = 2000;
  for (auto family :
       {KernelFamily::linear, KernelFamily::rbf, KernelFamily::laplacian}) {
    opts.family = family;
    const PropReport report = check_unbiasedness(opts);
    INFO(report.detail);
    CHECK(report.passed);
    CHECK(report.trials == 2000);
  }
}

TEST_CASE("identity sketch drives the statistic toward the exact kernel") {
  UnbiasednessOptions opts;
  opts.family = KernelFamily::linear;
  opts.sketch = SketchKind::identity;
  opts.n = 16;
  opts.d = 64;
  opts.pairs = 5;
  opts.trials = 4000;
  const PropReport report = check_unbiasedness(opts);
  INFO(report.detail);
  CHECK(report.passed);
}

TEST_CASE("distortion harness reports ordered quantiles") {
  DistortionOptions opts;
  opts.n_list = {16, 32};
  opts.pairs_per_n = 50;
  const DistortionResult result = check_distortion(opts);
  REQUIRE(result.reports.size() == 2);
  for (const auto& rep : result.reports) {
    CHECK(rep.q01 <= rep.q50);
    CHECK(rep.q50 <= rep.q99);
    CHECK(rep.pair_count + rep.skipped == 50);
    CHECK(rep.fraction_in_band >= 0.0);
    CHECK(rep.fraction_in_band <= 1.0);
  }
  CHECK(std::isfinite(result.slope));
}

TEST_CASE("cross-node sensitivity is exact and everywhere nonzero") {
  const PropReport report = check_cross_node({});
  INFO(report.detail);
  CHECK(report.passed);
  CHECK(report.statistic > 0.0);
}

TEST_CASE("uniqueness harness on both sketch kinds") {
  UniquenessOptions opts;
  opts.n = 16;
  opts.draws = 20;
  for (auto kind : {SketchKind::dense_ag, SketchKind::srm_ag}) {
    opts.sketch = kind;
    const PropReport report = check_uniqueness(opts);
    INFO(report.detail);
    CHECK(report.passed);
  }
}

TEST_CASE("equivariance harness: identity permutation gives exactly zero") {
  EquivarianceOptions opts;
  opts.n = 12;
  opts.m_list = {10, 50};
  opts.reps = 1;
  opts.force_identity_perm = true;
  const EquivarianceResult result = check_equivariance(opts);
  CHECK(result.delta_per_m[0] == 0.0);
  CHECK(result.delta_per_m[1] == 0.0);
}

TEST_CASE("equivariance harness decays at reduced scale") {
  EquivarianceOptions opts;
  opts.n = 16;
  opts.m_list = {100, 1000, 10000};
  opts.reps = 2;
  const EquivarianceResult result = check_equivariance(opts);
  INFO(result.summary.detail);
  CHECK(result.summary.passed);
}

TEST_CASE("srm agreement harness") {
  SrmAgreementOptions opts;
  opts.n_list = {3, 8, 17};
  opts.vectors = 20;
  const PropReport report = check_srm_agreement(opts);
  INFO(report.detail);
  CHECK(report.passed);
}

TEST_CASE("prop reports serialize to json") {
  PropReport r;
  r.id = "P1";
  r.detail = "test";
  r.passed = true;
  const std::string text = prop_reports_to_json({r});
  CHECK(text.find("\"P1\"") != std::string::npos);
  const std::string path = "/tmp/srf_test_reports.json";
  write_prop_reports_json({r}, path);
  CHECK(std::filesystem::exists(path));
  std::filesystem::remove(path);
}

TEST_CASE("oversmoothing harness shapes and shared layer-0 energy") {
  OversmoothOptions opts;
  opts.depth = 8;
  opts.n = 40;
  opts.f = 8;
  opts.d = 4;
  opts.k_list = {1, 2};
  opts.seeds = 1;
  opts.hidden = 8;
  const auto rows = run_oversmoothing(opts);
  REQUIRE_FALSE(rows.empty());

  double base_l0 = -1.0, base_l1 = 0.0, base_last = 0.0;
  double lap1_l0 = -1.0;
  for (const auto& row : rows) {
    if (row.variant == "baseline" && row.layer == 0) base_l0 = row.energy;
    if (row.variant == "baseline" && row.layer == 1) base_l1 = row.energy;
    if (row.variant == "baseline" && row.layer == opts.depth) {
      base_last = row.energy;
    }
    if (row.variant == "lap_k1" && row.layer == 0) lap1_l0 = row.energy;
  }
  CHECK(base_l0 == lap1_l0);  // same input features
  CHECK(base_last < base_l1);  // direction of the decay, small scale
}

TEST_CASE("expressiveness harness plumbing at toy scale") {
  ExpressivenessOptions opts;
  opts.n_nodes = 11;
  opts.skips = {2, 3};
  opts.per_class = 5;
  opts.seeds = 1;
  opts.epochs = 3;
  opts.batch_size = 6;
  opts.hidden = 8;
  opts.variants = {{"baseline", false, KernelFamily::laplacian,
                    SketchKind::dense_ag, 1, 8},
                   {"ag1", true, KernelFamily::rbf, SketchKind::dense_ag, 1,
                    8}};
  const auto rows = run_expressiveness(opts);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].variant == "baseline");
  CHECK(rows[1].variant == "ag1");
  for (const auto& row : rows) {
    CHECK(row.accuracy >= 0.0);
    CHECK(row.accuracy <= 1.0);
  }

  const std::string path = "/tmp/srf_test_expr.csv";
  write_expressiveness_csv(rows, 123, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "variant,kernel,k,seed,accuracy,config_hash,version");
  int count = 0;
  while (std::getline(in, line)) ++count;
  CHECK(count == 2);
  std::filesystem::remove(path);
}

TEST_CASE("oversquashing harness plumbing at toy scale") {
  OversquashOptions opts;
  opts.r_list = {2};
  opts.n_train = 40;
  opts.n_test = 10;
  opts.seeds = 1;
  opts.epochs_shallow = 2;
  opts.batch_size = 8;
  opts.hidden = 8;
  opts.variants = {{"baseline", false, KernelFamily::laplacian,
                    SketchKind::dense_ag, 1, 8}};
  const auto rows = run_oversquashing(opts);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].r == 2);

  const std::string path = "/tmp/srf_test_sq.csv";
  write_oversquash_csv(rows, 9, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "variant,r,seed,accuracy,config_hash,version");
  std::filesystem::remove(path);
}

TEST_CASE("fnv hash is stable") {
  CHECK(fnv1a_hash("abc") == fnv1a_hash("abc"));
  CHECK(fnv1a_hash("abc") != fnv1a_hash("abd"));
}

TEST_SUITE_END();
