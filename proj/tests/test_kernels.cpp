#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "srf/kernels.hpp"
#include "srf/rng.hpp"

using namespace srf;

TEST_SUITE_BEGIN("kernels");

TEST_CASE("exact kernel closed forms") {
  Eigen::VectorXd x(2), y(2);
  x << 1, 2;
  y << 3, 4;
  CHECK(kappa_exact({KernelFamily::linear, 1.0}, x, y) == 11.0);
  CHECK(kappa_exact({KernelFamily::rbf, 2.0}, x, x) == 1.0);

  Eigen::VectorXd a(2), b(2);
  a << 0, 0;
  b << 1, 1;  // |a-b|^2 = 2
  CHECK(kappa_exact({KernelFamily::rbf, 1.0}, a, b) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(kappa_exact({KernelFamily::laplacian, 2.0}, a, b) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  Eigen::VectorXd z(3);
  z << 1, 2, 3;
  CHECK_THROWS_AS(kappa_exact({KernelFamily::linear, 1.0}, x, z),
                  std::invalid_argument);
}

TEST_CASE("exact kernels are symmetric") {
  RngState rng(1);
  for (auto family :
       {KernelFamily::linear, KernelFamily::rbf, KernelFamily::laplacian}) {
    const KernelKind kind{family, 1.7};
    for (int t = 0; t < 20; ++t) {
      const Eigen::VectorXd x = sample_matrix(rng, 4, 1, Dist::gaussian);
      const Eigen::VectorXd y = sample_matrix(rng, 4, 1, Dist::gaussian);
      CHECK(kappa_exact(kind, x, y) == kappa_exact(kind, y, x));
    }
  }
}

TEST_CASE("exact gram matrices are positive semidefinite") {
  RngState rng(2);
  const auto x = sample_matrix(rng, 16, 3, Dist::gaussian);
  for (auto family :
       {KernelFamily::linear, KernelFamily::rbf, KernelFamily::laplacian}) {
    const KernelKind kind{family, 1.0};
    Eigen::MatrixXd gram(16, 16);
    for (int i = 0; i < 16; ++i) {
      for (int j = 0; j < 16; ++j) {
        gram(i, j) = kappa_exact(kind, x.row(i), x.row(j));
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-9);
  }
}

TEST_CASE("fitted map shapes and offset range") {
  RngState rng(3);
  const FeatureMap map = fit_feature_map(rng, {KernelFamily::rbf, 1.0}, 3, 16);
  CHECK(map.frequencies.rows() == 16);
  CHECK(map.frequencies.cols() == 3);
  CHECK(map.offsets.size() == 16);
  for (int d = 0; d < 16; ++d) {
    CHECK(map.offsets[d] >= 0.0);
    CHECK(map.offsets[d] < 2.0 * 3.14159265358979324);
  }
}

TEST_CASE("fitting is deterministic per seed") {
  RngState a(4), b(4);
  const auto ma = fit_feature_map(a, {KernelFamily::laplacian, 0.5}, 3, 8);
  const auto mb = fit_feature_map(b, {KernelFamily::laplacian, 0.5}, 3, 8);
  CHECK(ma.frequencies == mb.frequencies);
  CHECK(ma.offsets == mb.offsets);
}

TEST_CASE("linear projection preserves norms in expectation") {
  // Monte-Carlo oracle over refits: E|Rx|^2 = |x|^2 for unit x.
  RngState rng(5);
  Eigen::VectorXd x = sample_matrix(rng, 4, 1, Dist::gaussian);
  x.normalize();
  const int refits = 10000;
  double sum = 0.0, sumsq = 0.0;
  Eigen::MatrixXd row = x.transpose();
  for (int t = 0; t < refits; ++t) {
    const auto map = fit_feature_map(rng, {KernelFamily::linear, 1.0}, 4, 8);
    const double q = embed(map, row).squaredNorm();
    sum += q;
    sumsq += q * q;
  }
  const double mean = sum / refits;
  const double se = std::sqrt((sumsq / refits - mean * mean) / (refits - 1));
  CHECK(std::abs(mean - 1.0) <= 3.0 * se);
}

TEST_CASE("cosine embeddings stay inside the sqrt(2/D) envelope") {
  RngState rng(6);
  const auto map = fit_feature_map(rng, {KernelFamily::rbf, 1.0}, 3, 10);
  const auto x = sample_matrix(rng, 50, 3, Dist::gaussian);
  const auto phi = embed(map, x);
  const double bound = std::sqrt(2.0 / 10.0);
  CHECK(phi.maxCoeff() <= bound);
  CHECK(phi.minCoeff() >= -bound);
}

TEST_CASE("large-D embedding concentrates on the exact kernel") {
  RngState rng(7);
  Eigen::MatrixXd xy(2, 2);
  xy << 0, 0, 1, 1;  // |x-y|^2 = 2
  const auto map = fit_feature_map(rng, {KernelFamily::rbf, 1.0}, 2, 100000);
  const auto phi = embed(map, xy);
  CHECK(std::abs(phi.row(0).dot(phi.row(1)) - std::exp(-1.0)) < 0.01);
}

TEST_CASE("identity projection hook reproduces the input") {
  FeatureMap map;
  map.kind = {KernelFamily::linear, 1.0};
  map.input_dim = 4;
  map.output_dim = 4;
  map.projection = Eigen::MatrixXd::Identity(4, 4);
  RngState rng(8);
  const auto x = sample_matrix(rng, 6, 4, Dist::gaussian);
  CHECK(embed(map, x) == x);
}

TEST_CASE("embed is row-local under permutation") {
  RngState rng(9);
  const auto map = fit_feature_map(rng, {KernelFamily::rbf, 1.3}, 3, 8);
  const auto x = sample_matrix(rng, 10, 3, Dist::gaussian);
  const auto phi = embed(map, x);
  Eigen::MatrixXd xr = x.colwise().reverse();
  const auto phir = embed(map, xr);
  CHECK((phir - phi.colwise().reverse()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("embed rejects mismatched widths") {
  RngState rng(10);
  const auto map = fit_feature_map(rng, {KernelFamily::rbf, 1.0}, 3, 8);
  CHECK_THROWS_AS(embed(map, Eigen::MatrixXd::Ones(5, 4)),
                  std::invalid_argument);
}

TEST_CASE("unbiasedness of the fitted maps for all kernel kinds") {
  // Spec invariant: mean of phi(x)'phi(y) over 10^4 refits (D=8) within
  // 4 standard errors of the exact kernel.
  RngState rng(11);
  Eigen::MatrixXd xy = sample_matrix(rng, 2, 3, Dist::gaussian);
  for (auto family :
       {KernelFamily::linear, KernelFamily::rbf, KernelFamily::laplacian}) {
    const KernelKind kind{family, 1.4};
    const double target = kappa_exact(kind, xy.row(0), xy.row(1));
    double sum = 0.0, sumsq = 0.0;
    const int refits = 10000;
    for (int t = 0; t < refits; ++t) {
      const auto map = fit_feature_map(rng, kind, 3, 8);
      const auto phi = embed(map, xy);
      const double v = phi.row(0).dot(phi.row(1));
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / refits;
    const double se =
        std::sqrt((sumsq / refits - mean * mean) / (refits - 1));
    INFO("family ", to_string(family));
    CHECK(std::abs(mean - target) <= 4.0 * se);
  }
}

TEST_CASE("median bandwidth basics") {
  Eigen::MatrixXd two(2, 1);
  two << 0, 3;
  const auto est = median_bandwidth(two, KernelFamily::rbf);
  CHECK(est.value == 3.0);
  CHECK_FALSE(est.degenerate);

  const auto degen =
      median_bandwidth(Eigen::MatrixXd::Ones(5, 2), KernelFamily::rbf);
  CHECK(degen.value == 1.0);
  CHECK(degen.degenerate);

  CHECK_THROWS_AS(
      median_bandwidth(Eigen::MatrixXd::Ones(1, 2), KernelFamily::rbf),
      std::invalid_argument);
}

TEST_CASE("median bandwidth matches the exhaustive oracle") {
  RngState rng(12);
  const auto x = sample_matrix(rng, 100, 3, Dist::gaussian);
  for (auto family : {KernelFamily::rbf, KernelFamily::laplacian}) {
    std::vector<double> dists;
    for (int i = 0; i < 100; ++i) {
      for (int j = i + 1; j < 100; ++j) {
        const auto diff = x.row(i) - x.row(j);
        dists.push_back(family == KernelFamily::laplacian
                            ? diff.cwiseAbs().sum()
                            : diff.norm());
      }
    }
    std::sort(dists.begin(), dists.end());
    const std::size_t n = dists.size();  // 4950, even
    const double oracle = 0.5 * (dists[n / 2 - 1] + dists[n / 2]);
    CHECK(median_bandwidth(x, family).value == oracle);
  }
}

TEST_SUITE_END();
