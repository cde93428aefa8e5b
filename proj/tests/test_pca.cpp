#include <cmath>

#include "doctest.h"
#include "semcad/pca.hpp"

using namespace semcad;

namespace {

Matrix random_normal(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(n, d);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

// Covariance (divisor N - 1) of the standardized columns, computed directly.
Matrix standardized_covariance(const Matrix& x) {
  const std::size_t n = x.rows(), d = x.cols();
  std::vector<double> mean(d, 0.0), sd(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) mean[c] += x(r, c) / static_cast<double>(n);
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) sd[c] += (x(r, c) - mean[c]) * (x(r, c) - mean[c]);
  }
  for (double& s : sd) s = std::sqrt(s / static_cast<double>(n - 1));
  Matrix cov(d, d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        cov(i, j) += (x(r, i) - mean[i]) / sd[i] * (x(r, j) - mean[j]) / sd[j] /
                     static_cast<double>(n - 1);
      }
    }
  }
  return cov;
}

}  // namespace

TEST_CASE("points on y = x give one component") {
  Matrix x(50, 2);
  for (std::size_t i = 0; i < 50; ++i) x(i, 0) = x(i, 1) = static_cast<double>(i) * 0.37 - 4.0;
  const auto model = pca::fit(x, pca::ComponentRule::fixed(2));
  CHECK(std::abs(model.explained_variance_ratio[0] - 1.0) <= 1e-12);
  CHECK(std::abs(model.explained_variance_ratio[1]) <= 1e-12);
  CHECK(model.components(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(model.components(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("isotropic data spreads variance evenly") {
  const auto model = pca::fit(random_normal(10000, 3, 1), pca::ComponentRule::fixed(3));
  for (double r : model.explained_variance_ratio) CHECK(std::abs(r - 1.0 / 3.0) <= 0.02);
}

TEST_CASE("fitted components satisfy the eigen equations") {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    // Correlated columns: random mixing of normals plus per-column offsets.
    const std::size_t d = 6;
    Matrix mix(d, d);
    for (double& v : mix.data()) v = rng.normal();
    Matrix x = multiply(random_normal(300, d, 100 + trial), mix);
    for (std::size_t r = 0; r < x.rows(); ++r) x(r, 2) = 5.0 + 3.0 * x(r, 2);

    const auto model = pca::fit(x, pca::ComponentRule::fixed(static_cast<int>(d)));
    const Matrix cov = standardized_covariance(x);
    double ratio_sum = 0.0;
    for (double r : model.explained_variance_ratio) ratio_sum += r;
    CHECK(std::abs(ratio_sum - 1.0) <= 1e-12);

    for (std::size_t i = 0; i < d; ++i) {
      const auto v = model.components.row(i);
      const auto cv = multiply(cov, v);
      double residual = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        residual += (cv[j] - model.eigenvalues[i] * v[j]) * (cv[j] - model.eigenvalues[i] * v[j]);
      }
      CHECK(std::sqrt(residual) <= 1e-8);
      for (std::size_t k = 0; k < d; ++k) {
        const double expected = i == k ? 1.0 : 0.0;
        CHECK(std::abs(dot(v, model.components.row(k)) - expected) <= 1e-10);
      }
      // Largest-magnitude entry is positive.
      std::size_t arg = 0;
      for (std::size_t j = 1; j < d; ++j) {
        if (std::abs(v[j]) > std::abs(v[arg])) arg = j;
      }
      CHECK(v[arg] > 0.0);
      CHECK(model.eigenvalues[i] >= 0.0);
      if (i > 0) CHECK(model.eigenvalues[i] <= model.eigenvalues[i - 1]);
    }

    // Projected columns carry the eigenvalues as variances.
    const Matrix p = pca::transform(model, x);
    for (std::size_t c = 0; c < d; ++c) {
      double mean = 0.0, var = 0.0;
      for (std::size_t r = 0; r < p.rows(); ++r) mean += p(r, c) / static_cast<double>(p.rows());
      for (std::size_t r = 0; r < p.rows(); ++r) var += (p(r, c) - mean) * (p(r, c) - mean);
      var /= static_cast<double>(p.rows() - 1);
      CHECK(std::abs(var - model.eigenvalues[c]) <= 1e-8);
    }

    // A full rotation preserves inner products of the standardized rows.
    const Matrix z = pca::standardize(model, x);
    for (std::size_t a = 0; a < 20; ++a) {
      const std::size_t b = (a * 7 + 3) % x.rows();
      CHECK(std::abs(dot(z.row(a), z.row(b)) - dot(p.row(a), p.row(b))) <= 1e-8);
    }
  }
}

TEST_CASE("rank-r data has r nonzero eigenvalues") {
  const std::size_t r = 2, d = 5;
  const Matrix x = multiply(random_normal(400, r, 8), random_normal(r, d, 9));
  const auto model = pca::fit(x, pca::ComponentRule::fixed(static_cast<int>(d)));
  CHECK(model.eigenvalues[0] > 0.1);
  CHECK(model.eigenvalues[1] > 0.1);
  for (std::size_t i = r; i < d; ++i) CHECK(std::abs(model.eigenvalues[i]) <= 1e-10);
}

TEST_CASE("component rules and spectrum") {
  Rng rng(12);
  Matrix x(500, 4);
  for (std::size_t i = 0; i < 500; ++i) {
    const double a = rng.normal();
    x(i, 0) = a;
    x(i, 1) = a + 0.1 * rng.normal();
    x(i, 2) = a + 0.1 * rng.normal();
    x(i, 3) = rng.normal();
  }
  const auto fixed = pca::fit(x, pca::ComponentRule::fixed(2));
  CHECK(fixed.output_dim() == 2);
  CHECK(fixed.input_dim() == 4);

  const auto tau = pca::fit(x, pca::ComponentRule::variance(0.9));
  double cumulative = 0.0;
  std::size_t expected = 0;
  while (cumulative < 0.9) cumulative += tau.explained_variance_ratio[expected++];
  CHECK(tau.output_dim() == expected);

  const auto spectrum = pca::variance_spectrum(fixed, 4);
  REQUIRE(spectrum.size() == 4);
  for (std::size_t i = 1; i < 4; ++i) CHECK(spectrum[i] <= spectrum[i - 1]);
  CHECK(pca::variance_spectrum(fixed, 2).size() == 2);
  CHECK(pca::spectrum_to_csv(spectrum).rfind("component_index,variance_ratio\n1,", 0) == 0);
}

TEST_CASE("transform centers and checks shapes") {
  const Matrix x = random_normal(100, 3, 21);
  const auto model = pca::fit(x, pca::ComponentRule::fixed(2));
  const auto z = pca::transform(model, model.mean);
  REQUIRE(z.size() == 2);
  CHECK(std::abs(z[0]) <= 1e-12);
  CHECK(std::abs(z[1]) <= 1e-12);
  const Matrix empty = pca::transform(model, Matrix(0, 3));
  CHECK(empty.rows() == 0);
  CHECK(empty.cols() == 2);
  CHECK_THROWS_AS(pca::transform(model, Matrix(2, 4)), Error);
  CHECK_THROWS_AS(pca::fit(Matrix(1, 3)), Error);
  Matrix bad = x;
  bad(3, 1) = std::nan("");
  CHECK_THROWS_AS(pca::fit(bad), Error);
}

TEST_CASE("constant columns are left unscaled") {
  Matrix x = random_normal(50, 3, 30);
  for (std::size_t r = 0; r < 50; ++r) x(r, 1) = 7.0;
  const auto model = pca::fit(x, pca::ComponentRule::fixed(3));
  CHECK(model.scale[1] == 1.0);
  for (double v : model.components.data()) CHECK(std::isfinite(v));
}

TEST_CASE("unstandardized fit uses the raw covariance") {
  Matrix x(4, 2, {0, 0, 2, 0, 0, 1, 2, 1});
  const auto model = pca::fit(x, pca::ComponentRule::fixed(2), false);
  CHECK_FALSE(model.standardized);
  // Columns are independent with variances 4/3 and 1/3.
  CHECK(model.eigenvalues[0] == doctest::Approx(4.0 / 3.0));
  CHECK(model.eigenvalues[1] == doctest::Approx(1.0 / 3.0));
  CHECK(model.explained_variance_ratio[0] == doctest::Approx(0.8));
}

TEST_CASE("model JSON and blob round-trip") {
  const Matrix x = random_normal(30, 4, 31);
  const auto model = pca::fit(x, pca::ComponentRule::fixed(2));
  const auto back = pca::PcaModel::from_json(model.to_json(), model.blob_values());
  CHECK(back.components == model.components);
  CHECK(back.mean == model.mean);
  CHECK(pca::transform(back, x) == pca::transform(model, x));
}

TEST_CASE("Jacobi eigensolver on a known matrix") {
  const Matrix a(2, 2, {2, 1, 1, 2});
  const auto e = pca::symmetric_eigen(a);
  CHECK(e.values[0] == doctest::Approx(3.0));
  CHECK(e.values[1] == doctest::Approx(1.0));
}
