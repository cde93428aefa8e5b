#include <cmath>

#include "doctest.h"
#include "semcad/feature_selection.hpp"

using namespace semcad;
using namespace semcad::selection;

namespace {

using Table = std::vector<std::vector<double>>;

// Direct entropy summation, independent of the library's implementation.
double entropy(const std::vector<double>& counts) {
  double n = 0.0;
  for (double c : counts) n += c;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0) h -= (c / n) * std::log(c / n);
  }
  return h;
}

double oracle_u(const Table& t) {
  const std::size_t r = t.size(), c = t[0].size();
  std::vector<double> col(c, 0.0);
  double n = 0.0;
  for (const auto& row : t) {
    for (std::size_t j = 0; j < c; ++j) {
      col[j] += row[j];
      n += row[j];
    }
  }
  const double hy = entropy(col);
  if (hy == 0.0) return 1.0;
  double hyx = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    double ni = 0.0;
    for (double v : t[i]) ni += v;
    if (ni > 0) hyx += ni / n * entropy(t[i]);
  }
  return (hy - hyx) / hy;
}

double oracle_chi(const Table& t, int& dof) {
  const std::size_t r = t.size(), c = t[0].size();
  std::vector<double> rs(r, 0.0), cs(c, 0.0);
  double n = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      rs[i] += t[i][j];
      cs[j] += t[i][j];
      n += t[i][j];
    }
  }
  double s = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const double e = rs[i] * cs[j] / n;
      if (e > 0) s += (t[i][j] - e) * (t[i][j] - e) / e;
    }
  }
  int nr = 0, nc = 0;
  for (double v : rs) nr += v > 0;
  for (double v : cs) nc += v > 0;
  dof = (nr - 1) * (nc - 1);
  return s;
}

data::EncodedDataset make_dataset(std::vector<std::vector<std::int32_t>> columns,
                                  std::vector<std::string> names, std::vector<int> cards,
                                  std::vector<std::uint8_t> labels) {
  data::EncodedDataset ds;
  ds.feature_names = std::move(names);
  ds.cardinalities = std::move(cards);
  ds.rows = labels.size();
  ds.labels = std::move(labels);
  for (std::size_t r = 0; r < ds.rows; ++r) {
    for (const auto& col : columns) ds.codes.push_back(col[r]);
  }
  return ds;
}

}  // namespace

TEST_CASE("chi-square on hand-computed tables") {
  auto a = chi_square(ContingencyTable(Table{{10, 10}, {10, 10}}));
  CHECK(a.statistic == doctest::Approx(0.0));
  CHECK(a.dof == 1);
  auto b = chi_square(ContingencyTable(Table{{10, 0}, {0, 10}}));
  CHECK(b.statistic == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(b.dof == 1);
  auto c = chi_square(ContingencyTable(Table{{5, 0}, {7, 0}}));
  CHECK(c.statistic == 0.0);
  CHECK(c.dof == 0);
  CHECK_THROWS_AS(chi_square(ContingencyTable(Table{{0, 0}, {0, 0}})), Error);
}

TEST_CASE("chi-square and Theil's U match brute-force oracles on random tables") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t r = 2 + rng.below(5), c = 2 + rng.below(3);
    Table t(r, std::vector<double>(c));
    for (auto& row : t) {
      for (auto& v : row) v = rng.bernoulli(0.2) ? 0.0 : static_cast<double>(rng.below(50));
    }
    t[0][0] += 1;  // never all zero
    const ContingencyTable table(t);
    int dof = 0;
    const double expected = oracle_chi(t, dof);
    const auto got = chi_square(table);
    CHECK(got.statistic == doctest::Approx(expected).epsilon(1e-10));
    CHECK(got.dof == dof);
    CHECK(chi_square(table.transposed()).statistic == doctest::Approx(got.statistic).epsilon(1e-12));
    const double u = theils_u(table);
    CHECK(u == doctest::Approx(oracle_u(t)).epsilon(1e-10));
    CHECK(u >= 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("Theil's U special cases") {
  CHECK(theils_u(ContingencyTable(Table{{7, 0}, {0, 3}})) == doctest::Approx(1.0));
  // Each feature category maps to one label category.
  CHECK(theils_u(ContingencyTable(Table{{7, 0}, {4, 0}, {0, 3}})) == doctest::Approx(1.0));
  // Product table: independence.
  CHECK(theils_u(ContingencyTable(Table{{2, 6}, {3, 9}, {5, 15}})) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(theils_u(ContingencyTable(Table{{8, 2}, {2, 8}})) -
                 oracle_u(Table{{8, 2}, {2, 8}})) <= 1e-12);
  // Constant label.
  CHECK(theils_u(ContingencyTable(Table{{3, 0}, {4, 0}})) == 1.0);
  // Direction matters.
  const Table asym{{5, 0}, {5, 0}, {0, 5}, {0, 5}};
  const ContingencyTable t(asym);
  CHECK(theils_u(t) == doctest::Approx(1.0));
  CHECK(theils_u(t.transposed()) == doctest::Approx(0.5));
}

TEST_CASE("rank_features orders by U and marks the top k") {
  Rng rng(17);
  const std::size_t n = 6000;
  std::vector<std::uint8_t> labels(n);
  std::vector<std::int32_t> copy(n), noisy(n), random(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = rng.bernoulli(0.3);
    copy[i] = labels[i] + 1;
    noisy[i] = rng.bernoulli(0.9) ? labels[i] + 1 : 2 - labels[i];
    random[i] = 1 + static_cast<std::int32_t>(rng.below(8));
  }
  const auto ds = make_dataset({random, noisy, copy}, {"random", "noisy", "copy"}, {9, 3, 3}, labels);
  const auto scores = rank_features(ds, 2);
  REQUIRE(scores.size() == 3);
  CHECK(scores[0].feature == "copy");
  CHECK(scores[0].theils_u == doctest::Approx(1.0));
  CHECK(scores[0].column == 2);
  CHECK(scores[1].feature == "noisy");
  CHECK(scores[2].feature == "random");
  CHECK(scores[2].theils_u <= 0.05);
  CHECK(scores[0].selected);
  CHECK(scores[1].selected);
  CHECK_FALSE(scores[2].selected);
  CHECK(scores[0].dof == 1);

  const auto all1 = rank_features(ds, 3);
  const auto all2 = rank_features(ds, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(all1[i].selected);
    CHECK(all1[i].feature == all2[i].feature);
  }
  CHECK_THROWS_AS(rank_features(ds, 0), Error);
  CHECK_THROWS_AS(rank_features(ds, 4), Error);
  CHECK(scores_to_csv(scores).rfind("feature,", 0) == 0);
}

TEST_CASE("rank_features breaks ties by chi-square then by name") {
  const std::vector<std::uint8_t> labels = {0, 0, 1, 1};
  const std::vector<std::int32_t> a = {1, 1, 2, 2};
  const auto ds = make_dataset({a, a}, {"zeta", "alpha"}, {3, 3}, labels);
  const auto scores = rank_features(ds, 1);
  CHECK(scores[0].feature == "alpha");
  CHECK(scores[1].feature == "zeta");
}

TEST_CASE("contingency table from an encoded column") {
  const auto ds = make_dataset({{1, 1, 2, 0}}, {"f"}, {3}, {0, 1, 1, 0});
  const auto t = ContingencyTable::from_column(ds, 0);
  REQUIRE(t.rows() == 3);
  REQUIRE(t.cols() == 2);
  CHECK(t.at(0, 0) == 1);
  CHECK(t.at(1, 0) == 1);
  CHECK(t.at(1, 1) == 1);
  CHECK(t.at(2, 1) == 1);
  CHECK(t.total() == 4);
}
