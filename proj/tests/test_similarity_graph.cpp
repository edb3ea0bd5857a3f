#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "gtg/errors.hpp"
#include "gtg/similarity_graph.hpp"

using namespace gtg;

namespace {

Matrix matrix_from(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix random_symmetric_distances(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 10.0);
  Matrix d(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = unit(rng);
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

}  // namespace

TEST_CASE("euclidean_distance_matrix on known points") {
  SUBCASE("pythagorean pair") {
    const Matrix f = matrix_from({{0, 0}, {3, 4}});
    const Matrix d = euclidean_distance_matrix(f);
    CHECK(d(0, 1) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(d(1, 0) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(d(0, 0) == 0.0);
    CHECK(d(1, 1) == 0.0);
  }
  SUBCASE("identical points") {
    const Matrix f = matrix_from({{1, 7}, {1, 7}});
    CHECK(euclidean_distance_matrix(f)(0, 1) == 0.0);
  }
  SUBCASE("simplex vertices are equidistant") {
    const Matrix f = matrix_from({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    const Matrix d = euclidean_distance_matrix(f);
    const double expect = std::sqrt(2.0);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        if (i == j) {
          CHECK(d(i, j) == 0.0);
        } else {
          CHECK(d(i, j) == doctest::Approx(expect).epsilon(1e-12));
        }
      }
    }
  }
  SUBCASE("non-finite features rejected") {
    Matrix f = matrix_from({{0, 0}, {1, 1}});
    f(1, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(euclidean_distance_matrix(f), InputError);
  }
  SUBCASE("single row rejected") {
    CHECK_THROWS_AS(euclidean_distance_matrix(Matrix(1, 3, 0.0)), InputError);
  }
}

TEST_CASE("symmetrize_max") {
  SUBCASE("max of the pair") {
    const Matrix out = symmetrize_max(matrix_from({{0, 2}, {5, 0}}));
    CHECK(out == matrix_from({{0, 5}, {5, 0}}));
  }
  SUBCASE("3x3 elementwise max with transpose") {
    const Matrix out = symmetrize_max(matrix_from({{0, 1, 4}, {3, 0, 2}, {4, 6, 0}}));
    CHECK(out == matrix_from({{0, 3, 4}, {3, 0, 6}, {4, 6, 0}}));
  }
  SUBCASE("idempotent on random matrices") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> unit(0.0, 100.0);
    for (int trial = 0; trial < 20; ++trial) {
      Matrix d(6, 6, 0.0);
      for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
          if (i != j) d(i, j) = unit(rng);
        }
      }
      const Matrix once = symmetrize_max(d);
      CHECK(symmetrize_max(once) == once);
    }
  }
  SUBCASE("non-square rejected") {
    CHECK_THROWS_AS(symmetrize_max(Matrix(2, 3, 0.0)), InputError);
  }
}

TEST_CASE("local_scales") {
  SUBCASE("rank clamps to n-1") {
    // distances from player 0: {2, 5}; rank' = min(7, 2) = 2 -> sigma = 5
    const Matrix d = matrix_from({{0, 2, 5}, {2, 0, 1}, {5, 1, 0}});
    const LocalScales sigma = local_scales(d, 7);
    CHECK(sigma[0] == 5.0);
  }
  SUBCASE("coincident points hit the floor") {
    const Matrix d(4, 4, 0.0);
    for (double s : local_scales(d, 7)) CHECK(s == kSigmaFloor);
  }
  SUBCASE("ten collinear integer points") {
    Matrix d(10, 10, 0.0);
    for (std::size_t i = 0; i < 10; ++i) {
      for (std::size_t j = 0; j < 10; ++j) {
        d(i, j) = std::abs(static_cast<double>(i) - static_cast<double>(j));
      }
    }
    // brute-force check: sort player 0's distances and take the 7th smallest
    std::vector<double> row;
    for (std::size_t j = 1; j < 10; ++j) row.push_back(d(0, j));
    std::sort(row.begin(), row.end());
    CHECK(row[6] == 7.0);
    CHECK(local_scales(d, 7)[0] == 7.0);
  }
  SUBCASE("single player rejected") {
    CHECK_THROWS_AS(local_scales(Matrix(1, 1, 0.0), 7), InputError);
  }
}

TEST_CASE("similarity_from_distance") {
  const Matrix d = matrix_from({{0, 2}, {2, 0}});
  SUBCASE("zero distance gives 1") {
    const Matrix z = matrix_from({{0, 0}, {0, 0}});
    CHECK(similarity_from_distance(z, {1.0, 1.0}, 0, 1) == 1.0);
  }
  SUBCASE("unit exponent gives 1/e") {
    CHECK(similarity_from_distance(d, {1.0, 2.0}, 0, 1) ==
          doctest::Approx(0.36787944117144233).epsilon(1e-12));
  }
  SUBCASE("direct evaluation") {
    // exp(-2 / (1 * 4)) = exp(-0.5)
    CHECK(similarity_from_distance(d, {1.0, 4.0}, 0, 1) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    CHECK(similarity_from_distance(d, {1.0, 4.0}, 0, 1) ==
          doctest::Approx(0.60653065971263342).epsilon(1e-12));
  }
  SUBCASE("self query rejected") {
    CHECK_THROWS_AS(similarity_from_distance(d, {1.0, 1.0}, 1, 1), InputError);
  }
  SUBCASE("underflow clamps into (0, 1]") {
    const Matrix far = matrix_from({{0, 1.0}, {1.0, 0}});
    const double w = similarity_from_distance(far, {kSigmaFloor, kSigmaFloor}, 0, 1);
    CHECK(w > 0.0);
    CHECK(w <= 1.0);
  }
}

TEST_CASE("knn_neighborhoods") {
  SUBCASE("all others included when k >= n-1") {
    const Matrix d = matrix_from({{0, 1, 2}, {1, 0, 3}, {2, 3, 0}});
    const SimilarityGraph g = knn_neighborhoods(d, 2);
    CHECK(g.neighbors[0] == std::vector<std::size_t>{1, 2});
  }
  SUBCASE("distance ties break to the lower index") {
    const Matrix d = matrix_from(
        {{0, 3, 3, 5}, {3, 0, 1, 1}, {3, 1, 0, 1}, {5, 1, 1, 0}});
    const SimilarityGraph g = knn_neighborhoods(d, 2);
    CHECK(g.neighbors[0] == std::vector<std::size_t>{1, 2});
  }
  SUBCASE("k clamps to n-1") {
    std::mt19937_64 rng(99);
    const Matrix d = random_symmetric_distances(rng, 4);
    const SimilarityGraph g = knn_neighborhoods(d, 7);
    for (std::size_t i = 0; i < 4; ++i) CHECK(g.neighbors[i].size() == 3);
  }
  SUBCASE("k < 1 rejected") {
    const Matrix d = matrix_from({{0, 1}, {1, 0}});
    CHECK_THROWS_AS(knn_neighborhoods(d, 0), ConfigError);
  }
  SUBCASE("symmetric option unions reverse edges") {
    // player 2 is far away: 0 and 1 pick each other, 2 picks 0; the union
    // must add 2 to N_0 without touching N_1.
    const Matrix d = matrix_from({{0, 1, 10}, {1, 0, 11}, {10, 11, 0}});
    GraphOptions opts;
    opts.symmetric = true;
    const SimilarityGraph g = knn_neighborhoods(d, 1, opts);
    CHECK(g.neighbors[0] == std::vector<std::size_t>{1, 2});
    CHECK(g.neighbors[1] == std::vector<std::size_t>{0});
    CHECK(g.neighbors[2] == std::vector<std::size_t>{0});
    CHECK(g.weights[0].size() == 2);
  }
}

TEST_CASE("graph invariants on random instances") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + rng() % 12;
    const int k = 1 + static_cast<int>(rng() % 5);
    const Matrix d = random_symmetric_distances(rng, n);
    const SimilarityGraph g = knn_neighborhoods(d, k);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(g.neighbors[i].size() == std::min<std::size_t>(k, n - 1));
      CHECK(std::is_sorted(g.neighbors[i].begin(), g.neighbors[i].end()));
      for (std::size_t r = 0; r < g.neighbors[i].size(); ++r) {
        CHECK(g.neighbors[i][r] != i);
        CHECK(g.weights[i][r] > 0.0);
        CHECK(g.weights[i][r] <= 1.0);
      }
    }
  }
}

TEST_CASE("knn_neighborhoods is bit-for-bit deterministic") {
  std::mt19937_64 rng(77);
  const Matrix d = random_symmetric_distances(rng, 15);
  const SimilarityGraph a = knn_neighborhoods(d, 3);
  const SimilarityGraph b = knn_neighborhoods(d, 3);
  REQUIRE(a.neighbors == b.neighbors);
  REQUIRE(a.weights == b.weights);
}

TEST_CASE("similarity decreases strictly with distance at fixed scales") {
  const LocalScales sigma{2.0, 3.0};
  double prev = 1.1;
  for (double dist : {0.0, 0.5, 1.0, 4.0, 20.0}) {
    Matrix d(2, 2, 0.0);
    d(0, 1) = d(1, 0) = dist;
    const double w = similarity_from_distance(d, sigma, 0, 1);
    CHECK(w < prev);
    prev = w;
  }
}

TEST_CASE("scaling all distances by c scales sigma and divides the exponent") {
  std::mt19937_64 rng(31337);
  for (double c : {0.5, 2.0, 1000.0}) {
    const std::size_t n = 8;
    const Matrix d = random_symmetric_distances(rng, n);
    Matrix scaled = d;
    for (double& v : scaled.data) v *= c;

    const LocalScales sigma = local_scales(d, 7);
    const LocalScales sigma_scaled = local_scales(scaled, 7);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(sigma_scaled[i] == doctest::Approx(c * sigma[i]).epsilon(1e-15));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double w = similarity_from_distance(scaled, sigma_scaled, i, j);
        const double expect = std::exp(-d(i, j) / (c * (sigma[i] * sigma[j])));
        CHECK(w == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}
