#include "gtg/similarity_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "gtg/errors.hpp"

namespace gtg {

namespace {

void require_square(const Matrix& d, const char* who) {
  if (d.rows != d.cols) {
    throw InputError(std::string(who) + ": matrix must be square, got " +
                     std::to_string(d.rows) + "x" + std::to_string(d.cols));
  }
}

}  // namespace

DissimilarityMatrix euclidean_distance_matrix(const FeatureMatrix& features) {
  const std::size_t n = features.rows;
  const std::size_t dims = features.cols;
  if (n < 2 || dims < 1) {
    throw InputError("euclidean_distance_matrix: need at least 2 rows and 1 column, got " +
                     std::to_string(n) + "x" + std::to_string(dims));
  }
  for (double v : features.data) {
    if (!std::isfinite(v)) {
      throw InputError("euclidean_distance_matrix: non-finite feature value");
    }
  }
  DissimilarityMatrix d(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < dims; ++c) {
        const double diff = features(i, c) - features(j, c);
        acc += diff * diff;
      }
      const double dist = std::sqrt(acc);
      d(i, j) = dist;
      d(j, i) = dist;
    }
  }
  return d;
}

DissimilarityMatrix symmetrize_max(const DissimilarityMatrix& d) {
  require_square(d, "symmetrize_max");
  DissimilarityMatrix out = d;
  for (std::size_t i = 0; i < d.rows; ++i) {
    for (std::size_t j = i + 1; j < d.cols; ++j) {
      const double m = std::max(d(i, j), d(j, i));
      out(i, j) = m;
      out(j, i) = m;
    }
  }
  return out;
}

LocalScales local_scales(const DissimilarityMatrix& d, int scale_neighbors) {
  require_square(d, "local_scales");
  const std::size_t n = d.rows;
  if (n < 2) {
    throw InputError("local_scales: need at least 2 players");
  }
  if (scale_neighbors < 1) {
    throw ConfigError("local_scales: scale_neighbors must be >= 1");
  }
  const std::size_t rank = std::min<std::size_t>(scale_neighbors, n - 1);
  LocalScales sigma(n);
  std::vector<double> row;
  row.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row.push_back(d(i, j));
    }
    std::nth_element(row.begin(), row.begin() + (rank - 1), row.end());
    sigma[i] = std::max(row[rank - 1], kSigmaFloor);
  }
  return sigma;
}

double similarity_from_distance(const DissimilarityMatrix& d, const LocalScales& scales,
                                std::size_t i, std::size_t j) {
  if (i == j) {
    throw InputError("similarity_from_distance: self-similarity query (i == j)");
  }
  if (i >= d.rows || j >= d.rows || scales.size() != d.rows) {
    throw InputError("similarity_from_distance: index out of range");
  }
  const double w = std::exp(-d(i, j) / (scales[i] * scales[j]));
  // exp of a hugely negative argument underflows to 0; keep omega in (0,1].
  return std::max(w, std::numeric_limits<double>::min());
}

SimilarityGraph knn_neighborhoods(const DissimilarityMatrix& d, int k,
                                  const GraphOptions& opts) {
  require_square(d, "knn_neighborhoods");
  if (k < 1) {
    throw ConfigError("knn_neighborhoods: k must be >= 1");
  }
  const std::size_t n = d.rows;
  if (n < 2) {
    throw InputError("knn_neighborhoods: need at least 2 players");
  }
  const std::size_t per_player = std::min<std::size_t>(k, n - 1);
  const LocalScales sigma = local_scales(d, opts.scale_neighbors);

  SimilarityGraph g;
  g.n = n;
  g.k = k;
  g.neighbors.resize(n);
  g.weights.resize(n);

  std::vector<std::pair<double, std::size_t>> cand;
  cand.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    cand.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) cand.emplace_back(d(i, j), j);
    }
    // ties at equal distance resolve to the lower index
    std::sort(cand.begin(), cand.end());
    auto& nbrs = g.neighbors[i];
    nbrs.reserve(per_player);
    for (std::size_t r = 0; r < per_player; ++r) nbrs.push_back(cand[r].second);
    std::sort(nbrs.begin(), nbrs.end());
  }

  if (opts.symmetric) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j : g.neighbors[i]) {
        auto& back = g.neighbors[j];
        if (!std::binary_search(back.begin(), back.end(), i)) {
          back.insert(std::upper_bound(back.begin(), back.end(), i), i);
        }
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    auto& ws = g.weights[i];
    ws.reserve(g.neighbors[i].size());
    for (std::size_t j : g.neighbors[i]) {
      ws.push_back(similarity_from_distance(d, sigma, i, j));
    }
  }
  return g;
}

}  // namespace gtg
