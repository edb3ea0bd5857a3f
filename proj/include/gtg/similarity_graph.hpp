#pragma once

#include <cstddef>
#include <vector>

#include "gtg/matrix.hpp"

namespace gtg {

using FeatureMatrix = Matrix;        // n x d, one feature row per player
using DissimilarityMatrix = Matrix;  // n x n, nonnegative, zero diagonal

// Per-player kernel bandwidths, floored so duplicate points cannot zero them.
using LocalScales = std::vector<double>;

inline constexpr double kSigmaFloor = 1e-12;
inline constexpr int kDefaultScaleNeighbors = 7;

// Directed weighted kNN graph. Neighbor lists are kept in ascending player
// index so every downstream summation has a fixed order.
struct SimilarityGraph {
  std::size_t n = 0;
  int k = 0;
  std::vector<std::vector<std::size_t>> neighbors;
  std::vector<std::vector<double>> weights;  // aligned with neighbors, in (0,1]
};

struct GraphOptions {
  int scale_neighbors = kDefaultScaleNeighbors;  // rank of the neighbor defining sigma_i
  bool symmetric = false;  // union N_i with {j : i in N_j}
};

// Pairwise L2 distances between feature rows. Symmetric, zero diagonal.
DissimilarityMatrix euclidean_distance_matrix(const FeatureMatrix& features);

// Elementwise max of D and its transpose. Idempotent.
DissimilarityMatrix symmetrize_max(const DissimilarityMatrix& d);

// sigma_i = distance from i to its min(scale_neighbors, n-1)-th nearest other
// player, clamped to kSigmaFloor.
LocalScales local_scales(const DissimilarityMatrix& d,
                         int scale_neighbors = kDefaultScaleNeighbors);

// omega(i,j) = exp(-D(i,j) / (sigma_i * sigma_j)), in (0,1]. i must differ from j.
double similarity_from_distance(const DissimilarityMatrix& d, const LocalScales& scales,
                                std::size_t i, std::size_t j);

// For each player, the min(k, n-1) others at smallest distance (ties broken by
// lower index), weighted by similarity_from_distance over local_scales.
SimilarityGraph knn_neighborhoods(const DissimilarityMatrix& d, int k,
                                  const GraphOptions& opts = {});

}  // namespace gtg
