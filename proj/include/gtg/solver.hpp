#pragma once

#include <cstddef>
#include <vector>

#include "gtg/similarity_graph.hpp"

namespace gtg {

inline constexpr int kUnlabeled = -1;

// Players split into labeled (class index in [0, num_classes)) and unlabeled.
struct LabelAssignment {
  std::size_t n = 0;
  int num_classes = 0;
  std::vector<int> labels;  // size n, kUnlabeled for unlabeled players

  bool is_labeled(std::size_t i) const { return labels[i] >= 0; }
  std::vector<std::size_t> labeled() const;
  std::vector<std::size_t> unlabeled() const;

  // Shape and label-range checks only.
  void check_ranges() const;
  // check_ranges plus: every class has at least one labeled player.
  void validate() const;
};

// n x m row-stochastic; labeled rows stay exactly one-hot.
using StrategySpace = Matrix;

struct GameConfig {
  int k = 2;               // kNN size used when building the graph
  double epsilon = 1e-6;   // stop when ||x_{t+1} - x_t||_2 <= epsilon
  int max_iters = 100;

  void validate() const;
};

struct GameResult {
  StrategySpace space;
  std::vector<int> predictions;   // per-player row argmax (ties -> lowest class)
  int iterations = 0;
  bool converged = false;
  std::vector<double> residuals;  // one ||x_{t+1} - x_t||_2 per iteration
};

// Labeled rows one-hot at their class, unlabeled rows uniform 1/m.
StrategySpace init_strategy_space(const LabelAssignment& assignment);

// u_i(h) = sum over j in N_i of omega(i,j) * x_j(h), ascending-index order.
// Labeled neighbors are one-hot rows of the space, so they contribute
// omega(i,j) only at their own class.
std::vector<double> payoff_vector(std::size_t i, const StrategySpace& space,
                                  const SimilarityGraph& graph);

// u_i(x) = x_i . u_i
double expected_payoff(std::size_t i, const StrategySpace& space,
                       const SimilarityGraph& graph);

// One synchronous replicator update: every unlabeled row is recomputed from
// the same input space, x_i(h) <- x_i(h) u_i(h) / u_i(x). Labeled rows are
// copied unchanged, as is any row with zero expected payoff.
StrategySpace replicator_step(const StrategySpace& space, const SimilarityGraph& graph,
                              const LabelAssignment& assignment);

// Iterate replicator_step from init_strategy_space until the residual drops
// to config.epsilon or max_iters is hit.
GameResult run_game(const SimilarityGraph& graph, const LabelAssignment& assignment,
                    const GameConfig& config = {});

// Per-row argmax, ties broken by lowest class index.
std::vector<int> extract_labels(const StrategySpace& space);

}  // namespace gtg
