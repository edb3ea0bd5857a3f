#include "gtg/solver.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "gtg/errors.hpp"

namespace gtg {

std::vector<std::size_t> LabelAssignment::labeled() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= 0) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> LabelAssignment::unlabeled() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) out.push_back(i);
  }
  return out;
}

void LabelAssignment::check_ranges() const {
  if (labels.size() != n) {
    throw InputError("label assignment: labels size " + std::to_string(labels.size()) +
                     " does not match player count " + std::to_string(n));
  }
  if (num_classes < 1) {
    throw ConfigError("label assignment: need at least one class");
  }
  for (int v : labels) {
    if (v != kUnlabeled && (v < 0 || v >= num_classes)) {
      throw InputError("label assignment: class index " + std::to_string(v) +
                       " out of range [0, " + std::to_string(num_classes) + ")");
    }
  }
}

void LabelAssignment::validate() const {
  check_ranges();
  std::vector<bool> seen(static_cast<std::size_t>(num_classes), false);
  for (int v : labels) {
    if (v >= 0) seen[static_cast<std::size_t>(v)] = true;
  }
  for (int c = 0; c < num_classes; ++c) {
    if (!seen[static_cast<std::size_t>(c)]) {
      throw ConfigError("label assignment: class " + std::to_string(c) +
                        " has no labeled player");
    }
  }
}

void GameConfig::validate() const {
  if (k < 1) throw ConfigError("game config: k must be >= 1");
  if (!(epsilon > 0.0)) throw ConfigError("game config: epsilon must be > 0");
  if (max_iters < 1) throw ConfigError("game config: max_iters must be >= 1");
}

StrategySpace init_strategy_space(const LabelAssignment& assignment) {
  assignment.check_ranges();
  const std::size_t m = static_cast<std::size_t>(assignment.num_classes);
  StrategySpace x(assignment.n, m, 0.0);
  const double uniform = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < assignment.n; ++i) {
    if (assignment.labels[i] >= 0) {
      x(i, static_cast<std::size_t>(assignment.labels[i])) = 1.0;
    } else {
      for (std::size_t h = 0; h < m; ++h) x(i, h) = uniform;
    }
  }
  return x;
}

std::vector<double> payoff_vector(std::size_t i, const StrategySpace& space,
                                  const SimilarityGraph& graph) {
  const std::size_t m = space.cols;
  std::vector<double> u(m, 0.0);
  const auto& nbrs = graph.neighbors[i];
  const auto& ws = graph.weights[i];
  for (std::size_t r = 0; r < nbrs.size(); ++r) {
    const std::size_t j = nbrs[r];
    const double w = ws[r];
    for (std::size_t h = 0; h < m; ++h) {
      u[h] += w * space(j, h);
    }
  }
  return u;
}

double expected_payoff(std::size_t i, const StrategySpace& space,
                       const SimilarityGraph& graph) {
  const std::vector<double> u = payoff_vector(i, space, graph);
  double acc = 0.0;
  for (std::size_t h = 0; h < space.cols; ++h) {
    acc += space(i, h) * u[h];
  }
  return acc;
}

StrategySpace replicator_step(const StrategySpace& space, const SimilarityGraph& graph,
                              const LabelAssignment& assignment) {
  if (space.rows != graph.n || space.rows != assignment.n) {
    throw InputError("replicator_step: space, graph and assignment sizes disagree");
  }
  StrategySpace next = space;
  const std::size_t m = space.cols;
  for (std::size_t i = 0; i < space.rows; ++i) {
    if (assignment.is_labeled(i)) continue;  // labeled rows stay frozen
    const std::vector<double> u = payoff_vector(i, space, graph);
    double denom = 0.0;
    for (std::size_t h = 0; h < m; ++h) denom += space(i, h) * u[h];
    if (denom == 0.0) continue;  // no information to update on
    for (std::size_t h = 0; h < m; ++h) {
      next(i, h) = space(i, h) * u[h] / denom;
    }
  }
  return next;
}

GameResult run_game(const SimilarityGraph& graph, const LabelAssignment& assignment,
                    const GameConfig& config) {
  config.validate();
  assignment.validate();
  if (graph.n != assignment.n) {
    throw InputError("run_game: graph has " + std::to_string(graph.n) +
                     " players, assignment has " + std::to_string(assignment.n));
  }
  if (assignment.unlabeled().empty()) {
    throw ConfigError("run_game: no unlabeled players, nothing to predict");
  }

  GameResult result;
  StrategySpace x = init_strategy_space(assignment);
  for (int t = 0; t < config.max_iters; ++t) {
    StrategySpace next = replicator_step(x, graph, assignment);
    const double residual = l2_diff(next, x);
    result.residuals.push_back(residual);
    x = std::move(next);
    result.iterations = t + 1;
    if (residual <= config.epsilon) {
      result.converged = true;
      break;
    }
  }
  result.predictions = extract_labels(x);
  result.space = std::move(x);
  return result;
}

std::vector<int> extract_labels(const StrategySpace& space) {
  std::vector<int> out(space.rows, 0);
  for (std::size_t i = 0; i < space.rows; ++i) {
    std::size_t best = 0;
    for (std::size_t h = 1; h < space.cols; ++h) {
      if (space(i, h) > space(i, best)) best = h;  // ties keep the lowest index
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

}  // namespace gtg
