#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "gtg/errors.hpp"
#include "gtg/solver.hpp"
#include "oracle.hpp"

using namespace gtg;

namespace {

// Three players: 0 labeled class 0, 1 labeled class 1, 2 unlabeled with
// N_2 = {0, 1} and constant edge weights. The unlabeled row's class-0
// probability then follows the scalar recursion p' = w0 p / (w0 p + w1 (1-p)).
struct TwoClassGame {
  SimilarityGraph graph;
  LabelAssignment assignment;
};

TwoClassGame two_class_game(double w0 = 0.8, double w1 = 0.2) {
  TwoClassGame g;
  g.graph.n = 3;
  g.graph.k = 2;
  g.graph.neighbors = {{}, {}, {0, 1}};
  g.graph.weights = {{}, {}, {w0, w1}};
  g.assignment.n = 3;
  g.assignment.num_classes = 2;
  g.assignment.labels = {0, 1, kUnlabeled};
  return g;
}

LabelAssignment make_assignment(std::vector<int> labels, int m) {
  LabelAssignment a;
  a.n = labels.size();
  a.num_classes = m;
  a.labels = std::move(labels);
  return a;
}

}  // namespace

TEST_CASE("init_strategy_space") {
  SUBCASE("labeled row is one-hot") {
    const StrategySpace x = init_strategy_space(make_assignment({0, 1, 2}, 3));
    CHECK(x(1, 0) == 0.0);
    CHECK(x(1, 1) == 1.0);
    CHECK(x(1, 2) == 0.0);
  }
  SUBCASE("unlabeled row is uniform") {
    const StrategySpace x = init_strategy_space(make_assignment({0, 1, 2, 3, kUnlabeled}, 4));
    for (std::size_t h = 0; h < 4; ++h) CHECK(x(4, h) == 0.25);
  }
  SUBCASE("single class is degenerate") {
    const StrategySpace x = init_strategy_space(make_assignment({0, kUnlabeled}, 1));
    CHECK(x(0, 0) == 1.0);
    CHECK(x(1, 0) == 1.0);
  }
  SUBCASE("class index out of range rejected") {
    CHECK_THROWS_AS(init_strategy_space(make_assignment({0, 3}, 3)), InputError);
  }
}

TEST_CASE("payoff_vector") {
  SUBCASE("two labeled neighbors split the mass by class") {
    const TwoClassGame g = two_class_game();
    const StrategySpace x = init_strategy_space(g.assignment);
    const std::vector<double> u = payoff_vector(2, x, g.graph);
    CHECK(u[0] == 0.8);
    CHECK(u[1] == 0.2);
  }
  SUBCASE("single unlabeled neighbor passes its mixed strategy through") {
    SimilarityGraph graph;
    graph.n = 2;
    graph.k = 1;
    graph.neighbors = {{1}, {0}};
    graph.weights = {{1.0}, {1.0}};
    StrategySpace x(2, 2, 0.0);
    x(0, 0) = 0.5;
    x(0, 1) = 0.5;
    x(1, 0) = 0.3;
    x(1, 1) = 0.7;
    const std::vector<double> u = payoff_vector(0, x, graph);
    CHECK(u[0] == 0.3);
    CHECK(u[1] == 0.7);
  }
  SUBCASE("empty neighborhood gives the zero vector") {
    TwoClassGame g = two_class_game();
    g.graph.neighbors[2].clear();
    g.graph.weights[2].clear();
    const StrategySpace x = init_strategy_space(g.assignment);
    const std::vector<double> u = payoff_vector(2, x, g.graph);
    CHECK(u == std::vector<double>{0.0, 0.0});
  }
}

TEST_CASE("expected_payoff") {
  const TwoClassGame g = two_class_game();
  SUBCASE("uniform row averages the payoff vector") {
    const StrategySpace x = init_strategy_space(g.assignment);
    CHECK(expected_payoff(2, x, g.graph) == 0.5);
  }
  SUBCASE("one-hot row selects a single entry") {
    StrategySpace x = init_strategy_space(g.assignment);
    x(2, 0) = 1.0;
    x(2, 1) = 0.0;
    const std::vector<double> u = payoff_vector(2, x, g.graph);
    CHECK(expected_payoff(2, x, g.graph) == u[0]);
  }
  SUBCASE("zero payoff vector gives zero") {
    TwoClassGame iso = two_class_game();
    iso.graph.neighbors[2].clear();
    iso.graph.weights[2].clear();
    const StrategySpace x = init_strategy_space(iso.assignment);
    CHECK(expected_payoff(2, x, iso.graph) == 0.0);
  }
}

TEST_CASE("replicator_step") {
  const TwoClassGame g = two_class_game();
  SUBCASE("first update from uniform reproduces the payoff ratio") {
    const StrategySpace x = init_strategy_space(g.assignment);
    const StrategySpace next = replicator_step(x, g.graph, g.assignment);
    CHECK(next(2, 0) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(next(2, 1) == doctest::Approx(0.2).epsilon(1e-15));
  }
  SUBCASE("labeled rows never move") {
    StrategySpace x = init_strategy_space(g.assignment);
    const StrategySpace next = replicator_step(x, g.graph, g.assignment);
    CHECK(next(0, 0) == 1.0);
    CHECK(next(0, 1) == 0.0);
    CHECK(next(1, 0) == 0.0);
    CHECK(next(1, 1) == 1.0);
  }
  SUBCASE("second update matches the scalar recursion") {
    // from [0.8, 0.2]: (0.8*0.8, 0.2*0.2) / 0.68  ->  [16/17, 1/17]
    StrategySpace x = init_strategy_space(g.assignment);
    x = replicator_step(x, g.graph, g.assignment);
    x = replicator_step(x, g.graph, g.assignment);
    const std::vector<double> trace = oracle::two_class_recursion(0.8, 0.2, 0.5, 2);
    CHECK(x(2, 0) == doctest::Approx(trace[2]).epsilon(1e-15));
    CHECK(x(2, 0) == doctest::Approx(0.94117647058823528).epsilon(1e-12));
    CHECK(x(2, 1) == doctest::Approx(0.05882352941176471).epsilon(1e-12));
  }
  SUBCASE("zero expected payoff copies the row") {
    TwoClassGame iso = two_class_game();
    iso.graph.neighbors[2].clear();
    iso.graph.weights[2].clear();
    const StrategySpace x = init_strategy_space(iso.assignment);
    const StrategySpace next = replicator_step(x, iso.graph, iso.assignment);
    CHECK(next == x);
  }
  SUBCASE("size mismatch rejected") {
    const StrategySpace x(2, 2, 0.5);
    CHECK_THROWS_AS(replicator_step(x, g.graph, g.assignment), InputError);
  }
}

TEST_CASE("extract_labels") {
  StrategySpace x(3, 3, 0.0);
  x(0, 0) = 0.2; x(0, 1) = 0.7; x(0, 2) = 0.1;
  x(1, 0) = 0.5; x(1, 1) = 0.5;
  x(2, 2) = 1.0;
  const std::vector<int> labels = extract_labels(x);
  CHECK(labels[0] == 1);  // unique argmax
  CHECK(labels[1] == 0);  // tie goes to the lower class
  CHECK(labels[2] == 2);  // one-hot row
}

TEST_CASE("run_game on the two-class instance") {
  const TwoClassGame g = two_class_game();
  GameConfig config;
  const GameResult result = run_game(g.graph, g.assignment, config);

  SUBCASE("converges to the heavier neighbor's class") {
    CHECK(result.converged);
    CHECK(result.iterations <= 40);
    CHECK(result.predictions[2] == 0);
    CHECK(result.residuals.size() == static_cast<std::size_t>(result.iterations));
    CHECK(result.residuals.back() < 1e-6);
  }
  SUBCASE("trajectory matches the scalar recursion step for step") {
    const std::vector<double> trace =
        oracle::two_class_recursion(0.8, 0.2, 0.5, result.iterations);
    CHECK(result.space(2, 0) == doctest::Approx(trace.back()).epsilon(1e-12));
    // the residual of step t is sqrt(2) * |p_{t+1} - p_t|: the row moves by
    // (+d, -d), every other row is frozen
    for (int t = 0; t < result.iterations; ++t) {
      const double expect = std::sqrt(2.0) * std::abs(trace[t + 1] - trace[t]);
      CHECK(result.residuals[static_cast<std::size_t>(t)] ==
            doctest::Approx(expect).epsilon(1e-12));
    }
  }
  SUBCASE("residuals shrink monotonically here") {
    for (std::size_t t = 1; t < result.residuals.size(); ++t) {
      CHECK(result.residuals[t] < result.residuals[t - 1]);
    }
  }
}

TEST_CASE("run_game when all unlabeled neighbors share one class") {
  SimilarityGraph graph;
  graph.n = 4;
  graph.k = 1;
  graph.neighbors = {{}, {}, {1}, {1}};
  graph.weights = {{}, {}, {0.37}, {0.9}};
  const LabelAssignment assignment = make_assignment({0, 1, kUnlabeled, kUnlabeled}, 2);
  const GameResult result = run_game(graph, assignment);
  CHECK(result.predictions[2] == 1);
  CHECK(result.predictions[3] == 1);
  // one step lands exactly on the one-hot vector, the second certifies it
  CHECK(result.space(2, 1) == 1.0);
  CHECK(result.space(3, 1) == 1.0);
  CHECK(result.converged);
  CHECK(result.iterations == 2);
  CHECK(result.residuals[1] == 0.0);
}

TEST_CASE("run_game input contracts") {
  const TwoClassGame g = two_class_game();
  SUBCASE("no unlabeled players") {
    const LabelAssignment all = make_assignment({0, 1, 0}, 2);
    CHECK_THROWS_AS(run_game(g.graph, all), ConfigError);
  }
  SUBCASE("class without a labeled player") {
    const LabelAssignment bad = make_assignment({0, 0, kUnlabeled}, 2);
    CHECK_THROWS_AS(run_game(g.graph, bad), ConfigError);
  }
  SUBCASE("bad config") {
    GameConfig config;
    config.epsilon = 0.0;
    CHECK_THROWS_AS(run_game(g.graph, g.assignment, config), ConfigError);
    config = {};
    config.max_iters = 0;
    CHECK_THROWS_AS(run_game(g.graph, g.assignment, config), ConfigError);
  }
}

TEST_CASE("replicator_step matches the brute-force reference") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 600; ++trial) {
    const oracle::RandomGame game = oracle::random_game(rng, 5, 3);
    for (std::size_t i = 0; i < game.graph.n; ++i) {
      const std::vector<double> u = payoff_vector(i, game.space, game.graph);
      const std::vector<double> u_ref =
          oracle::payoff_vector(i, game.space, game.graph, game.assignment.labels);
      REQUIRE(u.size() == u_ref.size());
      for (std::size_t h = 0; h < u.size(); ++h) {
        CHECK(u[h] == doctest::Approx(u_ref[h]).epsilon(1e-12));
      }
      CHECK(expected_payoff(i, game.space, game.graph) ==
            doctest::Approx(oracle::expected_payoff(i, game.space, game.graph,
                                                    game.assignment.labels))
                .epsilon(1e-12));
    }
    const StrategySpace next = replicator_step(game.space, game.graph, game.assignment);
    const Matrix next_ref =
        oracle::replicator_step(game.space, game.graph, game.assignment.labels);
    for (std::size_t idx = 0; idx < next.data.size(); ++idx) {
      CHECK(next.data[idx] == doctest::Approx(next_ref.data[idx]).epsilon(1e-12));
    }
  }
}

TEST_CASE("replicator_step preserves the simplex") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const oracle::RandomGame game = oracle::random_game(rng, 20, 6);
    StrategySpace x = game.space;
    for (int step = 0; step < 50; ++step) {
      x = replicator_step(x, game.graph, game.assignment);
      for (std::size_t i = 0; i < x.rows; ++i) {
        double sum = 0.0;
        for (std::size_t h = 0; h < x.cols; ++h) {
          CHECK(x(i, h) >= 0.0);
          sum += x(i, h);
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
      }
    }
  }
}

TEST_CASE("labeled rows are bit-identical across iterations") {
  std::mt19937_64 rng(12);
  const oracle::RandomGame game = oracle::random_game(rng, 15, 4);
  StrategySpace x = game.space;
  for (int step = 0; step < 30; ++step) {
    x = replicator_step(x, game.graph, game.assignment);
    for (std::size_t i = 0; i < x.rows; ++i) {
      if (!game.assignment.is_labeled(i)) continue;
      for (std::size_t h = 0; h < x.cols; ++h) {
        CHECK(x(i, h) == game.space(i, h));
      }
    }
  }
}

TEST_CASE("zero entries stay zero") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const oracle::RandomGame game = oracle::random_game(rng, 12, 5);
    StrategySpace x = game.space;
    std::vector<bool> zero(x.data.size());
    for (std::size_t idx = 0; idx < x.data.size(); ++idx) zero[idx] = x.data[idx] == 0.0;
    for (int step = 0; step < 25; ++step) {
      x = replicator_step(x, game.graph, game.assignment);
      for (std::size_t idx = 0; idx < x.data.size(); ++idx) {
        if (zero[idx]) CHECK(x.data[idx] == 0.0);
      }
    }
  }
}

TEST_CASE("scaling every weight leaves the trajectory unchanged") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const oracle::RandomGame game = oracle::random_game(rng, 10, 4);
    for (double c : {1e-3, 1e3}) {
      SimilarityGraph scaled = game.graph;
      for (auto& row : scaled.weights) {
        for (double& w : row) w *= c;
      }
      StrategySpace x = game.space;
      StrategySpace y = game.space;
      for (int step = 0; step < 60; ++step) {
        x = replicator_step(x, game.graph, game.assignment);
        y = replicator_step(y, scaled, game.assignment);
        for (std::size_t idx = 0; idx < x.data.size(); ++idx) {
          CHECK(x.data[idx] == doctest::Approx(y.data[idx]).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("a converged game sits within epsilon of a fixed point") {
  const TwoClassGame g = two_class_game(0.9, 0.4);
  GameConfig config;
  const GameResult result = run_game(g.graph, g.assignment, config);
  REQUIRE(result.converged);
  const StrategySpace again = replicator_step(result.space, g.graph, g.assignment);
  CHECK(l2_diff(again, result.space) <= config.epsilon);
}

TEST_CASE("run_game is deterministic") {
  const TwoClassGame g = two_class_game(0.7, 0.3);
  const GameResult a = run_game(g.graph, g.assignment);
  const GameResult b = run_game(g.graph, g.assignment);
  CHECK(a.space == b.space);
  CHECK(a.predictions == b.predictions);
  CHECK(a.residuals == b.residuals);
  CHECK(a.iterations == b.iterations);
  CHECK(a.converged == b.converged);
}
