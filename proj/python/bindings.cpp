#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gtg/baselines.hpp"
#include "gtg/errors.hpp"
#include "gtg/evaluation.hpp"
#include "gtg/similarity_graph.hpp"
#include "gtg/solver.hpp"

namespace py = pybind11;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

gtg::Matrix matrix_from_array(const DoubleArray& arr) {
  if (arr.ndim() != 2) {
    throw gtg::InputError("expected a 2-d array, got " + std::to_string(arr.ndim()) +
                          " dimension(s)");
  }
  gtg::Matrix m(static_cast<std::size_t>(arr.shape(0)),
                static_cast<std::size_t>(arr.shape(1)));
  std::memcpy(m.data.data(), arr.data(), sizeof(double) * m.data.size());
  return m;
}

py::array_t<double> array_from_matrix(const gtg::Matrix& m) {
  py::array_t<double> arr(std::vector<py::ssize_t>{static_cast<py::ssize_t>(m.rows),
                                                   static_cast<py::ssize_t>(m.cols)});
  std::memcpy(arr.mutable_data(), m.data.data(), sizeof(double) * m.data.size());
  return arr;
}

gtg::TrainingSet training_from_pairs(const std::vector<std::pair<std::size_t, int>>& members,
                                     int num_classes) {
  gtg::TrainingSet train;
  train.num_classes = num_classes;
  for (const auto& [player, label] : members) {
    train.members.push_back({player, label});
  }
  train.validate();
  return train;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Graph transduction game classifier: kNN similarity graphs with local "
            "scaling, multi-population replicator dynamics, nearest-neighbor "
            "baselines and the leave-one-out evaluation protocol.";

  py::register_exception<gtg::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<gtg::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<gtg::FormatError>(m, "FormatError", PyExc_ValueError);

  m.attr("UNLABELED") = gtg::kUnlabeled;
  m.attr("SIGMA_FLOOR") = gtg::kSigmaFloor;

  // graph construction
  m.def(
      "euclidean_distance_matrix",
      [](const DoubleArray& features) {
        return array_from_matrix(gtg::euclidean_distance_matrix(matrix_from_array(features)));
      },
      py::arg("features"),
      "Pairwise L2 distances between feature rows (n x d -> n x n).");
  m.def(
      "symmetrize_max",
      [](const DoubleArray& d) {
        return array_from_matrix(gtg::symmetrize_max(matrix_from_array(d)));
      },
      py::arg("distances"), "Elementwise max of a square matrix and its transpose.");
  m.def(
      "local_scales",
      [](const DoubleArray& d, int scale_neighbors) {
        return gtg::local_scales(matrix_from_array(d), scale_neighbors);
      },
      py::arg("distances"), py::arg("scale_neighbors") = gtg::kDefaultScaleNeighbors,
      "Per-player kernel bandwidth: distance to the min(scale_neighbors, n-1)-th "
      "nearest other player, floored at SIGMA_FLOOR.");
  m.def(
      "similarity_from_distance",
      [](const DoubleArray& d, const std::vector<double>& scales, std::size_t i,
         std::size_t j) {
        return gtg::similarity_from_distance(matrix_from_array(d), scales, i, j);
      },
      py::arg("distances"), py::arg("scales"), py::arg("i"), py::arg("j"),
      "exp(-D(i,j) / (scales[i] * scales[j])), in (0, 1].");

  py::class_<gtg::SimilarityGraph>(m, "SimilarityGraph",
                                   "Directed weighted kNN graph; neighbor lists are "
                                   "sorted by ascending player index.")
      .def(py::init<>())
      .def_readwrite("n", &gtg::SimilarityGraph::n)
      .def_readwrite("k", &gtg::SimilarityGraph::k)
      .def_readwrite("neighbors", &gtg::SimilarityGraph::neighbors)
      .def_readwrite("weights", &gtg::SimilarityGraph::weights);

  m.def(
      "knn_neighborhoods",
      [](const DoubleArray& d, int k, int scale_neighbors, bool symmetric) {
        gtg::GraphOptions opts;
        opts.scale_neighbors = scale_neighbors;
        opts.symmetric = symmetric;
        return gtg::knn_neighborhoods(matrix_from_array(d), k, opts);
      },
      py::arg("distances"), py::arg("k"),
      py::arg("scale_neighbors") = gtg::kDefaultScaleNeighbors,
      py::arg("symmetric") = false,
      "For each player the min(k, n-1) nearest others (ties to the lower index), "
      "weighted by the locally scaled exponential similarity.");

  // game engine
  py::class_<gtg::LabelAssignment>(m, "LabelAssignment",
                                   "Player labels: class index per player, UNLABELED "
                                   "(-1) for unlabeled players.")
      .def(py::init([](const std::vector<int>& labels, int num_classes) {
             gtg::LabelAssignment a;
             a.n = labels.size();
             a.num_classes = num_classes;
             a.labels = labels;
             a.check_ranges();
             return a;
           }),
           py::arg("labels"), py::arg("num_classes"))
      .def_readonly("n", &gtg::LabelAssignment::n)
      .def_readonly("num_classes", &gtg::LabelAssignment::num_classes)
      .def_readonly("labels", &gtg::LabelAssignment::labels)
      .def("is_labeled", &gtg::LabelAssignment::is_labeled, py::arg("i"))
      .def("labeled", &gtg::LabelAssignment::labeled)
      .def("unlabeled", &gtg::LabelAssignment::unlabeled)
      .def("validate", &gtg::LabelAssignment::validate);

  py::class_<gtg::GameConfig>(m, "GameConfig")
      .def(py::init([](int k, double epsilon, int max_iters) {
             gtg::GameConfig c;
             c.k = k;
             c.epsilon = epsilon;
             c.max_iters = max_iters;
             c.validate();
             return c;
           }),
           py::arg("k") = 2, py::arg("epsilon") = 1e-6, py::arg("max_iters") = 100)
      .def_readwrite("k", &gtg::GameConfig::k)
      .def_readwrite("epsilon", &gtg::GameConfig::epsilon)
      .def_readwrite("max_iters", &gtg::GameConfig::max_iters);

  py::class_<gtg::GameResult>(m, "GameResult")
      .def_property_readonly(
          "space", [](const gtg::GameResult& r) { return array_from_matrix(r.space); })
      .def_readonly("predictions", &gtg::GameResult::predictions)
      .def_readonly("iterations", &gtg::GameResult::iterations)
      .def_readonly("converged", &gtg::GameResult::converged)
      .def_readonly("residuals", &gtg::GameResult::residuals);

  m.def(
      "init_strategy_space",
      [](const gtg::LabelAssignment& assignment) {
        return array_from_matrix(gtg::init_strategy_space(assignment));
      },
      py::arg("assignment"),
      "Labeled rows one-hot at their class, unlabeled rows uniform.");
  m.def(
      "payoff_vector",
      [](std::size_t i, const DoubleArray& space, const gtg::SimilarityGraph& graph) {
        return gtg::payoff_vector(i, matrix_from_array(space), graph);
      },
      py::arg("i"), py::arg("space"), py::arg("graph"),
      "Per-strategy payoff of player i: the similarity-weighted sum of the "
      "neighbors' strategy rows.");
  m.def(
      "expected_payoff",
      [](std::size_t i, const DoubleArray& space, const gtg::SimilarityGraph& graph) {
        return gtg::expected_payoff(i, matrix_from_array(space), graph);
      },
      py::arg("i"), py::arg("space"), py::arg("graph"),
      "Dot product of player i's mixed strategy with its payoff vector.");
  m.def(
      "replicator_step",
      [](const DoubleArray& space, const gtg::SimilarityGraph& graph,
         const gtg::LabelAssignment& assignment) {
        return array_from_matrix(
            gtg::replicator_step(matrix_from_array(space), graph, assignment));
      },
      py::arg("space"), py::arg("graph"), py::arg("assignment"),
      "One synchronous replicator update; labeled rows stay frozen.");
  m.def(
      "run_game",
      [](const gtg::SimilarityGraph& graph, const gtg::LabelAssignment& assignment,
         const gtg::GameConfig& config) {
        py::gil_scoped_release release;
        return gtg::run_game(graph, assignment, config);
      },
      py::arg("graph"), py::arg("assignment"), py::arg("config") = gtg::GameConfig{},
      "Iterate replicator updates from the initial strategy space until the "
      "residual drops to epsilon or max_iters is reached.");
  m.def(
      "extract_labels",
      [](const DoubleArray& space) { return gtg::extract_labels(matrix_from_array(space)); },
      py::arg("space"), "Row argmax, ties to the lowest class index.");

  // baselines
  py::class_<gtg::TrainingMember>(m, "TrainingMember")
      .def_readonly("player", &gtg::TrainingMember::player)
      .def_readonly("label", &gtg::TrainingMember::label);

  py::class_<gtg::TrainingSet>(m, "TrainingSet",
                               "Labeled training members; build from (player, label) "
                               "pairs.")
      .def(py::init(&training_from_pairs), py::arg("members"), py::arg("num_classes"))
      .def_readonly("members", &gtg::TrainingSet::members)
      .def_readonly("num_classes", &gtg::TrainingSet::num_classes);

  m.def("nn_classify", &gtg::nn_classify, py::arg("dissims"), py::arg("train"),
        "Class of the training member at minimum dissimilarity (ties to the lower "
        "player index).");
  m.def("accumulated_nn_classify", &gtg::accumulated_nn_classify, py::arg("dissims"),
        py::arg("train"),
        "Argmin over classes of the summed member dissimilarities (ties to the "
        "lower class index).");

  // evaluation protocol
  py::class_<gtg::ProtocolSplit>(m, "ProtocolSplit")
      .def_readonly("query", &gtg::ProtocolSplit::query)
      .def_readonly("training", &gtg::ProtocolSplit::training);

  m.def("three_per_class_applies", &gtg::three_per_class_applies, py::arg("labels"),
        "True when every class has exactly 3 members.");
  m.def("build_splits", &gtg::build_splits, py::arg("labels"), py::arg("train_per_class"),
        py::arg("rep_seed") = std::nullopt,
        "3-per-class protocol: one split per player with two training members per "
        "class, or two splits per player (both same-class representatives) with one.");
  m.def("build_splits_generalized", &gtg::build_splits_generalized, py::arg("labels"),
        py::arg("train_per_class"), py::arg("rep_seed") = std::nullopt,
        "Leave-one-out for arbitrary class sizes.");

  py::class_<gtg::AccuracyReport>(m, "AccuracyReport")
      .def_readonly("classifier", &gtg::AccuracyReport::classifier)
      .def_readonly("runs", &gtg::AccuracyReport::runs)
      .def_readonly("correct", &gtg::AccuracyReport::correct)
      .def_readonly("failed", &gtg::AccuracyReport::failed)
      .def_readonly("accuracy", &gtg::AccuracyReport::accuracy)
      .def_readonly("confusion", &gtg::AccuracyReport::confusion)
      .def_readonly("failure_messages", &gtg::AccuracyReport::failure_messages);

  m.def(
      "run_protocol",
      [](const DoubleArray& distances, const std::vector<int>& labels, int train_per_class,
         const std::string& classifier, int k, double epsilon, int max_iters,
         bool symmetric_knn, std::optional<std::uint64_t> rep_seed, int threads) {
        gtg::ProtocolOptions opts;
        opts.train_per_class = train_per_class;
        opts.classifier = gtg::classifier_from_string(classifier);
        opts.game.k = k;
        opts.game.epsilon = epsilon;
        opts.game.max_iters = max_iters;
        opts.graph.symmetric = symmetric_knn;
        opts.rep_seed = rep_seed;
        opts.threads = threads;
        const gtg::Matrix d = matrix_from_array(distances);
        py::gil_scoped_release release;
        return gtg::run_protocol(d, labels, opts);
      },
      py::arg("distances"), py::arg("labels"), py::arg("train_per_class") = 2,
      py::arg("classifier") = "gtg", py::arg("k") = 2, py::arg("epsilon") = 1e-6,
      py::arg("max_iters") = 100, py::arg("symmetric_knn") = false,
      py::arg("rep_seed") = std::nullopt, py::arg("threads") = 0,
      "Run every split of the leave-one-out protocol (3-per-class when every class "
      "has exactly 3 members) with the chosen classifier: 'gtg', 'nn' or 'acc-nn'.");

  m.def(
      "synthetic_blobs",
      [](std::uint64_t seed, int classes, int per_class, int dims, double center_spread,
         double noise) {
        const gtg::BlobDataset blobs =
            gtg::synthetic_blobs(seed, classes, per_class, dims, center_spread, noise);
        return py::make_tuple(array_from_matrix(blobs.features), blobs.labels);
      },
      py::arg("seed"), py::arg("classes") = 3, py::arg("per_class") = 3,
      py::arg("dims") = 2, py::arg("center_spread") = 10.0, py::arg("noise") = 1.0,
      "Deterministic isotropic Gaussian clusters; returns (features, labels).");
}
