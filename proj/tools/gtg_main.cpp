#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gtg/errors.hpp"
#include "gtg/evaluation.hpp"
#include "gtg/io.hpp"
#include "gtg/similarity_graph.hpp"
#include "gtg/solver.hpp"

namespace {

char resolve_delimiter(const std::string& flag) {
  if (flag == "\\t" || flag == "tab") return '\t';
  if (flag.size() != 1) {
    throw gtg::ConfigError("--delimiter must be a single character (or \\t)");
  }
  return flag[0];
}

struct CommonInputs {
  std::string distances_path;
  std::string features_path;
  std::string labels_path;
  std::string delimiter = ",";
  bool no_symmetrize = false;
};

// Distance matrix from --distances or --features, symmetrized unless disabled.
gtg::DissimilarityMatrix load_distances(const CommonInputs& in) {
  const char delim = resolve_delimiter(in.delimiter);
  if (!in.distances_path.empty()) {
    gtg::LoadMatrixOptions opts;
    opts.delimiter = delim;
    opts.symmetrize = !in.no_symmetrize;
    return gtg::load_distance_matrix(in.distances_path, opts);
  }
  const gtg::FeatureMatrix features = gtg::load_features(in.features_path, delim);
  return gtg::euclidean_distance_matrix(features);
}

void check_matrix_matches_labels(const gtg::Matrix& d, const gtg::LabelsData& labels) {
  if (d.rows != labels.assignment.n) {
    throw gtg::InputError("matrix has " + std::to_string(d.rows) + " players but the labels file has " +
                          std::to_string(labels.assignment.n) + " rows");
  }
}

int cmd_similarity(const std::string& features_path, const std::string& out_path,
                   const std::string& delimiter) {
  const char delim = resolve_delimiter(delimiter);
  const gtg::FeatureMatrix features = gtg::load_features(features_path, delim);
  const gtg::DissimilarityMatrix d = gtg::euclidean_distance_matrix(features);
  gtg::write_matrix(out_path, d, delim);
  std::cout << "wrote " << d.rows << "x" << d.cols << " distance matrix to " << out_path
            << "\n";
  return 0;
}

int cmd_transduce(const CommonInputs& in, const std::string& out_path,
                  const gtg::GameConfig& config, bool symmetric_knn) {
  const char delim = resolve_delimiter(in.delimiter);
  const gtg::DissimilarityMatrix d = load_distances(in);
  const gtg::LabelsData labels = gtg::load_labels(in.labels_path, delim);
  check_matrix_matches_labels(d, labels);
  if (labels.assignment.unlabeled().empty()) {
    throw gtg::ConfigError("transduce: every player is already labeled, nothing to predict");
  }

  gtg::GraphOptions graph_opts;
  graph_opts.symmetric = symmetric_knn;
  const gtg::SimilarityGraph graph = gtg::knn_neighborhoods(d, config.k, graph_opts);
  const gtg::GameResult result = gtg::run_game(graph, labels.assignment, config);

  const std::size_t unlabeled = labels.assignment.unlabeled().size();
  std::cout << "transduced " << unlabeled << " of " << labels.assignment.n
            << " players in " << result.iterations << " iterations ("
            << (result.converged ? "converged" : "max iterations reached")
            << ", final residual " << gtg::format_double(result.residuals.back()) << ")\n";
  if (!out_path.empty()) {
    gtg::write_predictions(out_path, result, labels, delim);
    std::cout << "wrote predictions to " << out_path << "\n";
  } else {
    for (std::size_t i = 0; i < labels.assignment.n; ++i) {
      if (labels.assignment.is_labeled(i)) continue;
      const int pred = result.predictions[i];
      std::cout << labels.ids[i] << " -> "
                << labels.class_names[static_cast<std::size_t>(pred)] << " (p="
                << gtg::format_double(result.space(i, static_cast<std::size_t>(pred)))
                << ")\n";
    }
  }
  return 0;
}

int cmd_evaluate(const CommonInputs& in, const std::string& out_path,
                 const std::vector<std::string>& classifier_names, int train_per_class,
                 const gtg::GameConfig& config, bool symmetric_knn,
                 std::optional<std::uint64_t> rep_seed) {
  const char delim = resolve_delimiter(in.delimiter);
  const gtg::DissimilarityMatrix d = load_distances(in);
  const gtg::LabelsData labels = gtg::load_labels(in.labels_path, delim);
  check_matrix_matches_labels(d, labels);
  if (!labels.assignment.unlabeled().empty()) {
    throw gtg::ConfigError("evaluate: every player must be labeled (" +
                           std::to_string(labels.assignment.unlabeled().size()) +
                           " rows have an empty class)");
  }

  const bool three_per_class = gtg::three_per_class_applies(labels.assignment.labels);
  gtg::ReportMeta meta;
  meta.players = labels.assignment.n;
  meta.classes = labels.assignment.num_classes;
  meta.train_per_class = train_per_class;
  meta.protocol = three_per_class ? "3-per-class" : "leave-one-out";
  meta.k = config.k;
  meta.epsilon = config.epsilon;
  meta.max_iters = config.max_iters;
  meta.symmetric_knn = symmetric_knn;
  meta.rep_seed = rep_seed;

  std::vector<std::string> names = classifier_names;
  if (names.empty()) names.push_back("gtg");

  std::vector<gtg::AccuracyReport> reports;
  for (const auto& name : names) {
    gtg::ProtocolOptions opts;
    opts.train_per_class = train_per_class;
    opts.classifier = gtg::classifier_from_string(name);
    opts.game = config;
    opts.graph.symmetric = symmetric_knn;
    opts.rep_seed = rep_seed;
    reports.push_back(gtg::run_protocol(d, labels.assignment.labels, opts));
  }

  std::cout << "protocol: " << meta.protocol << ", players: " << meta.players
            << ", classes: " << meta.classes << ", train per class: " << train_per_class
            << ", k=" << config.k << "\n";
  std::printf("%-10s %15s %10s\n", "classifier", "correct/runs", "accuracy");
  for (const auto& report : reports) {
    const std::string ratio =
        std::to_string(report.correct) + "/" + std::to_string(report.runs);
    std::printf("%-10s %15s %9.2f%%\n", report.classifier.c_str(), ratio.c_str(),
                100.0 * report.accuracy);
    if (report.failed > 0) {
      std::cout << "  " << report.failed << " runs failed:\n";
      for (const auto& msg : report.failure_messages) std::cout << "    " << msg << "\n";
    }
  }

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw gtg::FormatError(out_path + ": cannot open for writing");
    out << gtg::report_to_json(reports, meta);
    if (!out) throw gtg::FormatError(out_path + ": write failed");
    std::cout << "wrote report to " << out_path << "\n";
  }
  return 0;
}

int cmd_synth(std::uint64_t seed, int classes, int per_class, int dims, double center_spread,
              double noise, const std::string& out_path, const std::string& labels_out,
              const std::string& delimiter) {
  const char delim = resolve_delimiter(delimiter);
  const gtg::BlobDataset blobs =
      gtg::synthetic_blobs(seed, classes, per_class, dims, center_spread, noise);
  gtg::write_matrix(out_path, blobs.features, delim);
  if (!labels_out.empty()) {
    std::ofstream out(labels_out);
    if (!out) throw gtg::FormatError(labels_out + ": cannot open for writing");
    for (std::size_t i = 0; i < blobs.labels.size(); ++i) {
      out << "p" << i << delim << "c" << blobs.labels[i] << "\n";
    }
    if (!out) throw gtg::FormatError(labels_out + ": write failed");
  }
  std::cout << "wrote " << blobs.features.rows << " points (" << classes << " classes x "
            << per_class << ", " << dims << "d) to " << out_path;
  if (!labels_out.empty()) std::cout << " and labels to " << labels_out;
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph transduction game classifier: propagates labels over a kNN\n"
               "similarity graph by multi-population replicator dynamics."};
  app.require_subcommand(1);

  CommonInputs in;
  gtg::GameConfig config;
  bool symmetric_knn = false;
  std::string out_path;

  // similarity
  auto* sim = app.add_subcommand(
      "similarity", "Compute a Euclidean distance matrix from a features CSV");
  std::string sim_features, sim_out, sim_delim = ",";
  sim->add_option("--features", sim_features, "features CSV, one row per player")
      ->required();
  sim->add_option("--out", sim_out, "output distance matrix CSV")->required();
  sim->add_option("--delimiter", sim_delim, "field delimiter (default ,)");

  // transduce
  auto* tr = app.add_subcommand(
      "transduce", "Propagate labels from labeled to unlabeled players");
  auto* tr_d = tr->add_option("--distances", in.distances_path,
                              "square dissimilarity matrix CSV");
  auto* tr_f = tr->add_option("--features", in.features_path,
                              "features CSV (Euclidean distances are derived)");
  tr_d->excludes(tr_f);
  tr->add_option("--labels", in.labels_path,
                 "labels CSV: player_id,class_name; empty class = unlabeled")
      ->required();
  tr->add_option("--out", out_path, "predictions CSV (default: print to stdout)");
  tr->add_option("--k", config.k, "neighborhood size (default 2)")
      ->check(CLI::Range(1, 1 << 20));
  tr->add_option("--eps", config.epsilon, "convergence threshold (default 1e-6)")
      ->check(CLI::PositiveNumber);
  tr->add_option("--max-iter", config.max_iters, "iteration cap (default 100)")
      ->check(CLI::Range(1, 1 << 30));
  tr->add_flag("--no-symmetrize", in.no_symmetrize,
               "do not max-symmetrize the loaded distance matrix");
  tr->add_flag("--symmetric-knn", symmetric_knn,
               "union each neighborhood with its reverse edges");
  tr->add_option("--delimiter", in.delimiter, "field delimiter (default ,)");

  // evaluate
  auto* ev = app.add_subcommand(
      "evaluate",
      "Leave-one-out evaluation. Datasets with exactly 3 members per class use the\n"
      "3-per-class protocol (train-per-class 2: one run per player; 1: two runs per\n"
      "player, enumerating the same-class representative). Other datasets use a\n"
      "generalized leave-one-out: every player is the query once and each class\n"
      "contributes its train-per-class lowest-index members (or a --rep-seed draw).");
  auto* ev_d = ev->add_option("--distances", in.distances_path,
                              "square dissimilarity matrix CSV");
  auto* ev_f = ev->add_option("--features", in.features_path,
                              "features CSV (Euclidean distances are derived)");
  ev_d->excludes(ev_f);
  ev->add_option("--labels", in.labels_path, "labels CSV; every row must be labeled")
      ->required();
  ev->add_option("--out", out_path, "machine-readable JSON report path");
  int train_per_class = 2;
  ev->add_option("--train-per-class", train_per_class,
                 "training images per class (default 2)")
      ->check(CLI::IsMember({1, 2}));
  std::vector<std::string> classifiers;
  ev->add_option("--classifier", classifiers,
                 "classifiers to run: gtg, nn, acc-nn (repeatable, default gtg)")
      ->check(CLI::IsMember({"gtg", "nn", "acc-nn"}))
      ->delimiter(',');
  ev->add_option("--k", config.k, "neighborhood size for the gtg path (default 2)")
      ->check(CLI::Range(1, 1 << 20));
  ev->add_option("--eps", config.epsilon, "convergence threshold (default 1e-6)")
      ->check(CLI::PositiveNumber);
  ev->add_option("--max-iter", config.max_iters, "iteration cap (default 100)")
      ->check(CLI::Range(1, 1 << 30));
  std::optional<std::uint64_t> rep_seed;
  ev->add_option("--rep-seed", rep_seed,
                 "seed for randomized training representatives (default: lowest index)");
  ev->add_flag("--no-symmetrize", in.no_symmetrize,
               "do not max-symmetrize the loaded distance matrix");
  ev->add_flag("--symmetric-knn", symmetric_knn,
               "union each neighborhood with its reverse edges");
  ev->add_option("--delimiter", in.delimiter, "field delimiter (default ,)");

  // synth
  auto* sy = app.add_subcommand("synth", "Generate deterministic Gaussian blob data");
  std::uint64_t seed = 0;
  int classes = 3, per_class = 3, dims = 2;
  double center_spread = 10.0, noise = 1.0;
  std::string synth_labels_out, synth_delim = ",";
  sy->add_option("--seed", seed, "RNG seed (default 0)");
  sy->add_option("--classes", classes, "number of classes (default 3)")
      ->check(CLI::Range(1, 1 << 20));
  sy->add_option("--per-class", per_class, "points per class (default 3)")
      ->check(CLI::Range(1, 1 << 20));
  sy->add_option("--dims", dims, "feature dimensions (default 2)")
      ->check(CLI::Range(1, 1 << 20));
  sy->add_option("--center-spread", center_spread, "stddev of class centers (default 10)")
      ->check(CLI::NonNegativeNumber);
  sy->add_option("--noise", noise, "stddev of within-class noise (default 1)")
      ->check(CLI::NonNegativeNumber);
  sy->add_option("--out", out_path, "output features CSV")->required();
  sy->add_option("--labels-out", synth_labels_out, "output labels CSV (p<i>,c<class>)");
  sy->add_option("--delimiter", synth_delim, "field delimiter (default ,)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) {
      return cmd_similarity(sim_features, sim_out, sim_delim);
    }
    if (tr->parsed()) {
      if (in.distances_path.empty() && in.features_path.empty()) {
        std::cerr << "transduce: one of --distances or --features is required\n";
        return 1;
      }
      return cmd_transduce(in, out_path, config, symmetric_knn);
    }
    if (ev->parsed()) {
      if (in.distances_path.empty() && in.features_path.empty()) {
        std::cerr << "evaluate: one of --distances or --features is required\n";
        return 1;
      }
      return cmd_evaluate(in, out_path, classifiers, train_per_class, config,
                          symmetric_knn, rep_seed);
    }
    if (sy->parsed()) {
      return cmd_synth(seed, classes, per_class, dims, center_spread, noise, out_path,
                       synth_labels_out, synth_delim);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
