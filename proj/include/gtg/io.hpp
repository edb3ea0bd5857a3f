#pragma once

#include <string>
#include <vector>

#include "gtg/evaluation.hpp"
#include "gtg/matrix.hpp"
#include "gtg/solver.hpp"

namespace gtg {

struct LoadMatrixOptions {
  char delimiter = ',';
  bool symmetrize = true;  // max-symmetrize after validation
};

// Square nonnegative matrix from a delimited text file. An optional single
// header row (any non-numeric first line) is skipped. Nonzero diagonal
// entries are forced to 0 with a warning on stderr; negative or non-finite
// entries are format errors.
DissimilarityMatrix load_distance_matrix(const std::string& path,
                                         const LoadMatrixOptions& opts = {});

// Rectangular n x d numeric body, n >= 2.
FeatureMatrix load_features(const std::string& path, char delimiter = ',');

// Labels file contents. Row order defines player index order; class indices
// follow first appearance of each class name.
struct LabelsData {
  std::vector<std::string> ids;
  std::vector<std::string> class_names;  // class index -> name
  LabelAssignment assignment;
};

// Rows of (player_id, class_name); an empty class field marks the player
// unlabeled. Duplicate ids are format errors, zero labeled rows a config error.
LabelsData load_labels(const std::string& path, char delimiter = ',');

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

void write_matrix(const std::string& path, const Matrix& m, char delimiter = ',');

// One row per unlabeled player, input order: id, predicted class name,
// final probability of the predicted class.
void write_predictions(const std::string& path, const GameResult& result,
                       const LabelsData& labels, char delimiter = ',');

struct ReportMeta {
  std::size_t players = 0;
  int classes = 0;
  int train_per_class = 2;
  std::string protocol;  // "3-per-class" or "leave-one-out"
  int k = 2;
  double epsilon = 1e-6;
  int max_iters = 100;
  bool symmetric_knn = false;
  std::optional<std::uint64_t> rep_seed;
};

// Machine-readable evaluation report (JSON text) mirroring AccuracyReport,
// one entry per classifier, plus the run configuration.
std::string report_to_json(const std::vector<AccuracyReport>& reports,
                           const ReportMeta& meta);

}  // namespace gtg
