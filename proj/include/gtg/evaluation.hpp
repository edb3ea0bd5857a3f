#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gtg/baselines.hpp"
#include "gtg/similarity_graph.hpp"
#include "gtg/solver.hpp"

namespace gtg {

// One classification run: a single query player against a fixed-size
// per-class training set.
struct ProtocolSplit {
  std::size_t query = 0;
  TrainingSet training;
};

enum class Classifier { kGtg, kNearest, kAccumulatedNearest };

std::string to_string(Classifier c);
Classifier classifier_from_string(const std::string& name);  // "gtg", "nn", "acc-nn"

struct AccuracyReport {
  std::string classifier;
  std::size_t runs = 0;
  std::size_t correct = 0;
  std::size_t failed = 0;
  double accuracy = 0.0;  // correct / runs
  std::vector<std::vector<std::size_t>> confusion;  // [true class][predicted class]
  std::vector<std::string> failure_messages;        // first few, in split order
};

// Three-members-per-class protocol. train_per_class=2 gives one split per
// player; train_per_class=1 enumerates both same-class representatives, two
// splits per player. Non-query classes contribute their train_per_class
// lowest-index members unless rep_seed randomizes the choice.
std::vector<ProtocolSplit> build_splits(const std::vector<int>& labels, int train_per_class,
                                        std::optional<std::uint64_t> rep_seed = {});

// Generalized leave-one-out for arbitrary class sizes: every player is the
// query exactly once, every class contributes train_per_class members.
std::vector<ProtocolSplit> build_splits_generalized(const std::vector<int>& labels,
                                                    int train_per_class,
                                                    std::optional<std::uint64_t> rep_seed = {});

// True when every class has exactly 3 members (the protocol build_splits needs).
bool three_per_class_applies(const std::vector<int>& labels);

struct ProtocolOptions {
  int train_per_class = 2;
  Classifier classifier = Classifier::kGtg;
  GameConfig game;          // k, epsilon, max_iters for the GTG path
  GraphOptions graph;       // scale neighbors, symmetric-knn
  std::optional<std::uint64_t> rep_seed;
  int threads = 0;          // 0: GTG_THREADS env or hardware concurrency
};

// Runs every split of the selected protocol (3-per-class when it applies,
// generalized leave-one-out otherwise) with the query as the sole unlabeled
// player. The GTG path rebuilds scales and kNN over the split's players only.
AccuracyReport run_protocol(const DissimilarityMatrix& d, const std::vector<int>& labels,
                            const ProtocolOptions& opts);

struct BlobDataset {
  FeatureMatrix features;
  std::vector<int> labels;  // class-major order
};

// Deterministic isotropic Gaussian clusters: centers drawn with spread
// center_spread, members perturbed with scale noise.
BlobDataset synthetic_blobs(std::uint64_t seed, int classes, int per_class, int dims,
                            double center_spread, double noise);

}  // namespace gtg
