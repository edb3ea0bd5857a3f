#include "gtg/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>
#include <utility>

#include "gtg/errors.hpp"

namespace gtg {

std::string to_string(Classifier c) {
  switch (c) {
    case Classifier::kGtg: return "gtg";
    case Classifier::kNearest: return "nn";
    case Classifier::kAccumulatedNearest: return "acc-nn";
  }
  return "?";
}

Classifier classifier_from_string(const std::string& name) {
  if (name == "gtg") return Classifier::kGtg;
  if (name == "nn") return Classifier::kNearest;
  if (name == "acc-nn") return Classifier::kAccumulatedNearest;
  throw ConfigError("unknown classifier '" + name + "' (expected gtg, nn or acc-nn)");
}

namespace {

// labels -> per-class member lists (ascending player index)
std::vector<std::vector<std::size_t>> group_by_class(const std::vector<int>& labels) {
  int num_classes = 0;
  for (int v : labels) {
    if (v < 0) throw InputError("protocol: every player must carry a class label");
    num_classes = std::max(num_classes, v + 1);
  }
  if (labels.empty()) throw InputError("protocol: empty label list");
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(num_classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    members[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (members[c].empty()) {
      throw ConfigError("protocol: class " + std::to_string(c) + " has no members");
    }
  }
  return members;
}

// t distinct entries of pool: the t lowest-index ones, or a seeded draw.
std::vector<std::size_t> pick_members(const std::vector<std::size_t>& pool, std::size_t t,
                                      std::mt19937_64* rng) {
  std::vector<std::size_t> chosen;
  if (rng == nullptr) {
    chosen.assign(pool.begin(), pool.begin() + t);
    return chosen;
  }
  std::vector<std::size_t> shuffled = pool;
  for (std::size_t r = 0; r < t; ++r) {
    std::uniform_int_distribution<std::size_t> pick(r, shuffled.size() - 1);
    std::swap(shuffled[r], shuffled[pick(*rng)]);
  }
  chosen.assign(shuffled.begin(), shuffled.begin() + t);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

TrainingSet make_training(const std::vector<std::vector<std::size_t>>& members,
                          const std::vector<int>& labels, std::size_t query,
                          std::size_t train_per_class, std::mt19937_64* rng,
                          std::optional<std::size_t> forced_same_class_rep) {
  TrainingSet train;
  train.num_classes = static_cast<int>(members.size());
  const std::size_t query_class = static_cast<std::size_t>(labels[query]);
  for (std::size_t c = 0; c < members.size(); ++c) {
    std::vector<std::size_t> pool;
    for (std::size_t p : members[c]) {
      if (p != query) pool.push_back(p);
    }
    std::vector<std::size_t> chosen;
    if (c == query_class && forced_same_class_rep) {
      chosen.push_back(*forced_same_class_rep);
    } else {
      if (pool.size() < train_per_class) {
        throw ConfigError("protocol: class " + std::to_string(c) + " has only " +
                          std::to_string(pool.size()) +
                          " members available for a training set of " +
                          std::to_string(train_per_class) + " per class");
      }
      chosen = pick_members(pool, train_per_class, rng);
    }
    for (std::size_t p : chosen) {
      train.members.push_back({p, static_cast<int>(c)});
    }
  }
  std::sort(train.members.begin(), train.members.end(),
            [](const TrainingMember& a, const TrainingMember& b) { return a.player < b.player; });
  return train;
}

}  // namespace

bool three_per_class_applies(const std::vector<int>& labels) {
  const auto members = group_by_class(labels);
  return std::all_of(members.begin(), members.end(),
                     [](const auto& m) { return m.size() == 3; });
}

std::vector<ProtocolSplit> build_splits(const std::vector<int>& labels, int train_per_class,
                                        std::optional<std::uint64_t> rep_seed) {
  if (train_per_class != 1 && train_per_class != 2) {
    throw ConfigError("protocol: train_per_class must be 1 or 2");
  }
  const auto members = group_by_class(labels);
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (members[c].size() != 3) {
      throw ConfigError("protocol: class " + std::to_string(c) + " has " +
                        std::to_string(members[c].size()) +
                        " members, the 3-per-class protocol needs exactly 3");
    }
  }
  std::mt19937_64 rng;
  std::mt19937_64* rng_ptr = nullptr;
  if (rep_seed) {
    rng.seed(*rep_seed);
    rng_ptr = &rng;
  }

  std::vector<ProtocolSplit> splits;
  const std::size_t t = static_cast<std::size_t>(train_per_class);
  for (std::size_t q = 0; q < labels.size(); ++q) {
    if (train_per_class == 2) {
      splits.push_back({q, make_training(members, labels, q, t, rng_ptr, std::nullopt)});
    } else {
      // one split per choice of the same-class representative
      for (std::size_t rep : members[static_cast<std::size_t>(labels[q])]) {
        if (rep == q) continue;
        splits.push_back({q, make_training(members, labels, q, t, rng_ptr, rep)});
      }
    }
  }
  return splits;
}

std::vector<ProtocolSplit> build_splits_generalized(const std::vector<int>& labels,
                                                    int train_per_class,
                                                    std::optional<std::uint64_t> rep_seed) {
  if (train_per_class < 1) {
    throw ConfigError("protocol: train_per_class must be >= 1");
  }
  const auto members = group_by_class(labels);
  std::mt19937_64 rng;
  std::mt19937_64* rng_ptr = nullptr;
  if (rep_seed) {
    rng.seed(*rep_seed);
    rng_ptr = &rng;
  }
  std::vector<ProtocolSplit> splits;
  const std::size_t t = static_cast<std::size_t>(train_per_class);
  for (std::size_t q = 0; q < labels.size(); ++q) {
    splits.push_back({q, make_training(members, labels, q, t, rng_ptr, std::nullopt)});
  }
  return splits;
}

namespace {

int classify_split(const DissimilarityMatrix& d, const std::vector<int>& labels,
                   const ProtocolSplit& split, const ProtocolOptions& opts) {
  const auto& train = split.training;
  if (opts.classifier == Classifier::kNearest ||
      opts.classifier == Classifier::kAccumulatedNearest) {
    std::vector<double> dissims;
    dissims.reserve(train.members.size());
    for (const auto& member : train.members) {
      dissims.push_back(d(split.query, member.player));
    }
    return opts.classifier == Classifier::kNearest
               ? nn_classify(dissims, train)
               : accumulated_nn_classify(dissims, train);
  }

  // GTG path: a fresh game over the split's players only, query unlabeled.
  std::vector<std::size_t> players;
  players.reserve(train.members.size() + 1);
  for (const auto& member : train.members) players.push_back(member.player);
  players.push_back(split.query);
  std::sort(players.begin(), players.end());

  const std::size_t s = players.size();
  DissimilarityMatrix sub(s, s, 0.0);
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = 0; b < s; ++b) {
      sub(a, b) = d(players[a], players[b]);
    }
  }
  LabelAssignment assignment;
  assignment.n = s;
  assignment.num_classes = train.num_classes;
  assignment.labels.assign(s, kUnlabeled);
  std::size_t query_pos = 0;
  for (std::size_t a = 0; a < s; ++a) {
    if (players[a] == split.query) {
      query_pos = a;
      continue;
    }
    assignment.labels[a] = labels[players[a]];
  }

  const SimilarityGraph graph = knn_neighborhoods(sub, opts.game.k, opts.graph);
  const GameResult result = run_game(graph, assignment, opts.game);
  return result.predictions[query_pos];
}

int resolve_threads(int requested, std::size_t jobs) {
  int threads = requested;
  if (threads <= 0) {
    if (const char* env = std::getenv("GTG_THREADS")) {
      threads = std::atoi(env);
    }
  }
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
  }
  threads = std::max(threads, 1);
  return static_cast<int>(std::min<std::size_t>(threads, jobs));
}

}  // namespace

AccuracyReport run_protocol(const DissimilarityMatrix& d, const std::vector<int>& labels,
                            const ProtocolOptions& opts) {
  if (d.rows != d.cols) {
    throw InputError("run_protocol: dissimilarity matrix must be square");
  }
  if (d.rows != labels.size()) {
    throw InputError("run_protocol: matrix is " + std::to_string(d.rows) + "x" +
                     std::to_string(d.cols) + " but there are " +
                     std::to_string(labels.size()) + " labels");
  }
  opts.game.validate();

  const std::vector<ProtocolSplit> splits =
      three_per_class_applies(labels)
          ? build_splits(labels, opts.train_per_class, opts.rep_seed)
          : build_splits_generalized(labels, opts.train_per_class, opts.rep_seed);

  struct SplitOutcome {
    int predicted = -1;
    std::string error;
  };
  std::vector<SplitOutcome> outcomes(splits.size());

  const int threads = resolve_threads(opts.threads, splits.size());
  auto worker = [&](std::atomic<std::size_t>& cursor) {
    for (std::size_t idx = cursor.fetch_add(1); idx < splits.size();
         idx = cursor.fetch_add(1)) {
      try {
        outcomes[idx].predicted = classify_split(d, labels, splits[idx], opts);
      } catch (const std::exception& e) {
        outcomes[idx].error = e.what();
      }
    }
  };
  if (threads <= 1) {
    std::atomic<std::size_t> cursor{0};
    worker(cursor);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker, std::ref(cursor));
    for (auto& th : pool) th.join();
  }

  int num_classes = 0;
  for (int v : labels) num_classes = std::max(num_classes, v + 1);

  AccuracyReport report;
  report.classifier = to_string(opts.classifier);
  report.runs = splits.size();
  report.confusion.assign(static_cast<std::size_t>(num_classes),
                          std::vector<std::size_t>(static_cast<std::size_t>(num_classes), 0));
  constexpr std::size_t kMaxFailureMessages = 5;
  for (std::size_t idx = 0; idx < splits.size(); ++idx) {
    const auto& outcome = outcomes[idx];
    if (!outcome.error.empty()) {
      ++report.failed;
      if (report.failure_messages.size() < kMaxFailureMessages) {
        report.failure_messages.push_back("split " + std::to_string(idx) + ": " +
                                          outcome.error);
      }
      continue;
    }
    const int truth = labels[splits[idx].query];
    report.confusion[static_cast<std::size_t>(truth)]
                    [static_cast<std::size_t>(outcome.predicted)] += 1;
    if (outcome.predicted == truth) ++report.correct;
  }
  report.accuracy = report.runs == 0
                        ? 0.0
                        : static_cast<double>(report.correct) / static_cast<double>(report.runs);
  return report;
}

BlobDataset synthetic_blobs(std::uint64_t seed, int classes, int per_class, int dims,
                            double center_spread, double noise) {
  if (classes < 1 || per_class < 1 || dims < 1) {
    throw InputError("synthetic_blobs: classes, per_class and dims must be >= 1");
  }
  if (!(noise >= 0.0) || !(center_spread >= 0.0)) {
    throw InputError("synthetic_blobs: center_spread and noise must be >= 0");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const std::size_t c = static_cast<std::size_t>(classes);
  const std::size_t p = static_cast<std::size_t>(per_class);
  const std::size_t dd = static_cast<std::size_t>(dims);

  Matrix centers(c, dd, 0.0);
  for (double& v : centers.data) v = center_spread * gauss(rng);

  BlobDataset out;
  out.features = Matrix(c * p, dd, 0.0);
  out.labels.resize(c * p);
  for (std::size_t cls = 0; cls < c; ++cls) {
    for (std::size_t member = 0; member < p; ++member) {
      const std::size_t row = cls * p + member;
      out.labels[row] = static_cast<int>(cls);
      for (std::size_t axis = 0; axis < dd; ++axis) {
        out.features(row, axis) = centers(cls, axis) + noise * gauss(rng);
      }
    }
  }
  return out;
}

}  // namespace gtg
