#include "gtg/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <limits>
#include <string>
#include <unordered_set>

#include "gtg/errors.hpp"

namespace gtg {

void TrainingSet::validate() const {
  if (members.empty()) {
    throw InputError("training set: empty");
  }
  if (num_classes < 1) {
    throw ConfigError("training set: need at least one class");
  }
  std::unordered_set<std::size_t> seen_players;
  std::vector<bool> covered(static_cast<std::size_t>(num_classes), false);
  for (const auto& member : members) {
    if (member.label < 0 || member.label >= num_classes) {
      throw InputError("training set: class index " + std::to_string(member.label) +
                       " out of range");
    }
    if (!seen_players.insert(member.player).second) {
      throw InputError("training set: duplicate player index " +
                       std::to_string(member.player));
    }
    covered[static_cast<std::size_t>(member.label)] = true;
  }
  for (int c = 0; c < num_classes; ++c) {
    if (!covered[static_cast<std::size_t>(c)]) {
      throw ConfigError("training set: class " + std::to_string(c) + " has no member");
    }
  }
}

namespace {

void check_dissims(const std::vector<double>& dissims, const TrainingSet& train) {
  train.validate();
  if (dissims.size() != train.members.size()) {
    throw InputError("classify: got " + std::to_string(dissims.size()) +
                     " dissimilarities for " + std::to_string(train.members.size()) +
                     " training members");
  }
  for (double v : dissims) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InputError("classify: dissimilarities must be finite and >= 0");
    }
  }
}

}  // namespace

int nn_classify(const std::vector<double>& dissims, const TrainingSet& train) {
  check_dissims(dissims, train);
  std::size_t best = 0;
  for (std::size_t i = 1; i < dissims.size(); ++i) {
    const bool closer = dissims[i] < dissims[best];
    const bool tie_lower_player =
        dissims[i] == dissims[best] && train.members[i].player < train.members[best].player;
    if (closer || tie_lower_player) best = i;
  }
  return train.members[best].label;
}

int accumulated_nn_classify(const std::vector<double>& dissims, const TrainingSet& train) {
  check_dissims(dissims, train);
  // sum per class in ascending player order so the result does not depend on
  // how the members were presented
  std::vector<std::vector<std::pair<std::size_t, double>>> grouped(
      static_cast<std::size_t>(train.num_classes));
  for (std::size_t i = 0; i < dissims.size(); ++i) {
    grouped[static_cast<std::size_t>(train.members[i].label)].emplace_back(
        train.members[i].player, dissims[i]);
  }
  std::vector<double> score(static_cast<std::size_t>(train.num_classes), 0.0);
  for (std::size_t c = 0; c < grouped.size(); ++c) {
    std::sort(grouped[c].begin(), grouped[c].end());
    for (const auto& [player, dissim] : grouped[c]) score[c] += dissim;
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < score.size(); ++c) {
    if (score[c] < score[best]) best = c;  // ties keep the lowest class
  }
  return static_cast<int>(best);
}

}  // namespace gtg
