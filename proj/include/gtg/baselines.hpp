#pragma once

#include <cstddef>
#include <vector>

namespace gtg {

struct TrainingMember {
  std::size_t player = 0;  // original dataset index, the tie-break key
  int label = 0;           // class index in [0, num_classes)
};

struct TrainingSet {
  std::vector<TrainingMember> members;
  int num_classes = 0;

  // Every class covered, labels in range, no duplicate player indices.
  void validate() const;
};

// Class of the member with minimum dissimilarity; ties go to the member with
// the lower player index. dissims[i] pairs with train.members[i].
int nn_classify(const std::vector<double>& dissims, const TrainingSet& train);

// argmin over classes of the summed dissimilarity to the class members; ties
// go to the lower class index.
int accumulated_nn_classify(const std::vector<double>& dissims, const TrainingSet& train);

}  // namespace gtg
