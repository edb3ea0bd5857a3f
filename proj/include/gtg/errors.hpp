#pragma once

#include <stdexcept>
#include <string>

namespace gtg {

// Invalid numeric data: non-finite values, negative distances, shape mismatches.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent run configuration: k < 1, no unlabeled players, a class
// without a labeled representative, protocol preconditions not met.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file contents: ragged rows, unparsable cells, duplicate ids.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gtg
