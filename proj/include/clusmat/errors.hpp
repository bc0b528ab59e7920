#pragma once

#include <stdexcept>
#include <string>

namespace clusmat {

/// Shapes or lengths of operands do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric parameter (k, ell, epsilon, ...) is out of its admissible range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Row/column index outside the matrix.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Structural precondition violated (e.g. a tree that does not span the rows).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed input file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace clusmat
