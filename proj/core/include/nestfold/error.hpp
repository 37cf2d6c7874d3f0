#pragma once

#include <stdexcept>
#include <string>

namespace nestfold {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mathematically undefined request: division by zero, a point that is not
// a vertex, labelling a fractal without the good labelling property.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A configured budget (complexes, vertices, depth) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// A spec or input document is malformed or violates a structural axiom.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Internal consistency check failed. Seeing one of these means a bug.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Resource budgets. Read once from the environment:
//   NESTFOLD_MAX_COMPLEXES  (default 2000000)
//   NESTFOLD_MAX_DEPTH      (default 40)
struct Budget {
  long long max_complexes;
  int max_depth;

  static const Budget& current();
};

}  // namespace nestfold
