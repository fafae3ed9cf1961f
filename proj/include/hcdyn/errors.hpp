#pragma once

#include <stdexcept>
#include <string>

namespace hcdyn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition and domain violations (bad parameters, off-domain points).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class UndefinedThresholds : public Error {
 public:
  using Error::Error;
};

// A computed quantity disagrees with an independent check.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// No region predicate (or more than one) holds at the given parameters.
class ClassificationGap : public Error {
 public:
  using Error::Error;
};

}  // namespace hcdyn
