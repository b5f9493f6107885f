#pragma once

#include <stdexcept>
#include <string>

namespace torelli {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graph data: dangling halfedges, broken pairing, unknown ids.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Input is well formed but outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Requested enumeration exceeds the configured complexity bound.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, int required_bound)
      : Error(what), required_bound_(required_bound) {}
  int required_bound() const { return required_bound_; }

 private:
  int required_bound_;
};

// An assignment table does not cover every catalog entry.
class CoverageError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace torelli
