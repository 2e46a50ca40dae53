#pragma once

#include <stdexcept>
#include <string>

namespace detmatch {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite coordinates, scores or costs.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

// Value outside its mathematical domain (probability > 1, category out of range).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Shapes or lengths that disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Matching that reuses an index or points outside the problem.
class InvalidMatching : public Error {
 public:
  using Error::Error;
};

// Flow graph that is not the layered s -> P -> Q -> t network.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Brute-force oracle asked to enumerate past its size cap.
class OracleLimit : public Error {
 public:
  using Error::Error;
};

// Scenario / COCO input that is not parseable JSON.
class SyntaxError : public Error {
 public:
  using Error::Error;
};

// Parseable input with missing or mistyped fields.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Well-typed input that breaks a data invariant.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace detmatch
