#pragma once

#include <stdexcept>
#include <string>

namespace transversal {

// Operands from different groups, ring levels or backends were combined.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A configured desk-scale cap would be exceeded; the work is refused, not failed.
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed textual input (group strings, element lists, configs).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A search that is mathematically guaranteed to succeed came back empty.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace transversal
