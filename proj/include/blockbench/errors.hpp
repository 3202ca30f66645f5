#pragma once

#include <stdexcept>
#include <string>

namespace blockbench {

// Exit-code classes used by the CLI: parse (1), domain (2), resource (3).

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The request is well-formed but the design cannot be carried out,
// e.g. a fixed block size that does not divide n or a size-1 block.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleDesign : public DomainError {
 public:
  using DomainError::DomainError;
};

class ResourceLimitExceeded : public std::runtime_error {
 public:
  ResourceLimitExceeded(const std::string& what, unsigned long long predicted,
                        unsigned long long ceiling)
      : std::runtime_error(what), predicted_(predicted), ceiling_(ceiling) {}

  unsigned long long predicted() const noexcept { return predicted_; }
  unsigned long long ceiling() const noexcept { return ceiling_; }

 private:
  unsigned long long predicted_;
  unsigned long long ceiling_;
};

}  // namespace blockbench
