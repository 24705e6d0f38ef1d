#pragma once

#include <stdexcept>
#include <string>

namespace snlp {

/// Precondition or parameter-domain violation. Maps to CLI exit status 2.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical routine failed to produce a trustworthy value. `diagnostics`
/// carries a JSON object string with solver state (bracket, node counts, ...).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::string diagnostics = "{}")
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}

  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

}  // namespace snlp
