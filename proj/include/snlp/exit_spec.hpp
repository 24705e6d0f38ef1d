#pragma once

namespace snlp {

/// Interval [b, a] and a starting point strictly inside it.
struct ExitSpec {
  double b;
  double x;
  double a;

  /// Throws DomainError unless b < x < a (all finite).
  static ExitSpec make(double b, double x, double a);

  double width() const noexcept { return a - b; }
  bool operator==(const ExitSpec&) const = default;
};

}  // namespace snlp
