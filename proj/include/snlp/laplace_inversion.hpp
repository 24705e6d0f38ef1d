#pragma once

#include <complex>
#include <functional>

namespace snlp {

using TransformEvaluator = std::function<std::complex<double>(std::complex<double>)>;

struct TalbotOptions {
  /// Contour nodes. Around 24 is the sweet spot in double precision; the
  /// e^{rx} weight on the first node grows like e^{0.4 M} and eats digits.
  int nodes = 24;
  /// Real shift c: the transform is evaluated at s + c and the result scaled
  /// by e^{cx}. Put it at the rightmost singularity.
  double shift = 0.0;
};

/// Fixed-Talbot (Abate-Valko) inversion of `transform` at x > 0.
double laplace_invert(const TransformEvaluator& transform, double x, const TalbotOptions& options = {});

}  // namespace snlp
