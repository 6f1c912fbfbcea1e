#pragma once

#include "monolab/profile.hpp"

namespace monolab {

/// Exponents of one functional family. k is the transform exponent of
/// b = G^{1/(2-k)}, l and p rescale the area/volume functionals, beta is the
/// power of |grad b|, alpha couples A and V, and c, d shape the
/// g(r) = r^c (r^d A)' quantity. N is the synthetic dimension used by the
/// curvature hypothesis.
struct Params {
  double k = 3.0;
  double l = 3.0;
  double beta = 2.0;
  double p = 0.0;
  double N = kInfiniteN;
  double alpha = 0.0;
  double c = 0.0;
  double d = 0.0;
};

}  // namespace monolab
