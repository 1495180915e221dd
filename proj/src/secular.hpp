#pragma once

// Shared evaluation of the normalized secular function around an anchor
// point mu = base + delta, where base is a multiple of pi/4 so that
// e^{2i base} = i^m is exact and only the small offset enters exp().

#include <complex>

#include "ltlab/spectrum.hpp"

namespace ltlab::detail {

struct Anchor {
  double base;
  cplx phase;  // e^{2i base}
};

Anchor anchor_near(double re_mu);

struct SecularTerms {
  cplx p;      // e^{2i mu}
  cplx r;      // i h / (i mu + kappa)^2
  cplx dp;     // d/dmu
  cplx dr;
  cplx kappa;
  cplx lambda;
};

/// Throws OutOfSheetError when lambda is on [0, inf) or Re kappa <= 0.
SecularTerms secular_terms(double h, const Anchor& anchor, cplx delta);

inline double sign_of(Parity parity) { return parity == Parity::even ? -1.0 : 1.0; }

inline cplx secular_value(const SecularTerms& t, Parity parity) {
  return t.p + sign_of(parity) * t.r;
}

inline cplx secular_derivative(const SecularTerms& t, Parity parity) {
  return t.dp + sign_of(parity) * t.dr;
}

inline double relative_size(const SecularTerms& t, Parity parity) {
  return std::abs(secular_value(t, parity)) / (std::abs(t.p) + std::abs(t.r));
}

}  // namespace ltlab::detail
