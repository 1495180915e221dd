#pragma once

#include "ltlab/weights.hpp"

namespace ltlab {

struct RegularizerOptions {
  // Violations of (log f)' >= -c and reintersections are searched up to here.
  double horizon = 1e9;
  // Absolute accuracy of the located interval endpoints a_n, b_n'.
  double endpoint_tol = 1e-10;
};

/// Replaces every stretch where (log f)' < -c by the exponential
/// f(a_n) exp(-c (s - a_n)) until it meets f again at b_n' (or forever), so that
/// the result satisfies (log f)' >= -c almost everywhere and dominates f.
/// Throws ConvergenceError when a reintersection is indicated but cannot be
/// bracketed inside the horizon.
WeightFunction regularize(const WeightFunction& f, double c,
                          const RegularizerOptions& opts = {});

/// Wraps f as a single original segment on [0, inf).
WeightFunction as_piecewise(const WeightFunction& f);

struct LogDerivativeReport {
  double min_slope;
  double argmin;
  bool pass;
};

/// Centered-difference log-derivatives on a dense grid over [0, 1e6],
/// skipping points next to junctions; pass iff every slope >= -c - tol.
LogDerivativeReport verify_log_derivative_bound(const WeightFunction& g, double c, double tol);

struct IntegralInflationReport {
  double integral_f;
  double integral_g;
  double bound;  // int f + f(a_1)/c, or int f without exponential segments
  bool holds;
};

/// Checks int g <= int f + f(a_1)/c for g = regularize(f, c).
IntegralInflationReport integral_inflation(const WeightFunction& f, const WeightFunction& g,
                                           double c);

}  // namespace ltlab
