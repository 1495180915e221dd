#pragma once

#include <functional>

namespace ltlab::quadrature {

struct Options {
  double abs_tol = 1e-10;
  int max_depth = 60;
};

/// Adaptive Simpson with Richardson correction on [a, b]. Throws
/// ConvergenceError when a subinterval is still unresolved at max_depth.
double simpson(const std::function<double(double)>& f, double a, double b,
               const Options& opts = {});

/// Integral of a non-negative, non-increasing integrand over [a, inf).
/// Integrates to a cutoff A where g(A) / decay_rate < tail_tol (certified tail
/// bound for integrands dominated by g(A) exp(-decay_rate (s - A))).
double simpson_to_infinity(const std::function<double(double)>& g, double a,
                           double decay_rate, const Options& opts = {},
                           double tail_tol = 1e-14);

}  // namespace ltlab::quadrature
