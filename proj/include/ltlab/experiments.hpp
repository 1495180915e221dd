#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ltlab/spectrum.hpp"
#include "ltlab/weights.hpp"

namespace ltlab {

struct LineFit {
  double slope;
  double intercept;
  double r_squared;
};

/// Ordinary least squares y = slope x + intercept. Needs >= 2 points and
/// distinct x; r^2 = 1 when y is constant and fitted exactly.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Least squares on (log x, log y); all coordinates must be positive.
LineFit fit_loglog(const std::vector<std::pair<double, double>>& points);

/// beta and eps(h); eps defaults to 1/log h at each grid point.
struct WindowPolicy {
  double beta = 0.4;
  std::optional<double> eps;

  WindowSpec at(double h) const;
};

struct SweepRow {
  double h = 0.0;
  std::optional<double> t;  // thm3 sector parameter
  long j_min = 0;
  long j_max = 0;
  long roots = 0;
  long failures = 0;
  double value = 0.0;  // functional value over the window eigenvalues
  double norm = 0.0;   // 2 h^p
  double ratio = 0.0;  // value / norm
  std::optional<double> lower_bound;  // thm2 proxy L(h)
  long terms_skipped = 0;
  std::string first_failure;
};

struct SkippedRow {
  double h;
  std::string reason;
};

struct SweepReport {
  std::string experiment;  // thm1 | thm2 | thm3
  double p = 0.0;
  double beta = 0.0;
  std::optional<double> eps;
  std::string weight;  // textual weight spec, empty for thm3
  std::vector<SweepRow> rows;  // ascending h
  std::vector<SkippedRow> skipped;
  std::optional<LineFit> fit;
  bool verdict = false;
  std::string criterion;
};

/// Ratio of the weighted functional to 2 h^p for an integrable weight; the
/// verdict asks for max ratio <= 10 x median ratio. Fit: ratio vs log h.
SweepReport sweep_thm1(const std::vector<double>& h_grid, double p, const WeightFunction& w,
                       const WindowPolicy& window, unsigned threads = 0);

/// Same ratio for a non-integrable weight, with the lower-bound proxy
/// L(h) = (1/2)^p / (4 pi) (int_{-2 log eps}^{2 beta log h} f - 2 f(0)).
/// Verdict: ratio strictly increasing and ratio >= L(h) on every row.
SweepReport sweep_thm2(const std::vector<double>& h_grid, double p, const WeightFunction& w,
                       const WindowPolicy& window, unsigned threads = 0);

/// Sector sum at t(h) = h^{-2 beta} / (8 pi^2) over 2 h^p; loglog fit of the
/// ratio against t. Verdict: slope within +-slope_tol p of -p and r^2 >= min_r2.
/// Throws NumericalError with fewer than two rows (fit undefined).
SweepReport sweep_thm3(const std::vector<double>& h_grid, double p, const WindowPolicy& window,
                       unsigned threads = 0, double slope_tol = 0.15, double min_r2 = 0.98);

/// L(h) for the thm2 proxy.
double thm2_lower_bound(const WeightFunction& w, double p, double h, const WindowSpec& window);

/// Slope of L(h) against log h for f = 1: (1/2)^p 2 beta / (4 pi).
double thm2_proxy_slope(double p, double beta);

}  // namespace ltlab
