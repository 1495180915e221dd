#include "ltlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ltlab/error.hpp"
#include "ltlab/format.hpp"
#include "ltlab/functionals.hpp"

namespace ltlab {

using std::numbers::pi;

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("fit_line: size mismatch");
  if (x.size() < 2) throw DomainError("fit_line: needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit_line: all x equal");
  LineFit fit{};
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
  }
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

LineFit fit_loglog(const std::vector<std::pair<double, double>>& points) {
  std::vector<double> lx, ly;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("fit_loglog: coordinates must be positive");
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
  }
  return fit_line(lx, ly);
}

WindowSpec WindowPolicy::at(double h) const {
  if (eps) return WindowSpec(beta, *eps);
  return WindowSpec::with_default_eps(beta, h);
}

double thm2_lower_bound(const WeightFunction& w, double p, double h, const WindowSpec& window) {
  const double lo = -2.0 * std::log(window.eps_of_h);
  const double hi = 2.0 * window.beta * std::log(h);
  return std::pow(0.5, p) / (4.0 * pi) * (integral(w, lo, hi) - 2.0 * eval_weight(w, 0.0));
}

double thm2_proxy_slope(double p, double beta) { return std::pow(0.5, p) * 2.0 * beta / (4.0 * pi); }

namespace {

void check_grid(const std::vector<double>& h_grid) {
  if (h_grid.empty()) throw PreconditionError("sweep: empty h grid");
  for (std::size_t i = 0; i < h_grid.size(); ++i) {
    if (!(h_grid[i] > 0.0) || !std::isfinite(h_grid[i])) {
      throw PreconditionError("sweep: h values must be positive");
    }
    if (i > 0 && !(h_grid[i] > h_grid[i - 1])) {
      throw PreconditionError("sweep: h grid must be strictly ascending");
    }
  }
}

struct RowSpectrum {
  WindowSpec spec;
  WindowResult result;
};

// Enumerates the window; returns nullopt (and records the reason) when empty.
std::optional<RowSpectrum> row_spectrum(double h, const WindowPolicy& policy, unsigned threads,
                                        SweepReport& report) {
  try {
    const WindowSpec spec = policy.at(h);
    const StepPotential pot(h);
    return RowSpectrum{spec, enumerate_window(pot, spec, threads)};
  } catch (const WindowEmptyError& e) {
    report.skipped.push_back(SkippedRow{h, e.what()});
    return std::nullopt;
  }
}

SweepRow base_row(double h, double p, const WindowResult& result) {
  SweepRow row;
  row.h = h;
  row.j_min = result.range.j_min;
  row.j_max = result.range.j_max;
  row.roots = static_cast<long>(result.eigenvalues.size());
  row.failures = static_cast<long>(result.failures.size());
  if (!result.failures.empty()) {
    row.first_failure = "j=" + std::to_string(result.failures.front().j) + ": " +
                        result.failures.front().reason;
  }
  row.norm = potential_norm_p(StepPotential(h), p);
  return row;
}

// Every row needs a complete, non-empty spectrum for a verdict to count.
bool spectra_complete(const SweepReport& report, std::string& why) {
  if (report.rows.empty()) {
    why = "no rows";
    return false;
  }
  for (const SweepRow& row : report.rows) {
    if (row.failures > 0) {
      why = "root failures at h=" + format_shortest(row.h) + " (" + row.first_failure + ")";
      return false;
    }
    if (row.roots == 0) {
      why = "no eigenvalues at h=" + format_shortest(row.h);
      return false;
    }
  }
  return true;
}

std::optional<LineFit> ratio_vs_log_h(const SweepReport& report) {
  if (report.rows.size() < 2) return std::nullopt;
  std::vector<double> x, y;
  for (const SweepRow& row : report.rows) {
    x.push_back(std::log(row.h));
    y.push_back(row.ratio);
  }
  return fit_line(x, y);
}

void fill_common(SweepReport& report, const char* experiment, double p,
                 const WindowPolicy& window) {
  report.experiment = experiment;
  report.p = p;
  report.beta = window.beta;
  report.eps = window.eps;
}

std::string weight_text(const WeightFunction& w) {
  try {
    return to_spec(w);
  } catch (const UnsupportedError&) {
    return "piecewise";
  }
}

}  // namespace

SweepReport sweep_thm1(const std::vector<double>& h_grid, double p, const WeightFunction& w,
                       const WindowPolicy& window, unsigned threads) {
  check_grid(h_grid);
  if (!admissible_thm1(1, p)) throw PreconditionError("sweep thm1: needs p >= 3/2 in d = 1");
  if (!is_integrable(w)) throw PreconditionError("sweep thm1: weight must be integrable");

  SweepReport report;
  fill_common(report, "thm1", p, window);
  report.weight = weight_text(w);
  for (double h : h_grid) {
    const auto spec = row_spectrum(h, window, threads, report);
    if (!spec) continue;
    SweepRow row = base_row(h, p, spec->result);
    const auto sum = sum_weighted(lambdas_of(spec->result.eigenvalues), p, 1, w);
    row.value = sum.value;
    row.terms_skipped = sum.terms_skipped;
    row.ratio = row.value / row.norm;
    report.rows.push_back(row);
  }
  report.fit = ratio_vs_log_h(report);

  std::string why;
  if (!spectra_complete(report, why)) {
    report.verdict = false;
    report.criterion = "max ratio <= 10 x median ratio: not evaluated, " + why;
    return report;
  }
  std::vector<double> ratios;
  for (const SweepRow& row : report.rows) ratios.push_back(row.ratio);
  std::sort(ratios.begin(), ratios.end());
  const std::size_t m = ratios.size();
  const double median = m % 2 ? ratios[m / 2] : 0.5 * (ratios[m / 2 - 1] + ratios[m / 2]);
  const double max = ratios.back();
  report.verdict = std::isfinite(max) && max <= 10.0 * median;
  report.criterion = "max ratio <= 10 x median ratio: max=" + format_shortest(max) +
                     ", median=" + format_shortest(median);
  return report;
}

SweepReport sweep_thm2(const std::vector<double>& h_grid, double p, const WeightFunction& w,
                       const WindowPolicy& window, unsigned threads) {
  check_grid(h_grid);
  if (!(p >= 1.0)) throw PreconditionError("sweep thm2: needs p >= 1");
  if (is_integrable(w)) throw PreconditionError("sweep thm2: weight must be non-integrable");

  SweepReport report;
  fill_common(report, "thm2", p, window);
  report.weight = weight_text(w);
  for (double h : h_grid) {
    const auto spec = row_spectrum(h, window, threads, report);
    if (!spec) continue;
    SweepRow row = base_row(h, p, spec->result);
    const auto sum = sum_weighted(lambdas_of(spec->result.eigenvalues), p, 1, w);
    row.value = sum.value;
    row.terms_skipped = sum.terms_skipped;
    row.ratio = row.value / row.norm;
    row.lower_bound = thm2_lower_bound(w, p, h, spec->spec);
    report.rows.push_back(row);
  }
  report.fit = ratio_vs_log_h(report);

  std::string why;
  if (!spectra_complete(report, why)) {
    report.verdict = false;
    report.criterion = "ratio strictly increasing and >= L(h): not evaluated, " + why;
    return report;
  }
  bool increasing = true;
  bool above = true;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    if (i > 0 && !(report.rows[i].ratio > report.rows[i - 1].ratio)) increasing = false;
    if (!(report.rows[i].ratio >= *report.rows[i].lower_bound)) above = false;
  }
  report.verdict = increasing && above;
  report.criterion = std::string("ratio strictly increasing (") + (increasing ? "yes" : "no") +
                     ") and ratio >= L(h) on every row (" + (above ? "yes" : "no") + ")";
  return report;
}

SweepReport sweep_thm3(const std::vector<double>& h_grid, double p, const WindowPolicy& window,
                       unsigned threads, double slope_tol, double min_r2) {
  check_grid(h_grid);
  if (!(p >= 1.0)) throw PreconditionError("sweep thm3: needs p >= 1");
  if (h_grid.size() < 2) throw NumericalError("sweep thm3: fit undefined for fewer than two h");

  SweepReport report;
  fill_common(report, "thm3", p, window);
  for (double h : h_grid) {
    const auto spec = row_spectrum(h, window, threads, report);
    if (!spec) continue;
    SweepRow row = base_row(h, p, spec->result);
    const double t = std::pow(h, -2.0 * window.beta) / (8.0 * pi * pi);
    row.t = t;
    const auto sum = sum_sector(lambdas_of(spec->result.eigenvalues), p, 1, t);
    row.value = sum.value;
    row.terms_skipped = sum.terms_skipped;
    row.ratio = row.value / row.norm;
    report.rows.push_back(row);
  }
  if (report.rows.size() < 2) {
    throw NumericalError("sweep thm3: fit undefined, fewer than two non-empty windows");
  }

  std::ostringstream criterion;
  criterion << "loglog slope of ratio vs t in [" << format_shortest(-p - slope_tol * p) << ", "
            << format_shortest(-p + slope_tol * p) << "] and r2 >= " << format_shortest(min_r2);
  std::vector<std::pair<double, double>> points;
  for (const SweepRow& row : report.rows) {
    if (row.ratio > 0.0) points.emplace_back(*row.t, row.ratio);
  }
  if (points.size() >= 2) report.fit = fit_loglog(points);

  std::string why;
  if (!spectra_complete(report, why)) {
    report.verdict = false;
    report.criterion = criterion.str() + ": not evaluated, " + why;
    return report;
  }
  const double slope = report.fit->slope;
  report.verdict = std::abs(slope + p) <= slope_tol * p && report.fit->r_squared >= min_r2;
  report.criterion = criterion.str();
  return report;
}

}  // namespace ltlab
