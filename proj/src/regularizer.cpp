#include "ltlab/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "ltlab/error.hpp"

namespace ltlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxSegments = 10000;

// Scan grid: steps of 0.01 up to 1, then 1% geometric growth.
double next_scan_point(double s) { return s + std::max(0.01, 0.01 * s); }

class Construction {
 public:
  Construction(const WeightFunction& f, double c, const RegularizerOptions& opts)
      : f_(f), c_(c), opts_(opts), breaks_(breakpoints(f)) {}

  bool violates(double s) const { return log_derivative(f_, s) + c_ < 0.0; }

  // First point >= x where (log f)' < -c starts, or +inf if none before the
  // horizon.
  double find_violation_start(double x) const {
    if (violates(x)) return x;
    double lo = x;
    while (lo < opts_.horizon) {
      const double hi = std::min(next_scan_point(lo), opts_.horizon);
      if (violates(hi)) return bisect_violation(lo, hi);
      lo = hi;
    }
    return kInf;
  }

  // Smallest s > a where f meets the exponential from a again; +inf when f
  // keeps falling faster than rate c past the horizon.
  double find_reintersection(double a) const {
    const double log_fa = log_weight(f_, a);
    const auto gap = [&](double s) { return log_weight(f_, s) - (log_fa - c_ * (s - a)); };

    double step = std::max(1e-6, 1e-6 * a);
    double prev = a;
    while (true) {
      const double next = a + step;
      if (next > opts_.horizon) break;
      if (gap(next) >= 0.0) return first_crossing(gap, prev, next);
      prev = next;
      step *= 2.0;
    }
    if (violates(opts_.horizon)) return kInf;
    throw ConvergenceError("regularize: reintersection after a = " + std::to_string(a) +
                           " not bracketed before horizon " + std::to_string(opts_.horizon));
  }

 private:
  double bisect_violation(double lo, double hi) const {
    // lo satisfies the bound, hi violates it.
    // A jump of the log-derivative at a family breakpoint starts the violation
    // exactly there.
    for (double b : breaks_) {
      if (b > lo && b <= hi && violates(b) && !violates(std::nextafter(b, lo))) return b;
    }
    while (hi - lo > opts_.endpoint_tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (violates(mid) ? hi : lo) = mid;
    }
    return hi;
  }

  template <class Gap>
  double first_crossing(const Gap& gap, double lo, double hi) const {
    // Locate the first sub-interval with a sign change, then bisect.
    constexpr int kPieces = 64;
    const double width = (hi - lo) / kPieces;
    double left = lo;
    for (int k = 1; k <= kPieces; ++k) {
      const double right = (k == kPieces) ? hi : lo + k * width;
      if (gap(right) >= 0.0) {
        hi = right;
        lo = left;
        break;
      }
      left = right;
    }
    while (hi - lo > opts_.endpoint_tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (gap(mid) >= 0.0 ? hi : lo) = mid;
    }
    return hi;
  }

  const WeightFunction& f_;
  double c_;
  RegularizerOptions opts_;
  std::vector<double> breaks_;
};

}  // namespace

WeightFunction as_piecewise(const WeightFunction& f) {
  PiecewiseLogLinear pll;
  pll.source = std::make_shared<const WeightFunction>(f);
  pll.segments.push_back(Segment{0.0, kInf, Segment::Kind::original, 0.0, 0.0, 0.0});
  return WeightFunction::piecewise(std::move(pll));
}

WeightFunction regularize(const WeightFunction& f, double c, const RegularizerOptions& opts) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("regularize: c must be positive");

  const Construction build(f, c, opts);
  std::vector<Segment> segments;
  double x = 0.0;
  while (x < kInf) {
    if (segments.size() > kMaxSegments) {
      throw ConvergenceError("regularize: more than " + std::to_string(kMaxSegments) +
                             " segments");
    }
    const double a = build.find_violation_start(x);
    if (a == kInf) break;
    if (a > x) segments.push_back(Segment{x, a, Segment::Kind::original, 0.0, 0.0, 0.0});
    const double b = build.find_reintersection(a);
    segments.push_back(Segment{a, b, Segment::Kind::exponential, a, eval_weight(f, a), c});
    x = b;
  }

  const bool replaced = std::any_of(segments.begin(), segments.end(), [](const Segment& s) {
    return s.kind == Segment::Kind::exponential;
  });
  if (!replaced) {
    if (f.as<PiecewiseLogLinear>()) return f;
    return as_piecewise(f);
  }
  if (x < kInf) segments.push_back(Segment{x, kInf, Segment::Kind::original, 0.0, 0.0, 0.0});

  PiecewiseLogLinear pll;
  pll.source = std::make_shared<const WeightFunction>(f);
  pll.segments = std::move(segments);
  return WeightFunction::piecewise(std::move(pll));
}

LogDerivativeReport verify_log_derivative_bound(const WeightFunction& g, double c, double tol) {
  std::vector<double> grid;
  constexpr int kLinear = 4000;
  constexpr int kLog = 4000;
  constexpr double kSplit = 20.0;
  constexpr double kTop = 1e6;
  for (int i = 1; i <= kLinear; ++i) grid.push_back(kSplit * i / kLinear);
  for (int i = 1; i <= kLog; ++i) {
    grid.push_back(kSplit * std::pow(kTop / kSplit, static_cast<double>(i) / kLog));
  }
  const std::vector<double> junctions = breakpoints(g);

  LogDerivativeReport report{kInf, 0.0, true};
  for (double s : grid) {
    const double delta = 1e-6 * std::max(1.0, s);
    if (s - delta < 0.0) continue;
    const double guard = 2.0 * delta + 1e-7;
    const bool near_junction = std::any_of(junctions.begin(), junctions.end(),
                                           [&](double j) { return std::abs(s - j) < guard; });
    if (near_junction) continue;
    const double slope = (log_weight(g, s + delta) - log_weight(g, s - delta)) / (2.0 * delta);
    if (slope < report.min_slope) {
      report.min_slope = slope;
      report.argmin = s;
    }
  }
  report.pass = report.min_slope >= -c - tol;
  return report;
}

IntegralInflationReport integral_inflation(const WeightFunction& f, const WeightFunction& g,
                                           double c) {
  if (!f.integrable()) throw PreconditionError("integral_inflation: f must be integrable");
  const auto* pll = g.as<PiecewiseLogLinear>();
  if (!pll) throw PreconditionError("integral_inflation: g must be a piecewise weight");

  IntegralInflationReport out{};
  out.integral_f = integral_tail(f, 0.0);
  double total = 0.0;
  for (const Segment& seg : pll->segments) {
    if (seg.b == kInf) {
      total += integral_tail(g, seg.a);
    } else {
      total += integral_by_quadrature(g, seg.a, seg.b);
    }
  }
  out.integral_g = total;

  out.bound = out.integral_f;
  for (const Segment& seg : pll->segments) {
    if (seg.kind == Segment::Kind::exponential) {
      out.bound += eval_weight(f, seg.anchor) / c;
      break;
    }
  }
  out.holds = out.integral_g <= out.bound + 1e-8;
  return out;
}

}  // namespace ltlab
