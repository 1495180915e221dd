#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ltlab/error.hpp"
#include "ltlab/parallel.hpp"
#include "ltlab/spectrum.hpp"
#include "secular.hpp"

namespace ltlab {
namespace {

using std::numbers::pi;

constexpr double kNearZero = 1e-6;
constexpr int kMaxDepth = 50;
constexpr double kMaxSampleTurn = pi / 4.0;

struct Sample {
  cplx delta;
  cplx p, r, e;
};

class ArgTracker {
 public:
  ArgTracker(double h, const detail::Anchor& anchor, Parity parity)
      : h_(h), anchor_(anchor), parity_(parity) {}

  Sample sample(cplx delta) const {
    const auto t = detail::secular_terms(h_, anchor_, delta);
    Sample s{delta, t.p, t.r, detail::secular_value(t, parity_)};
    if (std::abs(s.e) < kNearZero * (std::abs(s.p) + std::abs(s.r))) {
      throw ContourError("contour passes within tolerance of a zero near mu = (" +
                         std::to_string(anchor_.base + delta.real()) + ", " +
                         std::to_string(delta.imag()) + ")");
    }
    return s;
  }

  // Continuous change of arg E from a to b along the straight segment.
  double edge(cplx a, cplx b) const {
    struct Pending {
      Sample lo, hi;
      int depth;
    };
    double total = 0.0;
    std::vector<Pending> stack{{sample(a), sample(b), 0}};
    while (!stack.empty()) {
      const Pending seg = stack.back();
      stack.pop_back();
      const Sample mid = sample(0.5 * (seg.lo.delta + seg.hi.delta));
      double change = 0.0;
      if (try_accept(seg.lo, mid, seg.hi, change)) {
        total += change;
        continue;
      }
      if (seg.depth >= kMaxDepth) throw ContourError("argument tracking did not resolve");
      // Push the right half first so segments are consumed left to right.
      stack.push_back({mid, seg.hi, seg.depth + 1});
      stack.push_back({seg.lo, mid, seg.depth + 1});
    }
    return total;
  }

 private:
  static double turn(cplx from, cplx to) { return std::arg(to / from); }

  static bool smooth(cplx f0, cplx fm, cplx f1, double& change) {
    const double d1 = turn(f0, fm);
    const double d2 = turn(fm, f1);
    if (std::abs(d1) > kMaxSampleTurn || std::abs(d2) > kMaxSampleTurn) return false;
    if (std::abs(d1 + d2 - turn(f0, f1)) > 1e-9) return false;
    change = d1 + d2;
    return true;
  }

  static bool dominated(const Sample& s, bool by_exp) {
    const double num = by_exp ? std::abs(s.r) : std::abs(s.p);
    const double den = by_exp ? std::abs(s.p) : std::abs(s.r);
    return num <= den / 3.0;
  }

  static bool try_accept(const Sample& lo, const Sample& mid, const Sample& hi, double& change) {
    // E = P (1 +- r/P) with |r/P| <= 1/3: arg P grows exactly by 2 dRe(mu) and
    // the bracket stays in a disc about 1, where the principal arg is continuous.
    if (dominated(lo, true) && dominated(mid, true) && dominated(hi, true)) {
      change = 2.0 * (hi.delta.real() - lo.delta.real()) + turn(lo.e / lo.p, hi.e / hi.p);
      return true;
    }
    if (dominated(lo, false) && dominated(mid, false) && dominated(hi, false)) {
      double r_change = 0.0;
      if (!smooth(lo.r, mid.r, hi.r, r_change)) return false;
      change = r_change + turn(lo.e / lo.r, hi.e / hi.r);
      return true;
    }
    return smooth(lo.e, mid.e, hi.e, change);
  }

  double h_;
  detail::Anchor anchor_;
  Parity parity_;
};

void check_off_cut(double h, const MuRect& rect) {
  // Im lambda = 2 Re(mu) Im(mu) + h is bilinear, so its minimum is at a corner.
  for (double a : {rect.re_min, rect.re_max}) {
    for (double b : {rect.im_min, rect.im_max}) {
      if (!(2.0 * a * b + h > 0.0)) {
        throw ContourError("rectangle reaches the branch cut Im lambda <= 0");
      }
    }
  }
}

}  // namespace

int count_zeros_rectangle(const StepPotential& pot, const MuRect& rect, Parity parity) {
  if (!(rect.re_min < rect.re_max && rect.im_min < rect.im_max) ||
      !std::isfinite(rect.re_min) || !std::isfinite(rect.re_max) ||
      !std::isfinite(rect.im_min) || !std::isfinite(rect.im_max)) {
    throw DomainError("count_zeros_rectangle: degenerate rectangle");
  }
  check_off_cut(pot.h(), rect);

  const auto anchor = detail::anchor_near(0.5 * (rect.re_min + rect.re_max));
  const ArgTracker tracker(pot.h(), anchor, parity);
  const double x0 = rect.re_min - anchor.base;
  const double x1 = rect.re_max - anchor.base;
  const cplx c00(x0, rect.im_min), c10(x1, rect.im_min);
  const cplx c11(x1, rect.im_max), c01(x0, rect.im_max);

  const double total =
      tracker.edge(c00, c10) + tracker.edge(c10, c11) + tracker.edge(c11, c01) +
      tracker.edge(c01, c00);
  const double winding = total / (2.0 * pi);
  const double rounded = std::nearbyint(winding);
  if (std::abs(winding - rounded) > 1e-3 || rounded < 0.0) {
    throw ContourError("non-integral winding number " + std::to_string(winding));
  }
  return static_cast<int>(rounded);
}

MuRect index_cell(const StepPotential& pot, long j) {
  const cplx seed = seed_from_asymptotic(pot, j);
  const double re_min = seed.real() - pi / 2.0;
  const double re_max = seed.real() + pi / 2.0;
  const double b = seed.imag();
  // Largest admissible Im mu on the cell: 2 re_min Im mu + h > 0.
  const double cut = pot.h() / (2.0 * std::abs(re_min));
  if (!(b < cut)) {
    throw ContourError("cell of j=" + std::to_string(j) + " straddles the branch cut");
  }
  return MuRect{re_min, re_max, b - 1.0, b + std::min(1.0, 0.5 * (cut - b))};
}

WindowCount count_window_zeros(const StepPotential& pot, IndexRange range, unsigned threads) {
  if (range.j_min < 1 || range.j_max < range.j_min) {
    throw DomainError("count_window_zeros: index range must satisfy 1 <= j_min <= j_max");
  }
  const auto n = static_cast<std::size_t>(range.size());
  std::vector<int> counts(n, 0);
  std::vector<std::string> errors(n);

  parallel_for(n, resolve_threads(static_cast<int>(threads)), [&](std::size_t i) {
    const long j = range.j_min + static_cast<long>(i);
    try {
      MuRect cell = index_cell(pot, j);
      // A zero on the contour: move the horizontal edges and retry.
      for (int attempt = 0;; ++attempt) {
        try {
          counts[i] = count_zeros_rectangle(pot, cell, Parity::even);
          return;
        } catch (const ContourError&) {
          if (attempt == 2) throw;
          cell.im_min -= 0.25;
          cell.im_max = cell.im_min + 0.5 * (cell.im_max - cell.im_min) + 0.25;
        }
      }
    } catch (const NumericalError& e) {
      counts[i] = -1;
      errors[i] = e.what();
    }
  });

  WindowCount out;
  for (std::size_t i = 0; i < n; ++i) {
    if (counts[i] < 0) {
      out.failed_cells.push_back(range.j_min + static_cast<long>(i));
      if (out.first_error.empty()) out.first_error = errors[i];
    } else {
      out.zeros += counts[i];
    }
  }
  return out;
}

}  // namespace ltlab
