#include "ltlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ltlab/error.hpp"

namespace ltlab::quadrature {
namespace {

struct Panel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

double simpson_rule(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double refine(const std::function<double(double)>& f, const Panel& p,
              double tol, int depth, int max_depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_rule(p.a, p.m, p.fa, flm, p.fm);
  const double right = simpson_rule(p.m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= max_depth) {
    throw ConvergenceError("adaptive Simpson: interval [" + std::to_string(p.a) + ", " +
                           std::to_string(p.b) + "] unresolved at depth " +
                           std::to_string(depth));
  }
  const Panel lp{p.a, lm, p.m, p.fa, flm, p.fm, left};
  const Panel rp{p.m, rm, p.b, p.fm, frm, p.fb, right};
  return refine(f, lp, 0.5 * tol, depth + 1, max_depth) +
         refine(f, rp, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double simpson(const std::function<double(double)>& f, double a, double b,
               const Options& opts) {
  if (a == b) return 0.0;
  if (b < a) return -simpson(f, b, a, opts);
  // Seed with four panels so that narrow features near the midpoint are not
  // missed by the first error estimate.
  constexpr int kSeedPanels = 4;
  double total = 0.0;
  const double width = (b - a) / kSeedPanels;
  for (int k = 0; k < kSeedPanels; ++k) {
    const double lo = a + k * width;
    const double hi = (k + 1 == kSeedPanels) ? b : lo + width;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fmid = f(mid), fhi = f(hi);
    const Panel p{lo, mid, hi, flo, fmid, fhi, simpson_rule(lo, hi, flo, fmid, fhi)};
    total += refine(f, p, opts.abs_tol / kSeedPanels, 0, opts.max_depth);
  }
  return total;
}

double simpson_to_infinity(const std::function<double(double)>& g, double a,
                           double decay_rate, const Options& opts, double tail_tol) {
  if (!(decay_rate > 0.0)) {
    throw DomainError("simpson_to_infinity: decay rate must be positive");
  }
  // Geometric breakpoints a, a+1, a+3, a+7, ... until the certified tail
  // bound g(A)/rate drops below tail_tol.
  std::vector<double> cuts{a};
  double step = 1.0 / std::min(1.0, decay_rate);
  double upper = a;
  for (int k = 0; k < 200; ++k) {
    upper += step;
    cuts.push_back(upper);
    if (g(upper) / decay_rate < tail_tol) break;
    step *= 2.0;
    if (k == 199) throw ConvergenceError("simpson_to_infinity: no certified cutoff found");
  }
  Options piece = opts;
  piece.abs_tol = opts.abs_tol / static_cast<double>(cuts.size() - 1);
  double total = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    total += simpson(g, cuts[i - 1], cuts[i], piece);
  }
  return total;
}

}  // namespace ltlab::quadrature
