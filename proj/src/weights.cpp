#include "ltlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ltlab/error.hpp"
#include "ltlab/quadrature.hpp"

namespace ltlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kE = std::numbers::e;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Largest n with exp^n(1) finite.
constexpr int kMaxTower = 3;

double tower(int n) { return iterated_exp(n, 1.0); }

// prod_{k=1..n} 1/exp^k(1): right limit of the LogPower branch at exp^n(1).
double log_power_plateau(int n) {
  double v = 1.0;
  for (int k = 1; k <= n; ++k) v /= tower(k);
  return v;
}

// log^j(s) for j = 0..n, requires s > exp^{n-1}(1) so that all are positive.
std::vector<double> log_chain(double s, int n) {
  std::vector<double> chain(static_cast<std::size_t>(n) + 1);
  chain[0] = s;
  for (int j = 1; j <= n; ++j) chain[j] = std::log(chain[j - 1]);
  return chain;
}

// D_j = d/ds log^j(s) = prod_{i<j} 1/log^i(s), for j = 0..n.
std::vector<double> log_chain_derivatives(const std::vector<double>& chain) {
  std::vector<double> d(chain.size());
  d[0] = 1.0;
  for (std::size_t j = 1; j < chain.size(); ++j) d[j] = d[j - 1] / chain[j - 1];
  return d;
}

double log_power_log_value(const LogPower& lp, double s) {
  const double t = tower(lp.n);
  if (s <= t) return std::log(log_power_plateau(lp.n));
  const auto chain = log_chain(s, lp.n);
  double acc = 0.0;
  for (int j = 0; j < lp.n; ++j) acc -= std::log(chain[j]);
  return acc - (1.0 + lp.eps) * std::log(chain[lp.n]);
}

// u(s) = slog(s) - 1 + log^slog(s)(s), the argument of family (v).
struct SlogParts {
  int m;
  std::vector<double> chain;
  double u;
};

SlogParts slog_parts(double s) {
  const int m = slog(s);
  auto chain = log_chain(s, m);
  const double u = (m - 1) + chain[m];
  return {m, std::move(chain), u};
}

double slog_power_log_value(const SlogPower& sp, double s) {
  if (s <= kE) return -1.0;
  const auto parts = slog_parts(s);
  double acc = 0.0;
  for (int j = 0; j < parts.m; ++j) acc -= std::log(parts.chain[j]);
  return acc - (1.0 + sp.eps) * std::log(parts.u);
}

void require_finite_nonneg(double x, const char* what) {
  if (!std::isfinite(x) || x < 0.0) {
    throw DomainError(std::string(what) + " must be finite and non-negative");
  }
}

}  // namespace

std::size_t PiecewiseLogLinear::locate(double s) const {
  if (segments.empty()) throw DomainError("piecewise weight without segments");
  const auto it = std::upper_bound(segments.begin(), segments.end(), s,
                                   [](double x, const Segment& seg) { return x < seg.a; });
  if (it == segments.begin()) return 0;
  return static_cast<std::size_t>(std::distance(segments.begin(), it) - 1);
}

WeightFunction::WeightFunction(Family family) : family_(std::move(family)) {
  integrable_ = is_integrable(*this);
}

WeightFunction WeightFunction::exp_decay(double tau) {
  require_finite_nonneg(tau, "ExpDecay tau");
  return WeightFunction(ExpDecay{tau});
}

WeightFunction WeightFunction::power_law(double eps, double cap) {
  require_finite_nonneg(eps, "PowerLaw eps");
  if (!std::isfinite(cap) || cap <= 0.0) throw DomainError("PowerLaw cap point must be positive");
  return WeightFunction(PowerLaw{eps, cap});
}

WeightFunction WeightFunction::log_power(int n, double eps) {
  require_finite_nonneg(eps, "LogPower eps");
  if (n < 1 || n > kMaxTower) {
    throw DomainError("LogPower n must lie in [1, " + std::to_string(kMaxTower) +
                      "] (exp^n(1) must be finite)");
  }
  return WeightFunction(LogPower{n, eps});
}

WeightFunction WeightFunction::slog_power(double eps) {
  require_finite_nonneg(eps, "SlogPower eps");
  return WeightFunction(SlogPower{eps});
}

WeightFunction WeightFunction::constant(double value) {
  if (!std::isfinite(value) || value <= 0.0) throw DomainError("Constant value must be positive");
  return WeightFunction(Constant{value});
}

WeightFunction WeightFunction::piecewise(PiecewiseLogLinear pll) {
  if (!pll.source) throw DomainError("piecewise weight needs a source weight");
  if (pll.segments.empty() || pll.segments.front().a != 0.0 ||
      pll.segments.back().b != kInf) {
    throw DomainError("piecewise segments must partition [0, inf)");
  }
  for (std::size_t i = 1; i < pll.segments.size(); ++i) {
    if (pll.segments[i].a != pll.segments[i - 1].b) {
      throw DomainError("piecewise segments must be contiguous");
    }
  }
  return WeightFunction(std::move(pll));
}

double iterated_log(int n, double s) {
  if (n < 0) throw DomainError("iterated_log: n must be non-negative");
  for (int k = 0; k < n; ++k) {
    if (!(s > 0.0)) {
      throw DomainError("iterated_log: intermediate value " + std::to_string(s) +
                        " is not positive at step " + std::to_string(k + 1));
    }
    s = std::log(s);
  }
  return s;
}

double iterated_exp(int n, double s) {
  if (n < 0) throw DomainError("iterated_exp: n must be non-negative");
  for (int k = 0; k < n; ++k) {
    s = std::exp(s);
    if (!std::isfinite(s)) {
      throw OverflowError("iterated_exp: tower of height " + std::to_string(n) +
                          " exceeds the double range");
    }
  }
  return s;
}

int slog(double s) {
  if (std::isnan(s)) throw DomainError("slog: NaN argument");
  constexpr double kOne = 1.0 + 8.0 * std::numeric_limits<double>::epsilon();
  int n = 0;
  while (s > kOne) {
    s = std::log(s);
    ++n;
  }
  return n;
}

double log_weight(const WeightFunction& w, double s) {
  return std::visit(
      Overloaded{
          [s](const ExpDecay& e) { return -e.tau * s; },
          [s](const PowerLaw& p) { return -(1.0 + p.eps) * std::log(std::max(s, p.cap)); },
          [s](const LogPower& lp) { return log_power_log_value(lp, s); },
          [s](const SlogPower& sp) { return slog_power_log_value(sp, s); },
          [](const Constant& c) { return std::log(c.value); },
          [s](const PiecewiseLogLinear& pll) {
            const Segment& seg = pll.segments[pll.locate(s)];
            if (seg.kind == Segment::Kind::exponential) {
              return std::log(seg.anchor_value) - seg.rate * (s - seg.anchor);
            }
            return log_weight(*pll.source, s);
          },
      },
      w.family());
}

double eval_weight(const WeightFunction& w, double s) {
  if (std::isnan(s)) throw DomainError("eval_weight: NaN argument");
  return std::visit(
      Overloaded{
          [s](const ExpDecay& e) { return std::exp(-e.tau * s); },
          [s](const PowerLaw& p) { return std::pow(std::max(s, p.cap), -(1.0 + p.eps)); },
          [s](const LogPower& lp) {
            if (s <= tower(lp.n)) return log_power_plateau(lp.n);
            const auto chain = log_chain(s, lp.n);
            double v = 1.0;
            for (int j = 0; j < lp.n; ++j) v /= chain[j];
            return v / std::pow(chain[lp.n], 1.0 + lp.eps);
          },
          [s](const SlogPower& sp) {
            if (s <= kE) return 1.0 / kE;
            const auto parts = slog_parts(s);
            double v = 1.0;
            for (int j = 0; j < parts.m; ++j) v /= parts.chain[j];
            return v / std::pow(parts.u, 1.0 + sp.eps);
          },
          [](const Constant& c) { return c.value; },
          [s](const PiecewiseLogLinear& pll) {
            const Segment& seg = pll.segments[pll.locate(s)];
            if (seg.kind == Segment::Kind::exponential) {
              return seg.anchor_value * std::exp(-seg.rate * (s - seg.anchor));
            }
            return eval_weight(*pll.source, s);
          },
      },
      w.family());
}

double log_derivative(const WeightFunction& w, double s) {
  return std::visit(
      Overloaded{
          [](const ExpDecay& e) { return -e.tau; },
          [s](const PowerLaw& p) { return s < p.cap ? 0.0 : -(1.0 + p.eps) / s; },
          [s](const LogPower& lp) {
            if (s < tower(lp.n)) return 0.0;
            const auto chain = log_chain(s, lp.n);
            const auto d = log_chain_derivatives(chain);
            // d/ds log log^j(s) = D_{j+1}
            double acc = 0.0;
            for (int j = 1; j <= lp.n; ++j) acc -= d[j];
            return acc - (1.0 + lp.eps) * d[lp.n] / chain[lp.n];
          },
          [s](const SlogPower& sp) {
            if (s < kE) return 0.0;
            const auto parts = slog_parts(s);
            const auto d = log_chain_derivatives(parts.chain);
            double acc = 0.0;
            for (int j = 1; j <= parts.m; ++j) acc -= d[j];
            return acc - (1.0 + sp.eps) * d[parts.m] / parts.u;
          },
          [](const Constant&) { return 0.0; },
          [s](const PiecewiseLogLinear& pll) {
            const Segment& seg = pll.segments[pll.locate(s)];
            if (seg.kind == Segment::Kind::exponential) return -seg.rate;
            return log_derivative(*pll.source, s);
          },
      },
      w.family());
}

double antiderivative_domain_edge(const WeightFunction& w) {
  return std::visit(
      Overloaded{
          [](const ExpDecay&) { return -kInf; },
          [](const PowerLaw& p) { return p.cap; },
          [](const LogPower& lp) { return tower(lp.n); },
          [](const SlogPower&) { return kE; },
          [](const Constant&) { return -kInf; },
          [](const PiecewiseLogLinear&) -> double {
            throw UnsupportedError("no closed-form antiderivative for piecewise weights");
          },
      },
      w.family());
}

double eval_antiderivative(const WeightFunction& w, double s) {
  const double edge = antiderivative_domain_edge(w);
  if (!(s >= edge)) {
    throw DomainError("eval_antiderivative: s = " + std::to_string(s) +
                      " lies below the closed-form domain edge " + std::to_string(edge));
  }
  // eps > 0: F = -(1/eps) g(s)^-eps, eps = 0: F = log g(s), where g is the
  // innermost argument of the family.
  const auto tail_form = [](double eps, double g) {
    return eps > 0.0 ? -std::pow(g, -eps) / eps : std::log(g);
  };
  return std::visit(
      Overloaded{
          [s](const ExpDecay& e) { return e.tau > 0.0 ? -std::exp(-e.tau * s) / e.tau : s; },
          [&](const PowerLaw& p) { return tail_form(p.eps, s); },
          [&](const LogPower& lp) { return tail_form(lp.eps, iterated_log(lp.n, s)); },
          [&](const SlogPower& sp) { return tail_form(sp.eps, slog_parts(s).u); },
          [s](const Constant& c) { return c.value * s; },
          [](const PiecewiseLogLinear&) -> double {
            throw UnsupportedError("no closed-form antiderivative for piecewise weights");
          },
      },
      w.family());
}

std::vector<double> breakpoints(const WeightFunction& w) {
  return std::visit(
      Overloaded{
          [](const ExpDecay&) { return std::vector<double>{}; },
          [](const PowerLaw& p) { return std::vector<double>{p.cap}; },
          [](const LogPower& lp) { return std::vector<double>{tower(lp.n)}; },
          [](const SlogPower&) {
            std::vector<double> out;
            for (int n = 1; n <= kMaxTower; ++n) out.push_back(tower(n));
            return out;
          },
          [](const Constant&) { return std::vector<double>{}; },
          [](const PiecewiseLogLinear& pll) {
            std::vector<double> out = breakpoints(*pll.source);
            for (std::size_t i = 1; i < pll.segments.size(); ++i) out.push_back(pll.segments[i].a);
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
            return out;
          },
      },
      w.family());
}

bool is_integrable(const WeightFunction& w) {
  return std::visit(
      Overloaded{
          [](const ExpDecay& e) { return e.tau > 0.0; },
          [](const PowerLaw& p) { return p.eps > 0.0; },
          [](const LogPower& lp) { return lp.eps > 0.0; },
          [](const SlogPower& sp) { return sp.eps > 0.0; },
          [](const Constant&) { return false; },
          [](const PiecewiseLogLinear& pll) {
            const Segment& last = pll.segments.back();
            if (last.kind == Segment::Kind::exponential) return last.rate > 0.0;
            return pll.source->integrable();
          },
      },
      w.family());
}

double integral(const WeightFunction& w, double a, double b) {
  if (b < a) return -integral(w, b, a);
  if (a < 0.0) throw DomainError("integral: lower limit must be non-negative");
  if (b == kInf) return integral_tail(w, a);
  if (a == b) return 0.0;

  // Plateau on [0, edge] plus closed-form F beyond it.
  const auto plateau_then_f = [&](double plateau_value, double edge) {
    double total = 0.0;
    if (a < edge) total += plateau_value * (std::min(b, edge) - a);
    if (b > edge) total += eval_antiderivative(w, b) - eval_antiderivative(w, std::max(a, edge));
    return total;
  };

  return std::visit(
      Overloaded{
          [&](const ExpDecay& e) {
            if (e.tau == 0.0) return b - a;
            return std::exp(-e.tau * a) * -std::expm1(-e.tau * (b - a)) / e.tau;
          },
          [&](const PowerLaw& p) {
            return plateau_then_f(std::pow(p.cap, -(1.0 + p.eps)), p.cap);
          },
          [&](const LogPower& lp) { return plateau_then_f(log_power_plateau(lp.n), tower(lp.n)); },
          [&](const SlogPower&) { return plateau_then_f(1.0 / kE, kE); },
          [&](const Constant& c) { return c.value * (b - a); },
          [&](const PiecewiseLogLinear& pll) {
            double total = 0.0;
            for (const Segment& seg : pll.segments) {
              const double lo = std::max(a, seg.a);
              const double hi = std::min(b, seg.b);
              if (!(hi > lo)) continue;
              if (seg.kind == Segment::Kind::exponential) {
                total += seg.anchor_value * std::exp(-seg.rate * (lo - seg.anchor)) *
                         -std::expm1(-seg.rate * (hi - lo)) / seg.rate;
              } else {
                total += integral(*pll.source, lo, hi);
              }
            }
            return total;
          },
      },
      w.family());
}

double integral_by_quadrature(const WeightFunction& w, double a, double b, double abs_tol) {
  if (b < a) return -integral_by_quadrature(w, b, a, abs_tol);
  if (!std::isfinite(b)) throw DomainError("integral_by_quadrature: finite limits required");
  std::vector<double> cuts{a};
  for (double x : breakpoints(w)) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  quadrature::Options opts;
  opts.abs_tol = abs_tol / static_cast<double>(cuts.size() - 1);
  double total = 0.0;
  const auto f = [&w](double s) { return eval_weight(w, s); };
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    total += quadrature::simpson(f, cuts[i - 1], cuts[i], opts);
  }
  return total;
}

double integral_tail(const WeightFunction& w, double a) {
  if (!(a >= 0.0)) throw DomainError("integral_tail: a must be non-negative");
  if (!is_integrable(w)) return kInf;

  // For eps > 0 forms F -> 0 at infinity, so the tail beyond the plateau edge
  // is -F(max(a, edge)).
  const auto plateau_then_tail = [&](double plateau_value, double edge) {
    double total = 0.0;
    if (a < edge) total += plateau_value * (edge - a);
    return total - eval_antiderivative(w, std::max(a, edge));
  };

  return std::visit(
      Overloaded{
          [&](const ExpDecay& e) { return std::exp(-e.tau * a) / e.tau; },
          [&](const PowerLaw& p) {
            return plateau_then_tail(std::pow(p.cap, -(1.0 + p.eps)), p.cap);
          },
          [&](const LogPower& lp) {
            return plateau_then_tail(log_power_plateau(lp.n), tower(lp.n));
          },
          [&](const SlogPower&) { return plateau_then_tail(1.0 / kE, kE); },
          [](const Constant&) { return kInf; },
          [&](const PiecewiseLogLinear& pll) {
            double total = 0.0;
            for (const Segment& seg : pll.segments) {
              if (seg.b <= a) continue;
              const double lo = std::max(a, seg.a);
              if (seg.b == kInf) {
                if (seg.kind == Segment::Kind::exponential) {
                  total += seg.anchor_value * std::exp(-seg.rate * (lo - seg.anchor)) / seg.rate;
                } else {
                  total += integral_tail(*pll.source, lo);
                }
              } else {
                total += integral(w, lo, seg.b);
              }
            }
            return total;
          },
      },
      w.family());
}

ExpIntegralBound check_exp_integral_bound(const WeightFunction& w, double c, double p, double a) {
  if (!(c > 0.0)) throw DomainError("check_exp_integral_bound: c must be positive");
  if (!(p >= 1.0)) throw DomainError("check_exp_integral_bound: p must be >= 1");
  if (!(a >= 0.0)) throw DomainError("check_exp_integral_bound: a must be non-negative");

  const auto g = [&](double s) { return std::exp(-p * s + log_weight(w, s)); };
  ExpIntegralBound out{};
  out.rhs = std::exp(-p * a + log_weight(w, a)) / (p + c);
  if (const auto* e = w.as<ExpDecay>()) {
    out.lhs = std::exp(-(p + e->tau) * a) / (p + e->tau);
  } else {
    // Tolerances relative to the size of the integral, about g(a) / p.
    const double scale = std::max(g(a) / p, 1e-290);
    quadrature::Options opts;
    opts.abs_tol = 1e-14 * scale;
    out.lhs = quadrature::simpson_to_infinity(g, a, p, opts, 1e-15 * scale);
  }
  out.holds = out.lhs >= out.rhs - 1e-10;
  return out;
}

}  // namespace ltlab
