#include "ltlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "ltlab/error.hpp"
#include "ltlab/parallel.hpp"
#include "secular.hpp"

namespace ltlab {

using namespace std::complex_literals;
using std::numbers::pi;

StepPotential::StepPotential(double h) : h_(h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("StepPotential: h must be positive");
}

const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }
const char* to_string(RootMethod m) { return m == RootMethod::newton ? "newton" : "muller"; }

WindowSpec::WindowSpec(double beta_, double eps_) : beta(beta_), eps_of_h(eps_) {
  if (!(beta > 0.0 && beta < 0.5)) throw DomainError("WindowSpec: beta must lie in (0, 1/2)");
  if (!(eps_of_h > 0.0 && eps_of_h <= 1.0)) {
    throw DomainError("WindowSpec: eps(h) must lie in (0, 1]");
  }
}

WindowSpec WindowSpec::with_default_eps(double beta, double h) {
  if (!(h > std::numbers::e)) throw DomainError("default eps(h) = 1/log h needs h > e");
  return WindowSpec(beta, 1.0 / std::log(h));
}

IndexRange window_bounds(const StepPotential& pot, const WindowSpec& w) {
  const double lo = std::ceil(std::sqrt(pot.h()) / w.eps_of_h);
  const double hi = std::floor(std::pow(pot.h(), w.beta + 0.5));
  if (lo > hi) {
    throw WindowEmptyError("window empty: ceil(h^1/2/eps) = " + std::to_string(lo) +
                           " > floor(h^(beta+1/2)) = " + std::to_string(hi));
  }
  if (hi > 1e12) throw DomainError("window upper index too large");
  return IndexRange{std::max(1L, static_cast<long>(lo)), static_cast<long>(hi)};
}

namespace detail {

Anchor anchor_near(double re_mu) {
  const double m = std::nearbyint(re_mu / (pi / 4.0));
  if (!std::isfinite(m) || std::abs(m) > 1e15) return Anchor{0.0, 1.0};
  const long long k = static_cast<long long>(m);
  static const cplx powers[4] = {1.0, 1i, -1.0, -1i};
  return Anchor{m * (pi / 4.0), powers[((k % 4) + 4) % 4]};
}

SecularTerms secular_terms(double h, const Anchor& anchor, cplx delta) {
  const double a = anchor.base + delta.real();
  const double b = delta.imag();
  SecularTerms t{};
  const cplx mu(a, b);
  t.lambda = cplx((a - b) * (a + b), 2.0 * a * b + h);
  if (!std::isfinite(t.lambda.real()) || !std::isfinite(t.lambda.imag())) {
    throw OverflowError("secular function: lambda overflows");
  }
  if (t.lambda.imag() == 0.0 && t.lambda.real() >= 0.0) {
    throw OutOfSheetError("lambda on the essential spectrum [0, inf)");
  }
  t.kappa = std::sqrt(-t.lambda);
  if (!(t.kappa.real() > 0.0)) throw OutOfSheetError("Re kappa <= 0");

  // (kappa + i mu)(kappa - i mu) = -i h; take whichever factor does not cancel.
  const cplx plus = 1i * mu + t.kappa;
  const cplx minus = t.kappa - 1i * mu;
  const cplx s = std::abs(plus) >= std::abs(minus) ? plus : cplx(-1i * h) / minus;

  t.p = anchor.phase * std::exp(2i * delta);
  t.r = 1i * h / (s * s);
  t.dp = 2i * t.p;
  // d(i mu + kappa)/dmu = i s / kappa, hence dr = -2i r / kappa.
  t.dr = -2i * t.r / t.kappa;
  return t;
}

}  // namespace detail

namespace {

using detail::Anchor;

cplx to_mu(const Anchor& anchor, cplx delta) {
  return cplx(anchor.base + delta.real(), delta.imag());
}

struct Polish {
  cplx delta;
  double residual;
  bool converged;
};

bool step_converged(double step, cplx mu) { return step <= 1e-12 * (1.0 + std::abs(mu)); }

constexpr int kMaxIterations = 50;
constexpr double kResidualTol = 1e-10;

Polish newton(double h, const Anchor& anchor, cplx delta, Parity parity) {
  for (int it = 0; it < kMaxIterations; ++it) {
    const auto t = detail::secular_terms(h, anchor, delta);
    const cplx e = detail::secular_value(t, parity);
    const cplx de = detail::secular_derivative(t, parity);
    if (e == 0.0) return {delta, 0.0, true};
    const cplx step = e / de;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    delta -= step;
    if (step_converged(std::abs(step), to_mu(anchor, delta))) {
      const double res = detail::relative_size(detail::secular_terms(h, anchor, delta), parity);
      return {delta, res, res <= kResidualTol};
    }
  }
  return {delta, INFINITY, false};
}

Polish muller(double h, const Anchor& anchor, cplx delta, Parity parity) {
  const auto f = [&](cplx d) {
    return detail::secular_value(detail::secular_terms(h, anchor, d), parity);
  };
  cplx x0 = delta - 0.05, x1 = delta + 0.05, x2 = delta;
  cplx f0 = f(x0), f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < kMaxIterations; ++it) {
    const cplx h1 = x1 - x0, h2 = x2 - x1;
    const cplx d1 = (f1 - f0) / h1, d2 = (f2 - f1) / h2;
    const cplx a = (d2 - d1) / (h2 + h1);
    const cplx b = a * h2 + d2;
    const cplx disc = std::sqrt(b * b - 4.0 * a * f2);
    const cplx den = std::abs(b + disc) >= std::abs(b - disc) ? b + disc : b - disc;
    if (den == 0.0) break;
    const cplx step = -2.0 * f2 / den;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    x2 += step;
    f2 = f(x2);
    if (step_converged(std::abs(step), to_mu(anchor, x2))) {
      const double res = detail::relative_size(detail::secular_terms(h, anchor, x2), parity);
      return {x2, res, res <= kResidualTol};
    }
  }
  return {x2, INFINITY, false};
}

}  // namespace

cplx matching_determinant(const StepPotential& pot, cplx mu, Parity parity) {
  const cplx lambda = mu * mu + 1i * pot.h();
  if (lambda.imag() == 0.0 && lambda.real() >= 0.0) {
    throw OutOfSheetError("lambda on the essential spectrum [0, inf)");
  }
  const cplx kappa = std::sqrt(-lambda);
  if (!(kappa.real() > 0.0)) throw OutOfSheetError("Re kappa <= 0");
  if (parity == Parity::even) return mu * std::sin(mu) - kappa * std::cos(mu);
  return mu * std::cos(mu) + kappa * std::sin(mu);
}

cplx secular_residual(const StepPotential& pot, cplx mu, Parity parity) {
  const Anchor anchor = detail::anchor_near(mu.real());
  const cplx delta(mu.real() - anchor.base, mu.imag());
  return detail::secular_value(detail::secular_terms(pot.h(), anchor, delta), parity);
}

cplx secular_derivative(const StepPotential& pot, cplx mu, Parity parity) {
  const Anchor anchor = detail::anchor_near(mu.real());
  const cplx delta(mu.real() - anchor.base, mu.imag());
  return detail::secular_derivative(detail::secular_terms(pot.h(), anchor, delta), parity);
}

double relative_residual(const StepPotential& pot, cplx mu, Parity parity) {
  const Anchor anchor = detail::anchor_near(mu.real());
  const cplx delta(mu.real() - anchor.base, mu.imag());
  return detail::relative_size(detail::secular_terms(pot.h(), anchor, delta), parity);
}

cplx seed_from_asymptotic(const StepPotential& pot, long j) {
  if (j < 1) throw DomainError("seed_from_asymptotic: j must be >= 1");
  const double n = 8.0 * static_cast<double>(j) - 7.0;
  return cplx(-pi * n / 4.0, std::log(pi * n / (2.0 * std::sqrt(pot.h()))));
}

Parity select_parity(const StepPotential& pot, cplx mu) {
  const Anchor anchor = detail::anchor_near(mu.real());
  const auto t = detail::secular_terms(pot.h(), anchor, cplx(mu.real() - anchor.base, mu.imag()));
  return std::abs(detail::secular_value(t, Parity::odd)) <
                 std::abs(detail::secular_value(t, Parity::even))
             ? Parity::odd
             : Parity::even;
}

Eigenvalue refine_root(const StepPotential& pot, cplx seed, Parity parity, long j) {
  const Anchor anchor = detail::anchor_near(seed.real());
  const cplx delta0(seed.real() - anchor.base, seed.imag());

  Eigenvalue out;
  Polish result = newton(pot.h(), anchor, delta0, parity);
  out.method = RootMethod::newton;
  if (!result.converged) {
    result = muller(pot.h(), anchor, delta0, parity);
    out.method = RootMethod::muller;
  }
  if (!result.converged) {
    throw ConvergenceError("refine_root: no convergence from seed (" +
                           std::to_string(seed.real()) + ", " + std::to_string(seed.imag()) +
                           ")");
  }
  const auto t = detail::secular_terms(pot.h(), anchor, result.delta);
  out.mu = to_mu(anchor, result.delta);
  out.lambda = t.lambda;
  out.j = j;
  out.parity = parity;
  out.residual = result.residual;
  out.seed_deviation = std::abs(result.delta - delta0);
  return out;
}

WindowResult enumerate_window(const StepPotential& pot, const WindowSpec& w, unsigned threads) {
  return enumerate_indices(pot, window_bounds(pot, w), threads);
}

WindowResult enumerate_indices(const StepPotential& pot, IndexRange range, unsigned threads) {
  if (range.j_min < 1 || range.j_max < range.j_min) {
    throw DomainError("enumerate: index range must satisfy 1 <= j_min <= j_max");
  }
  const auto n = static_cast<std::size_t>(range.size());
  std::vector<std::optional<Eigenvalue>> roots(n);
  std::vector<std::string> reasons(n);
  std::vector<cplx> seeds(n);

  parallel_for(n, resolve_threads(static_cast<int>(threads)), [&](std::size_t i) {
    const long j = range.j_min + static_cast<long>(i);
    const cplx seed = seed_from_asymptotic(pot, j);
    seeds[i] = seed;
    try {
      const Parity parity = select_parity(pot, seed);
      Eigenvalue ev = refine_root(pot, seed, parity, j);
      const double im = ev.lambda.imag();
      if (!(ev.seed_deviation < pi / 2.0)) {
        reasons[i] = "drifted to another root (|mu - seed| = " +
                     std::to_string(ev.seed_deviation) + ")";
      } else if (!(im > 0.0 && im < pot.h())) {
        reasons[i] = "outside enclosure 0 < Im lambda < h";
      } else {
        roots[i] = ev;
      }
    } catch (const OutOfSheetError& e) {
      reasons[i] = std::string("seed beyond branch cut: ") + e.what();
    } catch (const NumericalError& e) {
      reasons[i] = e.what();
    }
  });

  WindowResult out;
  out.range = range;
  for (std::size_t i = 0; i < n; ++i) {
    const long j = range.j_min + static_cast<long>(i);
    if (!roots[i]) {
      out.failures.push_back(RootFailure{j, seeds[i], reasons[i]});
      continue;
    }
    const Eigenvalue& ev = *roots[i];
    const bool duplicate = std::any_of(
        out.eigenvalues.end() - std::min<std::ptrdiff_t>(2, out.eigenvalues.size()),
        out.eigenvalues.end(), [&](const Eigenvalue& other) {
          return std::abs(other.mu - ev.mu) <= 1e-8 * std::max(1.0, std::abs(ev.mu));
        });
    if (duplicate) {
      ++out.duplicates_removed;
      continue;
    }
    if (!out.eigenvalues.empty() && out.eigenvalues.back().parity != ev.parity) {
      ++out.parity_changes;
    }
    out.eigenvalues.push_back(ev);
  }
  return out;
}

SpectrumReport validate_spectrum(const std::vector<Eigenvalue>& eigs, const StepPotential& pot) {
  SpectrumReport report;
  const auto flag = [&](const Eigenvalue& e, const std::string& what) {
    report.violations.push_back("j=" + std::to_string(e.j) + ": " + what);
  };
  for (const Eigenvalue& e : eigs) {
    const double im = e.lambda.imag();
    if (!(im > 0.0 && im < pot.h())) flag(e, "Im lambda outside (0, h)");
    const cplx expected = e.mu * e.mu + cplx(0.0, pot.h());
    if (!(std::abs(e.lambda - expected) <= 1e-10 * (1.0 + std::abs(e.lambda)))) {
      flag(e, "lambda inconsistent with mu^2 + i h");
    }
    if (!(e.residual <= kResidualTol)) flag(e, "stored residual above 1e-10");
    try {
      // Refinement works in anchor + offset form; rounding mu to one double
      // moves the zero by up to eps |mu|, and E' / (|p| + |r|) is about 2.
      const double floor = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(e.mu);
      if (!(relative_residual(pot, e.mu, e.parity) <= kResidualTol + floor)) {
        flag(e, "secular residual above 1e-10 + rounding floor");
      }
    } catch (const NumericalError& err) {
      flag(e, std::string("invalid sheet: ") + err.what());
    }
  }

  std::vector<std::size_t> order(eigs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return eigs[a].mu.real() < eigs[b].mu.real(); });
  for (std::size_t x = 0; x < order.size(); ++x) {
    const Eigenvalue& a = eigs[order[x]];
    const double sep = 1e-8 * std::max(1.0, std::abs(a.mu));
    for (std::size_t y = x + 1; y < order.size(); ++y) {
      const Eigenvalue& b = eigs[order[y]];
      if (b.mu.real() - a.mu.real() > sep) break;
      if (std::abs(a.mu - b.mu) < sep) {
        flag(a, "not separated from j=" + std::to_string(b.j));
      }
    }
  }
  return report;
}

}  // namespace ltlab
