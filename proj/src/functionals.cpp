#include "ltlab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ltlab/error.hpp"
#include "ltlab/parallel.hpp"

namespace ltlab {

double dist_to_halfline(cplx lambda) {
  return lambda.real() > 0.0 ? std::abs(lambda.imag()) : std::abs(lambda);
}

bool admissible_classical(int d, double p) {
  if (d < 1) return false;
  if (d == 1) return p >= 1.0;
  if (d == 2) return p > 1.0;
  return p >= d / 2.0;
}

bool admissible_thm1(int d, double p) { return d >= 1 && p >= d / 2.0 + 1.0; }

double potential_norm_p(const StepPotential& pot, double p) {
  if (!(p >= 1.0)) throw DomainError("potential_norm_p: p must be >= 1");
  return 2.0 * std::pow(pot.h(), p);
}

const char* to_string(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::classical: return "classical";
    case FunctionalKind::dhk: return "dhk";
    case FunctionalKind::dist: return "dist";
    case FunctionalKind::sector: return "sector";
    case FunctionalKind::weighted: return "weighted";
  }
  return "?";
}

FunctionalKind parse_functional_kind(const std::string& name) {
  for (auto k : {FunctionalKind::classical, FunctionalKind::dhk, FunctionalKind::dist,
                 FunctionalKind::sector, FunctionalKind::weighted}) {
    if (name == to_string(k)) return k;
  }
  throw ParseError("unknown functional '" + name + "'");
}

void FunctionalSpec::check_shape() const {
  const bool needs_tau = kind == FunctionalKind::dhk;
  const bool needs_t = kind == FunctionalKind::sector;
  const bool needs_weight = kind == FunctionalKind::weighted;
  const std::string name = to_string(kind);
  if (needs_tau != tau.has_value()) {
    throw PreconditionError(name + (needs_tau ? " requires tau" : " does not take tau"));
  }
  if (needs_t != t.has_value()) {
    throw PreconditionError(name + (needs_t ? " requires t" : " does not take t"));
  }
  if (needs_weight != weight.has_value()) {
    throw PreconditionError(name + (needs_weight ? " requires a weight" : " does not take a weight"));
  }
  if (d < 1) throw PreconditionError("d must be a positive integer");
  if (!std::isfinite(p)) throw PreconditionError("p must be finite");
  if (tau && !(*tau >= 0.0 && std::isfinite(*tau))) throw PreconditionError("tau must be >= 0");
  if (t && !(*t > 0.0 && std::isfinite(*t))) throw PreconditionError("t must be > 0");
}

bool FunctionalSpec::admissible() const {
  if (kind == FunctionalKind::classical) return admissible_classical(d, p);
  if (!admissible_thm1(d, p)) return false;
  if (kind == FunctionalKind::dhk) return tau && *tau > 0.0 && *tau < 1.0;
  return true;
}

namespace {

std::vector<cplx> ascending(const std::vector<cplx>& eigs) {
  std::vector<cplx> out = eigs;
  std::stable_sort(out.begin(), out.end(),
                   [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
  return out;
}

// Folds term(lambda) over the list; term returns nullopt for skipped entries.
template <class Term>
LTSumReport fold(const FunctionalSpec& spec, const std::vector<cplx>& eigs, bool strict,
                 const Term& term) {
  spec.check_shape();
  LTSumReport report;
  report.spec = spec;
  report.admissible = spec.admissible();
  if (strict && !report.admissible) {
    throw PreconditionError(std::string("inadmissible parameters for ") + to_string(spec.kind) +
                            ": d=" + std::to_string(spec.d) + ", p=" + std::to_string(spec.p));
  }
  CompensatedSum sum;
  for (const cplx lambda : ascending(eigs)) {
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) {
      throw DomainError("functional: non-finite eigenvalue");
    }
    const std::optional<double> value = term(lambda);
    if (value) {
      sum.add(*value);
      ++report.terms_used;
    } else {
      ++report.terms_skipped;
    }
  }
  report.value = sum.value();
  return report;
}

FunctionalSpec make_spec(FunctionalKind kind, double p, int d) {
  FunctionalSpec s;
  s.kind = kind;
  s.p = p;
  s.d = d;
  return s;
}

}  // namespace

LTSumReport sum_classical(const std::vector<cplx>& eigs, double p, int d, bool strict) {
  const double q = p - d / 2.0;
  return fold(make_spec(FunctionalKind::classical, p, d), eigs, strict,
              [&](cplx lambda) -> std::optional<double> {
                const double m = std::abs(lambda);
                if (m == 0.0) return std::nullopt;
                return std::pow(m, q);
              });
}

LTSumReport sum_dhk(const std::vector<cplx>& eigs, double p, int d, double tau, bool strict) {
  FunctionalSpec spec = make_spec(FunctionalKind::dhk, p, d);
  spec.tau = tau;
  return fold(spec, eigs, strict, [&](cplx lambda) -> std::optional<double> {
    const double m = std::abs(lambda);
    const double dist = dist_to_halfline(lambda);
    if (m == 0.0 || dist == 0.0) return std::nullopt;
    return std::pow(dist, p + tau) / std::pow(m, d / 2.0 + tau);
  });
}

LTSumReport sum_dist(const std::vector<cplx>& eigs, double p, int d, bool strict) {
  return fold(make_spec(FunctionalKind::dist, p, d), eigs, strict,
              [&](cplx lambda) -> std::optional<double> {
                const double m = std::abs(lambda);
                const double dist = dist_to_halfline(lambda);
                if (m == 0.0 || dist == 0.0) return std::nullopt;
                return std::pow(dist, p) / std::pow(m, d / 2.0);
              });
}

LTSumReport sum_sector(const std::vector<cplx>& eigs, double p, int d, double t, bool strict) {
  FunctionalSpec spec = make_spec(FunctionalKind::sector, p, d);
  spec.t = t;
  const double q = p - d / 2.0;
  return fold(spec, eigs, strict, [&](cplx lambda) -> std::optional<double> {
    const double m = std::abs(lambda);
    if (m == 0.0 || std::abs(lambda.imag()) < t * lambda.real()) return std::nullopt;
    return std::pow(m, q);
  });
}

LTSumReport sum_weighted(const std::vector<cplx>& eigs, double p, int d, const WeightFunction& w,
                         bool strict) {
  FunctionalSpec spec = make_spec(FunctionalKind::weighted, p, d);
  spec.weight = w;
  return fold(spec, eigs, strict, [&](cplx lambda) -> std::optional<double> {
    const double m = std::abs(lambda);
    const double dist = dist_to_halfline(lambda);
    if (m == 0.0 || dist == 0.0) return std::nullopt;
    double s = -std::log(dist / m);
    if (s < 0.0) {
      if (s < -1e-12) throw DomainError("weighted functional: dist exceeds |lambda|");
      s = 0.0;
    }
    return std::pow(dist, p) / std::pow(m, d / 2.0) * eval_weight(w, s);
  });
}

LTSumReport evaluate(const FunctionalSpec& spec, const std::vector<cplx>& eigs, bool strict) {
  spec.check_shape();
  switch (spec.kind) {
    case FunctionalKind::classical: return sum_classical(eigs, spec.p, spec.d, strict);
    case FunctionalKind::dhk: return sum_dhk(eigs, spec.p, spec.d, *spec.tau, strict);
    case FunctionalKind::dist: return sum_dist(eigs, spec.p, spec.d, strict);
    case FunctionalKind::sector: return sum_sector(eigs, spec.p, spec.d, *spec.t, strict);
    case FunctionalKind::weighted: return sum_weighted(eigs, spec.p, spec.d, *spec.weight, strict);
  }
  throw UnsupportedError("unknown functional kind");
}

std::vector<cplx> lambdas_of(const std::vector<Eigenvalue>& eigs) {
  std::vector<cplx> out;
  out.reserve(eigs.size());
  for (const Eigenvalue& e : eigs) out.push_back(e.lambda);
  return out;
}

}  // namespace ltlab
