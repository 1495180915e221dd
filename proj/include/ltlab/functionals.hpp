#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ltlab/spectrum.hpp"
#include "ltlab/weights.hpp"

namespace ltlab {

/// dist(lambda, [0, inf)): |Im lambda| if Re lambda > 0, else |lambda|.
double dist_to_halfline(cplx lambda);

/// d = 1: p >= 1; d = 2: p > 1; d >= 3: p >= d/2.
bool admissible_classical(int d, double p);
/// p >= d/2 + 1.
bool admissible_thm1(int d, double p);

/// ||V_h||_p^p = 2 h^p.
double potential_norm_p(const StepPotential& pot, double p);

enum class FunctionalKind { classical, dhk, dist, sector, weighted };

const char* to_string(FunctionalKind k);
FunctionalKind parse_functional_kind(const std::string& name);

struct FunctionalSpec {
  FunctionalKind kind = FunctionalKind::dist;
  double p = 1.0;
  int d = 1;
  std::optional<double> tau;              // dhk
  std::optional<double> t;                // sector
  std::optional<WeightFunction> weight;   // weighted

  /// Exactly the parameters the kind needs; throws PreconditionError otherwise.
  void check_shape() const;
  /// Admissibility of (d, p, tau) for the kind.
  bool admissible() const;
};

struct LTSumReport {
  FunctionalSpec spec;
  double value = 0.0;
  long terms_used = 0;
  long terms_skipped = 0;
  bool admissible = true;
};

// All sums run in ascending |lambda| order with compensated summation. In
// strict mode an inadmissible (d, p, tau) raises PreconditionError; otherwise
// it is only flagged in the report. Terms with lambda = 0 (or dist = 0 where
// dist is a divisor or logarithm argument) are skipped and counted.

/// sum |lambda|^{p - d/2}
LTSumReport sum_classical(const std::vector<cplx>& eigs, double p, int d, bool strict = false);
/// sum dist^{p+tau} / |lambda|^{d/2+tau}
LTSumReport sum_dhk(const std::vector<cplx>& eigs, double p, int d, double tau,
                    bool strict = false);
/// sum dist^p / |lambda|^{d/2}
LTSumReport sum_dist(const std::vector<cplx>& eigs, double p, int d, bool strict = false);
/// sum over |Im lambda| >= t Re lambda of |lambda|^{p - d/2}
LTSumReport sum_sector(const std::vector<cplx>& eigs, double p, int d, double t,
                       bool strict = false);
/// sum dist^p / |lambda|^{d/2} f(-log(dist/|lambda|))
LTSumReport sum_weighted(const std::vector<cplx>& eigs, double p, int d, const WeightFunction& w,
                         bool strict = false);

LTSumReport evaluate(const FunctionalSpec& spec, const std::vector<cplx>& eigs,
                     bool strict = false);

std::vector<cplx> lambdas_of(const std::vector<Eigenvalue>& eigs);

}  // namespace ltlab
