#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "ltlab/error.hpp"
#include "ltlab/functionals.hpp"
#include "oracles.hpp"

using namespace ltlab;
using namespace std::complex_literals;
using doctest::Approx;

TEST_CASE("dist_to_halfline") {
  CHECK(dist_to_halfline(3.0 + 4i) == 4.0);
  CHECK(dist_to_halfline(-3.0 + 4i) == 5.0);
  CHECK(dist_to_halfline(-2.0) == 2.0);
  CHECK(dist_to_halfline(3.0 - 4i) == 4.0);
  CHECK(dist_to_halfline(0.0 + 2i) == 2.0);
}

TEST_CASE("admissibility predicates") {
  CHECK(admissible_classical(1, 1.0));
  CHECK_FALSE(admissible_classical(1, 0.9));
  CHECK_FALSE(admissible_classical(2, 1.0));
  CHECK(admissible_classical(2, 1.01));
  CHECK(admissible_classical(4, 2.0));
  CHECK_FALSE(admissible_classical(4, 1.9));
  CHECK(admissible_thm1(1, 1.5));
  CHECK_FALSE(admissible_thm1(1, 1.2));
  CHECK(admissible_thm1(2, 2.0));
}

TEST_CASE("potential_norm_p") {
  CHECK(potential_norm_p(StepPotential(1.0), 1.0) == 2.0);
  CHECK(potential_norm_p(StepPotential(2.0), 2.0) == 8.0);
  CHECK(potential_norm_p(StepPotential(10.0), 1.5) == Approx(63.2455532).epsilon(1e-9));
  CHECK_THROWS_AS(potential_norm_p(StepPotential(2.0), 0.5), DomainError);
}

TEST_CASE("sum_classical examples") {
  CHECK(sum_classical({-1.0}, 1.0, 1).value == 1.0);
  CHECK(sum_classical({-4.0, -9.0}, 1.0, 1).value == Approx(5.0).epsilon(1e-15));
  const auto empty = sum_classical({}, 1.0, 1);
  CHECK(empty.value == 0.0);
  CHECK(empty.terms_used == 0);
}

TEST_CASE("sum_dhk examples") {
  CHECK(sum_dhk({1i}, 1.0, 1, 0.5).value == Approx(1.0).epsilon(1e-15));
  CHECK(sum_dhk({3.0 + 4i}, 1.0, 1, 0.5).value == Approx(1.6).epsilon(1e-15));
  const auto r = sum_dhk({0.0, 2.0, 1i}, 1.0, 1, 0.5);
  CHECK(r.terms_skipped == 2);
  CHECK(r.terms_used == 1);
}

TEST_CASE("sum_dist examples") {
  CHECK(sum_dist({1i}, 1.0, 1).value == Approx(1.0).epsilon(1e-15));
  CHECK(sum_dist({3.0 + 4i}, 2.0, 1).value == Approx(16.0 / std::sqrt(5.0)).epsilon(1e-15));
  CHECK(sum_dist({3.0 + 4i}, 2.0, 1).value == Approx(7.1554).epsilon(1e-4));
}

TEST_CASE("sum_sector examples") {
  CHECK(sum_sector({1i}, 1.0, 1, 1.0).value == 1.0);
  const auto r = sum_sector({1.0 + 0.5i}, 1.0, 1, 1.0);
  CHECK(r.value == 0.0);
  CHECK(r.terms_skipped == 1);
  for (double t : {0.01, 1.0, 100.0}) {
    CHECK(sum_sector({-5.0}, 1.0, 1, t).value == Approx(std::sqrt(5.0)).epsilon(1e-15));
  }
}

TEST_CASE("sum_weighted examples") {
  const auto w = WeightFunction::exp_decay(0.5);
  CHECK(sum_weighted({-7.0}, 1.0, 1, w).value == Approx(std::sqrt(7.0)).epsilon(1e-15));
  CHECK(sum_weighted({-7.0}, 2.0, 3, WeightFunction::power_law(1.0)).value ==
        Approx(std::pow(7.0, 0.5)).epsilon(1e-15));
  CHECK(sum_weighted({1i}, 1.0, 1, w).value == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("strict mode and shape checks") {
  CHECK_THROWS_AS(sum_classical({-1.0}, 1.0, 2, true), PreconditionError);
  CHECK_NOTHROW(sum_classical({-1.0}, 1.0, 2, false));
  CHECK_FALSE(sum_classical({-1.0}, 1.0, 2, false).admissible);
  CHECK_THROWS_AS(sum_dhk({1i}, 1.5, 1, 1.0, true), PreconditionError);
  CHECK_NOTHROW(sum_dhk({1i}, 1.5, 1, 0.5, true));
  CHECK_THROWS_AS(sum_dist({1i}, 1.0, 1, true), PreconditionError);
  CHECK_THROWS_AS(sum_sector({1i}, 1.0, 1, 0.0), PreconditionError);
  CHECK_THROWS_AS(sum_dhk({1i}, 1.0, 1, -0.5), PreconditionError);

  FunctionalSpec spec;
  spec.kind = FunctionalKind::sector;
  CHECK_THROWS_AS(spec.check_shape(), PreconditionError);
  spec.t = 1.0;
  spec.tau = 0.5;
  CHECK_THROWS_AS(spec.check_shape(), PreconditionError);
  spec.tau.reset();
  CHECK_NOTHROW(spec.check_shape());
  CHECK(evaluate(spec, {1i}).value == 1.0);

  CHECK(parse_functional_kind("weighted") == FunctionalKind::weighted);
  CHECK_THROWS_AS(parse_functional_kind("foo"), ParseError);
}

TEST_CASE("property: identity chain, monotonicity, reduction, domination") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto list = oracle::random_list(rng, 1 + trial % 60);
    const double p = 1.0 + 2.0 * u(rng);
    const int d = 1 + trial % 3;
    const double tau = 0.05 + 0.9 * u(rng);

    const auto dist = sum_dist(list, p, d);
    CHECK(sum_weighted(list, p, d, WeightFunction::constant(1.0)).value == dist.value);

    const auto dhk = sum_dhk(list, p, d, tau);
    const auto wexp = sum_weighted(list, p, d, WeightFunction::exp_decay(tau));
    CHECK(std::abs(wexp.value - dhk.value) <= 1e-13 * dhk.value);

    const double t1 = 0.1 + u(rng), t2 = t1 + u(rng);
    CHECK(sum_sector(list, p, d, t1).value >= sum_sector(list, p, d, t2).value);

    for (const auto& w : {WeightFunction::power_law(1.0), WeightFunction::log_power(1, 0.5),
                          WeightFunction::exp_decay(tau)}) {
      const auto r = sum_weighted(list, p, d, w);
      CHECK(r.value <= eval_weight(w, 0.0) * dist.value * (1.0 + 1e-14));
      CHECK(std::isfinite(r.value));
      CHECK(r.value >= 0.0);
      CHECK(r.terms_used + r.terms_skipped == static_cast<long>(list.size()));
    }
    const auto sec = sum_sector(list, p, d, t1);
    CHECK(sec.terms_used + sec.terms_skipped == static_cast<long>(list.size()));

    std::vector<cplx> negative;
    for (int k = 0; k < 1 + trial % 20; ++k) negative.emplace_back(-0.1 - 100.0 * u(rng), 0.0);
    const double cl = sum_classical(negative, p, d).value;
    CHECK(sum_dist(negative, p, d).value == Approx(cl).epsilon(1e-14));
    CHECK(sum_dhk(negative, p, d, tau).value == Approx(cl).epsilon(1e-14));
  }
}

TEST_CASE("summation order does not depend on input order") {
  std::mt19937_64 rng(5);
  auto list = oracle::random_list(rng, 200);
  const double a = sum_dist(list, 1.5, 1).value;
  std::shuffle(list.begin(), list.end(), rng);
  CHECK(sum_dist(list, 1.5, 1).value == a);
}
