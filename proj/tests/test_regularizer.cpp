#include <cmath>
#include <limits>

#include "doctest.h"
#include "ltlab/error.hpp"
#include "ltlab/regularizer.hpp"
#include "oracles.hpp"

using namespace ltlab;
using doctest::Approx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<Segment>& segments_of(const WeightFunction& g) {
  return g.as<PiecewiseLogLinear>()->segments;
}

std::vector<WeightFunction> integrable_families() {
  return {WeightFunction::exp_decay(0.5),    WeightFunction::exp_decay(2.0),
          WeightFunction::power_law(1.0),    WeightFunction::power_law(0.5),
          WeightFunction::log_power(1, 1.0), WeightFunction::log_power(2, 0.5),
          WeightFunction::slog_power(1.0)};
}

std::vector<double> sample_grid() {
  std::vector<double> s;
  for (double x = 0.0; x < 30.0; x += 0.013) s.push_back(x);
  for (double x = 30.0; x < 1e6; x *= 1.02) s.push_back(x);
  return s;
}

}  // namespace

TEST_CASE("regularize leaves a slowly decaying exponential alone") {
  const auto f = WeightFunction::exp_decay(0.5);
  const auto g = regularize(f, 1.0);
  REQUIRE(segments_of(g).size() == 1);
  CHECK(segments_of(g)[0].kind == Segment::Kind::original);
  CHECK(segments_of(g)[0].a == 0.0);
  CHECK(segments_of(g)[0].b == kInf);
  for (double s : sample_grid()) CHECK(eval_weight(g, s) == eval_weight(f, s));
}

TEST_CASE("regularize replaces a fast exponential by rate c from zero") {
  const auto g = regularize(WeightFunction::exp_decay(2.0), 1.0);
  REQUIRE(segments_of(g).size() == 1);
  const Segment& seg = segments_of(g)[0];
  CHECK(seg.kind == Segment::Kind::exponential);
  CHECK(seg.a == 0.0);
  CHECK(seg.b == kInf);
  CHECK(seg.anchor == 0.0);
  CHECK(seg.anchor_value == 1.0);
  CHECK(seg.rate == 1.0);
  for (double s = 0.0; s < 600.0; s += 0.37) {
    CHECK(eval_weight(g, s) == Approx(std::exp(-s)).epsilon(1e-14));
  }
}

TEST_CASE("regularize of the capped power law") {
  const auto f = WeightFunction::power_law(1.0);
  const auto g = regularize(f, 1.0);
  const auto& segs = segments_of(g);
  REQUIRE(segs.size() == 3);
  CHECK(segs[0].kind == Segment::Kind::original);
  CHECK(segs[0].a == 0.0);
  CHECK(segs[0].b == Approx(1.0).epsilon(1e-10));
  CHECK(segs[1].kind == Segment::Kind::exponential);
  CHECK(segs[1].anchor == Approx(1.0).epsilon(1e-10));
  CHECK(segs[1].rate == 1.0);
  // b_1' is the root beyond 2 of s^2 e^{-(s-1)} = 1.
  const double b1 = oracle::bisect([](double s) { return s * s * std::exp(-(s - 1.0)) - 1.0; },
                                   2.0, 10.0);
  CHECK(b1 == Approx(3.5128624).epsilon(1e-7));
  CHECK(segs[1].b == Approx(b1).epsilon(1e-9));
  CHECK(segs[2].kind == Segment::Kind::original);
  CHECK(segs[2].a == segs[1].b);
  CHECK(segs[2].b == kInf);
}

TEST_CASE("regularize rejects a non-positive rate") {
  CHECK_THROWS_AS(regularize(WeightFunction::power_law(1.0), 0.0), DomainError);
  CHECK_THROWS_AS(regularize(WeightFunction::power_law(1.0), -1.0), DomainError);
}

TEST_CASE("verify_log_derivative_bound examples") {
  auto r = verify_log_derivative_bound(regularize(WeightFunction::exp_decay(2.0), 1.0), 1.0, 1e-6);
  CHECK(r.pass);
  CHECK(r.min_slope == Approx(-1.0).epsilon(1e-6));

  r = verify_log_derivative_bound(regularize(WeightFunction::exp_decay(0.5), 1.0), 1.0, 1e-6);
  CHECK(r.pass);
  CHECK(r.min_slope == Approx(-0.5).epsilon(1e-6));

  r = verify_log_derivative_bound(as_piecewise(WeightFunction::exp_decay(2.0)), 1.0, 1e-6);
  CHECK_FALSE(r.pass);
  CHECK(r.min_slope == Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("integral_inflation examples") {
  const auto e05 = WeightFunction::exp_decay(0.5);
  auto r = integral_inflation(e05, regularize(e05, 1.0), 1.0);
  CHECK(r.integral_f == Approx(2.0).epsilon(1e-12));
  CHECK(r.integral_g == Approx(2.0).epsilon(1e-9));
  CHECK(r.bound == Approx(2.0).epsilon(1e-12));
  CHECK(r.holds);

  const auto e2 = WeightFunction::exp_decay(2.0);
  r = integral_inflation(e2, regularize(e2, 1.0), 1.0);
  CHECK(r.integral_f == Approx(0.5).epsilon(1e-12));
  CHECK(r.integral_g == Approx(1.0).epsilon(1e-9));
  CHECK(r.bound == Approx(1.5).epsilon(1e-12));
  CHECK(r.holds);

  const auto pw = WeightFunction::power_law(1.0);
  const auto g = regularize(pw, 1.0);
  r = integral_inflation(pw, g, 1.0);
  CHECK(r.integral_f == Approx(2.0).epsilon(1e-12));
  CHECK(r.bound == Approx(3.0).epsilon(1e-12));
  // Oracle: cap 1 on [0, 1], exponential to b1, then 1/b1.
  const double b1 = segments_of(g)[1].b;
  CHECK(r.integral_g == Approx(1.0 + (1.0 - std::exp(-(b1 - 1.0))) + 1.0 / b1).epsilon(1e-9));
  CHECK(r.holds);

  CHECK_THROWS_AS(integral_inflation(WeightFunction::constant(1.0),
                                     as_piecewise(WeightFunction::constant(1.0)), 1.0),
                  PreconditionError);
}

TEST_CASE("property: regularizer suite over families and rates") {
  for (const auto& f : integrable_families()) {
    for (double c : {0.1, 0.5, 1.0, 2.0}) {
      CAPTURE(to_spec(f));
      CAPTURE(c);
      const auto g = regularize(f, c);
      const auto& segs = segments_of(g);

      // Partition of [0, inf).
      REQUIRE_FALSE(segs.empty());
      CHECK(segs.front().a == 0.0);
      CHECK(segs.back().b == kInf);
      for (std::size_t i = 1; i < segs.size(); ++i) CHECK(segs[i].a == segs[i - 1].b);

      // Continuity at junctions and reintersection.
      for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
        const double b = segs[i].b;
        const double left = eval_weight(g, std::nextafter(b, 0.0));
        const double right = eval_weight(g, b);
        CHECK(left == Approx(right).epsilon(1e-9));
        if (segs[i].kind == Segment::Kind::exponential) {
          const double fb = eval_weight(f, b);
          const double expo = segs[i].anchor_value * std::exp(-c * (b - segs[i].anchor));
          CHECK(std::abs(expo - fb) <= 1e-8 * fb);
        }
      }

      // Domination, equality off replaced intervals, monotonicity.
      double prev = kInf;
      for (double s : sample_grid()) {
        const double gs = eval_weight(g, s), fs = eval_weight(f, s);
        CHECK(gs >= fs * (1.0 - 1e-14));
        if (segs[std::min(g.as<PiecewiseLogLinear>()->locate(s), segs.size() - 1)].kind ==
            Segment::Kind::original) {
          CHECK(gs == fs);
        }
        CHECK(gs <= prev * (1.0 + 1e-14));
        prev = gs;
      }

      // Exponential segments are exactly anchored exponentials.
      for (const Segment& seg : segs) {
        if (seg.kind != Segment::Kind::exponential) continue;
        CHECK(seg.anchor == seg.a);
        CHECK(seg.anchor_value == eval_weight(f, seg.a));
        const double mid = std::isfinite(seg.b) ? 0.5 * (seg.a + seg.b) : seg.a + 3.0;
        CHECK(eval_weight(g, mid) ==
              Approx(seg.anchor_value * std::exp(-c * (mid - seg.anchor))).epsilon(1e-14));
      }

      // Log-derivative bound.
      const auto slope = verify_log_derivative_bound(g, c, 1e-6);
      CHECK_MESSAGE(slope.pass, "min slope ", slope.min_slope, " at ", slope.argmin);

      // Idempotence.
      const auto gg = regularize(g, c);
      const auto& again = segments_of(gg);
      REQUIRE(again.size() == segs.size());
      for (std::size_t i = 0; i < segs.size(); ++i) {
        CHECK(again[i].kind == segs[i].kind);
        CHECK(again[i].a == Approx(segs[i].a).epsilon(1e-9));
      }
      for (double s : sample_grid()) {
        CHECK(eval_weight(gg, s) == Approx(eval_weight(g, s)).epsilon(1e-12));
      }

      // Integral inflation.
      const auto infl = integral_inflation(f, g, c);
      CHECK_MESSAGE(infl.holds, "int g = ", infl.integral_g, " bound ", infl.bound);
    }
  }
}

TEST_CASE("property: larger rate gives a smaller majorant") {
  for (const auto& f : integrable_families()) {
    const double cs[] = {0.1, 0.5, 1.0, 2.0};
    for (int k = 0; k + 1 < 4; ++k) {
      const auto g1 = regularize(f, cs[k]);
      const auto g2 = regularize(f, cs[k + 1]);
      for (double s : sample_grid()) {
        CHECK(eval_weight(g1, s) >= eval_weight(g2, s) * (1.0 - 1e-12));
      }
    }
  }
}
