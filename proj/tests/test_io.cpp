#include <cmath>
#include <sstream>

#include "doctest.h"
#include "ltlab/error.hpp"
#include "ltlab/format.hpp"
#include "ltlab/io.hpp"
#include "ltlab/regularizer.hpp"

using namespace ltlab;

namespace {

std::vector<Eigenvalue> sample() {
  std::vector<Eigenvalue> v;
  for (int k = 0; k < 5; ++k) {
    Eigenvalue e;
    e.j = 100 + k;
    e.parity = k % 2 ? Parity::odd : Parity::even;
    e.mu = cplx(-1234.5678901234567 - 3.14159 * k, 4.2 + 1e-9 * k);
    e.lambda = cplx(1.0 / 3.0 + k, 1e8 * (0.75 + 0.01 * k));
    e.residual = 1e-13 * (k + 1);
    e.seed_deviation = 2.5e-6 / (k + 1);
    v.push_back(e);
  }
  return v;
}

}  // namespace

TEST_CASE("format helpers") {
  CHECK(format_shortest(0.1) == "0.1");
  CHECK(format_shortest(1e300) == "1e+300");
  CHECK(format_shortest(INFINITY) == "inf");
  CHECK(format_shortest(-INFINITY) == "-inf");
  CHECK(format_shortest(NAN) == "nan");
  CHECK(format_g17(0.1) == "0.10000000000000001");
  CHECK(format_g17(-INFINITY) == "-inf");
}

TEST_CASE("spectrum csv round trip is exact") {
  const auto eigs = sample();
  std::ostringstream out;
  write_spectrum_csv(out, eigs);
  std::istringstream in(out.str());
  const auto back = read_spectrum_csv(in);
  REQUIRE(back.size() == eigs.size());
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    CHECK(back[i].j == eigs[i].j);
    CHECK(back[i].parity == eigs[i].parity);
    CHECK(back[i].mu == eigs[i].mu);
    CHECK(back[i].lambda == eigs[i].lambda);
    CHECK(back[i].residual == eigs[i].residual);
    CHECK(back[i].seed_deviation == eigs[i].seed_deviation);
  }
  // Writing again reproduces the bytes.
  std::ostringstream again;
  write_spectrum_csv(again, back);
  CHECK(again.str() == out.str());
  CHECK(out.str().rfind("j,parity,re_mu,im_mu,re_lambda,im_lambda,residual,seed_deviation\n", 0) ==
        0);
}

TEST_CASE("empty and header-only spectrum files") {
  std::istringstream empty("");
  CHECK(read_spectrum_csv(empty).empty());
  std::ostringstream out;
  write_spectrum_csv(out, {});
  std::istringstream header(out.str());
  CHECK(read_spectrum_csv(header).empty());
}

TEST_CASE("malformed spectrum csv") {
  const std::string header = "j,parity,re_mu,im_mu,re_lambda,im_lambda,residual,seed_deviation\n";
  for (const std::string bad : {
           std::string("j,parity\n"),
           header + "1,even,1,2,3,4,5\n",
           header + "1,even,1,2,3,4,5,6,7\n",
           header + "x,even,1,2,3,4,5,6\n",
           header + "1,sideways,1,2,3,4,5,6\n",
           header + "1,even,1,2,3,abc,5,6\n",
           header + "1,even,1,2,3,,5,6\n",
       }) {
    CAPTURE(bad);
    std::istringstream in(bad);
    CHECK_THROWS_AS(read_spectrum_csv(in), ParseError);
  }
}

TEST_CASE("segments csv") {
  const auto g = regularize(WeightFunction::power_law(1.0), 1.0);
  std::ostringstream out;
  write_segments_csv(out, *g.as<PiecewiseLogLinear>());
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "seg_index,a,b,kind,anchor,anchor_value,rate");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].rfind("0,0,", 0) == 0);
  CHECK(rows[0].find(",original,,,") != std::string::npos);
  CHECK(rows[1].find(",exponential,") != std::string::npos);
  CHECK(rows[2].find(",inf,original,,,") != std::string::npos);
}
