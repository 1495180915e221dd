#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "ltlab/cli.hpp"
#include "ltlab/functionals.hpp"
#include "ltlab/io.hpp"
#include "ltlab/spectrum.hpp"

using namespace ltlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "ltlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ltlab_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("version and usage errors") {
  auto r = call({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out.find(kVersion) != std::string::npos);

  CHECK(call({}).code == 2);
  CHECK(call({"bogus"}).code == 2);
  CHECK(call({"spectrum"}).code == 2);
  CHECK(call({"spectrum", "--h", "-1"}).code == 2);
  CHECK(call({"spectrum", "--h", "100", "--beta", "0.7"}).code == 2);
  CHECK(call({"spectrum", "--h", "100", "--jmin", "3"}).code == 2);
  CHECK(call({"ltsum", "--functional", "nope", "--p", "1", "--d", "1", "--eigs", "x"}).code == 2);
  CHECK(call({"sweep", "--experiment", "thm3", "--h-grid", "1e3,abc", "--p", "1"}).code == 2);
  CHECK(call({"sweep", "--experiment", "thm2", "--h-grid", "1e3", "--p", "1"}).code == 2);
  CHECK(call({"sweep", "--experiment", "thm3", "--h-grid", "1e3", "--p", "1", "--weight",
              "const:1"})
            .code == 2);
  CHECK(call({"weights-check", "--weight", "exp:tau=0.5", "--c", "0.5"}).code == 2);
  CHECK(call({"regularize", "--weight", "what:1", "--c", "1"}).code == 2);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("ltsum on an empty spectrum and flag validation") {
  const fs::path empty = scratch("empty.csv");
  { std::ofstream(empty) << ""; }
  auto r = call({"ltsum", "--functional", "dist", "--p", "1", "--d", "1", "--eigs",
                 empty.string()});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["value"] == 0.0);
  CHECK(j["terms_used"] == 0);
  CHECK(j["kind"] == "dist");

  // Parameters belong to exactly one functional.
  CHECK(call({"ltsum", "--functional", "dhk", "--p", "1", "--d", "1", "--tau", "0.5", "--t",
              "1", "--eigs", empty.string()})
            .code == 2);
  CHECK(call({"ltsum", "--functional", "dhk", "--p", "1", "--d", "1", "--eigs",
              empty.string()})
            .code == 2);
  CHECK(call({"ltsum", "--functional", "dist", "--p", "1", "--d", "1", "--t", "1", "--eigs",
              empty.string()})
            .code == 2);
  CHECK(call({"ltsum", "--functional", "sector", "--p", "1", "--d", "1", "--t", "1", "--eigs",
              empty.string()})
            .code == 0);
  CHECK(call({"ltsum", "--functional", "dist", "--p", "1", "--d", "1", "--strict", "--eigs",
              empty.string()})
            .code == 2);
  CHECK(call({"ltsum", "--functional", "dist", "--p", "1", "--d", "1", "--eigs",
              scratch("missing.csv").string()})
            .code == 2);

  const fs::path broken = scratch("broken.csv");
  { std::ofstream(broken) << "not,a,spectrum\n"; }
  CHECK(call({"ltsum", "--functional", "dist", "--p", "1", "--d", "1", "--eigs",
              broken.string()})
            .code == 2);
}

TEST_CASE("sweep with a single grid point cannot fit a slope") {
  const auto r = call({"sweep", "--experiment", "thm3", "--h-grid", "1e3", "--p", "1"});
  CHECK(r.code == 3);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("weights-check and regularize output") {
  auto r = call({"weights-check", "--weight", "exp:tau=0.5", "--c", "0.5", "--p", "1.5"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["integrable"] == true);
  CHECK(j["exp_integral_bound"]["holds"] == true);

  r = call({"regularize", "--weight", "pow:eps=1", "--c", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("seg_index,a,b,kind,anchor,anchor_value,rate\n", 0) == 0);
}

TEST_CASE("spectrum csv feeds ltsum exactly; outputs are byte-identical") {
  const fs::path csv = scratch("spec.csv");
  const long j0 = window_bounds(StepPotential(1e7), WindowSpec::with_default_eps(0.2, 1e7)).j_min;
  const std::vector<std::string> args{"spectrum", "--h", "1e7", "--jmin", std::to_string(j0),
                                      "--jmax", std::to_string(j0 + 40), "--out", csv.string()};
  auto first = call(args);
  REQUIRE(first.code == 0);
  const std::string bytes = slurp(csv);
  auto again = args;
  again.insert(again.begin(), {"--threads", "1"});
  REQUIRE(call(again).code == 0);
  CHECK(slurp(csv) == bytes);

  std::istringstream in(bytes);
  const auto eigs = read_spectrum_csv(in);
  REQUIRE(eigs.size() == 41);
  const double direct = sum_dist(lambdas_of(eigs), 1.5, 1).value;

  auto r = call({"ltsum", "--functional", "dist", "--p", "1.5", "--d", "1", "--eigs",
                 csv.string()});
  REQUIRE(r.code == 0);
  const double via_cli = nlohmann::json::parse(r.out)["value"].get<double>();
  CHECK(std::abs(via_cli - direct) <= 1e-15 * std::abs(direct));
}

TEST_CASE("sweep reports are byte-identical across runs and worker counts") {
  const std::vector<std::string> base{"sweep", "--experiment", "thm2", "--h-grid", "1e8,2e8",
                                      "--p", "1", "--weight", "const:1", "--beta", "0.2"};
  const auto a = call(base);
  REQUIRE(a.code == 0);
  auto serial = base;
  serial.insert(serial.begin(), {"--threads", "1"});
  const auto b = call(serial);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["experiment"] == "thm2");
  CHECK(j["verdict"] == true);

  auto asserted = base;
  asserted.push_back("--assert");
  CHECK(call(asserted).code == 0);
}

TEST_CASE("spectrum at h=100, beta=0.4 prints the 17 window eigenvalues") {
  // Desk-scale example: the window indices have no physical-sheet eigenvalue
  // near their seeds, so the command reports failures (exit 3).
  const auto r = call({"spectrum", "--h", "100", "--beta", "0.4"});
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  CHECK(read_spectrum_csv(in).size() == 17);
}
