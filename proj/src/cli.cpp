#include "ltlab/cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ltlab/error.hpp"
#include "ltlab/experiments.hpp"
#include "ltlab/format.hpp"
#include "ltlab/functionals.hpp"
#include "ltlab/io.hpp"
#include "ltlab/parallel.hpp"
#include "ltlab/regularizer.hpp"
#include "ltlab/report.hpp"
#include "ltlab/spectrum.hpp"
#include "ltlab/weights.hpp"

namespace ltlab {
namespace {

enum Exit : int { kOk = 0, kUsage = 2, kNumerical = 3, kVerdict = 4 };

// Raised for bad invocations detected after CLI11 parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Writes to `path`, or to `fallback` when the path is empty. Content is built
// in memory first so a failure never leaves a half-written file.
void emit(const std::string& path, const std::string& content, std::ostream& fallback) {
  if (path.empty()) {
    fallback << content;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot open '" + path + "' for writing");
  file << content;
  if (!file) throw UsageError("write to '" + path + "' failed");
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError("bad h grid entry '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("empty h grid");
  return out;
}

struct SpectrumArgs {
  double h = 0.0;
  double beta = 0.4;
  std::optional<double> eps;
  std::optional<long> jmin, jmax;
  std::string out;
};

struct LtsumArgs {
  std::string functional;
  double p = 1.0;
  int d = 1;
  std::optional<double> tau, t;
  std::optional<std::string> weight;
  std::string eigs;
  bool strict = false;
};

struct RegularizeArgs {
  std::string weight;
  double c = 1.0;
  std::string emit;
};

struct WeightsCheckArgs {
  std::string weight;
  std::optional<double> c, p;
  double a = 0.0;
};

struct SweepArgs {
  std::string experiment;
  std::string h_grid;
  double p = 1.0;
  std::optional<std::string> weight;
  double beta = 0.4;
  std::optional<double> eps;
  std::string out, plot;
  bool assert_verdict = false;
  double slope_tol = 0.15;
  double min_r2 = 0.98;
};

int cmd_spectrum(const SpectrumArgs& a, unsigned threads, std::ostream& out, std::ostream& err) {
  const StepPotential pot(a.h);
  WindowResult result;
  if (a.jmin || a.jmax) {
    if (!a.jmin || !a.jmax) throw UsageError("--jmin and --jmax must be given together");
    if (*a.jmin < 1 || *a.jmax < *a.jmin) throw UsageError("need 1 <= jmin <= jmax");
    result = enumerate_indices(pot, IndexRange{*a.jmin, *a.jmax}, threads);
  } else {
    const WindowSpec window = a.eps ? WindowSpec(a.beta, *a.eps)
                                    : WindowSpec::with_default_eps(a.beta, a.h);
    result = enumerate_window(pot, window, threads);
  }
  std::ostringstream csv;
  write_spectrum_csv(csv, result.eigenvalues);
  emit(a.out, csv.str(), out);

  if (!result.failures.empty()) {
    err << "spectrum: " << result.failures.size() << " of " << result.range.size()
        << " indices did not yield an eigenvalue\n";
    for (std::size_t i = 0; i < result.failures.size() && i < 5; ++i) {
      err << "  j=" << result.failures[i].j << ": " << result.failures[i].reason << '\n';
    }
    return kNumerical;
  }
  return kOk;
}

int cmd_ltsum(const LtsumArgs& a, std::ostream& out) {
  FunctionalSpec spec;
  spec.kind = parse_functional_kind(a.functional);
  spec.p = a.p;
  spec.d = a.d;
  const auto reject = [&](bool given, bool wanted, const char* flag) {
    if (given && !wanted) {
      throw UsageError(std::string(flag) + " is not valid with --functional " + a.functional);
    }
    if (!given && wanted) {
      throw UsageError("--functional " + a.functional + " requires " + flag);
    }
  };
  reject(a.tau.has_value(), spec.kind == FunctionalKind::dhk, "--tau");
  reject(a.t.has_value(), spec.kind == FunctionalKind::sector, "--t");
  reject(a.weight.has_value(), spec.kind == FunctionalKind::weighted, "--weight");
  spec.tau = a.tau;
  spec.t = a.t;
  if (a.weight) spec.weight = parse_weight(*a.weight);

  std::ifstream file(a.eigs, std::ios::binary);
  if (!file) throw UsageError("cannot open '" + a.eigs + "'");
  const auto eigs = read_spectrum_csv(file);
  const LTSumReport report = evaluate(spec, lambdas_of(eigs), a.strict);

  nlohmann::ordered_json j;
  j["kind"] = to_string(spec.kind);
  j["p"] = spec.p;
  j["d"] = spec.d;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  if (spec.tau) params["tau"] = *spec.tau;
  if (spec.t) params["t"] = *spec.t;
  if (a.weight) params["weight"] = *a.weight;
  j["params"] = params;
  j["value"] = report.value;
  j["terms_used"] = report.terms_used;
  j["terms_skipped"] = report.terms_skipped;
  j["admissible"] = report.admissible;
  out << j.dump() << '\n';
  return kOk;
}

int cmd_regularize(const RegularizeArgs& a, std::ostream& out) {
  const WeightFunction f = parse_weight(a.weight);
  const WeightFunction g = regularize(f, a.c);
  std::ostringstream csv;
  write_segments_csv(csv, *g.as<PiecewiseLogLinear>());
  emit(a.emit, csv.str(), out);
  return kOk;
}

int cmd_weights_check(const WeightsCheckArgs& a, std::ostream& out) {
  const WeightFunction w = parse_weight(a.weight);
  if (a.c.has_value() != a.p.has_value()) throw UsageError("--c and --p must be given together");

  nlohmann::ordered_json j;
  j["weight"] = to_spec(w);
  j["integrable"] = is_integrable(w);
  j["f0"] = eval_weight(w, 0.0);
  const double tail = integral_tail(w, 0.0);
  j["integral"] = std::isfinite(tail) ? nlohmann::ordered_json(tail)
                                      : nlohmann::ordered_json("inf");
  nlohmann::ordered_json breaks = nlohmann::ordered_json::array();
  for (double b : breakpoints(w)) breaks.push_back(b);
  j["breakpoints"] = breaks;
  if (a.c) {
    const ExpIntegralBound bound = check_exp_integral_bound(w, *a.c, *a.p, a.a);
    j["exp_integral_bound"] = {{"c", *a.c}, {"p", *a.p}, {"a", a.a}, {"lhs", bound.lhs},
                               {"rhs", bound.rhs}, {"holds", bound.holds}};
  }
  out << j.dump() << '\n';
  return kOk;
}

int cmd_sweep(const SweepArgs& a, unsigned threads, std::ostream& out, std::ostream& err) {
  const std::vector<double> grid = parse_grid(a.h_grid);
  WindowPolicy window;
  window.beta = a.beta;
  window.eps = a.eps;

  SweepReport report;
  if (a.experiment == "thm3") {
    if (a.weight) throw UsageError("--weight is not valid with --experiment thm3");
    report = sweep_thm3(grid, a.p, window, threads, a.slope_tol, a.min_r2);
  } else {
    if (!a.weight) throw UsageError("--experiment " + a.experiment + " requires --weight");
    const WeightFunction w = parse_weight(*a.weight);
    report = a.experiment == "thm1" ? sweep_thm1(grid, a.p, w, window, threads)
                                    : sweep_thm2(grid, a.p, w, window, threads);
  }
  emit(a.out, to_json(report).dump(2) + "\n", out);
  if (!a.plot.empty()) emit(a.plot, render_svg(report), out);

  if (a.assert_verdict && !report.verdict) {
    err << "sweep " << report.experiment << ": verdict false (" << report.criterion << ")\n";
    return kVerdict;
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for Lieb-Thirring type eigenvalue sums", "ltlab"};
  app.set_version_flag("--version", kVersion);
  // "--h" is the coupling constant, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  int threads_flag = 0;
  app.add_option("--threads", threads_flag, "Worker threads (default: $LTLAB_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  SpectrumArgs sa;
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of -d^2/dx^2 + i h chi_[-1,1]");
  spectrum->set_help_flag("--help", "Print this help message and exit");
  spectrum->add_option("--h", sa.h, "Coupling h > 0")->required();
  spectrum->add_option("--beta", sa.beta, "Window exponent in (0, 1/2)")->capture_default_str();
  spectrum->add_option("--eps", sa.eps, "eps(h) in (0, 1]; default 1/log h");
  spectrum->add_option("--jmin", sa.jmin, "First index (overrides the window)");
  spectrum->add_option("--jmax", sa.jmax, "Last index (overrides the window)");
  spectrum->add_option("--out", sa.out, "CSV output path (default: stdout)");

  LtsumArgs la;
  auto* ltsum = app.add_subcommand("ltsum", "Evaluate a spectral functional on a spectrum CSV");
  ltsum->add_option("--functional", la.functional, "classical|dhk|dist|sector|weighted")
      ->required()
      ->check(CLI::IsMember({"classical", "dhk", "dist", "sector", "weighted"}));
  ltsum->add_option("--p", la.p, "Exponent p")->required();
  ltsum->add_option("--d", la.d, "Dimension d")->required()->check(CLI::PositiveNumber);
  auto* tau_opt = ltsum->add_option("--tau", la.tau, "dhk exponent tau");
  auto* t_opt = ltsum->add_option("--t", la.t, "sector parameter t > 0");
  auto* w_opt = ltsum->add_option("--weight", la.weight, "weight spec, e.g. exp:tau=0.5");
  tau_opt->excludes(t_opt)->excludes(w_opt);
  t_opt->excludes(w_opt);
  ltsum->add_option("--eigs", la.eigs, "Spectrum CSV")->required();
  ltsum->add_flag("--strict", la.strict, "Reject inadmissible (p, d, tau)");

  RegularizeArgs ra;
  auto* reg = app.add_subcommand("regularize", "Regularize a weight to (log f)' >= -c");
  reg->add_option("--weight", ra.weight, "weight spec")->required();
  reg->add_option("--c", ra.c, "Rate c > 0")->required();
  reg->add_option("--emit", ra.emit, "Segments CSV output path (default: stdout)");

  WeightsCheckArgs wa;
  auto* wcheck = app.add_subcommand("weights-check", "Summarize a weight and its integral bound");
  wcheck->add_option("--weight", wa.weight, "weight spec")->required();
  wcheck->add_option("--c", wa.c, "Rate c for int_a^inf e^{-ps} f <= e^{-pa} f(a) / (p - c)");
  wcheck->add_option("--p", wa.p, "Exponent p > c");
  wcheck->add_option("--a", wa.a, "Lower limit a >= 0")->capture_default_str();

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "h-sweep along the step-potential family");
  sweep->set_help_flag("--help", "Print this help message and exit");
  sweep->add_option("--experiment", sw.experiment, "thm1|thm2|thm3")
      ->required()
      ->check(CLI::IsMember({"thm1", "thm2", "thm3"}));
  sweep->add_option("--h-grid", sw.h_grid, "Comma separated ascending h values")->required();
  sweep->add_option("--p", sw.p, "Exponent p")->required();
  sweep->add_option("--weight", sw.weight, "weight spec (thm1, thm2)");
  sweep->add_option("--beta", sw.beta, "Window exponent")->capture_default_str();
  sweep->add_option("--eps", sw.eps, "Fixed eps(h); default 1/log h");
  sweep->add_option("--out", sw.out, "JSON report path (default: stdout)");
  sweep->add_option("--plot", sw.plot, "SVG plot path");
  sweep->add_flag("--assert", sw.assert_verdict, "Exit 4 when the verdict is false");
  sweep->add_option("--slope-tol", sw.slope_tol, "thm3 relative slope tolerance")
      ->capture_default_str();
  sweep->add_option("--min-r2", sw.min_r2, "thm3 minimum r^2")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const unsigned threads = resolve_threads(threads_flag);
    if (*spectrum) return cmd_spectrum(sa, threads, out, err);
    if (*ltsum) return cmd_ltsum(la, out);
    if (*reg) return cmd_regularize(ra, out);
    if (*wcheck) return cmd_weights_check(wa, out);
    if (*sweep) return cmd_sweep(sw, threads, out, err);
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace ltlab
