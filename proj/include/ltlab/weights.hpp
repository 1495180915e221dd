#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ltlab {

// Weight families f : [0, inf) -> (0, inf), all continuous and non-increasing.

/// f(s) = exp(-tau s).
struct ExpDecay {
  double tau;
};

/// f(s) = s^-(1+eps) for s > cap, constant f(cap) below the cap point.
struct PowerLaw {
  double eps;
  double cap = 1.0;
};

/// f(s) = prod_{j<n} 1/log^j(s) * 1/(log^n(s))^(1+eps) beyond exp^n(1),
/// constant below it (value chosen so that f is continuous).
struct LogPower {
  int n;
  double eps;
};

/// Super-logarithmic family: 1/e on [0, e], then
/// prod_{j<m} 1/log^j(s) * 1/(m - 1 + log^m(s))^(1+eps) with m = slog(s).
struct SlogPower {
  double eps;
};

struct Constant {
  double value;
};

class WeightFunction;

/// One piece of a piecewise log-linear weight.
struct Segment {
  enum class Kind { original, exponential };

  double a = 0.0;
  double b = 0.0;  // may be +inf for the last segment
  Kind kind = Kind::original;
  // Exponential segments only: value = anchor_value * exp(-rate (s - anchor)).
  double anchor = 0.0;
  double anchor_value = 0.0;
  double rate = 0.0;
};

/// Ordered partition of [0, inf) into pieces that either follow a source
/// weight or an exponential with a fixed rate.
struct PiecewiseLogLinear {
  std::shared_ptr<const WeightFunction> source;
  std::vector<Segment> segments;

  /// Index of the segment containing s (segments are half-open [a, b)).
  std::size_t locate(double s) const;
};

class WeightFunction {
 public:
  using Family = std::variant<ExpDecay, PowerLaw, LogPower, SlogPower, Constant,
                              PiecewiseLogLinear>;

  static WeightFunction exp_decay(double tau);
  static WeightFunction power_law(double eps, double cap = 1.0);
  static WeightFunction log_power(int n, double eps);
  static WeightFunction slog_power(double eps);
  static WeightFunction constant(double value);
  static WeightFunction piecewise(PiecewiseLogLinear pll);

  const Family& family() const { return family_; }
  bool integrable() const { return integrable_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&family_);
  }

 private:
  explicit WeightFunction(Family family);

  Family family_;
  bool integrable_ = false;
};

// Iterated logarithms and exponentials, super-logarithm.

/// log applied n times; throws DomainError when an intermediate is <= 0.
double iterated_log(int n, double s);
/// exp applied n times; throws OverflowError when the tower leaves double range.
double iterated_exp(int n, double s);
/// Smallest n >= 0 with log^n(s) <= 1 (a few ulps of slack at tower points).
int slog(double s);

// Evaluation.

double eval_weight(const WeightFunction& w, double s);
/// log f(s), evaluated without forming f (no underflow far in the tail).
double log_weight(const WeightFunction& w, double s);
/// Right derivative of log f at s.
double log_derivative(const WeightFunction& w, double s);

/// Closed-form antiderivative; valid for s >= antiderivative_domain_edge(w).
double eval_antiderivative(const WeightFunction& w, double s);
double antiderivative_domain_edge(const WeightFunction& w);

/// Points where the family formula changes branch (cap, tower points,
/// segment junctions), ascending.
std::vector<double> breakpoints(const WeightFunction& w);

bool is_integrable(const WeightFunction& w);

/// Integral of f over [a, b], closed form wherever an antiderivative exists.
double integral(const WeightFunction& w, double a, double b);
/// Same integral by adaptive Simpson, split at breakpoints.
double integral_by_quadrature(const WeightFunction& w, double a, double b,
                              double abs_tol = 1e-10);
/// Integral of f over [a, inf); +inf when f is not integrable.
double integral_tail(const WeightFunction& w, double a);

struct ExpIntegralBound {
  double lhs;  // int_a^inf e^{-ps} f(s) ds
  double rhs;  // e^{-pa} f(a) / (p + c)
  bool holds;
};

/// Lower bound obtained by integrating by parts under (log f)' >= -c.
ExpIntegralBound check_exp_integral_bound(const WeightFunction& w, double c, double p,
                                          double a);

// Textual form: exp:tau=0.5, pow:eps=1[,s0=1], logpow:n=2,eps=0.5,
// slogpow:eps=1, const:1.
WeightFunction parse_weight(std::string_view spec);
std::string to_spec(const WeightFunction& w);

}  // namespace ltlab
