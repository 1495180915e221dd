#pragma once

#include <complex>
#include <string>
#include <vector>

namespace ltlab {

using cplx = std::complex<double>;

/// V_h = i h chi_[-1,1] on the line.
class StepPotential {
 public:
  explicit StepPotential(double h);
  double h() const { return h_; }

 private:
  double h_;
};

enum class Parity { even, odd };
enum class RootMethod { newton, muller };

const char* to_string(Parity p);
const char* to_string(RootMethod m);

/// Discrete eigenvalue lambda = mu^2 + i h with interior wavenumber mu.
struct Eigenvalue {
  cplx lambda;
  cplx mu;
  long j = 0;
  Parity parity = Parity::even;
  double residual = 0.0;  // relative secular residual at convergence
  double seed_deviation = 0.0;
  RootMethod method = RootMethod::newton;
};

/// Index window h^{1/2}/eps(h) <= j <= h^{beta+1/2}.
struct WindowSpec {
  double beta;
  double eps_of_h;

  WindowSpec(double beta, double eps_of_h);
  /// beta with the default eps(h) = 1/log h.
  static WindowSpec with_default_eps(double beta, double h);
};

struct IndexRange {
  long j_min;
  long j_max;
  long size() const { return j_max - j_min + 1; }
};

/// Throws WindowEmptyError when ceil(h^{1/2}/eps) > floor(h^{beta+1/2}).
IndexRange window_bounds(const StepPotential& pot, const WindowSpec& w);

// Matching conditions at x = 1 for interior cos(mu x) / sin(mu x) and the
// decaying exterior exp(-kappa (x-1)), kappa = principal sqrt(-lambda).

/// Raw determinant: D_even = mu sin mu - kappa cos mu, D_odd = mu cos mu + kappa sin mu.
cplx matching_determinant(const StepPotential& pot, cplx mu, Parity parity);

/// Normalized secular function E = e^{2i mu} -+ i h / (i mu + kappa)^2
/// (minus for even, plus for odd). E = D_even * (-2 e^{i mu} / (i mu + kappa))
/// and E = D_odd * (2i e^{i mu} / (i mu + kappa)); the factors never vanish.
/// Throws OutOfSheetError when lambda lies on [0, inf).
cplx secular_residual(const StepPotential& pot, cplx mu, Parity parity);

/// dE/dmu, using dkappa/dmu = -mu/kappa.
cplx secular_derivative(const StepPotential& pot, cplx mu, Parity parity);

/// |E| / (|e^{2i mu}| + |i h / (i mu + kappa)^2|), a scale-free residual.
double relative_residual(const StepPotential& pot, cplx mu, Parity parity);

/// mu_j = pi (7 - 8j)/4 + i log(pi (8j - 7) / (2 sqrt h)).
cplx seed_from_asymptotic(const StepPotential& pot, long j);

/// Newton polish of a secular zero (Muller fallback once). Converged when
/// |dmu| <= 1e-12 (1 + |mu|) and the relative residual is <= 1e-10.
Eigenvalue refine_root(const StepPotential& pot, cplx seed, Parity parity, long j = 0);

/// Parity whose secular function is smaller at mu.
Parity select_parity(const StepPotential& pot, cplx mu);

struct RootFailure {
  long j;
  cplx seed;
  std::string reason;
};

struct WindowResult {
  IndexRange range{0, -1};
  std::vector<Eigenvalue> eigenvalues;  // sorted by j
  std::vector<RootFailure> failures;    // sorted by j
  long parity_changes = 0;              // between consecutive accepted roots
  long duplicates_removed = 0;
};

/// Seeds, refines and validates every index in the window.
WindowResult enumerate_window(const StepPotential& pot, const WindowSpec& w,
                              unsigned threads = 0);
WindowResult enumerate_indices(const StepPotential& pot, IndexRange range, unsigned threads = 0);

/// Axis-aligned rectangle in the mu-plane.
struct MuRect {
  double re_min, re_max, im_min, im_max;
};

/// Winding number of E_parity around the rectangle (counterclockwise), by
/// adaptive tracking of arg E. Throws ContourError when a zero is within
/// 1e-6 (relative residual) of the contour or the rectangle reaches the
/// branch cut Im lambda = 0.
int count_zeros_rectangle(const StepPotential& pot, const MuRect& rect, Parity parity);

/// Cell [Re mu_j - pi/2, Re mu_j + pi/2] x [Im mu_j - 1, Im mu_j + margin]
/// isolating the j-th even zero of the asymptotic family.
MuRect index_cell(const StepPotential& pot, long j);

struct WindowCount {
  long zeros = 0;
  std::vector<long> failed_cells;
  std::string first_error;
};

/// Sum of even-parity winding numbers over the disjoint index cells of the range.
WindowCount count_window_zeros(const StepPotential& pot, IndexRange range, unsigned threads = 0);

struct SpectrumReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks 0 < Im lambda < h, Re kappa > 0, residual <= 1e-10, lambda = mu^2 + i h
/// and pairwise separation >= 1e-8 max(1, |mu|).
SpectrumReport validate_spectrum(const std::vector<Eigenvalue>& eigs, const StepPotential& pot);

}  // namespace ltlab
