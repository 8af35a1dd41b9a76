#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace ldp {

using cplx = std::complex<double>;

/// Finitely supported measure on the line. Atoms are strictly increasing;
/// coincident inputs are merged. The probability variant enforces
/// non-negative weights summing to 1 within 1e-12.
class Measure1D {
 public:
  Measure1D() = default;
  static Measure1D probability(std::vector<double> atoms, std::vector<double> weights);
  static Measure1D signed_measure(std::vector<double> atoms, std::vector<double> weights);
  /// Uniform probability on the given points (an empirical measure).
  static Measure1D uniform(std::vector<double> points);
  static Measure1D dirac(double x);

  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }
  bool is_probability() const { return probability_; }
  double total_mass() const;
  double total_variation() const;
  /// Integral of |x|^p.
  double abs_moment(double p) const;
  /// (1 - t) this + t other.
  Measure1D mix(const Measure1D& other, double t) const;
  /// this - other as a signed measure.
  Measure1D minus(const Measure1D& other) const;

 private:
  Measure1D(std::vector<double> atoms, std::vector<double> weights, bool probability);
  std::vector<double> atoms_, weights_;
  bool probability_ = false;
};

/// Compact set of evaluation points in {Im z >= 2}.
class StieltjesContour {
 public:
  /// Validates Im z >= 2, at least 8 nodes and diameter <= 1.
  explicit StieltjesContour(std::vector<cplx> nodes);
  /// 64 equispaced nodes on {x + 2i : x in [0, 1]}.
  static const StieltjesContour& standard();
  const std::vector<cplx>& nodes() const { return nodes_; }

 private:
  std::vector<cplx> nodes_;
};

/// g_mu(z) = sum_i w_i / (z - x_i), Im z > 0.
cplx stieltjes(const Measure1D& mu, cplx z);

/// Semicircle transform (z - sqrt(z^2 - 4)) / 2 on the branch g ~ 1/z at
/// infinity; defined on C minus the open cut (-2, 2).
cplx g_semicircle(cplx z);

/// rho(x) = x + 1/x for x >= 1 and 2 otherwise.
double rho(double x);

/// sup over contour nodes of |g_mu - g_nu|.
double distance_d(const Measure1D& mu, const Measure1D& nu,
                  const StieltjesContour& contour = StieltjesContour::standard());

/// sum pi_ij |x_i - y_j|^p under the monotone (quantile) coupling, any p > 0.
double monotone_coupling_cost(const Measure1D& mu, const Measure1D& nu, double p);

/// W_p for p >= 1 via the quantile coupling.
double wasserstein_p(const Measure1D& mu, const Measure1D& nu, double p);

/// sup_t |int (t - x)_+^p dmu - int (t - x)_+^p dnu| for p in (0, 1).
double distance_dp(const Measure1D& mu, const Measure1D& nu, double p);

/// C_p = sqrt(pi) (p + 1) Gamma((p + 1)/2) / Gamma(1 + p/2), p in (0, 1].
double cp_constant(double p);

enum class FracSide { plus, minus };

/// Fractional integral of order alpha + 1 of a finite (signed) measure:
///   plus:  (1/Gamma(alpha+1)) sum_{x < t} (t - x)^alpha w
///   minus: (1/Gamma(alpha+1)) sum_{x > t} (x - t)^alpha w
double frac_integral(const Measure1D& sigma, double alpha, double t, FracSide side);

/// (I_-^{p+1} h)(x) for h(t) = e^{i pi (p+1)} Gamma(p+2) (z - t)^{-(p+2)},
/// computed by double-exponential quadrature. Equals 1/(z - x).
cplx stieltjes_kernel_fractional(cplx z, double x, double p);

/// Gauss-Chebyshev (second kind) discretization of the semicircle of
/// variance sigma^2 with N atoms; exact for polynomials of degree < 2N.
Measure1D semicircle_discretization(std::size_t atoms, double sigma = 1.0);

struct FreeConvPoint {
  cplx z;
  cplx g;                 // Stieltjes transform of mu_sc boxplus nu at z
  int iterations = 0;
};

/// Solves G = g_nu(z - G) by damped fixed-point iteration started at
/// g_semicircle(z): damping 0.5, halved whenever the step grows, stopping at
/// |dG| < 1e-12. Throws ConvergenceError after max_iter iterations.
FreeConvPoint free_conv_semicircle_at(const Measure1D& nu, cplx z, int max_iter = 100000);

struct FreeConvResult {
  std::vector<FreeConvPoint> points;  // at x + i eta for x in the grid
  std::vector<double> density;        // -Im G / pi
};

FreeConvResult free_conv_semicircle(const Measure1D& nu, double eta, const std::vector<double>& grid,
                                    unsigned threads = 1);

/// Two-column CSV, one "atom,weight" row per atom after a header line.
void write_measure_csv(std::ostream& out, const Measure1D& mu);
/// Skips lines that start with #.
Measure1D read_measure_csv(std::istream& in, bool probability = true);

}  // namespace ldp
