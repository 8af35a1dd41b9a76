#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ldplab/specmeasures.hpp"

namespace ldp {

/// Parameters of the class S_alpha: density proportional to exp(-W_alpha(X))
/// with W_alpha(A) = b sum |A_ii|^alpha + sum_{i<j} (a1 |Re A_ij|^alpha + a2 |Im A_ij|^alpha).
struct WignerEnsemble {
  double alpha = 2.0;
  double b = 1.0;
  double a1 = 1.0;
  double a2 = 1.0;
  int beta = 1;

  /// Coefficients making E|X_12|^2 = 1: a1 = c^{-alpha} with
  /// c = (Gamma(1/alpha)/Gamma(3/alpha))^{1/2} for beta = 1, and
  /// a1 = a2 = (c/sqrt 2)^{-alpha} for beta = 2.
  static WignerEnsemble unit_variance(double alpha, int beta = 1, double b = 1.0);
  void validate() const;
};

/// Self-adjoint matrix holding only its upper triangle (row-major, packed).
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  HermitianMatrix(std::size_t n, int beta);

  std::size_t size() const { return n_; }
  int beta() const { return beta_; }
  std::complex<double> operator()(std::size_t i, std::size_t j) const;
  /// Sets A_ij (and implicitly A_ji = conj). Diagonal entries must be real,
  /// and for beta = 1 every entry must be real.
  void set(std::size_t i, std::size_t j, std::complex<double> v);
  void add(std::size_t i, std::size_t j, std::complex<double> v) { set(i, j, (*this)(i, j) + v); }

  HermitianMatrix scaled(double t) const;
  HermitianMatrix operator+(const HermitianMatrix& other) const;
  HermitianMatrix operator-(const HermitianMatrix& other) const;
  double trace() const;
  /// Dense copy (row-major) of the real symmetric matrix, or of the 2n x 2n
  /// real embedding [[Re, -Im], [Im, Re]] when beta = 2.
  std::vector<double> real_embedding() const;

  static HermitianMatrix zero(std::size_t n, int beta = 1) { return {n, beta}; }
  static HermitianMatrix identity(std::size_t n, int beta = 1);
  static HermitianMatrix diagonal(const std::vector<double>& d, int beta = 1);

 private:
  std::size_t index(std::size_t i, std::size_t j) const { return i * n_ - i * (i - 1) / 2 + (j - i); }
  std::size_t n_ = 0;
  int beta_ = 1;
  std::vector<std::complex<double>> upper_;
};

double w_alpha_energy(const HermitianMatrix& a, const WignerEnsemble& ens);

/// Entries drawn independently as coefficient^{-1/alpha} times a nu_alpha
/// variate, in row-major order over the upper triangle (real part, then
/// imaginary part off the diagonal when beta = 2), from Philox(seed, stream).
HermitianMatrix sample_wigner(const WignerEnsemble& ens, std::size_t n, std::uint64_t seed,
                              std::uint64_t stream = 0);

/// Ascending eigenvalues: Householder tridiagonalization followed by the
/// implicit-shift QL iteration. Throws NumericalError when an eigenvalue needs
/// more than 50 iterations.
std::vector<double> spectrum(const HermitianMatrix& a);

/// Eigenvalues of a real symmetric dense matrix (row-major, n x n).
std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n);

double largest_eigenvalue(const HermitianMatrix& a);

/// Uniform measure on the eigenvalues.
Measure1D esm(const HermitianMatrix& a);

/// (sum_{i,j} |A_ij|^p)^{1/p} over all n^2 entries.
double lp_norm(const HermitianMatrix& a, double p);
/// (sum_i |lambda_i|^q)^{1/q}.
double schatten(const HermitianMatrix& a, double q);

/// Header line "n,beta,alpha" then the upper triangle row by row; beta = 2
/// rows list re,im pairs.
void write_matrix_csv(std::ostream& out, const HermitianMatrix& a, double alpha);
/// Skips leading lines that start with #.
HermitianMatrix read_matrix_csv(std::istream& in, double* alpha = nullptr);

}  // namespace ldp
