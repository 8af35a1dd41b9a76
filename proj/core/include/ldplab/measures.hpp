#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ldplab/numerics.hpp"
#include "ldplab/rng.hpp"

namespace ldp {

struct Normalizers {
  double two_sided;  // Y_alpha = integral of exp(-|x|^alpha) over the line
  double one_sided;  // Z_alpha = Gamma(1 + 1/alpha)
};

/// Normalizing constants of the laws with densities exp(-|x|^alpha)/Y and
/// exp(-x^alpha)/Z on the half line. Throws DomainError for alpha <= 0.
Normalizers normalizers(double alpha);

/// phi(x) for x >= 0: the increasing map pushing the standard exponential law
/// onto the one-sided law mu_alpha, i.e. the solution v of
///   exp(-x) = integral_v^inf exp(-u^alpha) du / Z_alpha.
/// Solved directly by safeguarded Newton on log Q(1/alpha, v^alpha).
double rearrangement(double alpha, double x);

/// phi^{-1}(v) = -log Q(1/alpha, v^alpha), closed form.
double rearrangement_inverse(double alpha, double v);

/// Tabulated phi on a log-spaced grid with monotone cubic interpolation of
/// log phi against log x. The table is refined until the interpolant agrees
/// with direct root solves at every cell midpoint to 1e-8 * max(1, phi).
class RearrangementMap {
 public:
  explicit RearrangementMap(double alpha);

  /// Shared, lazily built table for alpha (thread-safe).
  static std::shared_ptr<const RearrangementMap> get(double alpha);

  double alpha() const { return alpha_; }
  double forward(double x) const;        // phi(x), x >= 0
  double inverse(double v) const;        // phi^{-1}(v), v >= 0
  double odd(double x) const;            // psi(x) = sg(x) phi(|x|)
  double odd_inverse(double v) const;    // psi^{-1}
  std::size_t node_count() const { return interp_.size(); }
  double max_validation_error() const { return max_error_; }

 private:
  double alpha_;
  double z_;
  double log_lo_, log_hi_;
  MonotoneCubic interp_;
  double max_error_ = 0.0;
};

enum class Side { two_sided, one_sided };

/// nu_alpha (two-sided, density exp(-|x|^alpha)/Y) or mu_alpha (one-sided,
/// density exp(-x^alpha)/Z on [0, inf)), alpha in (0, 2].
class AlphaLaw {
 public:
  AlphaLaw(double alpha, Side side);
  static AlphaLaw nu(double alpha) { return {alpha, Side::two_sided}; }
  static AlphaLaw mu(double alpha) { return {alpha, Side::one_sided}; }

  double alpha() const { return alpha_; }
  Side side() const { return side_; }
  double two_sided_normalizer() const { return norm_.two_sided; }
  double one_sided_normalizer() const { return norm_.one_sided; }

  double density(double x) const;
  double cdf(double x) const;

  /// One draw: an exponential (or Laplace) variate mapped through phi (psi).
  double draw(Philox& rng) const;

  /// `count` i.i.d. draws from stream `stream` of `seed`.
  std::vector<double> sample(std::size_t count, std::uint64_t seed, std::uint64_t stream = 0) const;

  /// E|X|^k when `absolute`; the signed moment E X^k otherwise.
  double moment(int k, bool absolute = true) const;

  const RearrangementMap& map() const { return *map_; }

 private:
  double alpha_;
  Side side_;
  Normalizers norm_;
  std::shared_ptr<const RearrangementMap> map_;
};

}  // namespace ldp
