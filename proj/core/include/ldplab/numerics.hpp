#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ldp {

/// Composite Simpson weights for `count` equispaced nodes with spacing h.
/// `count` must be odd and at least 3.
std::vector<double> simpson_weights(std::size_t count, double h);

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes).
/// Preserves monotonicity of the data; nodes must be strictly increasing.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  std::size_t size() const { return x_.size(); }

 private:
  std::size_t locate(double t) const;

  std::vector<double> x_, y_, slope_;
  bool uniform_ = false;
  double inv_h_ = 0.0;
};

/// Double-exponential (exp-sinh) quadrature of f over [0, inf). Handles
/// integrable endpoint singularities at 0 and algebraic decay at infinity.
std::complex<double> integrate_half_line(const std::function<std::complex<double>(double)>& f,
                                         double tol = 1e-12);

/// Maximizes f on [a, b] by golden-section search, assuming a single interior
/// maximum in the bracket. Returns the abscissa.
double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12);

/// Bracketed root of a continuous function with f(lo), f(hi) of opposite sign.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double tol = 1e-14, int max_iter = 400);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Iterations must
/// be independent; results written by index are therefore schedule-free.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Default worker count (hardware concurrency, at least 1).
unsigned default_threads();

/// Ordinary least-squares slope and intercept.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace ldp
