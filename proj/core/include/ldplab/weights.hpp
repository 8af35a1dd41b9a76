#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ldplab/measures.hpp"

namespace ldp {

/// Even, non-negative weight functions vanishing at zero.
class WeightFunction {
 public:
  enum class Kind { talagrand, corexp, truncated };

  /// c_lambda(x) = (1/lambda - 1)(exp(-lambda|x|) - 1 + lambda|x|), lambda in (0,1).
  static WeightFunction talagrand(double lambda);
  /// w_delta: quadratic delta e^{-1/delta} t^2 / 8 up to |t| = 2/delta^2, then (1 - 2 delta)|t|.
  static WeightFunction corexp(double delta);
  /// w_{alpha,eps}^{(m)}: kappa^{-1} e^{-(m/eps)^{alpha/2}} t^2 for |t| <= m/eps,
  /// else (1 - kappa eps^{min(alpha/2, 1)}) |t|^alpha. Requires eps in (0, eps0).
  static WeightFunction truncated(double alpha, double eps, double m, double kappa = 1.0,
                                  double eps0 = 0.25);

  double operator()(double t) const;
  /// A copy whose values are multiplied by `factor` (used for negative controls).
  WeightFunction scaled(double factor) const;

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double eps() const { return eps_; }
  double m() const { return m_; }
  double kappa() const { return kappa_; }
  double lambda() const { return lambda_; }
  double delta() const { return delta_; }

 private:
  WeightFunction() = default;
  Kind kind_ = Kind::talagrand;
  double lambda_ = 0.0, delta_ = 0.0;
  double alpha_ = 1.0, eps_ = 0.0, m_ = 1.0, kappa_ = 1.0;
  double scale_ = 1.0;
};

/// W(h) = sum_i w(h_i).
double sum_weight(const WeightFunction& w, std::span<const double> h);

/// Discrete inf-convolution over grid nodes: out[i] = min_j f[j] + w(x_i - x_j).
/// Entries of f may be +inf.
std::vector<double> inf_convolution(std::span<const double> f, const std::function<double(double)>& w,
                                    std::span<const double> grid);

/// Separable inf-convolution on the tensor grid grid^dim (dim <= 3) with the
/// summed weight W(x) = sum_i w(x_i). f is stored row-major, last axis fastest.
std::vector<double> inf_convolution_tensor(std::span<const double> f, const std::function<double(double)>& w,
                                           std::span<const double> grid, int dim);

/// Symmetric Simpson grid on [-L, L] for an alpha law, 0 being a node.
struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;  // Simpson weight times density
  double mass = 0.0;            // sum of weights
};

/// L is chosen so the two-sided tail mass outside [-L, L] is below 1e-10;
/// the step is the largest not exceeding `h`.
QuadratureGrid tau_grid(const AlphaLaw& law, double h = 0.05);

/// (int e^{f box W} dnu^dim)(int e^{-f} dnu^dim) on the tensor grid, f >= 0
/// given at the grid nodes (size nodes^dim). Throws AccuracyError when the
/// grid mass deficit exceeds 1e-6.
double tau_product(const QuadratureGrid& grid, const std::function<double(double)>& w, std::span<const double> f,
                   int dim = 1);

struct Enlargement {
  std::vector<double> y1;  // coordinates with |y_i| <= m/eps
  std::vector<double> y2;  // coordinates with |y_i| > m/eps
};

Enlargement split_enlargement(std::span<const double> y, double alpha, double eps, double m, double kappa = 1.0);

/// k_m(eps) = sqrt(kappa) exp((m/eps)^{alpha/2} / 2).
double enlargement_radius(double alpha, double eps, double m, double kappa = 1.0);

}  // namespace ldp
