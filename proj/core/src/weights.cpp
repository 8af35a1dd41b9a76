#include "ldplab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ldplab/errors.hpp"
#include "ldplab/special.hpp"

namespace ldp {

WeightFunction WeightFunction::talagrand(double lambda) {
  require(lambda > 0.0 && lambda < 1.0, "talagrand weight: lambda must lie in (0, 1)");
  WeightFunction w;
  w.kind_ = Kind::talagrand;
  w.lambda_ = lambda;
  return w;
}

WeightFunction WeightFunction::corexp(double delta) {
  require(delta > 0.0 && delta < 0.5, "corexp weight: delta must lie in (0, 1/2)");
  WeightFunction w;
  w.kind_ = Kind::corexp;
  w.delta_ = delta;
  return w;
}

WeightFunction WeightFunction::truncated(double alpha, double eps, double m, double kappa, double eps0) {
  require(alpha > 0.0 && alpha <= 2.0, "truncated weight: alpha must lie in (0, 2]");
  require(eps > 0.0 && eps < eps0, "truncated weight: eps must lie in (0, eps0)");
  require(m >= 1.0, "truncated weight: m must be at least 1");
  require(kappa > 0.0, "truncated weight: kappa must be positive");
  WeightFunction w;
  w.kind_ = Kind::truncated;
  w.alpha_ = alpha;
  w.eps_ = eps;
  w.m_ = m;
  w.kappa_ = kappa;
  return w;
}

WeightFunction WeightFunction::scaled(double factor) const {
  require(factor > 0.0, "scaled weight: factor must be positive");
  WeightFunction w = *this;
  w.scale_ *= factor;
  return w;
}

double WeightFunction::operator()(double t) const {
  const double a = std::abs(t);
  double v = 0.0;
  switch (kind_) {
    case Kind::talagrand:
      // expm1 keeps the small-|x| regime accurate.
      v = (1.0 / lambda_ - 1.0) * (std::expm1(-lambda_ * a) + lambda_ * a);
      break;
    case Kind::corexp:
      if (a <= 2.0 / (delta_ * delta_)) v = delta_ * std::exp(-1.0 / delta_) * a * a / 8.0;
      else v = (1.0 - 2.0 * delta_) * a;
      break;
    case Kind::truncated: {
      const double cut = m_ / eps_;
      if (a <= cut) v = std::exp(-std::pow(cut, alpha_ / 2.0)) * a * a / kappa_;
      else v = (1.0 - kappa_ * std::pow(eps_, std::min(alpha_ / 2.0, 1.0))) * std::pow(a, alpha_);
      break;
    }
  }
  return scale_ * v;
}

double sum_weight(const WeightFunction& w, std::span<const double> h) {
  double s = 0.0;
  for (double x : h) s += w(x);
  return s;
}

std::vector<double> inf_convolution(std::span<const double> f, const std::function<double(double)>& w,
                                    std::span<const double> grid) {
  require(!grid.empty(), "inf_convolution: empty grid");
  require(f.size() == grid.size(), "inf_convolution: f and grid sizes differ");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(grid[i] > grid[i - 1], "inf_convolution: grid must be strictly increasing");
  const std::size_t n = grid.size();
  std::vector<double> out(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (f[j] == std::numeric_limits<double>::infinity()) continue;
      best = std::min(best, f[j] + w(grid[i] - grid[j]));
    }
    out[i] = best;
  }
  return out;
}

std::vector<double> inf_convolution_tensor(std::span<const double> f, const std::function<double(double)>& w,
                                           std::span<const double> grid, int dim) {
  require(dim >= 1 && dim <= 3, "inf_convolution_tensor: dimension must be 1, 2 or 3");
  require(!grid.empty(), "inf_convolution_tensor: empty grid");
  const std::size_t n = grid.size();
  std::size_t total = 1;
  for (int k = 0; k < dim; ++k) total *= n;
  require(f.size() == total, "inf_convolution_tensor: f must hold grid^dim values");
  if (dim == 1) return inf_convolution(f, w, grid);

  // The summed weight is separable, so the d-dimensional inf is the
  // composition of one-dimensional infs along each axis.
  std::vector<double> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i * n + j] = w(grid[i] - grid[j]);
  std::vector<double> cur(f.begin(), f.end()), line(n);
  std::size_t stride = 1;
  for (int axis = 0; axis < dim; ++axis) {
    std::vector<double> next(total);
    for (std::size_t base = 0; base < total; ++base) {
      if ((base / stride) % n != 0) continue;
      for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
          const double v = cur[base + j * stride];
          if (v == std::numeric_limits<double>::infinity()) continue;
          best = std::min(best, v + table[i * n + j]);
        }
        next[base + i * stride] = best;
      }
    }
    cur = std::move(next);
    stride *= n;
  }
  return cur;
}

QuadratureGrid tau_grid(const AlphaLaw& law, double h) {
  require(law.side() == Side::two_sided, "tau_grid: needs the two-sided law nu_alpha");
  require(h > 0.0, "tau_grid: step must be positive");
  const double alpha = law.alpha();
  const double a = 1.0 / alpha;
  // Two-sided tail mass beyond L is Q(1/alpha, L^alpha).
  const double target = std::log(1e-10);
  double hi = 1.0;
  while (log_gamma_q(a, std::pow(hi, alpha)) > target) hi *= 2.0;
  const double length =
      bisect_root([&](double l) { return log_gamma_q(a, std::pow(l, alpha)) - target; }, 0.0, hi, 1e-12);
  // An even panel count per side keeps 0 on a panel boundary (the density
  // has a kink there for alpha <= 1).
  std::size_t half = static_cast<std::size_t>(std::ceil(length / h));
  if (half % 2 == 1) ++half;
  const double step = length / static_cast<double>(half);
  const std::size_t count = 2 * half + 1;
  QuadratureGrid g;
  g.nodes.resize(count);
  g.weights = simpson_weights(count, step);
  for (std::size_t i = 0; i < count; ++i) {
    g.nodes[i] = (static_cast<double>(i) - static_cast<double>(half)) * step;
    g.weights[i] *= law.density(g.nodes[i]);
    g.mass += g.weights[i];
  }
  return g;
}

double tau_product(const QuadratureGrid& grid, const std::function<double(double)>& w, std::span<const double> f,
                   int dim) {
  require(dim >= 1 && dim <= 3, "tau_product: dimension must be 1, 2 or 3");
  if (std::abs(1.0 - grid.mass) > 1e-6)
    throw AccuracyError("tau_product: quadrature mass deficit exceeds 1e-6");
  for (double v : f) require(v >= 0.0, "tau_product: f must be non-negative");
  const auto conv = inf_convolution_tensor(f, w, grid.nodes, dim);
  const std::size_t n = grid.nodes.size();
  double plus = 0.0, minus = 0.0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    double weight = 1.0;
    std::size_t rest = idx;
    for (int k = 0; k < dim; ++k) {
      weight *= grid.weights[rest % n] / grid.mass;
      rest /= n;
    }
    plus += weight * std::exp(conv[idx]);
    minus += weight * std::exp(-f[idx]);
  }
  return plus * minus;
}

double enlargement_radius(double alpha, double eps, double m, double kappa) {
  require(eps > 0.0 && m > 0.0 && kappa > 0.0, "enlargement_radius: parameters must be positive");
  return std::sqrt(kappa) * std::exp(0.5 * std::pow(m / eps, alpha / 2.0));
}

Enlargement split_enlargement(std::span<const double> y, double alpha, double eps, double m, double kappa) {
  require(alpha > 0.0 && eps > 0.0 && m > 0.0 && kappa > 0.0, "split_enlargement: parameters must be positive");
  const double cut = m / eps;
  Enlargement out{std::vector<double>(y.size(), 0.0), std::vector<double>(y.size(), 0.0)};
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (std::abs(y[i]) <= cut) out.y1[i] = y[i];
    else out.y2[i] = y[i];
  }
  return out;
}

}  // namespace ldp
