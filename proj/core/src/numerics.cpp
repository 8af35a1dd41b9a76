#include "ldplab/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "ldplab/errors.hpp"

namespace ldp {

std::vector<double> simpson_weights(std::size_t count, double h) {
  require(count >= 3 && count % 2 == 1, "simpson_weights: need an odd node count >= 3");
  std::vector<double> w(count);
  for (std::size_t i = 0; i < count; ++i) w[i] = (i % 2 == 1) ? 4.0 : 2.0;
  w.front() = 1.0;
  w.back() = 1.0;
  for (auto& v : w) v *= h / 3.0;
  return w;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  require(n >= 2 && y_.size() == n, "MonotoneCubic: need matching node arrays of size >= 2");
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = x_[i + 1] - x_[i];
    require(h > 0.0, "MonotoneCubic: nodes must be strictly increasing");
    delta[i] = (y_[i + 1] - y_[i]) / h;
  }
  slope_.assign(n, 0.0);
  slope_[0] = delta[0];
  slope_[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      slope_[i] = 0.0;
    } else {
      // Weighted harmonic mean (Fritsch-Butland), monotone by construction.
      const double h0 = x_[i] - x_[i - 1];
      const double h1 = x_[i + 1] - x_[i];
      const double w1 = 2.0 * h1 + h0;
      const double w2 = h1 + 2.0 * h0;
      slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  const double span = x_.back() - x_.front();
  uniform_ = true;
  for (std::size_t i = 0; i + 1 < n && uniform_; ++i) {
    uniform_ = std::abs((x_[i + 1] - x_[i]) * static_cast<double>(n - 1) - span) < 1e-9 * span;
  }
  inv_h_ = static_cast<double>(n - 1) / span;
}

std::size_t MonotoneCubic::locate(double t) const {
  const std::size_t n = x_.size();
  std::size_t i;
  if (uniform_) {
    const double pos = (t - x_.front()) * inv_h_;
    i = pos <= 0.0 ? 0 : std::min(static_cast<std::size_t>(pos), n - 2);
    // Guard against rounding at cell boundaries.
    if (i + 1 < n - 1 && t >= x_[i + 1]) ++i;
    if (i > 0 && t < x_[i]) --i;
  } else {
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    i = std::min(i, n - 2);
  }
  return i;
}

double MonotoneCubic::operator()(double t) const {
  const std::size_t i = locate(t);
  const double h = x_[i + 1] - x_[i];
  const double s = (t - x_[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] + h11 * h * slope_[i + 1];
}

std::complex<double> integrate_half_line(const std::function<std::complex<double>(double)>& f,
                                         double tol) {
  // x = exp(pi/2 sinh t), dx = x * pi/2 cosh t dt; trapezoid in t with halving.
  const double half_pi = std::numbers::pi / 2.0;
  auto node = [&](double t) -> std::complex<double> {
    const double x = std::exp(half_pi * std::sinh(t));
    if (x == 0.0 || !std::isfinite(x)) return {0.0, 0.0};
    const double w = x * half_pi * std::cosh(t);
    const auto v = f(x);
    return v * w;
  };
  constexpr double tmax = 4.5;
  double h = 0.5;
  std::complex<double> sum = node(0.0);
  for (double t = h; t <= tmax; t += h) sum += node(t) + node(-t);
  std::complex<double> estimate = sum * h;
  for (int level = 0; level < 12; ++level) {
    h *= 0.5;
    std::complex<double> extra = 0.0;
    for (double t = h; t <= tmax; t += 2.0 * h) extra += node(t) + node(-t);
    sum += extra;
    const std::complex<double> next = sum * h;
    const double err = std::abs(next - estimate);
    estimate = next;
    if (level >= 2 && err <= tol * std::max(1.0, std::abs(estimate))) return estimate;
  }
  return estimate;
}

double golden_section_max(const std::function<double(double)>& f, double a, double b, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (std::abs(b - a) > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                   int max_iter) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw NumericalError("bisect_root: root not bracketed");
  for (int i = 0; i < max_iter && (hi - lo) > tol * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "fit_line: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  require(den != 0.0, "fit_line: degenerate abscissae");
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

}  // namespace ldp
