#include "ldplab/measures.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "ldplab/errors.hpp"
#include "ldplab/special.hpp"

namespace ldp {

namespace {

void check_alpha(double alpha) {
  require(alpha > 0.0 && alpha <= 2.0, "alpha must lie in (0, 2]");
}

// Smallest and largest tabulated exponential argument. Below the lower end
// phi(x) = Z x + O(x^2); exponential draws never exceed ~37 (53-bit uniforms).
constexpr double kTableLo = 1e-12;
constexpr double kTableHi = 750.0;
constexpr double kTableTol = 1e-8;

}  // namespace

Normalizers normalizers(double alpha) {
  require(alpha > 0.0, "normalizers: alpha must be positive");
  const double z = gamma_fn(1.0 + 1.0 / alpha);
  return {2.0 * z, z};
}

double rearrangement(double alpha, double x) {
  check_alpha(alpha);
  require(x >= 0.0, "rearrangement: x must be non-negative");
  if (x == 0.0) return 0.0;
  if (alpha == 1.0) return x;
  const double a = 1.0 / alpha;
  const double lg = log_gamma(a);
  // Solve log Q(a, y) = -x for y = phi^alpha; log Q decreases from 0 to -inf.
  auto h = [&](double y) { return log_gamma_q(a, y) + x; };
  double lo = 0.0;
  double hi = std::max(1.0, 2.0 * (x + a));
  int guard = 0;
  while (h(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200) throw NumericalError("rearrangement: root bracket failure");
  }
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double lq = log_gamma_q(a, y);
    const double fy = lq + x;
    if (fy > 0.0) lo = y; else hi = y;
    // d/dy log Q = -y^{a-1} e^{-y} / (Gamma(a) Q)
    const double dfy = -std::exp((a - 1.0) * std::log(y) - y - lg - lq);
    double next = y - fy / dfy;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - y);
    y = next;
    if (step <= 1e-15 * y || hi - lo <= 1e-15 * hi) break;
  }
  return std::pow(y, a);
}

double rearrangement_inverse(double alpha, double v) {
  check_alpha(alpha);
  require(v >= 0.0, "rearrangement_inverse: v must be non-negative");
  if (v == 0.0) return 0.0;
  if (alpha == 1.0) return v;
  return -log_gamma_q(1.0 / alpha, std::pow(v, alpha));
}

RearrangementMap::RearrangementMap(double alpha)
    : alpha_(alpha), z_(normalizers(alpha).one_sided),
      log_lo_(std::log(kTableLo)), log_hi_(std::log(kTableHi)) {
  check_alpha(alpha);
  std::size_t cells = 256;
  std::vector<double> lx, ly;
  auto node = [&](double l) { return std::log(rearrangement(alpha_, std::exp(l))); };
  for (;;) {
    const double step = (log_hi_ - log_lo_) / static_cast<double>(cells);
    // Reuse the previous nodes: they are the even nodes of the refined grid.
    std::vector<double> nx(cells + 1), ny(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
      nx[i] = log_lo_ + step * static_cast<double>(i);
      if (!lx.empty() && i % 2 == 0) ny[i] = ly[i / 2];
      else ny[i] = node(nx[i]);
    }
    nx.back() = log_hi_;
    lx = std::move(nx);
    ly = std::move(ny);
    interp_ = MonotoneCubic(lx, ly);
    max_error_ = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
      const double mid = 0.5 * (lx[i] + lx[i + 1]);
      const double exact = std::exp(node(mid));
      const double approx = std::exp(interp_(mid));
      max_error_ = std::max(max_error_, std::abs(exact - approx) / std::max(1.0, exact));
    }
    if (max_error_ < kTableTol || cells >= (1u << 17)) break;
    cells *= 2;
  }
}

std::shared_ptr<const RearrangementMap> RearrangementMap::get(double alpha) {
  static std::mutex mutex;
  static std::map<double, std::shared_ptr<const RearrangementMap>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[alpha];
  if (!slot) slot = std::make_shared<const RearrangementMap>(alpha);
  return slot;
}

double RearrangementMap::forward(double x) const {
  if (x <= 0.0) return 0.0;
  if (alpha_ == 1.0) return x;
  if (x < kTableLo) return z_ * x;
  if (x > kTableHi) return rearrangement(alpha_, x);
  return std::exp(interp_(std::log(x)));
}

double RearrangementMap::inverse(double v) const { return rearrangement_inverse(alpha_, v); }

double RearrangementMap::odd(double x) const { return x < 0.0 ? -forward(-x) : forward(x); }

double RearrangementMap::odd_inverse(double v) const { return v < 0.0 ? -inverse(-v) : inverse(v); }

AlphaLaw::AlphaLaw(double alpha, Side side)
    : alpha_(alpha), side_(side), norm_((check_alpha(alpha), normalizers(alpha))),
      map_(RearrangementMap::get(alpha)) {}

double AlphaLaw::density(double x) const {
  if (side_ == Side::one_sided) return x < 0.0 ? 0.0 : std::exp(-std::pow(x, alpha_)) / norm_.one_sided;
  return std::exp(-std::pow(std::abs(x), alpha_)) / norm_.two_sided;
}

double AlphaLaw::cdf(double x) const {
  const double a = 1.0 / alpha_;
  if (side_ == Side::one_sided) return x <= 0.0 ? 0.0 : gamma_p(a, std::pow(x, alpha_));
  const double half_tail = 0.5 * gamma_q(a, std::pow(std::abs(x), alpha_));
  return x < 0.0 ? half_tail : 1.0 - half_tail;
}

double AlphaLaw::draw(Philox& rng) const {
  const double e = rng.exponential();
  if (side_ == Side::one_sided) return map_->forward(e);
  const bool negative = (rng() >> 63) != 0;
  const double v = map_->forward(e);
  return negative ? -v : v;
}

std::vector<double> AlphaLaw::sample(std::size_t count, std::uint64_t seed, std::uint64_t stream) const {
  Philox rng(seed, stream);
  std::vector<double> out(count);
  for (auto& v : out) v = draw(rng);
  return out;
}

double AlphaLaw::moment(int k, bool absolute) const {
  require(k >= 0, "moment: k must be non-negative");
  if (!absolute && side_ == Side::two_sided && k % 2 == 1) return 0.0;
  return std::exp(log_gamma((k + 1.0) / alpha_) - log_gamma(1.0 / alpha_));
}

}  // namespace ldp
