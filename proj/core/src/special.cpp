#include "ldplab/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "ldplab/errors.hpp"

namespace ldp {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// Lanczos series A_g(x) for the shifted argument x = z - 1.
double lanczos_sum(double x) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (x + static_cast<double>(i));
  return a;
}

constexpr int kMaxIter = 10000;
constexpr double kEps = 1e-16;

// Series for P(a, y); converges quickly for y < a + 1.
double log_series_p(double a, double y) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= y / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return -y + a * std::log(y) - log_gamma(a) + std::log(sum);
}

// Modified Lentz continued fraction for Q(a, y); valid for y >= a + 1.
double log_cf_q(double a, double y) {
  constexpr double tiny = 1e-300;
  double b = y + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return -y + a * std::log(y) - log_gamma(a) + std::log(h);
}

}  // namespace

double gamma_fn(double x) {
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  if (x > 140.0) return std::exp(log_gamma(x));
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * lanczos_sum(z);
}

double log_gamma(double x) {
  require(x > 0.0, "log_gamma: argument must be positive");
  if (x < 0.5) return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(lanczos_sum(z));
}

double gamma_p(double a, double y) {
  require(a > 0.0 && y >= 0.0, "gamma_p: need a > 0 and y >= 0");
  if (y == 0.0) return 0.0;
  if (y < a + 1.0) return std::exp(log_series_p(a, y));
  return -std::expm1(log_cf_q(a, y));
}

double gamma_q(double a, double y) { return std::exp(log_gamma_q(a, y)); }

double log_gamma_q(double a, double y) {
  require(a > 0.0 && y >= 0.0, "log_gamma_q: need a > 0 and y >= 0");
  if (y == 0.0) return 0.0;
  if (y < a + 1.0) return std::log1p(-std::exp(log_series_p(a, y)));
  return log_cf_q(a, y);
}

}  // namespace ldp
