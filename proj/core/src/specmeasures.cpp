#include "ldplab/specmeasures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ldplab/errors.hpp"
#include "ldplab/numerics.hpp"
#include "ldplab/special.hpp"

namespace ldp {

Measure1D::Measure1D(std::vector<double> atoms, std::vector<double> weights, bool probability)
    : probability_(probability) {
  require(atoms.size() == weights.size(), "Measure1D: atoms and weights differ in length");
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
  for (std::size_t k : order) {
    require(std::isfinite(atoms[k]) && std::isfinite(weights[k]), "Measure1D: non-finite atom or weight");
    if (!atoms_.empty() && atoms_.back() == atoms[k]) {
      weights_.back() += weights[k];
    } else {
      atoms_.push_back(atoms[k]);
      weights_.push_back(weights[k]);
    }
  }
  if (probability_) {
    for (double w : weights_) require(w >= 0.0, "Measure1D: probability weights must be non-negative");
    require(std::abs(total_mass() - 1.0) <= 1e-12, "Measure1D: probability weights must sum to 1");
  }
}

Measure1D Measure1D::probability(std::vector<double> atoms, std::vector<double> weights) {
  return Measure1D(std::move(atoms), std::move(weights), true);
}

Measure1D Measure1D::signed_measure(std::vector<double> atoms, std::vector<double> weights) {
  return Measure1D(std::move(atoms), std::move(weights), false);
}

Measure1D Measure1D::uniform(std::vector<double> points) {
  require(!points.empty(), "Measure1D::uniform: no points");
  std::vector<double> w(points.size(), 1.0 / static_cast<double>(points.size()));
  // Merging preserves exact sums only up to rounding; renormalize afterwards.
  Measure1D m(std::move(points), std::move(w), false);
  const double total = m.total_mass();
  for (auto& v : m.weights_) v /= total;
  m.probability_ = true;
  return m;
}

Measure1D Measure1D::dirac(double x) { return Measure1D({x}, {1.0}, true); }

double Measure1D::total_mass() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

double Measure1D::total_variation() const {
  double s = 0.0;
  for (double w : weights_) s += std::abs(w);
  return s;
}

double Measure1D::abs_moment(double p) const {
  double s = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) s += weights_[i] * std::pow(std::abs(atoms_[i]), p);
  return s;
}

Measure1D Measure1D::mix(const Measure1D& other, double t) const {
  require(t >= 0.0 && t <= 1.0, "Measure1D::mix: t must lie in [0, 1]");
  std::vector<double> a = atoms_, w;
  for (double v : weights_) w.push_back((1.0 - t) * v);
  for (std::size_t i = 0; i < other.size(); ++i) {
    a.push_back(other.atoms_[i]);
    w.push_back(t * other.weights_[i]);
  }
  const bool prob = probability_ && other.probability_;
  Measure1D m(std::move(a), std::move(w), false);
  m.probability_ = prob;
  return m;
}

Measure1D Measure1D::minus(const Measure1D& other) const {
  std::vector<double> a = atoms_, w = weights_;
  for (std::size_t i = 0; i < other.size(); ++i) {
    a.push_back(other.atoms_[i]);
    w.push_back(-other.weights_[i]);
  }
  return Measure1D(std::move(a), std::move(w), false);
}

StieltjesContour::StieltjesContour(std::vector<cplx> nodes) : nodes_(std::move(nodes)) {
  require(nodes_.size() >= 8, "StieltjesContour: need at least 8 nodes");
  for (const auto& z : nodes_) require(z.imag() >= 2.0, "StieltjesContour: nodes must satisfy Im z >= 2");
  for (const auto& a : nodes_)
    for (const auto& b : nodes_) require(std::abs(a - b) <= 1.0 + 1e-15, "StieltjesContour: diameter exceeds 1");
}

const StieltjesContour& StieltjesContour::standard() {
  static const StieltjesContour contour = [] {
    std::vector<cplx> nodes(64);
    for (int k = 0; k < 64; ++k) nodes[k] = cplx(k / 63.0, 2.0);
    return StieltjesContour(std::move(nodes));
  }();
  return contour;
}

cplx stieltjes(const Measure1D& mu, cplx z) {
  require(z.imag() > 0.0, "stieltjes: Im z must be positive");
  cplx s = 0.0;
  const auto& x = mu.atoms();
  const auto& w = mu.weights();
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] / (z - x[i]);
  return s;
}

cplx g_semicircle(cplx z) {
  require(!(z.imag() == 0.0 && std::abs(z.real()) < 2.0), "g_semicircle: z lies on the cut (-2, 2)");
  // sqrt(z-2) sqrt(z+2) is the branch of sqrt(z^2-4) behaving like z at
  // infinity; g = 2 / (z + s) avoids the cancellation in (z - s)/2.
  const cplx s = std::sqrt(z - 2.0) * std::sqrt(z + 2.0);
  return 2.0 / (z + s);
}

double rho(double x) { return x >= 1.0 ? x + 1.0 / x : 2.0; }

double distance_d(const Measure1D& mu, const Measure1D& nu, const StieltjesContour& contour) {
  double best = 0.0;
  for (const auto& z : contour.nodes()) best = std::max(best, std::abs(stieltjes(mu, z) - stieltjes(nu, z)));
  return best;
}

double monotone_coupling_cost(const Measure1D& mu, const Measure1D& nu, double p) {
  require(p > 0.0, "monotone_coupling_cost: p must be positive");
  require(mu.is_probability() && nu.is_probability(), "monotone_coupling_cost: needs probability measures");
  const auto &x = mu.atoms(), &a = mu.weights(), &y = nu.atoms(), &b = nu.weights();
  std::size_t i = 0, j = 0;
  double ra = a[0], rb = b[0], cost = 0.0;
  while (i < x.size() && j < y.size()) {
    const double m = std::min(ra, rb);
    cost += m * std::pow(std::abs(x[i] - y[j]), p);
    if (ra < rb) {
      rb -= ra;
      if (++i < x.size()) ra = a[i];
    } else if (rb < ra) {
      ra -= rb;
      if (++j < y.size()) rb = b[j];
    } else {
      if (++i < x.size()) ra = a[i];
      if (++j < y.size()) rb = b[j];
    }
  }
  return cost;
}

double wasserstein_p(const Measure1D& mu, const Measure1D& nu, double p) {
  require(p >= 1.0, "wasserstein_p: p must be at least 1 (use distance_dp for p < 1)");
  return std::pow(monotone_coupling_cost(mu, nu, p), 1.0 / p);
}

double distance_dp(const Measure1D& mu, const Measure1D& nu, double p) {
  require(p > 0.0 && p < 1.0, "distance_dp: p must lie in (0, 1)");
  auto f = [&](double t) {
    double s = 0.0;
    const auto &x = mu.atoms(), &a = mu.weights(), &y = nu.atoms(), &b = nu.weights();
    for (std::size_t i = 0; i < x.size() && x[i] < t; ++i) s += a[i] * std::pow(t - x[i], p);
    for (std::size_t j = 0; j < y.size() && y[j] < t; ++j) s -= b[j] * std::pow(t - y[j], p);
    return std::abs(s);
  };
  std::vector<double> u = mu.atoms();
  u.insert(u.end(), nu.atoms().begin(), nu.atoms().end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  if (u.empty()) return 0.0;

  double best = 0.0;
  // Sample a bracket, then refine around the best sample by golden section.
  auto scan = [&](const std::vector<double>& ts) {
    std::size_t arg = 0;
    double top = -1.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double v = f(ts[k]);
      if (v > top) {
        top = v;
        arg = k;
      }
    }
    best = std::max(best, top);
    const double lo = ts[arg == 0 ? 0 : arg - 1];
    const double hi = ts[std::min(arg + 1, ts.size() - 1)];
    if (hi > lo) best = std::max(best, f(golden_section_max(f, lo, hi, 1e-13)));
  };
  constexpr int kSamples = 12;
  for (std::size_t j = 0; j + 1 < u.size(); ++j) {
    std::vector<double> ts(kSamples + 1);
    for (int k = 0; k <= kSamples; ++k) ts[k] = u[j] + (u[j + 1] - u[j]) * k / kSamples;
    ts.back() = u[j + 1];
    scan(ts);
  }
  // Unbounded last interval: the difference decays like t^{p-1}, so a
  // geometric scan locates the maximum.
  const double scale = std::max(1.0, u.back() - u.front());
  std::vector<double> ts{u.back()};
  for (int k = -12; k <= 60; ++k) ts.push_back(u.back() + scale * std::ldexp(1.0, k));
  scan(ts);
  return best;
}

double cp_constant(double p) {
  require(p > 0.0 && p <= 1.0, "cp_constant: p must lie in (0, 1]");
  return std::sqrt(std::numbers::pi) * (p + 1.0) * gamma_fn((p + 1.0) / 2.0) / gamma_fn(1.0 + p / 2.0);
}

double frac_integral(const Measure1D& sigma, double alpha, double t, FracSide side) {
  require(alpha > 0.0 && alpha < 1.0, "frac_integral: alpha must lie in (0, 1)");
  const auto& x = sigma.atoms();
  const auto& w = sigma.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (side == FracSide::plus && x[i] < t) s += w[i] * std::pow(t - x[i], alpha);
    if (side == FracSide::minus && x[i] > t) s += w[i] * std::pow(x[i] - t, alpha);
  }
  return s / gamma_fn(alpha + 1.0);
}

cplx stieltjes_kernel_fractional(cplx z, double x, double p) {
  require(p > 0.0 && p < 1.0, "stieltjes_kernel_fractional: p must lie in (0, 1)");
  require(z.imag() > 0.0, "stieltjes_kernel_fractional: Im z must be positive");
  const cplx phase = std::exp(cplx(0.0, std::numbers::pi * (p + 1.0)));
  const double g2 = gamma_fn(p + 2.0);
  auto integrand = [&](double s) -> cplx { return std::pow(s, p) * phase * g2 * std::pow(z - (x + s), -(p + 2.0)); };
  return integrate_half_line(integrand, 1e-13) / gamma_fn(p + 1.0);
}

Measure1D semicircle_discretization(std::size_t atoms, double sigma) {
  require(atoms >= 1, "semicircle_discretization: need at least one atom");
  require(sigma > 0.0, "semicircle_discretization: sigma must be positive");
  const double n1 = static_cast<double>(atoms + 1);
  std::vector<double> x(atoms), w(atoms);
  double total = 0.0;
  for (std::size_t k = 1; k <= atoms; ++k) {
    const double th = std::numbers::pi * static_cast<double>(k) / n1;
    x[k - 1] = 2.0 * sigma * std::cos(th);
    w[k - 1] = 2.0 / n1 * std::sin(th) * std::sin(th);
    total += w[k - 1];
  }
  for (auto& v : w) v /= total;
  return Measure1D::probability(std::move(x), std::move(w));
}

FreeConvPoint free_conv_semicircle_at(const Measure1D& nu, cplx z, int max_iter) {
  require(z.imag() > 0.0, "free_conv_semicircle: Im z must be positive");
  FreeConvPoint out{z, g_semicircle(z), 0};
  const auto& x = nu.atoms();
  const auto& w = nu.weights();
  // Residual r = g_nu(z - G) - G and its derivative in G.
  auto residual = [&](cplx g, cplx* slope) {
    const cplx u = z - g;
    cplx s = 0.0, ds = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const cplx inv = 1.0 / (u - x[i]);
      s += w[i] * inv;
      ds += w[i] * inv * inv;
    }
    if (slope) *slope = ds - 1.0;
    return s - g;
  };
  constexpr int kDampedSteps = 400;
  double theta = 0.5;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iter; ++it) {
    out.iterations = it;
    cplx slope;
    const cplx r = residual(out.g, &slope);
    const double size = std::abs(r);
    if (size < 1e-12) {
      out.g += r;
      return out;
    }
    if (it <= kDampedSteps) {
      if (size > prev) theta *= 0.5;
      prev = size;
      out.g += theta * r;
      continue;
    }
    // Close to the real axis the damped map contracts slowly; finish with
    // Newton steps on the same residual, backtracking to keep Im G < 0 and
    // the residual decreasing.
    cplx step = -r / slope;
    for (int k = 0; k < 60; ++k, step *= 0.5) {
      const cplx trial = out.g + step;
      if (trial.imag() < 0.0 && std::abs(residual(trial, nullptr)) < size) break;
    }
    out.g += step;
  }
  throw ConvergenceError("free_conv_semicircle: no convergence within the iteration cap");
}

FreeConvResult free_conv_semicircle(const Measure1D& nu, double eta, const std::vector<double>& grid,
                                    unsigned threads) {
  require(eta > 0.0 && eta <= 1.0, "free_conv_semicircle: eta must lie in (0, 1]");
  FreeConvResult r;
  r.points.resize(grid.size());
  r.density.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    r.points[i] = free_conv_semicircle_at(nu, cplx(grid[i], eta));
    r.density[i] = -r.points[i].g.imag() / std::numbers::pi;
  });
  return r;
}

void write_measure_csv(std::ostream& out, const Measure1D& mu) {
  out << "atom,weight\n";
  char buf[64];
  for (std::size_t i = 0; i < mu.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", mu.atoms()[i], mu.weights()[i]);
    out << buf;
  }
}

Measure1D read_measure_csv(std::istream& in, bool probability) {
  std::vector<double> x, w;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto comma = line.find(',');
    require(comma != std::string::npos, "read_measure_csv: expected two comma-separated columns");
    char* end = nullptr;
    const double a = std::strtod(line.c_str(), &end);
    if (end == line.c_str()) {
      require(x.empty(), "read_measure_csv: non-numeric row");
      continue;  // header
    }
    const double b = std::strtod(line.c_str() + comma + 1, &end);
    x.push_back(a);
    w.push_back(b);
  }
  return probability ? Measure1D::probability(std::move(x), std::move(w))
                     : Measure1D::signed_measure(std::move(x), std::move(w));
}

}  // namespace ldp
