#include "ldplab/ratefuncs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ldplab/errors.hpp"
#include "ldplab/numerics.hpp"
#include "ldplab/rng.hpp"

namespace ldp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void RateParams::validate() const {
  require(alpha > 0.0 && alpha <= 2.0, "RateParams: alpha must lie in (0, 2]");
  require(b >= 0.0 && a1 >= 0.0 && a2 >= 0.0, "RateParams: ensemble coefficients must be nonnegative");
  require(constant_c >= 0.0 && c1 >= 0.0 && c_minus1 >= 0.0, "RateParams: constants must be nonnegative");
  require(d >= 1, "RateParams: degree must be at least 1");
}

double rate_J(double x, const RateParams& p) {
  p.validate();
  if (x < 2.0) return kInf;
  if (x == 2.0) return 0.0;
  return p.constant_c * std::pow(g_semicircle(cplx(x, 0.0)).real(), -p.alpha);
}

double rate_K(double x, const RateParams& p) {
  p.validate();
  const double e = p.alpha / p.d;
  if (x > p.tauP) return p.c1 * std::pow(x - p.tauP, e);
  if (x == p.tauP) return 0.0;
  return p.c_minus1 * std::pow(p.tauP - x, e);
}

double rate_L(double x, const RateParams& p) {
  p.validate();
  if (x < p.g11) return kInf;
  return std::pow(x - p.g11, p.alpha);
}

double rate_I_symmetric(const Measure1D& nu, const RateParams& p, std::optional<double> a) {
  p.validate();
  const auto& x = nu.atoms();
  const auto& w = nu.weights();
  const std::size_t m = x.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = m - 1 - i;
    require(std::abs(x[i] + x[j]) <= 1e-12 && std::abs(w[i] - w[j]) <= 1e-12,
            "rate_I_symmetric: measure is not symmetric");
  }
  const double aa = a.value_or(p.a1);
  require(aa >= 0.0, "rate_I_symmetric: a must be nonnegative");
  return std::min(p.b, aa / 2.0) * nu.abs_moment(p.alpha);
}

namespace {

// Flat real parametrization of a Hermitian matrix: upper triangle row-major,
// real parts, then the off-diagonal imaginary parts when beta = 2.
std::size_t param_count(std::size_t n, int beta) {
  const std::size_t upper = n * (n + 1) / 2;
  return beta == 2 ? upper + n * (n - 1) / 2 : upper;
}

HermitianMatrix from_params(const double* x, std::size_t n, int beta) {
  HermitianMatrix a(n, beta);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a.set(i, j, x[k++]);
  if (beta == 2)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) a.add(i, j, cplx(0.0, x[k++]));
  return a;
}

// Pattern search: per coordinate try +-step, halving and zeroing, keep the best
// improvement, halve the step after a pass without progress.
using Objective = std::function<double(const std::vector<double>&)>;
using Projection = std::function<void(std::vector<double>&)>;

double coordinate_search(std::vector<double>& x, const Objective& f, const Projection& project) {
  double fx = f(x);
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  double step = 0.25 * scale;
  const double min_step = 1e-7 * scale;
  int passes = 0;
  while (step > min_step && passes < 2000) {
    ++passes;
    bool improved = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double xi = x[i];
      const double trial[] = {xi + step, xi - step, 0.5 * xi, 0.0};
      double best = fx, best_v = xi;
      for (double v : trial) {
        if (v == xi) continue;
        x[i] = v;
        const double fv = f(x);
        if (fv < best && (!std::isfinite(best) || fv < best - 1e-15 * std::abs(best))) {
          best = fv;
          best_v = v;
        }
      }
      x[i] = best_v;
      if (best_v != xi) {
        improved = true;
        fx = best;
        if (project) {
          project(x);
          fx = f(x);
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return fx;
}

std::uint64_t restart_stream(int n, int r) {
  return (static_cast<std::uint64_t>(n) << 32) + static_cast<std::uint64_t>(r);
}

}  // namespace

ConstantEstimate optimize_constant_c(double alpha, const WignerEnsemble& ens_in, int n_max, int restarts,
                                     std::uint64_t seed) {
  WignerEnsemble ens = ens_in;
  ens.alpha = alpha;
  ens.validate();
  require(n_max >= 1 && n_max <= 8, "optimize_constant_c: n_max must lie in [1, 8]");
  require(restarts >= 1, "optimize_constant_c: restarts must be positive");
  ConstantEstimate best{kInf, {}};
  for (int n = 1; n <= n_max; ++n) {
    const auto nn = static_cast<std::size_t>(n);
    const std::size_t m = param_count(nn, ens.beta);
    auto objective = [&](const std::vector<double>& x) {
      const auto a = from_params(x.data(), nn, ens.beta);
      const double lam = largest_eigenvalue(a);
      if (!(lam > 0.0)) return kInf;
      return w_alpha_energy(a.scaled(1.0 / lam), ens);
    };
    auto project = [&](std::vector<double>& x) {
      const double lam = largest_eigenvalue(from_params(x.data(), nn, ens.beta));
      if (lam > 0.0)
        for (auto& v : x) v /= lam;
    };
    for (int r = 0; r < restarts; ++r) {
      std::vector<double> x(m, 0.0);
      if (r == 0 || n == 1) {
        x[0] = 1.0;  // e1 e1^T
      } else {
        Philox rng(seed, restart_stream(n, r));
        for (auto& v : x) v = rng.normal();
        project(x);
      }
      double value = objective(x);
      if (n > 1) value = coordinate_search(x, objective, project);
      if (value < best.value) {
        auto a = from_params(x.data(), nn, ens.beta);
        a = a.scaled(1.0 / largest_eigenvalue(a));
        best.value = w_alpha_energy(a, ens);
        best.argmin = {a};
      }
    }
  }
  return best;
}

ConstantEstimate optimize_constant_csigma(double alpha, const WignerEnsemble& ens_in, const NCPolynomial& pd,
                                          int sigma, int n_max, int restarts, std::uint64_t seed) {
  WignerEnsemble ens = ens_in;
  ens.alpha = alpha;
  ens.validate();
  require(sigma == 1 || sigma == -1, "optimize_constant_csigma: sigma must be +1 or -1");
  require(n_max >= 1 && n_max <= 6, "optimize_constant_csigma: n_max must lie in [1, 6]");
  require(restarts >= 1, "optimize_constant_csigma: restarts must be positive");
  const std::size_t d = pd.degree();
  require(d >= 1, "optimize_constant_csigma: polynomial must have positive degree");
  for (const auto& t : pd.terms())
    require(t.coef == 0.0 || t.word.size() == d, "optimize_constant_csigma: polynomial must be homogeneous");
  const auto letters = static_cast<std::size_t>(pd.letters());

  ConstantEstimate best{kInf, {}};
  for (int n = 1; n <= n_max; ++n) {
    const auto nn = static_cast<std::size_t>(n);
    const std::size_t per = param_count(nn, ens.beta);
    auto unpack = [&](const std::vector<double>& x) {
      std::vector<HermitianMatrix> h;
      for (std::size_t l = 0; l < letters; ++l) h.push_back(from_params(x.data() + l * per, nn, ens.beta));
      return h;
    };
    // Scale t with t^d tr P_d(H) = sigma, or 0 when the sign is unreachable.
    auto scale_for = [&](const std::vector<HermitianMatrix>& h) {
      const double tr = eval_trace(pd, h, false);
      if (tr == 0.0 || !std::isfinite(tr)) return 0.0;
      const double ratio = sigma / tr;
      if (ratio > 0.0) return std::pow(ratio, 1.0 / static_cast<double>(d));
      if (d % 2 == 1) return -std::pow(-ratio, 1.0 / static_cast<double>(d));
      return 0.0;
    };
    auto energy = [&](const std::vector<HermitianMatrix>& h) {
      double s = 0.0;
      for (const auto& m : h) s += w_alpha_energy(m, ens);
      return s;
    };
    auto objective = [&](const std::vector<double>& x) {
      const auto h = unpack(x);
      const double t = scale_for(h);
      if (t == 0.0) return kInf;
      return std::pow(std::abs(t), alpha) * energy(h);
    };
    auto project = [&](std::vector<double>& x) {
      const double t = scale_for(unpack(x));
      if (t != 0.0)
        for (auto& v : x) v *= t;
    };
    for (int r = 0; r < restarts; ++r) {
      std::vector<double> x(per * letters, 0.0);
      if (r == 0) {
        for (std::size_t l = 0; l < letters; ++l) x[l * per] = 1.0;
      } else {
        Philox rng(seed, restart_stream(n, r));
        for (auto& v : x) v = rng.normal();
      }
      project(x);
      const double value = coordinate_search(x, objective, project);
      if (value < best.value) {
        auto h = unpack(x);
        const double t = scale_for(h);
        for (auto& m : h) m = m.scaled(t);
        best.value = energy(h);
        best.argmin = std::move(h);
      }
    }
  }
  return best;
}

namespace {

// Block-diagonal candidate: the first 2k diagonal slots pair into 2x2 blocks
// [[y_2j, t_j], [t_j, y_2j+1]], the rest is diagonal. Variables are in the
// scaled units of n^{1/alpha} H, whose spectrum is linear in them.
struct BlockModel {
  std::size_t n, k;

  std::size_t size() const { return n + k; }

  void eigenvalues(const std::vector<double>& y, std::vector<double>& out) const {
    out.resize(n);
    for (std::size_t j = 0; j < k; ++j) {
      const double d1 = y[2 * j], d2 = y[2 * j + 1], t = y[n + j];
      const double mid = 0.5 * (d1 + d2), rad = std::hypot(0.5 * (d1 - d2), t);
      out[2 * j] = mid - rad;
      out[2 * j + 1] = mid + rad;
    }
    for (std::size_t i = 2 * k; i < n; ++i) out[i] = y[i];
  }

  // W(H) with H = n^{-1/alpha} (matrix of y): W is alpha-homogeneous, so the
  // scaling contributes exactly 1/n.
  double energy(const std::vector<double>& y, const WignerEnsemble& ens) const {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += ens.b * std::pow(std::abs(y[i]), ens.alpha);
    for (std::size_t j = 0; j < k; ++j) s += ens.a1 * std::pow(std::abs(y[n + j]), ens.alpha);
    return s / static_cast<double>(n);
  }

  HermitianMatrix matrix(const std::vector<double>& y, double alpha, int beta) const {
    const double s = std::pow(static_cast<double>(n), -1.0 / alpha);
    HermitianMatrix h(n, beta);
    for (std::size_t i = 0; i < n; ++i) h.set(i, i, s * y[i]);
    for (std::size_t j = 0; j < k; ++j) h.set(2 * j, 2 * j + 1, s * y[n + j]);
    return h;
  }
};

// Stieltjes transform of mu_sc boxplus (uniform on lambda) at z, Im z >= 2.
// The map G -> g_nu(z - G) is a contraction with factor <= 1/4 there.
cplx free_conv_uniform(const std::vector<double>& lambda, cplx z, cplx start) {
  cplx g = start;
  const double inv = 1.0 / static_cast<double>(lambda.size());
  for (int it = 0; it < 200; ++it) {
    cplx s = 0.0;
    const cplx w = z - g;
    for (double l : lambda) s += 1.0 / (w - l);
    s *= inv;
    const double step = std::abs(s - g);
    g = s;
    if (step < 1e-15) break;
  }
  return g;
}

struct Fit {
  const std::vector<cplx>& nodes;
  const std::vector<cplx>& target_g;
  const BlockModel& model;
  const WignerEnsemble& ens;
  double ridge = 0.0;  // weight of the quadratic energy proxy rows
  mutable std::vector<double> lambda;

  void residuals(const std::vector<double>& y, std::vector<double>& r) const { evaluate(y, r, nullptr); }

  // Residuals and, when `jac` is given, their Jacobian (row-major, rows x
  // y.size()). With w = z - G and S = mean (w - l)^{-2}, implicit
  // differentiation of G = mean 1/(w - l) gives
  // dG/dl_j = (w - l_j)^{-2} / (n (1 - S)).
  void evaluate(const std::vector<double>& y, std::vector<double>& r, std::vector<double>* jac) const {
    model.eigenvalues(y, lambda);
    const std::size_t m = y.size(), n = model.n;
    const std::size_t rows = 2 * nodes.size() + (ridge > 0.0 ? m : 0);
    r.resize(rows);
    if (jac) jac->assign(rows * m, 0.0);
    std::vector<cplx> dl(n);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const cplx g = free_conv_uniform(lambda, nodes[i], target_g[i]);
      r[2 * i] = g.real() - target_g[i].real();
      r[2 * i + 1] = g.imag() - target_g[i].imag();
      if (!jac) continue;
      const cplx w = nodes[i] - g;
      cplx s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const cplx q = 1.0 / (w - lambda[j]);
        dl[j] = q * q;
        s += dl[j];
      }
      const cplx scale = 1.0 / (static_cast<double>(n) - s);
      for (auto& v : dl) v *= scale;
      double* re = jac->data() + 2 * i * m;
      double* im = re + m;
      auto put = [&](std::size_t col, cplx v) {
        re[col] += v.real();
        im[col] += v.imag();
      };
      for (std::size_t j = 0; j < model.k; ++j) {
        const double u = 0.5 * (y[2 * j] - y[2 * j + 1]), t = y[n + j];
        const double rad = std::hypot(u, t);
        const double ru = rad > 0.0 ? u / rad : 0.0, rt = rad > 0.0 ? t / rad : 0.0;
        const cplx lo = dl[2 * j], hi = dl[2 * j + 1];
        // lambda_-+ = (d1 + d2)/2 -+ rad, rad = hypot((d1 - d2)/2, t).
        put(2 * j, 0.5 * (lo + hi) + 0.5 * ru * (hi - lo));
        put(2 * j + 1, 0.5 * (lo + hi) - 0.5 * ru * (hi - lo));
        put(n + j, rt * (hi - lo));
      }
      for (std::size_t j = 2 * model.k; j < n; ++j) put(j, dl[j]);
    }
    if (ridge > 0.0)
      for (std::size_t i = 0; i < m; ++i) {
        const double c = std::sqrt(ridge * (i < n ? ens.b : ens.a1));
        r[2 * nodes.size() + i] = c * y[i];
        if (jac) (*jac)[(2 * nodes.size() + i) * m + i] = c;
      }
  }

  double distance(const std::vector<double>& y) const {
    std::vector<double> r;
    residuals(y, r);
    double m = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) m = std::max(m, std::hypot(r[2 * i], r[2 * i + 1]));
    return m;
  }
};

// Solves a small dense system in place by Gaussian elimination with partial
// pivoting. Returns false when singular.
bool solve_dense(std::vector<double>& a, std::vector<double>& b, std::size_t m) {
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (std::abs(a[r * m + c]) > std::abs(a[p * m + c])) p = r;
    if (a[p * m + c] == 0.0) return false;
    if (p != c) {
      for (std::size_t j = 0; j < m; ++j) std::swap(a[c * m + j], a[p * m + j]);
      std::swap(b[c], b[p]);
    }
    for (std::size_t r = c + 1; r < m; ++r) {
      const double f = a[r * m + c] / a[c * m + c];
      if (f == 0.0) continue;
      for (std::size_t j = c; j < m; ++j) a[r * m + j] -= f * a[c * m + j];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t c = m; c-- > 0;) {
    double s = b[c];
    for (std::size_t j = c + 1; j < m; ++j) s -= a[c * m + j] * b[j];
    b[c] = s / a[c * m + c];
  }
  return true;
}

double sum_squares(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return s;
}

// Levenberg-Marquardt on the contour residuals.
void levenberg_marquardt(const Fit& fit, std::vector<double>& y, int max_iter = 200) {
  const std::size_t m = y.size();
  std::vector<double> r, rt, jac, jtj(m * m), jtr(m), step;
  fit.evaluate(y, r, &jac);
  double cost = sum_squares(r);
  double lambda = 1e-3;
  for (int it = 0; it < max_iter && cost > 1e-30; ++it) {
    const std::size_t rows = r.size();
    for (std::size_t a = 0; a < m; ++a) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows; ++i) s += jac[i * m + a] * r[i];
      jtr[a] = s;
      for (std::size_t b = a; b < m; ++b) {
        double t = 0.0;
        for (std::size_t i = 0; i < rows; ++i) t += jac[i * m + a] * jac[i * m + b];
        jtj[a * m + b] = jtj[b * m + a] = t;
      }
    }
    bool accepted = false;
    for (int tries = 0; tries < 12 && !accepted; ++tries) {
      std::vector<double> a = jtj;
      step.assign(m, 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        a[i * m + i] += lambda * std::max(jtj[i * m + i], 1e-12);
        step[i] = -jtr[i];
      }
      if (solve_dense(a, step, m)) {
        std::vector<double> trial = y;
        for (std::size_t i = 0; i < m; ++i) trial[i] += step[i];
        fit.residuals(trial, rt);
        const double c = sum_squares(rt);
        if (c < cost) {
          const double gain = cost - c;
          y = std::move(trial);
          fit.evaluate(y, r, &jac);
          cost = c;
          lambda = std::max(lambda * 0.3, 1e-12);
          accepted = true;
          if (gain <= 1e-12 * cost) return;
          continue;
        }
      }
      lambda *= 10.0;
    }
    if (!accepted) return;
  }
}

}  // namespace

VariationalResult rate_I_variational(const Measure1D& target, double alpha, const WignerEnsemble& ens_in, int n,
                                     double delta, int restarts, std::uint64_t seed) {
  WignerEnsemble ens = ens_in;
  ens.alpha = alpha;
  ens.validate();
  require(n >= 1 && n <= 64, "rate_I_variational: n must lie in [1, 64]");
  require(delta > 0.0, "rate_I_variational: delta must be positive");
  require(restarts >= 1, "rate_I_variational: restarts must be positive");
  require(target.is_probability(), "rate_I_variational: target must be a probability measure");

  const auto nn = static_cast<std::size_t>(n);
  const auto& nodes = StieltjesContour::standard().nodes();
  std::vector<cplx> target_g;
  for (const auto& z : nodes) target_g.push_back(stieltjes(target, z));

  VariationalResult out;
  out.argmin = HermitianMatrix::zero(nn, ens.beta);
  {
    double d0 = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) d0 = std::max(d0, std::abs(g_semicircle(nodes[i]) - target_g[i]));
    if (d0 < delta) {
      out.value = 0.0;
      out.distance = d0;
      out.feasible_restarts = restarts;
      return out;
    }
  }

  // Spread of nu suggested by the target: var(target) = 1 + var(nu).
  double mean = 0.0, second = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    mean += target.weights()[i] * target.atoms()[i];
    second += target.weights()[i] * target.atoms()[i] * target.atoms()[i];
  }
  const double spread = std::sqrt(std::max(second - mean * mean - 1.0, 0.01));

  out.value = kInf;
  double best_distance = kInf;
  for (int r = 0; r < restarts; ++r) {
    const BlockModel model{nn, static_cast<std::size_t>(r) % (nn / 2 + 1)};
    Philox rng(seed, static_cast<std::uint64_t>(r));
    std::vector<double> y(model.size());
    for (std::size_t i = 0; i < nn; ++i)
      y[i] = i < 2 * model.k ? mean + 0.1 * spread * rng.normal() : mean + spread * rng.normal();
    for (std::size_t j = 0; j < model.k; ++j) y[nn + j] = spread * (0.5 + rng.uniform());

    // Fit, then pull the fit toward low energy along its near-degenerate
    // directions with a small quadratic proxy, then refit.
    const Fit fit{nodes, target_g, model, ens, 0.0, {}};
    levenberg_marquardt(fit, y);
    const Fit pulled{nodes, target_g, model, ens, 1e-7, {}};
    levenberg_marquardt(pulled, y);
    levenberg_marquardt(fit, y);
    const double d1 = fit.distance(y);
    best_distance = std::min(best_distance, d1);
    if (!(d1 < delta)) continue;
    ++out.feasible_restarts;

    // Shrink the whole matrix while it stays feasible: W(tH) = t^alpha W(H).
    auto feasible = [&](double t) {
      std::vector<double> z = y;
      for (auto& v : z) v *= t;
      return fit.distance(z) < delta;
    };
    double hi = 1.0, lo = 1.0;
    while (lo > 1e-3 && feasible(lo * 0.9)) lo *= 0.9;
    if (lo > 1e-3) {
      hi = lo;
      lo *= 0.9;
      for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
      }
    } else {
      hi = lo;
    }
    for (auto& v : y) v *= hi;
    const double value = model.energy(y, ens);
    if (value < out.value) {
      out.value = value;
      out.distance = fit.distance(y);
      out.argmin = model.matrix(y, alpha, ens.beta);
    }
  }
  if (out.feasible_restarts == 0) {
    out.distance = best_distance;
    out.diagnostic = "no restart reached distance below delta; best distance " + std::to_string(best_distance);
  }
  return out;
}

}  // namespace ldp
