#include "ldplab/matrixlab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "ldplab/errors.hpp"
#include "ldplab/measures.hpp"
#include "ldplab/special.hpp"

namespace ldp {

WignerEnsemble WignerEnsemble::unit_variance(double alpha, int beta, double b) {
  require(alpha > 0.0 && alpha <= 2.0, "unit_variance: alpha must lie in (0, 2]");
  require(beta == 1 || beta == 2, "unit_variance: beta must be 1 or 2");
  const double c = std::sqrt(std::exp(log_gamma(1.0 / alpha) - log_gamma(3.0 / alpha)));
  WignerEnsemble e;
  e.alpha = alpha;
  e.beta = beta;
  e.b = b;
  const double scale = beta == 1 ? c : c / std::sqrt(2.0);
  e.a1 = std::pow(scale, -alpha);
  e.a2 = e.a1;
  e.validate();
  return e;
}

void WignerEnsemble::validate() const {
  require(alpha > 0.0 && alpha <= 2.0, "WignerEnsemble: alpha must lie in (0, 2]");
  require(beta == 1 || beta == 2, "WignerEnsemble: beta must be 1 or 2");
  require(b > 0.0 && a1 > 0.0, "WignerEnsemble: b and a1 must be positive");
  require(beta == 1 || a2 > 0.0, "WignerEnsemble: a2 must be positive for beta = 2");
}

HermitianMatrix::HermitianMatrix(std::size_t n, int beta) : n_(n), beta_(beta), upper_(n * (n + 1) / 2) {
  require(beta == 1 || beta == 2, "HermitianMatrix: beta must be 1 or 2");
}

std::complex<double> HermitianMatrix::operator()(std::size_t i, std::size_t j) const {
  return i <= j ? upper_[index(i, j)] : std::conj(upper_[index(j, i)]);
}

void HermitianMatrix::set(std::size_t i, std::size_t j, std::complex<double> v) {
  require(i < n_ && j < n_, "HermitianMatrix::set: index out of range");
  require(i != j || v.imag() == 0.0, "HermitianMatrix::set: diagonal entries must be real");
  require(beta_ == 2 || v.imag() == 0.0, "HermitianMatrix::set: beta = 1 entries must be real");
  if (i <= j) upper_[index(i, j)] = v;
  else upper_[index(j, i)] = std::conj(v);
}

HermitianMatrix HermitianMatrix::scaled(double t) const {
  HermitianMatrix out = *this;
  for (auto& v : out.upper_) v *= t;
  return out;
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& other) const {
  require(n_ == other.n_, "HermitianMatrix: size mismatch");
  HermitianMatrix out(n_, std::max(beta_, other.beta_));
  for (std::size_t k = 0; k < upper_.size(); ++k) out.upper_[k] = upper_[k] + other.upper_[k];
  return out;
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& other) const { return *this + other.scaled(-1.0); }

double HermitianMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += upper_[index(i, i)].real();
  return t;
}

std::vector<double> HermitianMatrix::real_embedding() const {
  if (beta_ == 1) {
    std::vector<double> a(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j) a[i * n_ + j] = a[j * n_ + i] = upper_[index(i, j)].real();
    return a;
  }
  const std::size_t m = 2 * n_;
  std::vector<double> a(m * m);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      const auto v = (*this)(i, j);
      a[i * m + j] = v.real();
      a[(i + n_) * m + (j + n_)] = v.real();
      a[i * m + (j + n_)] = -v.imag();
      a[(i + n_) * m + j] = v.imag();
    }
  return a;
}

HermitianMatrix HermitianMatrix::identity(std::size_t n, int beta) {
  HermitianMatrix a(n, beta);
  for (std::size_t i = 0; i < n; ++i) a.set(i, i, 1.0);
  return a;
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& d, int beta) {
  HermitianMatrix a(d.size(), beta);
  for (std::size_t i = 0; i < d.size(); ++i) a.set(i, i, d[i]);
  return a;
}

double w_alpha_energy(const HermitianMatrix& a, const WignerEnsemble& ens) {
  const double al = ens.alpha;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += ens.b * std::pow(std::abs(a(i, i).real()), al);
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const auto v = a(i, j);
      s += ens.a1 * std::pow(std::abs(v.real()), al);
      if (ens.beta == 2) s += ens.a2 * std::pow(std::abs(v.imag()), al);
    }
  }
  return s;
}

HermitianMatrix sample_wigner(const WignerEnsemble& ens, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  ens.validate();
  require(n >= 1, "sample_wigner: n must be at least 1");
  const AlphaLaw law = AlphaLaw::nu(ens.alpha);
  const double sb = std::pow(ens.b, -1.0 / ens.alpha);
  const double s1 = std::pow(ens.a1, -1.0 / ens.alpha);
  const double s2 = ens.beta == 2 ? std::pow(ens.a2, -1.0 / ens.alpha) : 0.0;
  Philox rng(seed, stream);
  HermitianMatrix a(n, ens.beta);
  for (std::size_t i = 0; i < n; ++i) {
    a.set(i, i, sb * law.draw(rng));
    for (std::size_t j = i + 1; j < n; ++j) {
      const double re = s1 * law.draw(rng);
      const double im = ens.beta == 2 ? s2 * law.draw(rng) : 0.0;
      a.set(i, j, {re, im});
    }
  }
  return a;
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n) {
  require(n >= 1 && a.size() == n * n, "symmetric_eigenvalues: expected an n x n matrix");
  std::vector<double> d(n), e(n, 0.0), u(n), p(n);
  // Householder reduction to tridiagonal form working on the lower triangle.
  for (std::size_t i = n - 1; i >= 2; --i) {
    const std::size_t l = i - 1;
    double* row = &a[i * n];
    double scale = 0.0;
    for (std::size_t k = 0; k <= l; ++k) scale += std::abs(row[k]);
    if (scale == 0.0) {
      e[i] = 0.0;
      continue;
    }
    double h = 0.0;
    for (std::size_t k = 0; k <= l; ++k) {
      u[k] = row[k] / scale;
      h += u[k] * u[k];
    }
    const double f = u[l];
    const double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
    e[i] = scale * g;
    h -= f * g;
    u[l] = f - g;
    // p = A u / h using the lower triangle only.
    std::fill(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(l + 1), 0.0);
    for (std::size_t j = 0; j <= l; ++j) {
      const double* rj = &a[j * n];
      double acc = rj[j] * u[j];
      const double uj = u[j];
      for (std::size_t k = 0; k < j; ++k) {
        acc += rj[k] * u[k];
        p[k] += rj[k] * uj;
      }
      p[j] += acc;
    }
    double kk = 0.0;
    for (std::size_t j = 0; j <= l; ++j) {
      p[j] /= h;
      kk += u[j] * p[j];
    }
    kk /= 2.0 * h;
    for (std::size_t j = 0; j <= l; ++j) p[j] -= kk * u[j];
    for (std::size_t j = 0; j <= l; ++j) {
      double* rj = &a[j * n];
      const double uj = u[j], qj = p[j];
      for (std::size_t k = 0; k <= j; ++k) rj[k] -= uj * p[k] + qj * u[k];
    }
  }
  if (n >= 2) e[1] = a[n];
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i * n + i];

  // Implicit-shift QL on the tridiagonal (d, e), e[i] coupling i-1 and i.
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iter > 50) throw NumericalError("spectrum: QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, pp = 0.0;
        bool early = false;
        for (std::size_t i = m; i-- > l;) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= pp;
            e[m] = 0.0;
            early = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - pp;
          r = (d[i] - g) * s + 2.0 * c * b;
          pp = s * r;
          d[i + 1] = g + pp;
          g = c * r - b;
        }
        if (early) continue;
        d[l] -= pp;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> spectrum(const HermitianMatrix& a) {
  require(a.size() >= 1, "spectrum: empty matrix");
  if (a.beta() == 1) return symmetric_eigenvalues(a.real_embedding(), a.size());
  // The real embedding has every eigenvalue twice.
  const auto doubled = symmetric_eigenvalues(a.real_embedding(), 2 * a.size());
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
  return out;
}

double largest_eigenvalue(const HermitianMatrix& a) { return spectrum(a).back(); }

Measure1D esm(const HermitianMatrix& a) { return Measure1D::uniform(spectrum(a)); }

double lp_norm(const HermitianMatrix& a, double p) {
  require(p > 0.0, "lp_norm: p must be positive");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += std::pow(std::abs(a(i, i)), p);
    for (std::size_t j = i + 1; j < a.size(); ++j) s += 2.0 * std::pow(std::abs(a(i, j)), p);
  }
  return std::pow(s, 1.0 / p);
}

double schatten(const HermitianMatrix& a, double q) {
  require(q > 0.0, "schatten: q must be positive");
  double s = 0.0;
  for (double l : spectrum(a)) s += std::pow(std::abs(l), q);
  return std::pow(s, 1.0 / q);
}

void write_matrix_csv(std::ostream& out, const HermitianMatrix& a, double alpha) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%zu,%d,%.17g\n", a.size(), a.beta(), alpha);
  out << buf;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::string line;
    for (std::size_t j = i; j < a.size(); ++j) {
      const auto v = a(i, j);
      if (j > i) line += ',';
      if (a.beta() == 1) std::snprintf(buf, sizeof buf, "%.17g", v.real());
      else std::snprintf(buf, sizeof buf, "%.17g,%.17g", v.real(), v.imag());
      line += buf;
    }
    out << line << '\n';
  }
}

HermitianMatrix read_matrix_csv(std::istream& in, double* alpha) {
  std::string line;
  bool got = false;
  while ((got = static_cast<bool>(std::getline(in, line))) && line.rfind('#', 0) == 0) {
  }
  require(got, "read_matrix_csv: missing header");
  std::size_t n = 0;
  int beta = 0;
  double al = 0.0;
  require(std::sscanf(line.c_str(), "%zu,%d,%lf", &n, &beta, &al) == 3, "read_matrix_csv: bad header");
  HermitianMatrix a(n, beta);
  for (std::size_t i = 0; i < n; ++i) {
    require(static_cast<bool>(std::getline(in, line)), "read_matrix_csv: missing row");
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    const std::size_t per = beta == 1 ? 1 : 2;
    require(vals.size() == (n - i) * per, "read_matrix_csv: wrong row length");
    for (std::size_t j = i; j < n; ++j) {
      const std::size_t k = (j - i) * per;
      std::complex<double> v(vals[k], per == 2 ? vals[k + 1] : 0.0);
      if (j == i) v = v.real();
      a.set(i, j, v);
    }
  }
  if (alpha) *alpha = al;
  return a;
}

}  // namespace ldp
