#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "ldplab/errors.hpp"
#include "ldplab/matrixlab.hpp"
#include "ldplab/measures.hpp"
#include "support/oracles.hpp"

using namespace ldp;

namespace {

HermitianMatrix random_matrix(Philox& rng, std::size_t n, int beta, double scale = 1.0) {
  HermitianMatrix a(n, beta);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double re = scale * rng.normal();
      const double im = (beta == 2 && j > i) ? scale * rng.normal() : 0.0;
      a.set(i, j, {re, im});
    }
  return a;
}

std::vector<std::vector<double>> dense(const HermitianMatrix& a) {
  std::vector<std::vector<double>> m(a.size(), std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m[i][j] = a(i, j).real();
  return m;
}

// ||A v - lambda v|| for v from a few steps of inverse iteration (Gaussian
// elimination with partial pivoting on the shifted real matrix).
double eigen_residual(const std::vector<std::vector<double>>& a, double lambda) {
  const std::size_t n = a.size();
  std::vector<double> v(n, 1.0);
  for (int step = 0; step < 4; ++step) {
    auto m = a;
    for (std::size_t i = 0; i < n; ++i) m[i][i] -= lambda + 1e-10 * (1.0 + std::abs(lambda));
    std::vector<double> b = v;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < n; ++r)
        if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
      std::swap(m[c], m[piv]);
      std::swap(b[c], b[piv]);
      for (std::size_t r = c + 1; r < n; ++r) {
        const double f = m[r][c] / m[c][c];
        for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        b[r] -= f * b[c];
      }
    }
    for (std::size_t c = n; c-- > 0;) {
      double s = b[c];
      for (std::size_t k = c + 1; k < n; ++k) s -= m[c][k] * v[k];
      v[c] = s / m[c][c];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    for (auto& x : v) x /= std::sqrt(norm);
  }
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = -lambda * v[i];
    for (std::size_t j = 0; j < n; ++j) s += a[i][j] * v[j];
    res += s * s;
  }
  return std::sqrt(res);
}

}  // namespace

TEST_CASE("energy W_alpha") {
  WignerEnsemble e;
  e.alpha = 1.0;
  CHECK(w_alpha_energy(HermitianMatrix::zero(3), e) == 0.0);
  CHECK(w_alpha_energy(HermitianMatrix::identity(2), e) == 2.0);
  Philox rng(1);
  for (int beta : {1, 2}) {
    WignerEnsemble f{1.3, 0.7, 1.1, 2.0, beta};
    const auto a = random_matrix(rng, 6, beta);
    CHECK(w_alpha_energy(a.scaled(3.0), f) / w_alpha_energy(a, f) == doctest::Approx(std::pow(3.0, 1.3)).epsilon(1e-12));
  }
  HermitianMatrix c(2, 2);
  c.set(0, 1, {2.0, -3.0});
  WignerEnsemble g{2.0, 1.0, 0.5, 0.25, 2};
  CHECK(w_alpha_energy(c, g) == doctest::Approx(0.5 * 4.0 + 0.25 * 9.0));
}

TEST_CASE("hermitian storage") {
  HermitianMatrix a(3, 2);
  a.set(0, 2, {1.0, 2.0});
  CHECK(a(2, 0) == std::complex<double>(1.0, -2.0));
  a.set(2, 1, {0.5, 0.5});
  CHECK(a(1, 2) == std::complex<double>(0.5, -0.5));
  CHECK_THROWS_AS(a.set(1, 1, {0.0, 1.0}), DomainError);
  HermitianMatrix r(2, 1);
  CHECK_THROWS_AS(r.set(0, 1, {0.0, 1.0}), DomainError);
}

TEST_CASE("sampling: determinism, symmetry, scaling law") {
  const auto ens = WignerEnsemble::unit_variance(1.0);
  const auto a = sample_wigner(ens, 10, 5);
  const auto b = sample_wigner(ens, 10, 5);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) {
      CHECK(a(i, j) == b(i, j));
      CHECK(a(i, j) == std::conj(a(j, i)));
    }
  CHECK(sample_wigner(ens, 10, 5, 1)(0, 1) != a(0, 1));

  // n = 1: the single entry is b^{-1/alpha} nu_alpha.
  WignerEnsemble e{1.5, 2.0, 1.0, 1.0, 1};
  std::vector<double> xs;
  for (std::uint64_t r = 0; r < 20000; ++r) xs.push_back(sample_wigner(e, 1, 9, r)(0, 0).real());
  const auto law = AlphaLaw::nu(1.5);
  const double s = std::pow(2.0, -1.0 / 1.5);
  const double d = oracle::ks_one_sample(xs, [&](double x) { return law.cdf(x / s); });
  CHECK(d < oracle::ks_one_sample_critical(xs.size(), 0.001));
}

TEST_CASE("unit variance calibration") {
  for (double alpha : {0.5, 1.0, 2.0})
    for (int beta : {1, 2}) {
      const auto ens = WignerEnsemble::unit_variance(alpha, beta);
      const auto law = AlphaLaw::nu(alpha);
      Philox rng(17, static_cast<std::uint64_t>(beta));
      const double s1 = std::pow(ens.a1, -1.0 / alpha), s2 = std::pow(ens.a2, -1.0 / alpha);
      double m = 0.0, m2 = 0.0;
      const int count = 100000;
      for (int k = 0; k < count; ++k) {
        const double re = s1 * law.draw(rng);
        const double im = beta == 2 ? s2 * law.draw(rng) : 0.0;
        const double v = re * re + im * im;
        m += v;
        m2 += v * v;
      }
      m /= count;
      m2 /= count;
      const double se = std::sqrt((m2 - m * m) / count);
      CHECK(std::abs(m - 1.0) < 3.0 * se);
    }
}

TEST_CASE("spectrum: exact cases") {
  const auto d = spectrum(HermitianMatrix::diagonal({3.0, -1.0, 2.0, 0.5}));
  CHECK(d == std::vector<double>{-1.0, 0.5, 2.0, 3.0});
  HermitianMatrix s(2, 1);
  s.set(0, 1, 1.0);
  const auto e = spectrum(s);
  CHECK(e[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(e[1] == doctest::Approx(1.0).epsilon(1e-15));
  HermitianMatrix h(2, 2);
  h.set(0, 1, {0.0, 1.0});
  const auto f = spectrum(h);
  CHECK(f[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(f[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(spectrum(HermitianMatrix::diagonal({4.2})) == std::vector<double>{4.2});
}

TEST_CASE("spectrum agrees with the characteristic-polynomial oracle") {
  Philox rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_matrix(rng, 8, 1);
    const auto got = spectrum(a);
    const auto want = oracle::charpoly_eigenvalues(dense(a));
    REQUIRE(want.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-8);
  }
  // beta = 2: every eigenvalue of the real embedding is double, so the
  // sign-change oracle does not apply; check trace and residuals instead.
  const auto h = random_matrix(rng, 5, 2);
  const auto emb = h.real_embedding();
  std::vector<std::vector<double>> m(10, std::vector<double>(10));
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) m[i][j] = emb[i * 10 + j];
  const auto got = spectrum(h);
  double tr = 0.0;
  for (double l : got) tr += l;
  CHECK(tr == doctest::Approx(h.trace()).epsilon(1e-12));
  for (double l : got) CHECK(eigen_residual(m, l) < 1e-9 * lp_norm(h, 2.0));
}

TEST_CASE("spectrum: trace and residuals on larger matrices") {
  Philox rng(3);
  for (std::size_t n : {1u, 2u, 3u, 17u, 60u}) {
    const auto a = random_matrix(rng, n, 1);
    const auto ev = spectrum(a);
    CHECK(std::is_sorted(ev.begin(), ev.end()));
    double tr = 0.0;
    for (double l : ev) tr += l;
    const double norm = lp_norm(a, 2.0);
    CHECK(std::abs(tr - a.trace()) <= 1e-9 * n * norm);
    const auto m = dense(a);
    for (std::size_t k = 0; k < ev.size(); k += std::max<std::size_t>(1, n / 5))
      CHECK(eigen_residual(m, ev[k]) <= 1e-9 * norm);
  }
}

TEST_CASE("norms") {
  CHECK(lp_norm(HermitianMatrix::identity(3), 2.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  const std::vector<double> diag{1.0, -2.0, 0.5};
  for (double q : {0.5, 1.0, 3.0}) {
    double s = 0.0;
    for (double x : diag) s += std::pow(std::abs(x), q);
    CHECK(schatten(HermitianMatrix::diagonal(diag), q) == doctest::Approx(std::pow(s, 1.0 / q)).epsilon(1e-13));
  }
  Philox rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_matrix(rng, 2 + trial % 7, 1 + trial % 2);
    for (double q : {0.5, 1.0, 1.5, 2.0}) {
      if (q == 2.0) CHECK(schatten(a, q) == doctest::Approx(lp_norm(a, q)).epsilon(1e-10));
      else CHECK(schatten(a, q) <= lp_norm(a, q) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("esm") {
  const auto m1 = esm(HermitianMatrix::diagonal({2.5}));
  CHECK(m1.size() == 1);
  CHECK(m1.atoms()[0] == 2.5);
  Philox rng(5);
  const auto a = random_matrix(rng, 9, 1);
  const auto mu = esm(a);
  double mean = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) mean += mu.atoms()[i] * mu.weights()[i];
  CHECK(mean == doctest::Approx(a.trace() / 9.0).epsilon(1e-12));
}

TEST_CASE("spectral variation inequalities") {
  Philox rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 12;
    const int beta = 1 + trial % 2;
    const auto a = random_matrix(rng, n, beta), b = random_matrix(rng, n, beta, 0.3) + a;
    const auto la = spectrum(a), lb = spectrum(b), ld = spectrum(a - b);
    const auto ma = Measure1D::uniform(la), mb = Measure1D::uniform(lb);
    for (double p : {1.0, 1.5, 2.0})
      CHECK(wasserstein_p(ma, mb, p) <= std::pow(static_cast<double>(n), -1.0 / p) * lp_norm(a - b, p) * (1 + 1e-10));
    for (double p : {0.25, 0.5, 0.75}) {
      double rhs = 0.0;
      for (double l : ld) rhs += std::pow(std::abs(l), p);
      for (int k = 0; k < 20; ++k) {
        const double t = -6.0 + 12.0 * k / 19.0;
        double lhs = 0.0;
        for (double l : la) lhs += std::pow(std::max(0.0, t - l), p);
        for (double l : lb) lhs -= std::pow(std::max(0.0, t - l), p);
        CHECK(std::abs(lhs) <= rhs * (1 + 1e-10) + 1e-12);
      }
      CHECK(distance_d(ma, mb) <= cp_constant(p) / n * std::pow(lp_norm(a - b, p), p) * (1 + 1e-10));
    }
    // Weyl.
    const double e2 = lp_norm(a - b, 2.0);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(la[i] - lb[i]) <= e2 * (1 + 1e-12));
  }
}

TEST_CASE("semicircle edge at desk scale") {
  const auto ens = WignerEnsemble::unit_variance(1.0);
  const std::size_t n = 200;
  double mean = 0.0;
  for (std::uint64_t r = 0; r < 50; ++r) mean += largest_eigenvalue(sample_wigner(ens, n, 11, r).scaled(1.0 / std::sqrt(n)));
  mean /= 50.0;
  CHECK(std::abs(mean - 2.0) < 0.15);
}

TEST_CASE("matrix CSV round trip") {
  Philox rng(7);
  for (int beta : {1, 2}) {
    const auto a = random_matrix(rng, 4, beta);
    std::stringstream ss;
    write_matrix_csv(ss, a, 1.25);
    double alpha = 0.0;
    const auto b = read_matrix_csv(ss, &alpha);
    CHECK(alpha == 1.25);
    CHECK(b.beta() == beta);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) CHECK(a(i, j) == b(i, j));
  }
}
