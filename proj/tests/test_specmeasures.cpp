#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "ldplab/errors.hpp"
#include "ldplab/numerics.hpp"
#include "ldplab/rng.hpp"
#include "ldplab/specmeasures.hpp"
#include "support/oracles.hpp"

using namespace ldp;

namespace {

Measure1D random_measure(Philox& rng, int max_atoms, double spread = 4.0) {
  const int k = 1 + static_cast<int>(rng.uniform() * max_atoms);
  std::vector<double> x(k), w(k);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    x[i] = spread * (2.0 * rng.uniform() - 1.0);
    w[i] = rng.uniform() + 0.05;
    total += w[i];
  }
  for (auto& v : w) v /= total;
  return Measure1D::probability(x, w);
}

double dp_brute(const Measure1D& mu, const Measure1D& nu, double p, double lo, double hi, int n) {
  double best = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double t = lo + (hi - lo) * k / n;
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) s += mu.weights()[i] * std::pow(std::max(0.0, t - mu.atoms()[i]), p);
    for (std::size_t i = 0; i < nu.size(); ++i) s -= nu.weights()[i] * std::pow(std::max(0.0, t - nu.atoms()[i]), p);
    best = std::max(best, std::abs(s));
  }
  return best;
}

}  // namespace

TEST_CASE("measure construction") {
  auto m = Measure1D::probability({2.0, -1.0, 2.0}, {0.25, 0.5, 0.25});
  CHECK(m.size() == 2);
  CHECK(m.atoms()[0] == -1.0);
  CHECK(m.weights()[1] == 0.5);
  CHECK_THROWS_AS(Measure1D::probability({0.0, 1.0}, {0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(Measure1D::probability({0.0, 1.0}, {1.5, -0.5}), DomainError);
  CHECK_THROWS_AS(Measure1D::probability({0.0}, {1.0, 0.0}), DomainError);
  auto s = Measure1D::signed_measure({0.0, 1.0}, {1.0, -2.0});
  CHECK(s.total_variation() == 3.0);
  CHECK(s.total_mass() == -1.0);
  auto u = Measure1D::uniform({3.0, 1.0, 2.0, 1.0});
  CHECK(u.size() == 3);
  CHECK(u.weights()[0] == doctest::Approx(0.5));
  CHECK(u.is_probability());
}

TEST_CASE("stieltjes transform examples") {
  CHECK(std::abs(stieltjes(Measure1D::dirac(0.0), cplx(0, 2)) - cplx(0, -0.5)) < 1e-15);
  const auto pm = Measure1D::probability({1.0, -1.0}, {0.5, 0.5});
  CHECK(std::abs(stieltjes(pm, cplx(0, 2)) - cplx(0, -0.4)) < 1e-15);
  Philox rng(1);
  const auto a = random_measure(rng, 6), b = random_measure(rng, 6);
  const auto half = a.mix(b, 0.5);
  for (double x : {-3.0, 0.0, 2.5}) {
    const cplx z(x, 0.7);
    CHECK(std::abs(stieltjes(half, z) - 0.5 * (stieltjes(a, z) + stieltjes(b, z))) < 1e-14);
    CHECK(stieltjes(a, z).imag() < 0.0);
  }
  CHECK_THROWS_AS(stieltjes(a, cplx(1.0, 0.0)), DomainError);
}

TEST_CASE("semicircle transform") {
  CHECK(std::abs(g_semicircle(cplx(2.0, 0.0)) - 1.0) < 1e-15);
  CHECK(std::abs(g_semicircle(cplx(2.5, 0.0)) - 0.5) < 1e-15);
  CHECK(std::abs(g_semicircle(cplx(-2.5, 0.0)) + 0.5) < 1e-15);
  CHECK(std::abs(cplx(1e6, 0.0) * g_semicircle(cplx(1e6, 0.0)) - 1.0) < 1e-5);
  CHECK(std::abs(cplx(0.0, 1e6) * g_semicircle(cplx(0.0, 1e6)) - 1.0) < 1e-5);
  CHECK_THROWS_AS(g_semicircle(cplx(1.0, 0.0)), DomainError);
  Philox rng(2);
  for (int k = 0; k < 200; ++k) {
    const cplx z(8.0 * rng.uniform() - 4.0, 3.0 * rng.uniform() + 1e-3);
    const cplx g = g_semicircle(z);
    CHECK(std::abs(g - 1.0 / (z - g)) < 1e-12);
    CHECK(g.imag() < 0.0);
  }
  for (int k = 1; k <= 100; ++k) {
    const double t = k / 100.0;
    CHECK(std::abs(g_semicircle(cplx(rho(1.0 / t), 0.0)).real() - t) < 1e-12);
  }
  CHECK(rho(0.5) == 2.0);
  CHECK(rho(2.0) == 2.5);
}

TEST_CASE("distance d") {
  const auto& k = StieltjesContour::standard();
  CHECK(k.nodes().size() == 64);
  const auto d0 = Measure1D::dirac(0.0), d1 = Measure1D::dirac(1.0);
  CHECK(distance_d(d0, d0) == 0.0);
  double want = 0.0;
  for (int i = 0; i < 64; ++i) {
    const cplx z(i / 63.0, 2.0);
    want = std::max(want, std::abs(1.0 / z - 1.0 / (z - 1.0)));
  }
  CHECK(distance_d(d0, d1) == doctest::Approx(want).epsilon(1e-14));
  CHECK_THROWS_AS(StieltjesContour({cplx(0, 1)}), DomainError);

  Philox rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_measure(rng, 8), b = random_measure(rng, 8), c = random_measure(rng, 8);
    CHECK(distance_d(a, b) == doctest::Approx(distance_d(b, a)).epsilon(1e-15));
    CHECK(distance_d(a, c) <= distance_d(a, b) + distance_d(b, c) + 1e-15);
    CHECK(distance_d(a, b) <= wasserstein_p(a, b, 1.0) + 1e-15);
  }
}

TEST_CASE("wasserstein via quantile coupling agrees with the LP oracle") {
  CHECK(wasserstein_p(Measure1D::dirac(-1.0), Measure1D::dirac(2.5), 1.7) == doctest::Approx(3.5).epsilon(1e-14));
  const auto two = Measure1D::probability({0.0, 2.0}, {0.5, 0.5});
  CHECK(wasserstein_p(two, Measure1D::dirac(1.0), 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(wasserstein_p(two, two, 0.5), DomainError);
  Philox rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_measure(rng, 5), b = random_measure(rng, 5);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      std::vector<std::vector<double>> cost(a.size(), std::vector<double>(b.size()));
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) cost[i][j] = std::pow(std::abs(a.atoms()[i] - b.atoms()[j]), p);
      const double lp = oracle::transport_lp(a.weights(), b.weights(), cost);
      CHECK(monotone_coupling_cost(a, b, p) == doctest::Approx(lp).epsilon(1e-9));
    }
    CHECK(wasserstein_p(a, b, 1.0) <= wasserstein_p(a, b, 2.0) + 1e-14);
  }
}

TEST_CASE("distance d_p") {
  const auto d0 = Measure1D::dirac(0.0), d1 = Measure1D::dirac(1.0);
  for (double p : {0.25, 0.5, 0.75}) {
    CHECK(distance_dp(d0, d0, p) == 0.0);
    CHECK(distance_dp(d0, d1, p) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dp_brute(d0, d1, p, -2.0, 3.0, 50000) == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK_THROWS_AS(distance_dp(d0, d1, 1.0), DomainError);
  Philox rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_measure(rng, 6), b = random_measure(rng, 6);
    for (double p : {0.25, 0.5, 0.75}) {
      const double dp = distance_dp(a, b, p);
      CHECK(dp >= dp_brute(a, b, p, -5.0, 200.0, 40000) - 1e-12);
      CHECK(dp <= monotone_coupling_cost(a, b, p) + 1e-12);
      CHECK(distance_d(a, b) <= cp_constant(p) * dp + 1e-14);
    }
  }
}

TEST_CASE("C_p") {
  CHECK(cp_constant(1.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(cp_constant(1e-9) == doctest::Approx(std::numbers::pi).epsilon(1e-8));
  double prev = std::numbers::pi;
  for (int k = 1; k <= 9; ++k) {
    const double c = cp_constant(k / 10.0);
    CHECK(c > prev);
    CHECK(c < 4.0);
    prev = c;
  }
  // Integral form 2(p+1) int_0^inf (1+t^2)^{-1-p/2} dt.
  for (double p : {0.25, 0.5, 0.75}) {
    const auto v = integrate_half_line([&](double t) { return cplx(std::pow(1.0 + t * t, -1.0 - p / 2.0), 0.0); });
    CHECK(cp_constant(p) == doctest::Approx(2.0 * (p + 1.0) * v.real()).epsilon(1e-10));
  }
  CHECK_THROWS_AS(cp_constant(0.0), DomainError);
}

TEST_CASE("fractional integrals") {
  const auto d0 = Measure1D::dirac(0.0);
  for (double a : {0.2, 0.5, 0.9}) {
    CHECK(frac_integral(d0, a, 1.0, FracSide::plus) == doctest::Approx(1.0 / std::tgamma(a + 1.0)).epsilon(1e-13));
    CHECK(frac_integral(d0, a, -1.0, FracSide::plus) == 0.0);
    CHECK(frac_integral(d0, a, -1.0, FracSide::minus) == doctest::Approx(1.0 / std::tgamma(a + 1.0)).epsilon(1e-13));
  }
  Philox rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto mu = random_measure(rng, 7), nu = random_measure(rng, 7);
    const double a = 0.1 + 0.8 * rng.uniform();
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) lhs += nu.weights()[j] * frac_integral(mu, a, nu.atoms()[j], FracSide::plus);
    for (std::size_t i = 0; i < mu.size(); ++i) rhs += mu.weights()[i] * frac_integral(nu, a, mu.atoms()[i], FracSide::minus);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("Stieltjes kernel as a fractional integral") {
  for (double p : {0.25, 0.5, 0.75})
    for (cplx z : {cplx(0.0, 1.0), cplx(1.5, 2.0), cplx(-3.0, 1.2)})
      for (double x : {-2.0, 0.0, 0.5, 3.0}) CHECK(std::abs(stieltjes_kernel_fractional(z, x, p) - 1.0 / (z - x)) < 1e-8);
}

TEST_CASE("semicircle discretization") {
  const auto sc = semicircle_discretization(200);
  // Moments 0, 1, 2, 4 = 1, 0, 1, 2.
  double m1 = 0, m2 = 0, m4 = 0;
  for (std::size_t i = 0; i < sc.size(); ++i) {
    const double x = sc.atoms()[i], w = sc.weights()[i];
    m1 += w * x;
    m2 += w * x * x;
    m4 += w * x * x * x * x;
  }
  CHECK(std::abs(m1) < 1e-14);
  CHECK(m2 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(m4 == doctest::Approx(2.0).epsilon(1e-13));
  for (const auto& z : StieltjesContour::standard().nodes())
    CHECK(std::abs(stieltjes(sc, z) - g_semicircle(z)) < 1e-13);
}

TEST_CASE("free convolution with the semicircle") {
  const auto r0 = free_conv_semicircle_at(Measure1D::dirac(0.0), cplx(0.3, 1.0));
  CHECK(std::abs(r0.g - g_semicircle(cplx(0.3, 1.0))) < 1e-12);

  const auto sc = semicircle_discretization(2000);
  const auto start = std::chrono::steady_clock::now();
  for (const auto& z : StieltjesContour::standard().nodes()) {
    const auto r = free_conv_semicircle_at(sc, z);
    const cplx s = std::sqrt(z - std::sqrt(8.0)) * std::sqrt(z + std::sqrt(8.0));
    CHECK(std::abs(r.g - (z - s) / 4.0) < 1e-6);
  }
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() < 10.0);

  const auto pm = Measure1D::probability({-2.0, 2.0}, {0.5, 0.5});
  std::vector<double> grid;
  for (double x = -5.0; x <= 5.0; x += 0.05) grid.push_back(x);
  const auto res = free_conv_semicircle(pm, 1e-2, grid);
  double mass = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& pt = res.points[i];
    CHECK(std::abs(pt.g - stieltjes(pm, pt.z - pt.g)) < 1e-10);
    CHECK(pt.g.imag() < 0.0);
    CHECK(res.density[i] >= 0.0);
    mass += res.density[i] * 0.05;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(0.01));
  CHECK_THROWS_AS(free_conv_semicircle(pm, 0.0, grid), DomainError);
}

TEST_CASE("measure CSV round trip") {
  Philox rng(8);
  const auto m = random_measure(rng, 10);
  std::stringstream ss;
  write_measure_csv(ss, m);
  const auto back = read_measure_csv(ss);
  CHECK(back.atoms() == m.atoms());
  CHECK(back.weights() == m.weights());
  std::stringstream bad("atom,weight\n1.0\n");
  CHECK_THROWS_AS(read_measure_csv(bad), DomainError);
}
