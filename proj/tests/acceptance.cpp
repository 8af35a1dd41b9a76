// Acceptance suite: one PASS/FAIL line per criterion. Arguments restrict the
// run to the listed criterion numbers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "ldplab/experiments.hpp"
#include "ldplab/freeprob.hpp"
#include "ldplab/lpp.hpp"
#include "ldplab/matrixlab.hpp"
#include "ldplab/measures.hpp"
#include "ldplab/ratefuncs.hpp"
#include "ldplab/specmeasures.hpp"
#include "ldplab/weights.hpp"
#include "support/oracles.hpp"

using namespace ldp;

namespace {

// Criteria whose failure is documented and does not fail the suite.
const std::set<int> kKnownFailures = {12};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

HermitianMatrix random_matrix(Philox& rng, std::size_t n, int beta, double scale = 1.0) {
  HermitianMatrix a(n, beta);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a.set(i, j, {scale * rng.normal(), (beta == 2 && j > i) ? scale * rng.normal() : 0.0});
  return a;
}

double semicircle_distance(const std::vector<double>& eigenvalues) {
  const auto mu = Measure1D::uniform(eigenvalues);
  double d = 0.0;
  for (const auto& z : StieltjesContour::standard().nodes()) d = std::max(d, std::abs(stieltjes(mu, z) - g_semicircle(z)));
  return d;
}

Outcome free_convolution_identity() {
  const auto start = std::chrono::steady_clock::now();
  const auto sc = semicircle_discretization(2000);
  double err = 0.0;
  for (const auto& z : StieltjesContour::standard().nodes()) {
    const cplx s = std::sqrt(z - std::sqrt(8.0)) * std::sqrt(z + std::sqrt(8.0));
    err = std::max(err, std::abs(free_conv_semicircle_at(sc, z).g - (z - s) / 4.0));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {err < 1e-6 && secs < 10.0, "max error " + fmt("%.3g", err) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome inverse_stieltjes() {
  double err = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double t = k / 100.0;
    err = std::max(err, std::abs(g_semicircle(cplx(rho(1.0 / t), 0.0)).real() - t));
  }
  return {err < 1e-12, "max |g(rho(1/t)) - t| = " + fmt("%.3g", err)};
}

Outcome spectral_variation() {
  const auto start = std::chrono::steady_clock::now();
  Philox rng(3003);
  long violations = 0, checks = 0;
  for (int pair = 0; pair < 500; ++pair) {
    const std::size_t n = 2 + static_cast<std::size_t>(pair % 31);
    const int beta = 1 + pair % 2;
    const auto a = random_matrix(rng, n, beta);
    const auto b = a + random_matrix(rng, n, beta, 0.05 + rng.uniform());
    const auto la = spectrum(a), lb = spectrum(b), ld = spectrum(a - b);
    const auto ma = Measure1D::uniform(la), mb = Measure1D::uniform(lb);
    const double nn = static_cast<double>(n);
    for (double p : {1.0, 1.5, 2.0}) {
      ++checks;
      if (wasserstein_p(ma, mb, p) > std::pow(nn, -1.0 / p) * lp_norm(a - b, p) * (1 + 1e-10)) ++violations;
    }
    const double lo = std::min(la.front(), lb.front()) - 1.0, hi = std::max(la.back(), lb.back()) + 1.0;
    for (double p : {0.25, 0.5, 0.75}) {
      double schatten_p = 0.0;
      for (double l : ld) schatten_p += std::pow(std::abs(l), p);
      for (int k = 0; k < 20; ++k) {
        const double t = lo + (hi - lo) * k / 19.0;
        double lhs = 0.0;
        for (double l : la) lhs += std::pow(std::max(0.0, t - l), p);
        for (double l : lb) lhs -= std::pow(std::max(0.0, t - l), p);
        ++checks;
        if (std::abs(lhs) > schatten_p * (1 + 1e-10) + 1e-12) ++violations;
      }
      ++checks;
      if (distance_d(ma, mb) > cp_constant(p) / nn * std::pow(lp_norm(a - b, p), p) * (1 + 1e-10)) ++violations;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {violations == 0 && secs < 60.0, std::to_string(violations) + " violations in " + std::to_string(checks) +
                                               " checks, " + fmt("%.2f", secs) + " s"};
}

// Random nonnegative tabulated test function: ramps, bumps and a constant.
std::vector<double> random_profile(Philox& rng, const std::vector<double>& x) {
  const int terms = 1 + static_cast<int>(rng.uniform() * 4.0);
  std::vector<double> f(x.size(), 0.0);
  for (int k = 0; k < terms; ++k) {
    const double kind = rng.uniform();
    const double c = -10.0 + 20.0 * rng.uniform();
    const double s = 3.0 * rng.uniform();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (kind < 0.4) f[i] += s * std::max(0.0, x[i] - c);
      else if (kind < 0.7) f[i] += s * std::max(0.0, c - x[i]);
      else if (kind < 0.9) f[i] += 5.0 * s * std::exp(-(x[i] - c) * (x[i] - c));
      else f[i] += s;
    }
  }
  return f;
}

Outcome tau_property() {
  const auto grid = tau_grid(AlphaLaw::nu(1.0));
  Philox rng(4004);
  double worst = 0.0;
  for (double delta : {0.1, 0.25, 0.4}) {
    const auto w = WeightFunction::corexp(delta);
    const std::function<double(double)> wf = [&](double t) { return w(t); };
    for (int trial = 0; trial < 200; ++trial) worst = std::max(worst, tau_product(grid, wf, random_profile(rng, grid.nodes)));
  }
  return {worst <= 1.0 + 1e-6, "max product - 1 = " + fmt("%.3g", worst - 1.0) + " over 600 functions"};
}

Outcome transport_pushforward() {
  bool ok = true;
  std::string detail;
  for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
    const auto mapped = AlphaLaw::mu(alpha).sample(10000, 5005);
    Philox rng(5006);
    std::vector<double> direct(10000);
    for (auto& v : direct) v = oracle::mu_alpha_direct(rng, alpha);
    const double d = oracle::ks_two_sample(mapped, direct);
    const double crit = oracle::ks_two_sample_critical(mapped.size(), direct.size(), 0.001);
    ok = ok && d < crit;
    detail += "a=" + fmt("%g", alpha) + " D=" + fmt("%.4f", d) + " ";
  }
  return {ok, detail + "(critical " + fmt("%.4f", oracle::ks_two_sample_critical(10000, 10000, 0.001)) + ")"};
}

Outcome wigner_limits() {
  const auto ens = WignerEnsemble::unit_variance(1.0);
  const std::size_t n = 400;
  double dist = 0.0, top = 0.0;
  for (std::uint64_t r = 0; r < 50; ++r) {
    const auto ev = spectrum(sample_wigner(ens, n, 6006, r).scaled(1.0 / std::sqrt(static_cast<double>(n))));
    dist += semicircle_distance(ev);
    top += ev.back();
  }
  dist /= 50.0;
  top /= 50.0;
  return {dist < 0.05 && top >= 1.85 && top <= 2.15,
          "mean d = " + fmt("%.4f", dist) + ", mean lambda_max = " + fmt("%.4f", top)};
}

Outcome bbp_equivalent() {
  const auto ens = WignerEnsemble::unit_variance(1.0);
  const std::size_t n = 1000;
  HermitianMatrix a(n, 1);
  a.set(0, 0, 2.0);
  double err = 0.0;
  for (std::uint64_t r = 0; r < 50; ++r)
    err += std::abs(largest_eigenvalue(sample_wigner(ens, n, 7007, r).scaled(1.0 / std::sqrt(1000.0)) + a) - 2.5);
  err /= 50.0;
  return {err < 0.1, "mean |lambda - 2.5| = " + fmt("%.4f", err)};
}

Outcome polynomial_equivalent() {
  const auto ens = WignerEnsemble::unit_variance(1.0);
  const std::size_t n = 500;
  const auto p3 = NCPolynomial::power(1, 3), p4 = NCPolynomial::power(1, 4);
  HermitianMatrix h(n, 1);
  h.set(0, 0, 1.0);  // tr H^3 = 1
  const double limit = deterministic_equivalent_poly(p3, {h});
  const auto spike = h.scaled(std::cbrt(static_cast<double>(n)));
  double err = 0.0, fourth = 0.0;
  for (std::uint64_t r = 0; r < 20; ++r) {
    const auto x = sample_wigner(ens, n, 8008, r).scaled(1.0 / std::sqrt(static_cast<double>(n)));
    err += std::abs(eval_trace(p3, {x + spike}) - 1.0);
    fourth += eval_trace(p4, {x});
  }
  err /= 20.0;
  fourth /= 20.0;
  return {err < 0.1 && std::abs(fourth - 2.0) <= 0.05 && std::abs(limit - 1.0) < 1e-12,
          "mean |tau_n - 1| = " + fmt("%.4f", err) + ", tau_n[s^4] = " + fmt("%.4f", fourth) +
              ", equivalent = " + fmt("%.6f", limit)};
}

Outcome free_moments() {
  bool ok = true;
  long long catalan = 1;
  for (int k = 0; k <= 5; ++k) {
    ok = ok && tau_semicircular(NCPolynomial::power(1, 2 * k)) == static_cast<double>(catalan);
    catalan = catalan * 2 * (2 * k + 1) / (k + 2);
  }
  ok = ok && tau_semicircular(NCPolynomial::parse("x1 x2 x1 x2")) == 0.0;
  long words = 0, mismatches = 0;
  for (std::size_t len = 0; len <= 10; ++len) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < len; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      Word w(len);
      std::size_t c = code;
      for (auto& l : w) {
        l = 1 + static_cast<int>(c % 3);
        c /= 3;
      }
      ++words;
      if (noncrossing_pairings(w) != oracle::pairings_brute_force(w)) ++mismatches;
    }
  }
  return {ok && mismatches == 0, "Catalan and s1s2s1s2 " + std::string(ok ? "exact" : "WRONG") + ", " +
                                     std::to_string(mismatches) + " mismatches over " + std::to_string(words) +
                                     " words on 3 letters"};
}

std::vector<std::vector<double>> as_grid(const WeightField& w) {
  const auto n = static_cast<std::size_t>(w.n());
  std::vector<std::vector<double>> g(n + 1, std::vector<double>(n + 1));
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j <= n; ++j) g[i][j] = w({static_cast<int>(i), static_cast<int>(j)});
  return g;
}

Outcome lpp_oracles() {
  Philox rng(10010);
  int passage_bad = 0, chain_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    WeightField f(2, n);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = rng.normal();
    const double want = oracle::lpp_brute_force_2d(as_grid(f), n, n);
    if (std::abs(last_passage(f) - want) > 1e-12 * std::max(1.0, std::abs(want))) ++passage_bad;
  }
  const ShapeFunction exp_shape = [](const std::vector<double>& v) {
    const double s = std::sqrt(v[0]) + std::sqrt(v[1]);
    return s * s;
  };
  for (int trial = 0; trial < 100; ++trial) {
    WeightField h(2, 3);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = rng.uniform() < 0.3 ? 2.0 * rng.uniform() : -rng.uniform();
    const double want = oracle::chain_sup_brute_force_2d(as_grid(h), 3, [&](double a, double b) { return exp_shape({a, b}); });
    if (std::abs(deterministic_equivalent_T(h, exp_shape) - want) > 1e-12 * std::max(1.0, std::abs(want))) ++chain_bad;
  }
  const ShapeFunction linear = [](const std::vector<double>& v) { return v[0] + v[1]; };
  double zero_err = 0.0;
  for (int n = 1; n <= 8; ++n) zero_err = std::max(zero_err, std::abs(deterministic_equivalent_T(WeightField(2, n), linear) - 2.0));
  return {passage_bad == 0 && chain_bad == 0 && zero_err <= 1e-12,
          std::to_string(passage_bad) + " passage and " + std::to_string(chain_bad) +
              " chain mismatches, |T_n(0) - g(1,1)| = " + fmt("%.3g", zero_err)};
}

Measure1D free_conv_target(const Measure1D& nu) {
  std::vector<double> grid;
  for (int i = 0; i <= 1200; ++i) grid.push_back(-6.0 + 12.0 * i / 1200);
  const auto fc = free_conv_semicircle(nu, 1e-3, grid);
  double s = 0.0;
  for (double v : fc.density) s += v;
  std::vector<double> w;
  for (double v : fc.density) w.push_back(v / s);
  return Measure1D::probability(grid, w);
}

Outcome rate_ledger() {
  RateParams p;
  p.constant_c = 1.0;
  bool j_ok = rate_J(2.0, p) == 0.0;
  for (double x : {-3.0, 0.0, 1.9, 1.999999}) j_ok = j_ok && std::isinf(rate_J(x, p));

  const ShapeFunction exp_shape = [](const std::vector<double>& v) {
    const double s = std::sqrt(v[0]) + std::sqrt(v[1]);
    return s * s;
  };
  double slack = 0.0;
  for (double alpha : {0.25, 0.5, 0.9})
    for (int n : {2, 4, 6}) {
      WeightField spike(2, n);
      spike({n, n}) = 1.3;
      slack = std::max(slack, std::abs(rate_L_consistency(spike, exp_shape, alpha)));
    }

  const auto ens = WignerEnsemble::unit_variance(1.0);
  const auto target = free_conv_target(Measure1D::probability({-2.0, 2.0}, {0.5, 0.5}));
  const double want = std::min(ens.b, ens.a1 / 2.0) * std::pow(2.0, ens.alpha);
  const auto r = rate_I_variational(target, ens.alpha, ens, 16, 2e-3, 50, 0);
  const double ratio = r.value / want;
  return {j_ok && slack <= 1e-12 && std::abs(ratio - 1.0) <= 0.1,
          std::string("J ") + (j_ok ? "ok" : "WRONG") + ", L slack " + fmt("%.3g", slack) + ", variational " +
              fmt("%.4f", r.value) + " vs " + fmt("%.4f", want) + " (ratio " + fmt("%.4f", ratio) + ")"};
}

Outcome lpp_tail_trend() {
  const auto start = std::chrono::steady_clock::now();
  const double alpha = 0.5;
  const auto g = estimate_g(alpha, {1.0, 1.0}, 80, 400, 12012);
  ExperimentConfig cfg;
  cfg.functional = Functional::lpp_time;
  cfg.lpp_alpha = alpha;
  cfg.ns = {10, 20, 40};
  cfg.replicas = 4000;
  cfg.seed = 12013;
  const auto rows = tail_rate(cfg, g.mean + 1.0);
  bool ok = true;
  std::string detail = "g11_hat " + fmt("%.3f", g.mean) + ", rates";
  for (const auto& row : rows) {
    ok = ok && std::isfinite(row.rate) && row.rate >= 0.5 && row.rate <= 2.0;
    detail += " n=" + std::to_string(row.n) + ":" + fmt("%.3f", row.rate);
  }
  ok = ok && std::abs(std::log(rows.back().rate)) < std::abs(std::log(rows.front().rate));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {ok && secs < 600.0, detail + " (target 1, factor 2), " + fmt("%.1f", secs) + " s"};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome preset_determinism() {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "ldplab_acceptance";
  fs::create_directories(dir);
  int presets = 0, differing = 0, errors = 0;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(LDPLAB_PRESET_DIR))
    if (e.path().extension() == ".cfg") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    const auto stem = f.stem().string();
    const auto command = stem.substr(0, stem.find('_'));
    const auto a = dir / (stem + ".first"), b = dir / (stem + ".second");
    std::ostringstream out, err;
    const int ca = cli::run({"ldplab", command, "--config", f.string(), "--out", a.string()}, out, err);
    const int cb = cli::run({"ldplab", command, "--config", f.string(), "--out", b.string()}, out, err);
    ++presets;
    if (ca != 0 || cb != 0) ++errors;
    else if (slurp(a) != slurp(b)) ++differing;
  }
  return {presets > 0 && differing == 0 && errors == 0,
          std::to_string(presets) + " presets, " + std::to_string(differing) + " differ, " + std::to_string(errors) +
              " failed to run"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"free convolution identity", free_convolution_identity},
      {"inverse Stieltjes identity", inverse_stieltjes},
      {"spectral variation suites", spectral_variation},
      {"tau property for nu_1", tau_property},
      {"transport pushforward KS", transport_pushforward},
      {"Wigner limits at n = 400", wigner_limits},
      {"rank-one spike equivalent at n = 1000", bbp_equivalent},
      {"polynomial equivalent at n = 500", polynomial_equivalent},
      {"free moments", free_moments},
      {"last passage oracles", lpp_oracles},
      {"rate function ledger", rate_ledger},
      {"LPP tail-rate trend", lpp_tail_trend},
      {"preset determinism", preset_determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int passed = 0, run = 0;
  std::vector<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    ++run;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << id << " " << criteria[i].first << ": " << o.detail << std::endl;
    if (o.pass) ++passed;
    else failed.push_back(id);
  }
  bool unexpected = false;
  std::string known;
  for (int id : failed) {
    if (kKnownFailures.count(id)) known += (known.empty() ? "" : ", ") + std::to_string(id);
    else unexpected = true;
  }
  std::cout << passed << "/" << run << " criteria passed";
  if (!known.empty()) std::cout << "; documented failures: " << known;
  std::cout << std::endl;
  return unexpected ? 1 : 0;
}
