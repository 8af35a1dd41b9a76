#include "ldplab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "json.hpp"
#include "ldplab/errors.hpp"
#include "ldplab/freeprob.hpp"
#include "ldplab/lpp.hpp"
#include "ldplab/measures.hpp"
#include "ldplab/numerics.hpp"
#include "ldplab/specmeasures.hpp"

#ifndef LDPLAB_VERSION
#define LDPLAB_VERSION "0.0.0"
#endif

namespace ldp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kLetterKey = 0x9E3779B97F4A7C15ULL;

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string join_reals(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_real(v[i]);
  return s;
}
}  // namespace

const char* version() { return LDPLAB_VERSION; }

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Functional parse_functional(const std::string& name) {
  if (name == "esm_distance") return Functional::esm_distance;
  if (name == "largest_eig") return Functional::largest_eig;
  if (name == "trace_poly") return Functional::trace_poly;
  if (name == "lpp_time") return Functional::lpp_time;
  throw DomainError("unknown functional '" + name + "'");
}

std::string to_string(Functional f) {
  switch (f) {
    case Functional::esm_distance: return "esm_distance";
    case Functional::largest_eig: return "largest_eig";
    case Functional::trace_poly: return "trace_poly";
    case Functional::lpp_time: return "lpp_time";
  }
  return "?";
}

ErrorKind parse_error_kind(const std::string& name) {
  if (name == "esm") return ErrorKind::esm;
  if (name == "eig") return ErrorKind::eig;
  if (name == "poly") return ErrorKind::poly;
  if (name == "lpp") return ErrorKind::lpp;
  throw DomainError("unknown error-curve kind '" + name + "'");
}

double ExperimentConfig::alpha() const { return functional == Functional::lpp_time ? lpp_alpha : ens.alpha; }

double ExperimentConfig::speed(int n) const {
  const double a = alpha(), nn = n;
  switch (functional) {
    case Functional::esm_distance: return std::pow(nn, 1.0 + a / 2.0);
    case Functional::largest_eig: return std::pow(nn, a / 2.0);
    case Functional::trace_poly: {
      const double d = static_cast<double>(NCPolynomial::parse(poly).degree());
      return std::pow(nn, a * (0.5 + 1.0 / d));
    }
    case Functional::lpp_time: return std::pow(nn, a);
  }
  return 0.0;
}

std::string ExperimentConfig::canonical() const {
  std::string s;
  s += "functional=" + to_string(functional) + "\n";
  s += "alpha=" + format_real(ens.alpha) + "\n";
  s += "beta=" + std::to_string(ens.beta) + "\n";
  s += "b=" + format_real(ens.b) + "\n";
  s += "a1=" + format_real(ens.a1) + "\n";
  s += "a2=" + format_real(ens.a2) + "\n";
  s += "lpp_alpha=" + format_real(lpp_alpha) + "\n";
  s += "lpp_dim=" + std::to_string(lpp_dim) + "\n";
  s += "poly=" + poly + "\n";
  s += "n=" + join_ints(ns) + "\n";
  s += "replicas=" + std::to_string(replicas) + "\n";
  s += "t=" + join_reals(t_grid) + "\n";
  s += "kappa=" + format_real(kappa) + "\n";
  s += "seed=" + std::to_string(seed) + "\n";
  return s;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a(canonical()); }

void ExperimentConfig::validate() const {
  ens.validate();
  require(!ns.empty(), "experiment: empty n list");
  for (int n : ns) require(n >= 1, "experiment: every n must be positive");
  require(replicas >= 1, "experiment: replicas must be positive");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    require(t_grid[i] > 0.0, "experiment: t grid must be positive");
    require(i == 0 || t_grid[i] > t_grid[i - 1], "experiment: t grid must be increasing");
  }
  require(kappa > 0.0, "experiment: kappa must be positive");
  if (functional == Functional::lpp_time) {
    require(lpp_alpha > 0.0 && lpp_alpha < 1.0, "experiment: lpp alpha must lie in (0, 1)");
    require(lpp_dim == 2 || lpp_dim == 3, "experiment: lpp dimension must be 2 or 3");
  }
  if (functional == Functional::trace_poly) require(NCPolynomial::parse(poly).degree() >= 1, "experiment: constant polynomial");
}

namespace {

// Wigner letters: letter 1 keyed by seed, letter l by seed + (l - 1) * key.
std::vector<HermitianMatrix> wigner_letters(const ExperimentConfig& cfg, int letters, int n, std::uint64_t r) {
  std::vector<HermitianMatrix> m;
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (int l = 0; l < letters; ++l)
    m.push_back(sample_wigner(cfg.ens, static_cast<std::size_t>(n), cfg.seed + kLetterKey * static_cast<std::uint64_t>(l), r)
                    .scaled(s));
  return m;
}

double contour_distance(const std::vector<double>& eigenvalues, const std::vector<cplx>& reference) {
  const auto mu = Measure1D::uniform(eigenvalues);
  const auto& nodes = StieltjesContour::standard().nodes();
  double d = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) d = std::max(d, std::abs(stieltjes(mu, nodes[i]) - reference[i]));
  return d;
}

std::vector<cplx> semicircle_on_contour() {
  std::vector<cplx> g;
  for (const auto& z : StieltjesContour::standard().nodes()) g.push_back(g_semicircle(z));
  return g;
}

}  // namespace

std::vector<double> replica_values(const ExperimentConfig& cfg, int n) {
  cfg.validate();
  std::vector<double> out(static_cast<std::size_t>(cfg.replicas));
  const auto sc = semicircle_on_contour();
  const NCPolynomial p = cfg.functional == Functional::trace_poly ? NCPolynomial::parse(cfg.poly) : NCPolynomial();
  const AlphaLaw law = AlphaLaw::mu(cfg.functional == Functional::lpp_time ? cfg.lpp_alpha : 0.5);
  parallel_for(out.size(), cfg.threads, [&](std::size_t r) {
    switch (cfg.functional) {
      case Functional::esm_distance:
        out[r] = contour_distance(spectrum(wigner_letters(cfg, 1, n, r)[0]), sc);
        break;
      case Functional::largest_eig:
        out[r] = largest_eigenvalue(wigner_letters(cfg, 1, n, r)[0]);
        break;
      case Functional::trace_poly:
        out[r] = eval_trace(p, wigner_letters(cfg, p.letters(), n, r));
        break;
      case Functional::lpp_time:
        out[r] = last_passage(WeightField::sample(cfg.lpp_dim, n, law, cfg.seed, r)) / n;
        break;
    }
  });
  return out;
}

void write_replica_records(std::ostream& out, const std::string& config_hash, const ExperimentConfig& cfg, int n,
                           const std::vector<double>& values) {
  for (std::size_t r = 0; r < values.size(); ++r) {
    nlohmann::ordered_json j;
    j["config_hash"] = config_hash;
    j["seed"] = cfg.seed;
    j["stream"] = r;
    j["n"] = n;
    j["functional"] = to_string(cfg.functional);
    j["value"] = format_real(values[r]);
    out << j.dump() << '\n';
  }
}

double median(std::vector<double> values) {
  require(!values.empty(), "median: empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

double k_alpha(double t, int n, double alpha, double kappa) {
  require(n >= 2 && t >= 0.0 && alpha > 0.0 && alpha <= 2.0 && kappa > 0.0, "k_alpha: bad arguments");
  const double nn = n;
  if (alpha >= 1.0)
    return std::min(nn * nn * t * t / (kappa * kappa), std::pow(nn, 1.0 + alpha / 2.0) * std::pow(t / kappa, alpha));
  const double l = std::pow(std::log(nn), 2.0 * (1.0 / alpha - 1.0));
  return std::min(nn * nn * t * t / (kappa * kappa * l), std::pow(nn, 1.0 + alpha / 2.0) * t / kappa);
}

double h_alpha(double t, int n, double alpha, double kappa) {
  require(n >= 2 && t >= 0.0 && alpha > 0.0 && alpha <= 2.0 && kappa > 0.0, "h_alpha: bad arguments");
  const double nn = n;
  const double heavy = std::pow(t / kappa, alpha) * std::pow(nn, alpha / 2.0);
  if (alpha >= 1.0) return std::min(t * t * nn / (kappa * kappa), heavy);
  const double l = std::pow(std::log(nn), 1.0 / alpha - 1.0);
  return std::min({t * t * nn / (kappa * kappa * l * l), t * std::sqrt(nn) / (kappa * l), heavy});
}

ConcentrationAudit concentration_audit(const ExperimentConfig& cfg) {
  require(cfg.functional == Functional::esm_distance || cfg.functional == Functional::largest_eig,
          "concentration_audit: functional must be esm_distance or largest_eig");
  ConcentrationAudit audit;
  for (int n : cfg.ns) {
    const auto v = replica_values(cfg, n);
    const double med = median(v);
    const double R = static_cast<double>(v.size());
    std::vector<ConcentrationRow> rows;
    double c = kInf;
    for (double t : cfg.t_grid) {
      ConcentrationRow row;
      row.n = n;
      row.t = t;
      const auto hits = std::count_if(v.begin(), v.end(), [&](double x) { return std::abs(x - med) > t; });
      row.exceedance = static_cast<double>(hits) / R;
      row.stderr_ = std::sqrt(row.exceedance * (1.0 - row.exceedance) / R);
      row.shape = cfg.functional == Functional::esm_distance ? k_alpha(t, n, cfg.ens.alpha, cfg.kappa)
                                                             : h_alpha(t, n, cfg.ens.alpha, cfg.kappa);
      if (row.exceedance > 0.0) c = std::min(c, -std::log(row.exceedance) / row.shape);
      rows.push_back(row);
    }
    for (auto& row : rows) {
      row.bound = std::isinf(c) ? 0.0 : std::exp(-c * row.shape);
      audit.rows.push_back(row);
    }
    audit.c_hat.push_back(c);
  }
  return audit;
}

namespace {

ErrorRow summarize(int n, const std::vector<double>& e) {
  const double R = static_cast<double>(e.size());
  const double mean = std::accumulate(e.begin(), e.end(), 0.0) / R;
  double var = 0.0;
  for (double x : e) var += (x - mean) * (x - mean);
  var = e.size() > 1 ? var / (R - 1.0) : 0.0;
  return {n, mean, std::sqrt(var / R)};
}

// Corner spike theta at (n, ..., n). With `errors`, T and T_stderr summarize
// |T((X + nH)^+)/n - T_n(H)| instead of the passage time itself.
std::vector<LppRow> lpp_rows(const ExperimentConfig& cfg, const ErrorCurveOptions& opt, bool errors) {
  require(opt.theta >= 0.0, "lpp: corner spike must be nonnegative");
  require(cfg.lpp_alpha > 0.0 && cfg.lpp_alpha < 1.0, "lpp: alpha must lie in (0, 1)");
  require(cfg.lpp_dim == 2 || cfg.lpp_dim == 3, "lpp: dimension must be 2 or 3");
  const int shape_n = opt.shape_n > 0 ? opt.shape_n : 2 * *std::max_element(cfg.ns.begin(), cfg.ns.end());
  const LimitShape shape(cfg.lpp_alpha, cfg.lpp_dim, opt.shape_grid, shape_n, opt.shape_replicas,
                         cfg.seed + kLetterKey, cfg.threads);
  const auto g = shape.function();
  const AlphaLaw law = AlphaLaw::mu(cfg.lpp_alpha);
  std::vector<LppRow> rows;
  for (int n : cfg.ns) {
    WeightField h(cfg.lpp_dim, n);
    h[h.size() - 1] = opt.theta;
    const double t_det = deterministic_equivalent_T(h, g);
    std::vector<double> t(static_cast<std::size_t>(cfg.replicas));
    parallel_for(t.size(), cfg.threads, [&](std::size_t r) {
      const double v = deformed_passage_time(WeightField::sample(cfg.lpp_dim, n, law, cfg.seed, r), h);
      t[r] = errors ? std::abs(v - t_det) : v;
    });
    const auto s = summarize(n, t);
    rows.push_back({n, s.mean, s.stderr_, t_det, shape.g11(), shape.g11_stderr()});
  }
  return rows;
}

}  // namespace

std::vector<LppRow> lpp_equivalent(const ExperimentConfig& cfg, const ErrorCurveOptions& opt) {
  cfg.validate();
  return lpp_rows(cfg, opt, false);
}

std::vector<ErrorRow> equivalent_error_curve(ErrorKind kind, const ExperimentConfig& cfg_in,
                                             const ErrorCurveOptions& opt) {
  ExperimentConfig cfg = cfg_in;
  cfg.validate();
  std::vector<ErrorRow> rows;
  const double theta = opt.theta;

  if (kind == ErrorKind::lpp) {
    for (const auto& r : lpp_rows(cfg, opt, true)) rows.push_back({r.n, r.T, r.T_stderr});
    return rows;
  }

  const NCPolynomial p = NCPolynomial::parse(kind == ErrorKind::poly ? cfg.poly : "x1");
  const auto d = static_cast<double>(p.degree());
  for (int n : cfg.ns) {
    const auto nn = static_cast<std::size_t>(n);
    HermitianMatrix spike(nn, cfg.ens.beta);
    spike.set(0, 0, theta);
    std::vector<cplx> reference;
    if (kind == ErrorKind::esm) {
      std::vector<double> atoms(nn, 0.0);
      atoms[0] = theta;
      const auto mu_h = Measure1D::uniform(atoms);
      for (const auto& z : StieltjesContour::standard().nodes()) reference.push_back(free_conv_semicircle_at(mu_h, z).g);
    }
    double limit = 0.0;
    if (kind == ErrorKind::poly) {
      std::vector<HermitianMatrix> hs(static_cast<std::size_t>(p.letters()), HermitianMatrix::zero(nn, cfg.ens.beta));
      hs[0] = spike;
      limit = deterministic_equivalent_poly(p, hs);
    }
    std::vector<double> e(static_cast<std::size_t>(cfg.replicas));
    parallel_for(e.size(), cfg.threads, [&](std::size_t r) {
      auto x = wigner_letters(cfg, kind == ErrorKind::poly ? p.letters() : 1, n, r);
      switch (kind) {
        case ErrorKind::esm:
          e[r] = contour_distance(spectrum(x[0] + spike), reference);
          break;
        case ErrorKind::eig:
          e[r] = std::abs(largest_eigenvalue(x[0] + spike) - rho(theta));
          break;
        case ErrorKind::poly:
          x[0] = x[0] + spike.scaled(std::pow(static_cast<double>(n), 1.0 / d));
          e[r] = std::abs(eval_trace(p, x) - limit);
          break;
        case ErrorKind::lpp:
          break;
      }
    });
    rows.push_back(summarize(n, e));
  }
  return rows;
}

std::pair<double, double> wilson_interval(int hits, int trials, double z) {
  require(trials >= 1 && hits >= 0 && hits <= trials, "wilson_interval: bad counts");
  const double nn = trials, p = hits / nn, z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {hits == 0 ? 0.0 : std::max(0.0, center - half), hits == trials ? 1.0 : std::min(1.0, center + half)};
}

std::vector<TailRow> tail_rate(const ExperimentConfig& cfg, double x) {
  std::vector<TailRow> rows;
  for (int n : cfg.ns) {
    const auto v = replica_values(cfg, n);
    TailRow row;
    row.n = n;
    row.replicas = static_cast<int>(v.size());
    row.hits = static_cast<int>(std::count_if(v.begin(), v.end(), [&](double f) { return f > x; }));
    row.p_hat = static_cast<double>(row.hits) / row.replicas;
    const double speed = cfg.speed(n);
    const auto [lo, hi] = wilson_interval(row.hits, row.replicas);
    row.rate = row.hits ? -std::log(row.p_hat) / speed : kInf;
    row.rate_lo = -std::log(hi) / speed;
    row.rate_hi = lo > 0.0 ? -std::log(lo) / speed : kInf;
    row.one_sided = row.hits == 0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<int> greedy_net(double p, double q, const std::vector<double>& eps, int m, int trials,
                            std::uint64_t seed) {
  require(p > 0.0 && p <= 2.0 && q > p, "greedy_net: need 0 < p <= 2 and q > p");
  require(m >= 1 && trials >= 1, "greedy_net: m and trials must be positive");
  for (double e : eps) require(e > 0.0, "greedy_net: eps must be positive");
  const AlphaLaw law = AlphaLaw::nu(p);
  Philox rng(seed);
  const auto um = static_cast<std::size_t>(m);
  auto probe = [&]() {
    std::vector<double> x(um);
    double norm = 0.0;
    for (auto& v : x) {
      v = law.draw(rng);
      norm += std::pow(std::abs(v), p);
    }
    const double r = std::pow(rng.uniform(), 1.0 / m) / std::pow(norm, 1.0 / p);
    for (auto& v : x) v *= r;
    return x;
  };
  auto dist = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < um; ++i) s += std::pow(std::abs(a[i] - b[i]), q);
    return std::pow(s, 1.0 / q);
  };

  std::vector<std::size_t> order(eps.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return eps[a] > eps[b]; });
  std::vector<std::vector<double>> centers;
  std::vector<int> sizes(eps.size());
  constexpr std::size_t kMaxCenters = 200000;
  for (std::size_t idx : order) {
    const double e = eps[idx];
    int covered = 0;
    while (covered < trials) {
      const auto x = probe();
      const bool hit = std::any_of(centers.begin(), centers.end(), [&](const auto& c) { return dist(x, c) <= e; });
      if (hit) {
        ++covered;
      } else {
        centers.push_back(x);
        covered = 0;
        if (centers.size() > kMaxCenters) throw NumericalError("greedy_net: net exceeds 200000 centers");
      }
    }
    sizes[idx] = static_cast<int>(centers.size());
  }
  return sizes;
}

std::string header_line(const std::string& config_hash) {
  return std::string("# ldplab ") + version() + " config=" + config_hash;
}

void write_concentration_csv(std::ostream& out, const std::string& header, const ConcentrationAudit& a) {
  out << header << '\n' << "n,t,exceedance,stderr,shape,bound,c_hat\n";
  std::size_t block = 0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& r = a.rows[i];
    if (i > 0 && r.n != a.rows[i - 1].n) ++block;
    out << r.n << ',' << format_real(r.t) << ',' << format_real(r.exceedance) << ',' << format_real(r.stderr_) << ','
        << format_real(r.shape) << ',' << format_real(r.bound) << ',' << format_real(a.c_hat[block]) << '\n';
  }
}

void write_error_csv(std::ostream& out, const std::string& header, const std::vector<ErrorRow>& rows) {
  out << header << '\n' << "n,mean_error,stderr\n";
  for (const auto& r : rows) out << r.n << ',' << format_real(r.mean) << ',' << format_real(r.stderr_) << '\n';
}

void write_tail_csv(std::ostream& out, const std::string& header, const std::vector<TailRow>& rows) {
  out << header << '\n' << "n,hits,replicas,p_hat,rate,rate_lo,rate_hi,one_sided\n";
  for (const auto& r : rows)
    out << r.n << ',' << r.hits << ',' << r.replicas << ',' << format_real(r.p_hat) << ',' << format_real(r.rate) << ','
        << format_real(r.rate_lo) << ',' << format_real(r.rate_hi) << ',' << (r.one_sided ? 1 : 0) << '\n';
}

}  // namespace ldp
