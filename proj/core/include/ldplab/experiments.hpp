#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ldplab/matrixlab.hpp"

namespace ldp {

/// Artifact version, as set by the build.
const char* version();

enum class Functional { esm_distance, largest_eig, trace_poly, lpp_time };

Functional parse_functional(const std::string& name);
std::string to_string(Functional f);

struct ExperimentConfig {
  Functional functional = Functional::largest_eig;
  WignerEnsemble ens = WignerEnsemble::unit_variance(1.0);
  double lpp_alpha = 0.5;       // mu_alpha weights for lpp_time
  int lpp_dim = 2;
  std::string poly = "x1^3";    // trace_poly
  std::vector<int> ns = {200};
  int replicas = 2000;
  std::vector<double> t_grid = {0.25, 0.5};
  double kappa = 1.0;
  std::uint64_t seed = 1;
  unsigned threads = 1;         // never affects results

  /// alpha of the underlying law: ens.alpha, or lpp_alpha for lpp_time.
  double alpha() const;
  /// Speed v(n): n^{1+a/2}, n^{a/2}, n^{a(1/2+1/d)} with d the degree of
  /// `poly`, or n^a.
  double speed(int n) const;
  /// Deterministic key=value text of every result-relevant field.
  std::string canonical() const;
  std::uint64_t hash() const;
  void validate() const;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t v);

/// The functional on replica r = 0..replicas-1 at size n, indexed by replica.
/// Replica r draws from stream r.
std::vector<double> replica_values(const ExperimentConfig& cfg, int n);

/// One JSON object per replica: {"config_hash", "seed", "stream", "n",
/// "functional", "value"}.
void write_replica_records(std::ostream& out, const std::string& config_hash, const ExperimentConfig& cfg, int n,
                           const std::vector<double>& values);

double median(std::vector<double> values);

/// k_alpha(t) for the spectral measure and h_alpha(t) for the top
/// eigenvalue, with the log factors of the alpha < 1 branches.
double k_alpha(double t, int n, double alpha, double kappa);
double h_alpha(double t, int n, double alpha, double kappa);

struct ConcentrationRow {
  int n = 0;
  double t = 0.0;
  double exceedance = 0.0;   // P(|f - median| > t)
  double stderr_ = 0.0;
  double shape = 0.0;        // k_alpha(t) or h_alpha(t)
  double bound = 0.0;        // exp(-c_hat * shape)
};

struct ConcentrationAudit {
  std::vector<ConcentrationRow> rows;
  std::vector<double> c_hat;  // per n: the largest c with exceedance <= exp(-c shape) on the grid
};

ConcentrationAudit concentration_audit(const ExperimentConfig& cfg);

enum class ErrorKind { esm, eig, poly, lpp };
ErrorKind parse_error_kind(const std::string& name);

struct ErrorRow {
  int n = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Deformation strength theta: H = theta e1 e1^T for esm/eig/poly (on the
/// first letter), or theta at the far corner of the lattice for lpp.
struct ErrorCurveOptions {
  double theta = 0.0;
  int shape_grid = 2;        // lpp: LimitShape grid
  int shape_n = 0;           // lpp: LimitShape lattice size, 0 = 2 * max n
  int shape_replicas = 200;
};

std::vector<ErrorRow> equivalent_error_curve(ErrorKind kind, const ExperimentConfig& cfg,
                                             const ErrorCurveOptions& opt = {});

struct LppRow {
  int n = 0;
  double T = 0.0;          // replica mean of T((X + nH)^+)/n
  double T_stderr = 0.0;
  double T_det = 0.0;      // T_n(H) under the Monte Carlo limit shape
  double g11_hat = 0.0;
  double g11_stderr = 0.0;
};

/// Passage times with the corner spike opt.theta against their deterministic
/// equivalent, for lpp_alpha and lpp_dim of `cfg` at every n.
std::vector<LppRow> lpp_equivalent(const ExperimentConfig& cfg, const ErrorCurveOptions& opt = {});

struct TailRow {
  int n = 0;
  int hits = 0;
  int replicas = 0;
  double p_hat = 0.0;
  double rate = 0.0;      // -log p_hat / v(n); +inf when no hits
  double rate_lo = 0.0;   // from the upper Wilson limit
  double rate_hi = 0.0;   // from the lower Wilson limit (+inf when it is 0)
  bool one_sided = false;
};

/// 95% Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(int hits, int trials, double z = 1.959963984540054);

std::vector<TailRow> tail_rate(const ExperimentConfig& cfg, double x);

/// Greedy eps-nets of B_{l^p} in the l^q metric in dimension m. eps values
/// are processed in descending order, each net extending the previous one;
/// sizes are returned in the input order.
std::vector<int> greedy_net(double p, double q, const std::vector<double>& eps, int m, int trials,
                            std::uint64_t seed);

/// "# ldplab <version> config=<hash>".
std::string header_line(const std::string& config_hash);

/// Summary CSV writers. `header` is written first, verbatim, followed by a
/// newline; header_line(hex64(cfg.hash())) is the usual choice.
void write_concentration_csv(std::ostream& out, const std::string& header, const ConcentrationAudit& a);
void write_error_csv(std::ostream& out, const std::string& header, const std::vector<ErrorRow>& rows);
void write_tail_csv(std::ostream& out, const std::string& header, const std::vector<TailRow>& rows);

/// "inf", "-inf", "nan" or %.17g.
std::string format_real(double v);

}  // namespace ldp
