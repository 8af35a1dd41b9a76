#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldplab/freeprob.hpp"
#include "ldplab/matrixlab.hpp"
#include "ldplab/specmeasures.hpp"

namespace ldp {

/// Constants entering the explicit rate functions. Values not relevant to a
/// given rate may stay at their defaults.
struct RateParams {
  double alpha = 1.0;
  double b = 1.0;
  double a1 = 1.0;
  double a2 = 1.0;
  double constant_c = 0.0;   // J
  double c1 = 0.0;           // K, above tauP
  double c_minus1 = 0.0;     // K, below tauP
  double tauP = 0.0;
  double g11 = 0.0;          // L
  int d = 1;                 // polynomial degree for K

  void validate() const;
};

/// c g_sc(x)^{-alpha} above 2, 0 at 2, +inf below.
double rate_J(double x, const RateParams& p);
/// c1 (x - tauP)^{alpha/d} above tauP, c_{-1} |x - tauP|^{alpha/d} below.
double rate_K(double x, const RateParams& p);
/// (x - g11)^alpha for x >= g11, +inf otherwise.
double rate_L(double x, const RateParams& p);

/// min(b, a/2) sum w |x|^alpha for a symmetric nu. `a` defaults to a1.
double rate_I_symmetric(const Measure1D& nu, const RateParams& p, std::optional<double> a = std::nullopt);

struct ConstantEstimate {
  double value = 0.0;  // upper bound estimate
  std::vector<HermitianMatrix> argmin;
};

/// Local search for inf { W(A) : lambda_max(A) = 1 } over n <= n_max,
/// normalizing by lambda_max after each step. Restart r at size n uses RNG
/// stream (n << 32) + r.
ConstantEstimate optimize_constant_c(double alpha, const WignerEnsemble& ens, int n_max, int restarts,
                                     std::uint64_t seed = 0);

/// Local search for inf { sum_i W(H_i) : tr P_d(H) = sigma } over n <= n_max,
/// using tr P_d(tH) = t^d tr P_d(H). value = +inf when no tested matrix
/// reaches the sign of sigma.
ConstantEstimate optimize_constant_csigma(double alpha, const WignerEnsemble& ens, const NCPolynomial& pd, int sigma,
                                          int n_max, int restarts, std::uint64_t seed = 0);

struct VariationalResult {
  double value = 0.0;           // upper bound estimate, +inf when nothing feasible
  double distance = 0.0;        // d at the returned matrix
  HermitianMatrix argmin;
  int feasible_restarts = 0;
  std::string diagnostic;
};

/// Upper bound estimate of inf { W(H) : d(mu_sc boxplus mu_{n^{1/alpha} H}, target) < delta }.
/// H ranges over matrices made of 2x2 blocks on the pairs (0,1), (2,3), ...
/// followed by a diagonal tail; restart r uses r mod (n/2 + 1) blocks.
VariationalResult rate_I_variational(const Measure1D& target, double alpha, const WignerEnsemble& ens, int n,
                                     double delta, int restarts = 50, std::uint64_t seed = 0);

}  // namespace ldp
