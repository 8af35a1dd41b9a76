#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ldplab/matrixlab.hpp"

namespace ldp {

using Word = std::vector<int>;  // letters 1..p

struct Monomial {
  std::complex<double> coef;
  Word word;
};

/// Polynomial in p non-commuting self-adjoint variables. Words are capped at
/// 16 letters.
class NCPolynomial {
 public:
  static constexpr std::size_t kMaxWord = 16;

  NCPolynomial() = default;
  explicit NCPolynomial(std::vector<Monomial> terms);

  /// Parses "coeff * x1 x2 x1 + x1^2 - 0.5": terms joined by '+' or '-',
  /// optional coefficient (real, or "(re,im)") followed by '*', letters written
  /// x<k> or s<k> with an optional integer power.
  static NCPolynomial parse(const std::string& text);
  /// c * s_letter^power.
  static NCPolynomial power(int letter, int power, std::complex<double> c = 1.0);

  void add(std::complex<double> coef, Word word);
  const std::vector<Monomial>& terms() const { return terms_; }
  int letters() const { return letters_; }
  std::size_t degree() const;
  NCPolynomial operator+(const NCPolynomial& other) const;
  std::string to_string() const;

 private:
  std::vector<Monomial> terms_;
  int letters_ = 0;
};

/// Number of non-crossing pair partitions of the positions of `word` that
/// only pair equal letters (the free semicircular moment of the word).
long long noncrossing_pairings(const Word& word);

/// tau[P(s)] for a free semicircular family, as a complex number.
std::complex<double> tau_semicircular_complex(const NCPolynomial& p);
/// Real part of tau[P(s)].
double tau_semicircular(const NCPolynomial& p);

/// Monomials whose word has exactly k letters.
NCPolynomial homogeneous_part(const NCPolynomial& p, std::size_t k);

/// tr P(A_1, ..., A_p), divided by n when `normalize`. Real part.
double eval_trace(const NCPolynomial& p, const std::vector<HermitianMatrix>& mats, bool normalize = true);
std::complex<double> eval_trace_complex(const NCPolynomial& p, const std::vector<HermitianMatrix>& mats,
                                        bool normalize = true);

/// tau[P(s)] + tr P_d(H), d the degree of P, trace unnormalized.
double deterministic_equivalent_poly(const NCPolynomial& p, const std::vector<HermitianMatrix>& h);

}  // namespace ldp
