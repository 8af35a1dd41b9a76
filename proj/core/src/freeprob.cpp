#include "ldplab/freeprob.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <type_traits>

#include "ldplab/errors.hpp"

namespace ldp {

NCPolynomial::NCPolynomial(std::vector<Monomial> terms) {
  for (auto& t : terms) add(t.coef, std::move(t.word));
}

void NCPolynomial::add(std::complex<double> coef, Word word) {
  require(word.size() <= kMaxWord, "NCPolynomial: words are limited to 16 letters");
  for (int l : word) {
    require(l >= 1, "NCPolynomial: letters are numbered from 1");
    letters_ = std::max(letters_, l);
  }
  for (auto& t : terms_) {
    if (t.word == word) {
      t.coef += coef;
      return;
    }
  }
  terms_.push_back({coef, std::move(word)});
}

NCPolynomial NCPolynomial::power(int letter, int power, std::complex<double> c) {
  require(power >= 0, "NCPolynomial::power: negative power");
  NCPolynomial p;
  p.add(c, Word(static_cast<std::size_t>(power), letter));
  return p;
}

std::size_t NCPolynomial::degree() const {
  std::size_t d = 0;
  for (const auto& t : terms_)
    if (t.coef != 0.0) d = std::max(d, t.word.size());
  return d;
}

NCPolynomial NCPolynomial::operator+(const NCPolynomial& other) const {
  NCPolynomial out = *this;
  for (const auto& t : other.terms_) out.add(t.coef, t.word);
  return out;
}

std::string NCPolynomial::to_string() const {
  std::string s;
  char buf[96];
  for (const auto& t : terms_) {
    if (!s.empty()) s += " + ";
    if (t.coef.imag() == 0.0) std::snprintf(buf, sizeof buf, "%.17g", t.coef.real());
    else std::snprintf(buf, sizeof buf, "(%.17g,%.17g)", t.coef.real(), t.coef.imag());
    s += buf;
    if (!t.word.empty()) s += " *";
    for (int l : t.word) s += " x" + std::to_string(l);
  }
  return s.empty() ? "0" : s;
}

namespace {

// Recursive-descent reader over: poly := ['+'|'-'] term (('+'|'-') term)*
//                                 term := [coef '*'] factor* | coef
//                                 factor := ('x'|'s') int ['^' int]
class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NCPolynomial poly() {
    NCPolynomial p;
    skip();
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = get() == '-' ? -1.0 : 1.0;
    }
    for (;;) {
      term(p, sign);
      skip();
      if (pos_ >= s_.size()) break;
      const char c = get();
      require(c == '+' || c == '-', "NCPolynomial::parse: expected '+' or '-' at position " + std::to_string(pos_));
      sign = c == '-' ? -1.0 : 1.0;
    }
    return p;
  }

 private:
  void term(NCPolynomial& p, double sign) {
    skip();
    if (peek() == '-' || peek() == '+') {
      if (get() == '-') sign = -sign;
      skip();
    }
    std::complex<double> coef = 1.0;
    bool have_coef = false;
    if (peek() == '(' || std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      coef = number();
      have_coef = true;
      skip();
      if (peek() == '*') {
        ++pos_;
      } else {
        // A bare constant.
        require(!is_letter(peek()), "NCPolynomial::parse: missing '*' after coefficient");
        p.add(sign * coef, {});
        return;
      }
    }
    Word w;
    skip();
    while (is_letter(peek())) {
      ++pos_;
      const int letter = integer();
      int pw = 1;
      skip();
      if (peek() == '^') {
        ++pos_;
        skip();
        pw = integer();
      }
      for (int k = 0; k < pw; ++k) w.push_back(letter);
      skip();
    }
    require(have_coef || !w.empty(), "NCPolynomial::parse: empty term at position " + std::to_string(pos_));
    p.add(sign * coef, std::move(w));
  }

  std::complex<double> number() {
    if (peek() == '(') {
      ++pos_;
      const double re = real();
      skip();
      require(get() == ',', "NCPolynomial::parse: expected ',' in complex coefficient");
      const double im = real();
      skip();
      require(get() == ')', "NCPolynomial::parse: expected ')' in complex coefficient");
      return {re, im};
    }
    return real();
  }

  double real() {
    skip();
    const char* start = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    require(end != start, "NCPolynomial::parse: expected a number at position " + std::to_string(pos_));
    pos_ += static_cast<std::size_t>(end - start);
    return v;
  }

  int integer() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    require(pos_ > start, "NCPolynomial::parse: expected an integer at position " + std::to_string(start));
    return std::stoi(s_.substr(start, pos_ - start));
  }

  static bool is_letter(char c) { return c == 'x' || c == 's'; }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char get() { return pos_ < s_.size() ? s_[pos_++] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

NCPolynomial NCPolynomial::parse(const std::string& text) { return Parser(text).poly(); }

long long noncrossing_pairings(const Word& word) {
  const std::size_t n = word.size();
  if (n % 2 == 1) return 0;
  if (n == 0) return 1;
  // count[i][j]: pairings of positions [i, j).
  std::vector<std::vector<long long>> count(n + 1, std::vector<long long>(n + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) count[i][i] = 1;
  for (std::size_t len = 2; len <= n; len += 2)
    for (std::size_t i = 0; i + len <= n; ++i) {
      const std::size_t j = i + len;
      long long c = 0;
      // Position i pairs with k; the inside and the outside split.
      for (std::size_t k = i + 1; k < j; k += 2)
        if (word[k] == word[i]) c += count[i + 1][k] * count[k + 1][j];
      count[i][j] = c;
    }
  return count[0][n];
}

std::complex<double> tau_semicircular_complex(const NCPolynomial& p) {
  std::complex<double> s = 0.0;
  for (const auto& t : p.terms()) s += t.coef * static_cast<double>(noncrossing_pairings(t.word));
  return s;
}

double tau_semicircular(const NCPolynomial& p) { return tau_semicircular_complex(p).real(); }

NCPolynomial homogeneous_part(const NCPolynomial& p, std::size_t k) {
  NCPolynomial out;
  for (const auto& t : p.terms())
    if (t.word.size() == k) out.add(t.coef, t.word);
  return out;
}

namespace {

template <class T>
using Dense = std::vector<T>;

template <class T>
Dense<T> to_dense(const HermitianMatrix& a) {
  const std::size_t n = a.size();
  Dense<T> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if constexpr (std::is_same_v<T, double>) m[i * n + j] = a(i, j).real();
      else m[i * n + j] = a(i, j);
    }
  return m;
}

template <class T>
Dense<T> multiply(const Dense<T>& a, const Dense<T>& b, std::size_t n) {
  Dense<T> c(n * n, T(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const T aik = a[i * n + k];
      if (aik == T(0)) continue;
      const T* bk = &b[k * n];
      T* ci = &c[i * n];
      for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  return c;
}

template <class T>
Dense<T> product(const std::vector<Dense<T>>& mats, const int* first, const int* last, std::size_t n) {
  Dense<T> acc = mats[static_cast<std::size_t>(*first - 1)];
  for (const int* l = first + 1; l != last; ++l) acc = multiply(acc, mats[static_cast<std::size_t>(*l - 1)], n);
  return acc;
}

template <class T>
std::complex<double> trace_poly(const NCPolynomial& p, const std::vector<HermitianMatrix>& mats) {
  const std::size_t n = mats.front().size();
  std::vector<Dense<T>> dense;
  for (const auto& m : mats) dense.push_back(to_dense<T>(m));
  std::complex<double> total = 0.0;
  for (const auto& t : p.terms()) {
    const auto& w = t.word;
    std::complex<double> tr = 0.0;
    if (w.empty()) {
      tr = static_cast<double>(n);
    } else if (w.size() == 1) {
      const auto& a = dense[static_cast<std::size_t>(w[0] - 1)];
      for (std::size_t i = 0; i < n; ++i) tr += a[i * n + i];
    } else {
      // tr(L R) = sum_ij L_ij R_ji with the word split in halves.
      const std::size_t half = w.size() / 2;
      const auto left = product(dense, w.data(), w.data() + half, n);
      const auto right = product(dense, w.data() + half, w.data() + w.size(), n);
      T s = T(0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s += left[i * n + j] * right[j * n + i];
      tr = s;
    }
    total += t.coef * tr;
  }
  return total;
}

}  // namespace

std::complex<double> eval_trace_complex(const NCPolynomial& p, const std::vector<HermitianMatrix>& mats,
                                        bool normalize) {
  require(!mats.empty(), "eval_trace: no matrices");
  require(static_cast<std::size_t>(p.letters()) <= mats.size(), "eval_trace: polynomial uses more letters than matrices");
  const std::size_t n = mats.front().size();
  bool real = true;
  for (const auto& m : mats) {
    require(m.size() == n, "eval_trace: matrices must share one dimension");
    real = real && m.beta() == 1;
  }
  const auto tr = real ? trace_poly<double>(p, mats) : trace_poly<std::complex<double>>(p, mats);
  return normalize ? tr / static_cast<double>(n) : tr;
}

double eval_trace(const NCPolynomial& p, const std::vector<HermitianMatrix>& mats, bool normalize) {
  return eval_trace_complex(p, mats, normalize).real();
}

double deterministic_equivalent_poly(const NCPolynomial& p, const std::vector<HermitianMatrix>& h) {
  const auto top = homogeneous_part(p, p.degree());
  return tau_semicircular(p) + eval_trace(top, h, false);
}

}  // namespace ldp
