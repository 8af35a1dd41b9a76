#include "ldplab/lpp.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "ldplab/errors.hpp"
#include "ldplab/numerics.hpp"

namespace ldp {

namespace {

constexpr int kMaxN2 = 200;
constexpr int kMaxN3 = 60;

std::size_t box_volume(const std::vector<int>& dims) {
  std::size_t v = 1;
  for (int k : dims) v *= static_cast<std::size_t>(k);
  return v;
}

// Last passage from the first to the last cell of a box of extents `dims`
// holding `w` row-major.
double box_passage(const std::vector<double>& w, const std::vector<int>& dims) {
  const std::size_t d = dims.size();
  std::vector<std::size_t> stride(d, 1);
  for (std::size_t k = d - 1; k-- > 0;) stride[k] = stride[k + 1] * static_cast<std::size_t>(dims[k + 1]);
  std::vector<double> m(w.size());
  std::vector<int> u(d, 0);
  for (std::size_t f = 0; f < w.size(); ++f) {
    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t k = 0; k < d; ++k)
      if (u[k] > 0) {
        best = any ? std::max(best, m[f - stride[k]]) : m[f - stride[k]];
        any = true;
      }
    m[f] = w[f] + (any ? best : 0.0);
    for (std::size_t k = d; k-- > 0;) {
      if (++u[k] < dims[k]) break;
      u[k] = 0;
    }
  }
  return m.back();
}

}  // namespace

WeightField::WeightField(int d, int n, double fill) : d_(d), n_(n) {
  require(d == 2 || d == 3, "WeightField: dimension must be 2 or 3");
  require(n >= 0, "WeightField: n must be nonnegative");
  require(n <= (d == 2 ? kMaxN2 : kMaxN3), "WeightField: lattice too large");
  values_.assign(box_volume(std::vector<int>(static_cast<std::size_t>(d), n + 1)), fill);
}

WeightField WeightField::sample(int d, int n, const AlphaLaw& law, std::uint64_t seed, std::uint64_t stream) {
  WeightField w(d, n);
  Philox rng(seed, stream);
  for (auto& v : w.values_) v = law.draw(rng);
  return w;
}

std::size_t WeightField::index(const LatticePoint& v) const {
  require(v.size() == static_cast<std::size_t>(d_), "WeightField: point has the wrong dimension");
  std::size_t f = 0;
  for (int c : v) {
    require(c >= 0 && c <= n_, "WeightField: point outside the lattice");
    f = f * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(c);
  }
  return f;
}

LatticePoint WeightField::point(std::size_t flat) const {
  LatticePoint v(static_cast<std::size_t>(d_));
  for (std::size_t k = v.size(); k-- > 0;) {
    v[k] = static_cast<int>(flat % static_cast<std::size_t>(n_ + 1));
    flat /= static_cast<std::size_t>(n_ + 1);
  }
  return v;
}

double last_passage(const WeightField& x, const LatticePoint& v1, const LatticePoint& v2) {
  x.index(v1);
  x.index(v2);
  std::vector<int> dims;
  for (std::size_t k = 0; k < v1.size(); ++k) {
    require(v1[k] <= v2[k], "last_passage: endpoints are not ordered coordinatewise");
    dims.push_back(v2[k] - v1[k] + 1);
  }
  std::vector<double> w(box_volume(dims));
  std::vector<int> u(dims.size(), 0);
  LatticePoint p(v1.size());
  for (auto& val : w) {
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = v1[k] + u[k];
    val = x(p);
    for (std::size_t k = dims.size(); k-- > 0;) {
      if (++u[k] < dims[k]) break;
      u[k] = 0;
    }
  }
  return box_passage(w, dims);
}

double last_passage(const WeightField& x) {
  return last_passage(x, LatticePoint(static_cast<std::size_t>(x.dim()), 0),
                      LatticePoint(static_cast<std::size_t>(x.dim()), x.n()));
}

Estimate estimate_g(double alpha, const std::vector<double>& v, int n, int replicas, std::uint64_t seed,
                    unsigned threads) {
  require(alpha > 0.0 && alpha < 1.0, "estimate_g: alpha must lie in (0, 1)");
  require(v.size() == 2 || v.size() == 3, "estimate_g: direction must have 2 or 3 coordinates");
  require(n >= 0 && replicas >= 2, "estimate_g: need n >= 0 and at least 2 replicas");
  std::vector<int> dims;
  for (double c : v) {
    require(c >= 0.0 && std::isfinite(c), "estimate_g: direction must be nonnegative");
    dims.push_back(static_cast<int>(std::floor(n * c + 1e-9)) + 1);
  }
  const std::size_t cells = box_volume(dims);
  require(cells <= 1u << 24, "estimate_g: lattice too large");
  const AlphaLaw law = AlphaLaw::mu(alpha);
  const double scale = 1.0 / std::max(n, 1);
  std::vector<double> t(static_cast<std::size_t>(replicas));
  parallel_for(t.size(), threads, [&](std::size_t r) {
    Philox rng(seed, r);
    std::vector<double> w(cells);
    for (auto& x : w) x = law.draw(rng);
    t[r] = box_passage(w, dims) * scale;
  });
  double mean = 0.0;
  for (double x : t) mean += x;
  mean /= static_cast<double>(replicas);
  double var = 0.0;
  for (double x : t) var += (x - mean) * (x - mean);
  var /= static_cast<double>(replicas - 1);
  return {mean, std::sqrt(var / static_cast<double>(replicas))};
}

LimitShape::LimitShape(double alpha, int d, int grid, int n_mc, int replicas, std::uint64_t seed,
                       unsigned threads)
    : d_(d), m_(grid) {
  require(d == 2 || d == 3, "LimitShape: dimension must be 2 or 3");
  require(grid >= 1 && n_mc >= 1, "LimitShape: grid and n_mc must be positive");
  const std::vector<int> dims(static_cast<std::size_t>(d), grid + 1);
  values_.assign(box_volume(dims), 0.0);
  std::vector<int> k(static_cast<std::size_t>(d), 0);
  for (std::size_t f = 0; f < values_.size(); ++f) {
    if (f > 0) {
      std::vector<double> v;
      for (int c : k) v.push_back(static_cast<double>(c) / grid);
      // Each grid point gets its own key so the estimates are independent.
      const auto e = estimate_g(alpha, v, n_mc, replicas, seed + 0x9E3779B97F4A7C15ULL * f, threads);
      values_[f] = e.mean;
      if (f + 1 == values_.size()) corner_stderr_ = e.stderr_;
    }
    for (std::size_t j = k.size(); j-- > 0;) {
      if (++k[j] <= grid) break;
      k[j] = 0;
    }
  }
}

double LimitShape::operator()(const std::vector<double>& v) const {
  require(v.size() == static_cast<std::size_t>(d_), "LimitShape: direction has the wrong dimension");
  std::vector<int> cell(v.size());
  std::vector<double> frac(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    require(v[j] >= -1e-12 && v[j] <= 1.0 + 1e-12, "LimitShape: direction outside [0, 1]^d");
    const double s = std::clamp(v[j], 0.0, 1.0) * m_;
    cell[j] = std::min(static_cast<int>(s), m_ - 1);
    frac[j] = s - cell[j];
  }
  double out = 0.0;
  for (unsigned corner = 0; corner < (1u << d_); ++corner) {
    double weight = 1.0;
    std::size_t f = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      const bool up = (corner >> j) & 1u;
      weight *= up ? frac[j] : 1.0 - frac[j];
      f = f * static_cast<std::size_t>(m_ + 1) + static_cast<std::size_t>(cell[j] + (up ? 1 : 0));
    }
    if (weight != 0.0) out += weight * values_[f];
  }
  return out;
}

double LimitShape::g11() const { return values_.back(); }

ShapeFunction LimitShape::function() const {
  return [shape = *this](const std::vector<double>& v) { return shape(v); };
}

double deterministic_equivalent_T(const WeightField& h, const ShapeFunction& g) {
  const int n = h.n();
  require(n >= 1, "deterministic_equivalent_T: n must be at least 1");
  const std::size_t total = h.size();
  const auto d = static_cast<std::size_t>(h.dim());
  // g depends on v - u only: tabulate it once.
  std::vector<double> step(total, 0.0);
  for (std::size_t f = 1; f < total; ++f) {
    const auto p = h.point(f);
    std::vector<double> v(d);
    for (std::size_t k = 0; k < d; ++k) v[k] = static_cast<double>(p[k]) / n;
    step[f] = g(v);
  }
  std::vector<std::size_t> stride(d, 1);
  for (std::size_t k = d - 1; k-- > 0;) stride[k] = stride[k + 1] * static_cast<std::size_t>(n + 1);

  std::vector<double> m(total);
  m[0] = std::max(h[0], 0.0);
  std::vector<int> u(d);
  for (std::size_t f = 1; f < total; ++f) {
    const auto v = h.point(f);
    double best = -std::numeric_limits<double>::infinity();
    // Odometer over the box [0, v]; u = v itself is the last cell and skipped.
    std::fill(u.begin(), u.end(), 0);
    for (;;) {
      std::size_t fu = 0, fd = 0;
      for (std::size_t k = 0; k < d; ++k) {
        fu += stride[k] * static_cast<std::size_t>(u[k]);
        fd += stride[k] * static_cast<std::size_t>(v[k] - u[k]);
      }
      if (fu == f) break;
      best = std::max(best, m[fu] + step[fd]);
      std::size_t k = d;
      while (k-- > 0) {
        if (++u[k] <= v[k]) break;
        u[k] = 0;
      }
    }
    m[f] = std::max(h[f], 0.0) + best;
  }
  return m.back();
}

double rate_L_consistency(const WeightField& h, const ShapeFunction& g, double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, "rate_L_consistency: alpha must lie in (0, 1]");
  double norm = 0.0;
  for (double v : h.values())
    if (v > 0.0) norm += std::pow(v, alpha);
  const double t = deterministic_equivalent_T(h, g);
  const double g11 = g(std::vector<double>(static_cast<std::size_t>(h.dim()), 1.0));
  return norm - std::pow(std::max(t - g11, 0.0), alpha);
}

double deformed_passage_time(const WeightField& x, const WeightField& h) {
  require(x.dim() == h.dim() && x.n() == h.n(), "deformed_passage_time: fields must share d and n");
  const int n = x.n();
  require(n >= 1, "deformed_passage_time: n must be at least 1");
  WeightField y = x;
  for (std::size_t f = 0; f < y.size(); ++f) y[f] = std::max(x[f] + n * h[f], 0.0);
  return last_passage(y) / n;
}

void write_field_csv(std::ostream& out, const WeightField& w) {
  out << "d,n\n" << w.dim() << ',' << w.n() << '\n';
  char buf[32];
  for (std::size_t f = 0; f < w.size(); ++f) {
    for (int c : w.point(f)) out << c << ',';
    std::snprintf(buf, sizeof buf, "%.17g", w[f]);
    out << buf << '\n';
  }
}

WeightField read_field_csv(std::istream& in) {
  std::string line;
  bool got = false;
  while ((got = static_cast<bool>(std::getline(in, line))) && line.rfind('#', 0) == 0) {
  }
  require(got && line.rfind("d,n", 0) == 0,
          "read_field_csv: missing \"d,n\" header");
  int d = 0, n = 0;
  char comma = 0;
  require(std::getline(in, line) && (std::istringstream(line) >> d >> comma >> n) && comma == ',',
          "read_field_csv: malformed size line");
  WeightField w(d, n);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    LatticePoint p(static_cast<std::size_t>(d));
    for (auto& c : p) {
      require(static_cast<bool>(row >> c >> comma) && comma == ',', "read_field_csv: malformed row");
    }
    double v = 0.0;
    require(static_cast<bool>(row >> v), "read_field_csv: malformed value");
    w(p) = v;
    ++rows;
  }
  require(rows == w.size(), "read_field_csv: expected one row per site");
  return w;
}

}  // namespace ldp
