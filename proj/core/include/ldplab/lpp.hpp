#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "ldplab/measures.hpp"

namespace ldp {

using LatticePoint = std::vector<int>;

/// Real weights on the box {0, ..., n}^d, d in {2, 3}, stored row-major
/// (last coordinate fastest).
class WeightField {
 public:
  WeightField() = default;
  WeightField(int d, int n, double fill = 0.0);
  /// i.i.d. draws from `law` in storage order from Philox(seed, stream).
  static WeightField sample(int d, int n, const AlphaLaw& law, std::uint64_t seed, std::uint64_t stream = 0);

  int dim() const { return d_; }
  int n() const { return n_; }
  std::size_t size() const { return values_.size(); }
  std::size_t index(const LatticePoint& v) const;
  LatticePoint point(std::size_t flat) const;
  double operator()(const LatticePoint& v) const { return values_[index(v)]; }
  double& operator()(const LatticePoint& v) { return values_[index(v)]; }
  double operator[](std::size_t flat) const { return values_[flat]; }
  double& operator[](std::size_t flat) { return values_[flat]; }
  const std::vector<double>& values() const { return values_; }

 private:
  int d_ = 0, n_ = 0;
  std::vector<double> values_;
};

/// max over directed unit-step paths from v1 to v2 of the sum of weights on
/// the path's vertices, both endpoints included.
double last_passage(const WeightField& x, const LatticePoint& v1, const LatticePoint& v2);
/// T_{0,(n,...,n)}.
double last_passage(const WeightField& x);

struct Estimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Monte Carlo mean of T_{0, floor(n v)} / max(n, 1) over replicas with
/// i.i.d. mu_alpha weights; replica r uses stream r.
Estimate estimate_g(double alpha, const std::vector<double>& v, int n, int replicas, std::uint64_t seed,
                    unsigned threads = 1);

using ShapeFunction = std::function<double(const std::vector<double>&)>;

/// Limit-shape estimate on the grid {0, 1/m, ..., 1}^d with multilinear
/// interpolation. Grid values come from estimate_g at lattice size n_mc; the
/// origin is pinned to 0.
class LimitShape {
 public:
  LimitShape(double alpha, int d, int grid, int n_mc, int replicas, std::uint64_t seed, unsigned threads = 1);

  double operator()(const std::vector<double>& v) const;
  double g11() const;
  /// Standard error at the grid corner (1, ..., 1).
  double g11_stderr() const { return corner_stderr_; }
  int dim() const { return d_; }
  int grid() const { return m_; }
  ShapeFunction function() const;

 private:
  int d_, m_;
  std::vector<double> values_;
  double corner_stderr_ = 0.0;
};

/// sup over chains 0 = v_0 < ... < v_m = (n, ..., n) in the coordinatewise
/// order of sum_i H_{v_i}^+ + sum_i g((v_{i+1} - v_i)/n), by dynamic
/// programming over the lattice.
double deterministic_equivalent_T(const WeightField& h, const ShapeFunction& g);

/// ||H^+||_alpha^alpha - (T_n(H) - g(1, ..., 1))^alpha.
double rate_L_consistency(const WeightField& h, const ShapeFunction& g, double alpha);

/// T((X + nH)^+) / n.
double deformed_passage_time(const WeightField& x, const WeightField& h);

/// CSV: a "d,n" header, the values of d and n, then one "i_1,...,i_d,value"
/// row per site in storage order.
void write_field_csv(std::ostream& out, const WeightField& w);
/// Skips leading lines that start with #.
WeightField read_field_csv(std::istream& in);

}  // namespace ldp
