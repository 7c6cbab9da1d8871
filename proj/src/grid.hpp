#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "common.hpp"

namespace sphlab {

// All grid coordinates live in [-kCoordLimit, kCoordLimit]; averaging shifts
// stay inside int32 and |y|^2 sums stay inside int64 under this bound.
constexpr std::int64_t kCoordLimit = std::int64_t(1) << 30;

// Finitely supported f : Z^d -> R in canonical sparse form: points in
// lexicographic order, values nonzero and finite. Immutable after build.
class GridFunction {
 public:
  GridFunction() = default;

  static GridFunction delta(int d);

  // Canonicalizes: sorts records by (point, value), merges duplicate points by
  // summing their values in ascending order, drops exact zeros.
  static GridFunction from_records(int d, std::vector<std::int32_t> coords,
                                   std::vector<double> values);

  // Adopts records that are already in canonical form (strictly increasing
  // lex point order, nonzero finite values); verified in one linear pass.
  static GridFunction from_canonical(int d, std::vector<std::int32_t> coords,
                                     std::vector<double> values);

  int dimension() const { return d_; }
  std::size_t support_size() const { return values_.size(); }
  const std::vector<std::int32_t>& coords() const { return coords_; }
  const std::vector<double>& values() const { return values_; }
  const std::int32_t* point(std::size_t i) const {
    return coords_.data() + i * static_cast<std::size_t>(d_);
  }
  double value(std::size_t i) const { return values_[i]; }

  double value_at(const std::int64_t* pt) const;
  // (per-axis min, per-axis max); invalid on empty support
  std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>> bounding_box() const;

  bool operator==(const GridFunction&) const = default;

 private:
  friend GridFunction average(const GridFunction&, std::int64_t, const Caps&);
  friend GridFunction maximal_over(const GridFunction&, const std::vector<std::int64_t>&,
                                   const Caps&);
  friend GridFunction translate(const GridFunction&, const std::vector<std::int64_t>&);
  friend GridFunction signed_permute(const GridFunction&, const std::vector<int>&,
                                     const std::vector<int>&);

  int d_ = 0;
  std::vector<std::int32_t> coords_;  // support_size * d, lex order
  std::vector<double> values_;
};

struct NormReport {
  double p = 0.0;  // HUGE_VAL encodes the sup norm
  double value = 0.0;
  std::uint64_t summation_terms = 0;
};

// (A_lambda f)(x) = r_d(lambda)^{-1} * sum over |y|^2 = lambda of f(x - y).
// Requires f.d >= 4; predicted output records |supp f| * r_d(lambda) must fit
// under caps.max_sphere_points.
GridFunction average(const GridFunction& f, std::int64_t lambda, const Caps& caps = {});

// Pointwise max over lambdas of |A_lambda f|. lambdas must be nonempty,
// strictly increasing, >= 0; the cumulative predicted output is capped.
GridFunction maximal_over(const GridFunction& f, const std::vector<std::int64_t>& lambdas,
                          const Caps& caps = {});

// Compensated fixed-order summation over the canonical support order;
// p = HUGE_VAL gives max |f|. p < 1 is rejected.
NormReport lp_norm(const GridFunction& f, double p);

GridFunction translate(const GridFunction& f, const std::vector<std::int64_t>& shift);

// perm is a permutation of {0..d-1}, signs entries are +1/-1; maps point x to
// (signs[i] * x[perm[i]])_i. Exact (no value arithmetic).
GridFunction signed_permute(const GridFunction& f, const std::vector<int>& perm,
                            const std::vector<int>& signs);

}  // namespace sphlab
