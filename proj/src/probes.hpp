#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "grid.hpp"
#include "sequence.hpp"

namespace sphlab {

// All probes compute quantities of the form ||M f||_p / ||f||_p for a
// concrete test input f; each is a lower bound for the operator norm.

struct DeltaProbeResult {
  int d = 0;
  double p = 0.0;
  std::string sequence_name;
  std::size_t term_count = 0;
  std::int64_t max_lambda = 0;
  double closed_form = 0.0;              // (sum over lambda of r^(1-p))^(1/p)
  std::optional<double> direct;          // via maximal_over + lp_norm
  std::optional<double> relative_gap;
  std::vector<std::string> notes;
};

// Point-mass test: distinct spheres are disjoint, so the closed form is exact.
DeltaProbeResult delta_test(int d, const SequenceTruncation& seq, double p, const Caps& caps = {},
                            bool attempt_direct = true);

// Same maximal grid evaluated at several exponents (the grid is p-independent).
std::vector<DeltaProbeResult> delta_test_multi(int d, const SequenceTruncation& seq,
                                               const std::vector<double>& ps, const Caps& caps = {},
                                               bool attempt_direct = true);

struct SlopeProbeResult {
  int d = 0;
  double p = 0.0;
  bool include_identity = false;  // count the radius-0 average in each partial sum
  std::string sequence_name;
  std::vector<std::int64_t> schedule;
  std::vector<double> values;    // delta-test lower bound at each truncation bound
  std::vector<double> log_sums;  // log of the p-th power partial sums
  double slope = 0.0;
  std::vector<std::string> notes;
};

// Fits log(partial sum) against log(T) across the truncation schedule.
// Positive slope is empirical evidence of unboundedness at this exponent.
SlopeProbeResult divergence_slope(int d, const SequenceTruncation& seq, bool include_identity,
                                  const std::vector<std::int64_t>& schedule, double p,
                                  const Caps& caps = {});

struct PadicProbeResult {
  int d = 0;
  std::int64_t prime = 0;
  int level = 0;
  double q = 0.0;
  std::string sequence_name;
  std::vector<int> stages;      // k = 1..level
  std::vector<double> ratios;   // ||max A g||_q / ||g||_q on the period-p^k torus
  double slope = 0.0;           // OLS of log ratio against k*log(prime)
  std::vector<std::string> notes;
};

// Periodic test: g = indicator of p^k Z^d, handled exactly on the quotient
// torus through residue class counts; A g(u) = c_lambda(u) / r_d(lambda).
PadicProbeResult periodic_padic_probe(int d, const SequenceTruncation& seq, std::int64_t prime,
                                      int level, double q, const Caps& caps = {});

// Terms as int64 radii (fails with cap_exceeded if a term exceeds the range).
std::vector<std::int64_t> sequence_radii(const SequenceTruncation& seq);

}  // namespace sphlab
