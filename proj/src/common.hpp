#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace sphlab {

enum class errc : int {
  ok = 0,
  invalid_argument = 1,
  cap_exceeded = 2,
  budget_exceeded = 3,
  not_prime = 4,
  empty_sequence = 5,
  dimension_too_small = 6,
  invalid_exponent = 7,
  insufficient_data = 8,
  overflow = 9,
  parse_error = 10,
  io_error = 11,
  internal = 12,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

// Resource caps shared by every operation that enumerates, allocates per-cell
// state, or runs the bulk sieve. All limits are inclusive.
struct Caps {
  std::uint64_t max_sphere_points = 10'000'000;  // materialized lattice points per call
  std::uint64_t max_torus_cells = 10'000'000;    // modulus^d cells in residue analyses
  std::uint64_t max_sieve_work = 100'000'000;    // d*(max_lambda+1)*(isqrt(max_lambda)+1) units
  int threads = 1;
};

inline void validate_caps(const Caps& caps) {
  if (caps.max_sphere_points == 0 || caps.max_torus_cells == 0 || caps.max_sieve_work == 0)
    fail(errc::invalid_argument, "caps must be positive");
  if (caps.threads < 1 || caps.threads > 256)
    fail(errc::invalid_argument, "thread count must be in [1, 256]");
}

// Exact representation counts. r_d(lambda) for the sizes this tool admits fits
// comfortably in 128 bits; every accumulation is overflow-checked and escalation
// is reported as errc::overflow rather than wrapping.
using Count = unsigned __int128;

inline Count checked_add(Count a, Count b) {
  Count s = a + b;
  if (s < a) fail(errc::overflow, "exact count exceeds 128-bit accumulator");
  return s;
}

inline Count checked_mul_small(Count a, std::uint32_t w) {
  if (w == 0) return 0;
  if (a > (~Count(0)) / w) fail(errc::overflow, "exact count exceeds 128-bit accumulator");
  return a * w;
}

inline Count checked_mul_u64(Count a, std::uint64_t w) {
  if (w == 0) return 0;
  if (a > (~Count(0)) / w) fail(errc::overflow, "exact count exceeds 128-bit accumulator");
  return a * w;
}

std::string count_to_string(Count v);

// Exact when v < 2^53; rounds to nearest double above that (callers that need
// exactness must stay in Count).
inline double count_to_double(Count v) {
  double hi = static_cast<double>(static_cast<std::uint64_t>(v >> 64));
  double lo = static_cast<double>(static_cast<std::uint64_t>(v));
  return hi * 18446744073709551616.0 + lo;
}

inline std::int64_t isqrt64(std::int64_t n) {
  if (n < 0) fail(errc::invalid_argument, "isqrt of negative value");
  if (n == 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Compensated (Neumaier) accumulator; summation order is part of the
// determinism contract, so callers feed it in a fixed canonical order.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace sphlab
