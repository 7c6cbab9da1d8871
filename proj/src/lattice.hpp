#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "common.hpp"

namespace sphlab {

// Radius-squared sphere {y in Z^d : |y|^2 = lambda}. The internal recursion
// admits any d >= 1; operator-level entry points require d >= 4 and check it
// themselves (grid.hpp / probes.hpp).
struct SphereSpec {
  int d = 0;
  std::int64_t lambda = -1;
};

void validate_sphere_spec(const SphereSpec& spec);

struct RepCountTable {
  int d = 0;
  std::int64_t max_lambda = -1;
  std::vector<Count> counts;  // counts[lambda], lambda = 0..max_lambda

  Count at(std::int64_t lambda) const {
    if (lambda < 0 || lambda > max_lambda)
      fail(errc::invalid_argument, "lambda outside table range");
    return counts[static_cast<std::size_t>(lambda)];
  }
};

// Bulk sieve: R_1(n) = 1 if n = 0, 2 if n is a positive square, else 0;
// R_k = R_{k-1} convolved with R_1. Exact, overflow-checked.
RepCountTable count_reps_upto(int d, std::int64_t max_lambda, const Caps& caps = {});

Count count_reps(const SphereSpec& spec, const Caps& caps = {});

// Classical divisor-sum identity for sums of four squares:
// r_4(n) = 8 * sum of divisors m | n with 4 not dividing m. n = 0 gives 1.
Count jacobi_r4(std::int64_t n);

// Visits every point of the sphere exactly once in lexicographic order.
// Coordinates fit int32 (|y_i| <= sqrt(lambda) is validated up front).
void walk_sphere(const SphereSpec& spec,
                 const std::function<void(const std::int32_t*)>& visit);

// Materialized enumeration, lexicographic. Flat layout: point i occupies
// coords[i*d .. i*d+d-1]. Aborts with cap_exceeded once the output would
// exceed caps.max_sphere_points.
std::vector<std::int32_t> enumerate_sphere(const SphereSpec& spec, const Caps& caps = {});

// Residue decomposition of the sphere: counts of points in each congruence
// class mod `modulus`, grouped by the signed-permutation orbit of the residue
// vector (class = multiset of canonical residues min(a, m-a)).
struct ResidueClassOrbit {
  std::vector<std::int32_t> canonical;  // sorted canonical residues, size d
  std::uint64_t orbit_size = 0;         // number of residue vectors in the orbit
  Count count = 0;                      // points per single residue vector of the orbit
};

struct ResidueClassCounts {
  int d = 0;
  std::int64_t lambda = -1;
  std::int64_t modulus = 0;
  Count total = 0;                       // = r_d(lambda)
  std::vector<ResidueClassOrbit> orbits; // lex order of canonical multisets
};

ResidueClassCounts residue_class_counts(const SphereSpec& spec, std::int64_t modulus,
                                        const Caps& caps = {});

// Expands an orbit into explicit residue vectors, lexicographic order.
std::vector<std::vector<std::int32_t>> expand_orbit(const ResidueClassOrbit& orbit,
                                                    std::int64_t modulus);

bool is_prime(std::int64_t n);

}  // namespace sphlab
