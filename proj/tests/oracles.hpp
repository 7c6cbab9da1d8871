#pragma once

#include <cstdint>
#include <vector>

// Reference implementations kept deliberately naive: full box/ball scans with
// none of the library's enumeration machinery. Exponential in d; keep inputs small.
namespace oracles {

std::uint64_t brute_count(int d, std::int64_t lambda);

// All solutions of |y|^2 = lambda, each point a d-vector, sorted lexicographically.
std::vector<std::vector<std::int32_t>> brute_points(int d, std::int64_t lambda);

}  // namespace oracles
