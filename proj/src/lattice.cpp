#include "lattice.hpp"

#include <algorithm>
#include <cstring>
#include <thread>

namespace sphlab {

namespace {

constexpr int kMaxDimension = 1024;

void convolve_pass(const std::vector<std::pair<std::int64_t, std::uint32_t>>& base,
                   const std::vector<Count>& cur, std::vector<Count>& nxt,
                   std::int64_t lo, std::int64_t hi) {
  for (const auto& [n2, w] : base) {
    std::int64_t start = std::max(lo, n2);
    for (std::int64_t n = start; n < hi; ++n)
      nxt[static_cast<std::size_t>(n)] =
          checked_add(nxt[static_cast<std::size_t>(n)],
                      checked_mul_small(cur[static_cast<std::size_t>(n - n2)], w));
  }
}

// Depth-first lexicographic walk; visitor receives the flat coordinate array.
template <class F>
void walk_rec(std::int32_t* coords, int pos, int d, std::int64_t rem, F& visit) {
  if (pos == d - 1) {
    std::int64_t s = isqrt64(rem);
    if (s * s != rem) return;
    coords[pos] = static_cast<std::int32_t>(-s);
    visit(coords);
    if (s > 0) {
      coords[pos] = static_cast<std::int32_t>(s);
      visit(coords);
    }
    return;
  }
  std::int64_t s = isqrt64(rem);
  for (std::int64_t v = -s; v <= s; ++v) {
    coords[pos] = static_cast<std::int32_t>(v);
    walk_rec(coords, pos + 1, d, rem - v * v, visit);
  }
}

template <class F>
void walk_sphere_impl(const SphereSpec& spec, F&& visit) {
  validate_sphere_spec(spec);
  std::int64_t s0 = isqrt64(spec.lambda);
  if (s0 > INT32_MAX)
    fail(errc::cap_exceeded, "sphere coordinates exceed the 32-bit range");
  std::vector<std::int32_t> coords(static_cast<std::size_t>(spec.d), 0);
  walk_rec(coords.data(), 0, spec.d, spec.lambda, visit);
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

// Square series per canonical residue class c = min(a, m-a): entries
// (t^2, #{signed j : j^2 = t^2, j = c mod m}) for t = 0..isqrt(lambda).
std::vector<std::vector<std::pair<std::int64_t, std::uint32_t>>> square_series(
    std::int64_t lambda, std::int64_t m) {
  auto half = static_cast<std::size_t>(m / 2);
  std::vector<std::vector<std::pair<std::int64_t, std::uint32_t>>> q(half + 1);
  std::int64_t s = isqrt64(lambda);
  for (std::int64_t t = 0; t <= s; ++t) {
    std::int64_t tm = t % m;
    std::int64_t neg = (m - tm) % m;
    std::int64_t canon = std::min(tm, neg);
    std::uint32_t w = (t == 0) ? 1u : (tm == neg ? 2u : 1u);
    q[static_cast<std::size_t>(canon)].emplace_back(t * t, w);
  }
  return q;
}

// Count of sphere points congruent to the specific residue vector whose
// canonical classes are `classes` (sorted ascending): truncated convolution of
// the per-slot square series evaluated at lambda.
Count class_vector_count(const std::vector<std::int32_t>& classes, std::int64_t lambda,
                         const std::vector<std::vector<std::pair<std::int64_t, std::uint32_t>>>& q,
                         std::vector<Count>& cur, std::vector<Count>& nxt) {
  int d = static_cast<int>(classes.size());
  const auto& first = q[static_cast<std::size_t>(classes[0])];
  if (d == 1) {
    for (const auto& [n2, w] : first)
      if (n2 == lambda) return w;
    return 0;
  }
  cur.assign(static_cast<std::size_t>(lambda) + 1, 0);
  for (const auto& [n2, w] : first)
    if (n2 <= lambda) cur[static_cast<std::size_t>(n2)] = w;
  for (int slot = 1; slot + 1 < d; ++slot) {
    nxt.assign(static_cast<std::size_t>(lambda) + 1, 0);
    convolve_pass(q[static_cast<std::size_t>(classes[static_cast<std::size_t>(slot)])], cur, nxt,
                  0, lambda + 1);
    cur.swap(nxt);
  }
  Count total = 0;
  for (const auto& [n2, w] :
       q[static_cast<std::size_t>(classes[static_cast<std::size_t>(d - 1)])])
    if (n2 <= lambda)
      total = checked_add(total,
                          checked_mul_small(cur[static_cast<std::size_t>(lambda - n2)], w));
  return total;
}

std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::uint64_t orbit_size_of(const std::vector<std::int32_t>& classes, std::int64_t m) {
  // multiset permutations times the independent sign choices per slot
  std::uint64_t perms = 1;
  std::uint64_t placed = 0;
  std::size_t i = 0;
  while (i < classes.size()) {
    std::size_t j = i;
    while (j < classes.size() && classes[j] == classes[i]) ++j;
    placed += j - i;
    perms *= binomial_u64(placed, static_cast<std::uint64_t>(j - i));
    i = j;
  }
  std::uint64_t signs = 1;
  for (std::int32_t c : classes)
    if (c != 0 && 2 * static_cast<std::int64_t>(c) != m) signs *= 2;
  return perms * signs;
}

}  // namespace

void validate_sphere_spec(const SphereSpec& spec) {
  if (spec.d < 1) fail(errc::invalid_argument, "sphere dimension must be >= 1");
  if (spec.d > kMaxDimension) fail(errc::invalid_argument, "sphere dimension too large");
  if (spec.lambda < 0) fail(errc::invalid_argument, "radius-squared must be >= 0");
}

RepCountTable count_reps_upto(int d, std::int64_t max_lambda, const Caps& caps) {
  if (d < 1) fail(errc::invalid_argument, "dimension must be >= 1");
  if (d > kMaxDimension) fail(errc::invalid_argument, "dimension too large");
  if (max_lambda < 0) fail(errc::invalid_argument, "max_lambda must be >= 0");
  validate_caps(caps);

  std::int64_t root = isqrt64(max_lambda);
  auto work = static_cast<double>(d) * (static_cast<double>(max_lambda) + 1.0) *
              (static_cast<double>(root) + 1.0);
  if (work > static_cast<double>(caps.max_sieve_work))
    fail(errc::budget_exceeded, "sieve work d*(max_lambda+1)*(sqrt(max_lambda)+1) = " +
                                    std::to_string(static_cast<std::uint64_t>(work)) +
                                    " exceeds budget " + std::to_string(caps.max_sieve_work));

  std::vector<std::pair<std::int64_t, std::uint32_t>> base;
  base.reserve(static_cast<std::size_t>(root) + 1);
  base.emplace_back(0, 1u);
  for (std::int64_t j = 1; j <= root; ++j) base.emplace_back(j * j, 2u);

  auto n = static_cast<std::size_t>(max_lambda) + 1;
  std::vector<Count> cur(n, 0);
  for (const auto& [n2, w] : base) cur[static_cast<std::size_t>(n2)] = w;

  std::vector<Count> nxt(n);
  for (int pass = 1; pass < d; ++pass) {
    std::fill(nxt.begin(), nxt.end(), Count(0));
    int threads = caps.threads;
    if (threads > 1 && max_lambda >= 4096) {
      // disjoint output slices; exact integers, so identical for any split
      std::vector<std::thread> pool;
      std::int64_t chunk = (max_lambda + threads) / threads;
      for (int t = 0; t < threads; ++t) {
        std::int64_t lo = t * chunk;
        std::int64_t hi = std::min<std::int64_t>(max_lambda + 1, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] { convolve_pass(base, cur, nxt, lo, hi); });
      }
      for (auto& th : pool) th.join();
    } else {
      convolve_pass(base, cur, nxt, 0, max_lambda + 1);
    }
    cur.swap(nxt);
  }

  RepCountTable table;
  table.d = d;
  table.max_lambda = max_lambda;
  table.counts = std::move(cur);
  return table;
}

Count count_reps(const SphereSpec& spec, const Caps& caps) {
  validate_sphere_spec(spec);
  return count_reps_upto(spec.d, spec.lambda, caps).at(spec.lambda);
}

Count jacobi_r4(std::int64_t n) {
  if (n < 0) fail(errc::invalid_argument, "radius-squared must be >= 0");
  if (n == 0) return 1;
  Count sum = 0;
  for (std::int64_t i = 1; i * i <= n; ++i) {
    if (n % i != 0) continue;
    if (i % 4 != 0) sum = checked_add(sum, static_cast<Count>(i));
    std::int64_t j = n / i;
    if (j != i && j % 4 != 0) sum = checked_add(sum, static_cast<Count>(j));
  }
  return checked_mul_small(sum, 8u);
}

void walk_sphere(const SphereSpec& spec,
                 const std::function<void(const std::int32_t*)>& visit) {
  walk_sphere_impl(spec, [&](const std::int32_t* p) { visit(p); });
}

std::vector<std::int32_t> enumerate_sphere(const SphereSpec& spec, const Caps& caps) {
  validate_caps(caps);
  std::vector<std::int32_t> out;
  std::uint64_t emitted = 0;
  walk_sphere_impl(spec, [&](const std::int32_t* p) {
    if (++emitted > caps.max_sphere_points)
      fail(errc::cap_exceeded, "sphere point count exceeds cap " +
                                   std::to_string(caps.max_sphere_points));
    out.insert(out.end(), p, p + spec.d);
  });
  return out;
}

ResidueClassCounts residue_class_counts(const SphereSpec& spec, std::int64_t modulus,
                                        const Caps& caps) {
  validate_sphere_spec(spec);
  validate_caps(caps);
  if (modulus < 2) fail(errc::invalid_argument, "modulus must be >= 2");

  double cells = 1.0;
  for (int i = 0; i < spec.d; ++i) {
    cells *= static_cast<double>(modulus);
    if (cells > static_cast<double>(caps.max_torus_cells))
      fail(errc::cap_exceeded, "modulus^d exceeds the torus cell cap " +
                                   std::to_string(caps.max_torus_cells));
  }
  Count r = count_reps(spec, caps);
  if (r > static_cast<Count>(caps.max_sphere_points))
    fail(errc::cap_exceeded, "sphere point count exceeds cap " +
                                 std::to_string(caps.max_sphere_points));

  auto q = square_series(spec.lambda, modulus);
  auto half = static_cast<std::int32_t>(modulus / 2);

  ResidueClassCounts out;
  out.d = spec.d;
  out.lambda = spec.lambda;
  out.modulus = modulus;
  out.total = r;

  std::vector<Count> cur, nxt;
  std::vector<std::int32_t> classes(static_cast<std::size_t>(spec.d), 0);
  Count mass = 0;
  // lexicographic enumeration of nondecreasing class vectors
  while (true) {
    Count c = class_vector_count(classes, spec.lambda, q, cur, nxt);
    if (c > 0) {
      ResidueClassOrbit orbit;
      orbit.canonical = classes;
      orbit.orbit_size = orbit_size_of(classes, modulus);
      orbit.count = c;
      mass = checked_add(mass, checked_mul_u64(c, orbit.orbit_size));
      out.orbits.push_back(std::move(orbit));
    }
    int pos = spec.d - 1;
    while (pos >= 0 && classes[static_cast<std::size_t>(pos)] == half) --pos;
    if (pos < 0) break;
    std::int32_t v = classes[static_cast<std::size_t>(pos)] + 1;
    for (int i = pos; i < spec.d; ++i) classes[static_cast<std::size_t>(i)] = v;
  }
  if (mass != r) fail(errc::internal, "residue class mass does not match the sphere count");
  return out;
}

std::vector<std::vector<std::int32_t>> expand_orbit(const ResidueClassOrbit& orbit,
                                                    std::int64_t modulus) {
  std::vector<std::vector<std::int32_t>> vectors;
  std::vector<std::int32_t> perm = orbit.canonical;  // sorted ascending already
  do {
    std::vector<std::vector<std::int32_t>> partial{{}};
    for (std::int32_t c : perm) {
      auto alt = static_cast<std::int32_t>((modulus - c) % modulus);
      std::vector<std::vector<std::int32_t>> next;
      for (const auto& v : partial) {
        auto a = v;
        a.push_back(c);
        next.push_back(std::move(a));
        if (alt != c) {
          auto b = v;
          b.push_back(alt);
          next.push_back(std::move(b));
        }
      }
      partial.swap(next);
    }
    for (auto& v : partial) vectors.push_back(std::move(v));
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(vectors.begin(), vectors.end());
  if (vectors.size() != orbit.orbit_size)
    fail(errc::internal, "orbit expansion size mismatch");
  return vectors;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  auto u = static_cast<std::uint64_t>(n);
  std::uint64_t d = u - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull,
                          31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, u);
    if (x == 1 || x == u - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, u);
      if (x == u - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace sphlab
