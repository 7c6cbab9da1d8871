#include "probes.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <thread>

#include "lattice.hpp"

namespace sphlab {

namespace {

void check_norm_exponent(double p) {
  if (!std::isfinite(p) || p < 1.0) fail(errc::invalid_exponent, "probe exponent must be finite and >= 1");
}

double closed_term(Count r, double p) {
  if (p == 1.0) return 1.0;
  return std::pow(count_to_double(r), 1.0 - p);
}

double root_of(double s, double p) {
  if (p == 1.0) return s;
  if (p == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / p);
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  if (den == 0.0) fail(errc::insufficient_data, "slope fit needs at least two distinct abscissae");
  return num / den;
}

}  // namespace

std::vector<std::int64_t> sequence_radii(const SequenceTruncation& seq) {
  if (seq.terms.empty()) fail(errc::empty_sequence, "sequence has no terms");
  std::vector<std::int64_t> out;
  out.reserve(seq.terms.size());
  const BigInt limit = BigInt(std::numeric_limits<std::int64_t>::max());
  for (const BigInt& t : seq.terms) {
    if (t > limit) fail(errc::cap_exceeded, "sequence term too large for a sphere radius");
    out.push_back(t.convert_to<std::int64_t>());
  }
  return out;
}

std::vector<DeltaProbeResult> delta_test_multi(int d, const SequenceTruncation& seq,
                                               const std::vector<double>& ps, const Caps& caps,
                                               bool attempt_direct) {
  if (d < 4) fail(errc::dimension_too_small, "delta test requires dimension >= 4");
  if (ps.empty()) fail(errc::invalid_argument, "delta test needs at least one exponent");
  for (double p : ps) check_norm_exponent(p);
  validate_caps(caps);
  const std::vector<std::int64_t> radii = sequence_radii(seq);
  const std::int64_t max_lambda = radii.back();

  const RepCountTable table = count_reps_upto(d, max_lambda, caps);
  Count predicted = 0;
  for (std::int64_t lam : radii) predicted = checked_add(predicted, table.at(lam));

  std::optional<GridFunction> peak;
  std::string skip_note;
  if (attempt_direct) {
    if (predicted <= Count(caps.max_sphere_points)) {
      peak = maximal_over(GridFunction::delta(d), radii, caps);
    } else {
      skip_note = "direct evaluation skipped: " + count_to_string(predicted) +
                  " sphere points exceed the support cap";
    }
  }

  std::vector<DeltaProbeResult> out;
  out.reserve(ps.size());
  for (double p : ps) {
    DeltaProbeResult r;
    r.d = d;
    r.p = p;
    r.sequence_name = seq.name;
    r.term_count = radii.size();
    r.max_lambda = max_lambda;
    NeumaierSum s;
    for (std::int64_t lam : radii) s.add(closed_term(table.at(lam), p));
    r.closed_form = root_of(s.value(), p);
    if (peak) {
      r.direct = lp_norm(*peak, p).value;
      const double hi = std::max(std::abs(r.closed_form), std::abs(*r.direct));
      r.relative_gap = hi == 0.0 ? 0.0 : std::abs(r.closed_form - *r.direct) / hi;
    } else if (!skip_note.empty()) {
      r.notes.push_back(skip_note);
    }
    out.push_back(std::move(r));
  }
  return out;
}

DeltaProbeResult delta_test(int d, const SequenceTruncation& seq, double p, const Caps& caps,
                            bool attempt_direct) {
  return delta_test_multi(d, seq, {p}, caps, attempt_direct).front();
}

SlopeProbeResult divergence_slope(int d, const SequenceTruncation& seq, bool include_identity,
                                  const std::vector<std::int64_t>& schedule, double p,
                                  const Caps& caps) {
  if (d < 5) fail(errc::dimension_too_small, "divergence slope requires dimension >= 5");
  check_norm_exponent(p);
  if (schedule.size() < 4) fail(errc::invalid_argument, "truncation schedule needs at least 4 bounds");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 1) fail(errc::invalid_argument, "truncation bounds must be >= 1");
    if (i > 0 && schedule[i] <= schedule[i - 1])
      fail(errc::invalid_argument, "truncation schedule must be strictly increasing");
  }
  validate_caps(caps);
  const std::vector<std::int64_t> radii = sequence_radii(seq);
  const std::int64_t max_t = schedule.back();

  SlopeProbeResult r;
  r.d = d;
  r.p = p;
  r.include_identity = include_identity;
  r.sequence_name = seq.name;
  r.schedule = schedule;

  const RepCountTable table = count_reps_upto(d, max_t, caps);
  NeumaierSum acc;
  if (include_identity) acc.add(1.0);  // radius-0 average is the identity, one unit of mass
  std::size_t ti = 0;
  std::vector<double> xs;
  xs.reserve(schedule.size());
  for (std::int64_t t : schedule) {
    while (ti < radii.size() && radii[ti] <= t) {
      acc.add(closed_term(table.at(radii[ti]), p));
      ++ti;
    }
    const double s = acc.value();
    if (!(s > 0.0))
      fail(errc::invalid_argument, "truncation bound " + std::to_string(t) + " captures no mass");
    xs.push_back(std::log(double(t)));
    r.log_sums.push_back(std::log(s));
    r.values.push_back(root_of(s, p));
  }
  if (ti < radii.size())
    r.notes.push_back(std::to_string(radii.size() - ti) + " terms beyond the last bound were ignored");
  r.slope = ols_slope(xs, r.log_sums);
  return r;
}

namespace {

struct ClassPeak {
  std::uint64_t orbit_size = 0;
  double peak = 0.0;  // max over lambda of c_lambda / r_d(lambda)
};

}  // namespace

PadicProbeResult periodic_padic_probe(int d, const SequenceTruncation& seq, std::int64_t prime,
                                      int level, double q, const Caps& caps) {
  if (d < 4) fail(errc::dimension_too_small, "periodic probe requires dimension >= 4");
  if (!is_prime(prime)) fail(errc::not_prime, "modulus base must be prime");
  if (level < 1 || level > 64) fail(errc::invalid_argument, "probe level must be in [1, 64]");
  check_norm_exponent(q);
  validate_caps(caps);
  const std::vector<std::int64_t> radii = sequence_radii(seq);

  PadicProbeResult r;
  r.d = d;
  r.prime = prime;
  r.level = level;
  r.q = q;
  r.sequence_name = seq.name;

  std::int64_t modulus = 1;
  for (int k = 1; k <= level; ++k) {
    if (modulus > std::numeric_limits<std::int64_t>::max() / prime)
      fail(errc::cap_exceeded, "torus modulus overflows");
    modulus *= prime;

    std::vector<ResidueClassCounts> per_lambda(radii.size());
    const unsigned want = std::min<unsigned>(caps.threads, unsigned(radii.size()));
    if (want > 1) {
      Caps inner = caps;  // lambdas already run in parallel, keep each call serial
      inner.threads = 1;
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errs(want);
      const std::size_t chunk = (radii.size() + want - 1) / want;
      for (unsigned w = 0; w < want; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(radii.size(), lo + chunk);
        pool.emplace_back([&, lo, hi, w]() {
          try {
            for (std::size_t i = lo; i < hi; ++i)
              per_lambda[i] = residue_class_counts(SphereSpec{d, radii[i]}, modulus, inner);
          } catch (...) {
            errs[w] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    } else {
      for (std::size_t i = 0; i < radii.size(); ++i)
        per_lambda[i] = residue_class_counts(SphereSpec{d, radii[i]}, modulus, caps);
    }

    std::map<std::vector<std::int32_t>, ClassPeak> classes;
    for (const ResidueClassCounts& rc : per_lambda) {
      const double total = count_to_double(rc.total);
      for (const ResidueClassOrbit& orb : rc.orbits) {
        ClassPeak& cp = classes[orb.canonical];
        cp.orbit_size = orb.orbit_size;
        cp.peak = std::max(cp.peak, count_to_double(orb.count) / total);
      }
    }
    NeumaierSum s;
    for (const auto& [key, cp] : classes) {
      (void)key;
      const double v = q == 1.0 ? cp.peak : std::pow(cp.peak, q);
      s.add(double(cp.orbit_size) * v);
    }
    r.stages.push_back(k);
    r.ratios.push_back(root_of(s.value(), q));
  }

  if (level >= 2) {
    std::vector<double> xs, ys;
    const double lp = std::log(double(prime));
    for (int k = 1; k <= level; ++k) {
      xs.push_back(double(k) * lp);
      ys.push_back(std::log(r.ratios[std::size_t(k - 1)]));
    }
    r.slope = ols_slope(xs, ys);
  } else {
    r.slope = 0.0;
    r.notes.push_back("single stage: no slope fit");
  }
  return r;
}

}  // namespace sphlab
