#include "sphlab/sphlab.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "grid.hpp"
#include "lattice.hpp"
#include "probes.hpp"
#include "report.hpp"
#include "sequence.hpp"

using namespace sphlab;

struct sphlab_grid {
  sphlab::GridFunction f;
};

struct sphlab_sequence {
  sphlab::SequenceTruncation s;
};

namespace {

thread_local std::string g_last_error;

int set_error(int status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <class Fn>
int guarded(Fn&& body) noexcept {
  try {
    g_last_error.clear();
    body();
    return SPHLAB_OK;
  } catch (const Error& e) {
    return set_error(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(SPHLAB_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(SPHLAB_INTERNAL, e.what());
  } catch (...) {
    return set_error(SPHLAB_INTERNAL, "unknown failure");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Caps to_caps(const sphlab_caps* caps) {
  if (!caps) return Caps{};
  Caps c;
  c.max_sphere_points = caps->max_sphere_points;
  c.max_torus_cells = caps->max_torus_cells;
  c.max_sieve_work = caps->max_sieve_work;
  c.threads = caps->threads;
  return c;
}

int require(bool ok, const char* what) {
  if (ok) return SPHLAB_OK;
  return set_error(SPHLAB_INVALID_ARGUMENT, what);
}

ordered_json parse_json(const char* text, const char* what) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(errc::parse_error, std::string(what) + ": malformed JSON");
  return j;
}

}  // namespace

extern "C" {

const char* sphlab_version(void) { return kToolVersion; }

const char* sphlab_status_name(int status) {
  if (status < 0 || status > SPHLAB_INTERNAL) return "unknown";
  return errc_name(static_cast<errc>(status));
}

const char* sphlab_last_error(void) { return g_last_error.c_str(); }

void sphlab_string_free(char* s) { std::free(s); }

void sphlab_caps_init(sphlab_caps* caps) {
  if (!caps) return;
  const Caps d{};
  caps->max_sphere_points = d.max_sphere_points;
  caps->max_torus_cells = d.max_torus_cells;
  caps->max_sieve_work = d.max_sieve_work;
  caps->threads = d.threads;
}

int sphlab_count_reps(int d, int64_t lambda, const sphlab_caps* caps, char** count_out) {
  if (int rc = require(count_out != nullptr, "count_out is NULL")) return rc;
  return guarded([&] {
    const Count c = count_reps(SphereSpec{d, lambda}, to_caps(caps));
    *count_out = dup_string(count_to_string(c));
  });
}

int sphlab_count_reps_u64(int d, int64_t lambda, const sphlab_caps* caps, uint64_t* count_out) {
  if (int rc = require(count_out != nullptr, "count_out is NULL")) return rc;
  return guarded([&] {
    const Count c = count_reps(SphereSpec{d, lambda}, to_caps(caps));
    if (c > Count(UINT64_MAX)) fail(errc::overflow, "representation count exceeds 64 bits");
    *count_out = static_cast<uint64_t>(c);
  });
}

int sphlab_rep_table_json(int d, int64_t max_lambda, const sphlab_caps* caps, char** json_out) {
  if (int rc = require(json_out != nullptr, "json_out is NULL")) return rc;
  return guarded([&] {
    const RepCountTable t = count_reps_upto(d, max_lambda, to_caps(caps));
    *json_out = dup_string(dump_json(rep_table_to_json(t)));
  });
}

int sphlab_enumerate_json(int d, int64_t lambda, const sphlab_caps* caps, char** json_out) {
  if (int rc = require(json_out != nullptr, "json_out is NULL")) return rc;
  return guarded([&] {
    const std::vector<std::int32_t> flat = enumerate_sphere(SphereSpec{d, lambda}, to_caps(caps));
    const std::size_t n = d > 0 ? flat.size() / std::size_t(d) : 0;
    ordered_json j;
    j["d"] = d;
    j["lambda"] = lambda;
    j["count"] = n;
    ordered_json points = ordered_json::array();
    for (std::size_t i = 0; i < n; ++i) {
      ordered_json pt = ordered_json::array();
      for (int k = 0; k < d; ++k) pt.push_back(flat[i * std::size_t(d) + std::size_t(k)]);
      points.push_back(std::move(pt));
    }
    j["points"] = std::move(points);
    *json_out = dup_string(dump_json(j));
  });
}

int sphlab_residue_counts_json(int d, int64_t lambda, int64_t modulus, const sphlab_caps* caps,
                               char** json_out) {
  if (int rc = require(json_out != nullptr, "json_out is NULL")) return rc;
  return guarded([&] {
    const ResidueClassCounts rc2 = residue_class_counts(SphereSpec{d, lambda}, modulus, to_caps(caps));
    *json_out = dup_string(dump_json(residue_to_json(rc2)));
  });
}

int sphlab_grid_from_json(const char* json, sphlab_grid** grid_out) {
  if (int rc = require(json != nullptr, "json is NULL")) return rc;
  if (int rc = require(grid_out != nullptr, "grid_out is NULL")) return rc;
  return guarded([&] {
    GridFunction f = grid_from_json(parse_json(json, "grid"));
    *grid_out = new sphlab_grid{std::move(f)};
  });
}

int sphlab_grid_from_records(int d, size_t n, const int64_t* coords, const double* values,
                             sphlab_grid** grid_out) {
  if (int rc = require(grid_out != nullptr, "grid_out is NULL")) return rc;
  if (int rc = require(n == 0 || (coords != nullptr && values != nullptr),
                       "records are NULL but n > 0"))
    return rc;
  return guarded([&] {
    if (d < 1 || d > 1024) fail(errc::invalid_argument, "dimension out of range");
    std::vector<std::int32_t> cs;
    cs.reserve(n * std::size_t(d));
    for (std::size_t i = 0; i < n * std::size_t(d); ++i) {
      const std::int64_t c = coords[i];
      if (c < -(std::int64_t(1) << 30) || c > (std::int64_t(1) << 30))
        fail(errc::cap_exceeded, "coordinate outside the representable box");
      cs.push_back(static_cast<std::int32_t>(c));
    }
    std::vector<double> vs(values, values + n);
    *grid_out = new sphlab_grid{GridFunction::from_records(d, std::move(cs), std::move(vs))};
  });
}

int sphlab_grid_delta(int d, sphlab_grid** grid_out) {
  if (int rc = require(grid_out != nullptr, "grid_out is NULL")) return rc;
  return guarded([&] { *grid_out = new sphlab_grid{GridFunction::delta(d)}; });
}

void sphlab_grid_free(sphlab_grid* g) { delete g; }

int sphlab_grid_dimension(const sphlab_grid* g) { return g ? g->f.dimension() : 0; }

int64_t sphlab_grid_support_size(const sphlab_grid* g) {
  return g ? static_cast<int64_t>(g->f.support_size()) : 0;
}

int sphlab_grid_value_at(const sphlab_grid* g, const int64_t* point, double* value_out) {
  if (int rc = require(g != nullptr, "grid is NULL")) return rc;
  if (int rc = require(point != nullptr, "point is NULL")) return rc;
  if (int rc = require(value_out != nullptr, "value_out is NULL")) return rc;
  return guarded([&] { *value_out = g->f.value_at(point); });
}

int sphlab_grid_to_json(const sphlab_grid* g, char** json_out) {
  if (int rc = require(g != nullptr, "grid is NULL")) return rc;
  if (int rc = require(json_out != nullptr, "json_out is NULL")) return rc;
  return guarded([&] { *json_out = dup_string(dump_json(grid_to_json(g->f))); });
}

int sphlab_grid_average(const sphlab_grid* g, int64_t lambda, const sphlab_caps* caps,
                        sphlab_grid** grid_out) {
  if (int rc = require(g != nullptr, "grid is NULL")) return rc;
  if (int rc = require(grid_out != nullptr, "grid_out is NULL")) return rc;
  return guarded([&] { *grid_out = new sphlab_grid{average(g->f, lambda, to_caps(caps))}; });
}

int sphlab_grid_maximal(const sphlab_grid* g, size_t n, const int64_t* lambdas,
                        const sphlab_caps* caps, sphlab_grid** grid_out) {
  if (int rc = require(g != nullptr, "grid is NULL")) return rc;
  if (int rc = require(n == 0 || lambdas != nullptr, "lambdas is NULL but n > 0")) return rc;
  if (int rc = require(grid_out != nullptr, "grid_out is NULL")) return rc;
  return guarded([&] {
    std::vector<std::int64_t> ls(lambdas, lambdas + n);
    *grid_out = new sphlab_grid{maximal_over(g->f, ls, to_caps(caps))};
  });
}

int sphlab_grid_lp_norm(const sphlab_grid* g, double p, double* value_out) {
  if (int rc = require(g != nullptr, "grid is NULL")) return rc;
  if (int rc = require(value_out != nullptr, "value_out is NULL")) return rc;
  return guarded([&] { *value_out = lp_norm(g->f, p).value; });
}

int sphlab_sequence_generate(const char* family_json, sphlab_sequence** seq_out) {
  if (int rc = require(family_json != nullptr, "family_json is NULL")) return rc;
  if (int rc = require(seq_out != nullptr, "seq_out is NULL")) return rc;
  return guarded([&] {
    SequenceTruncation s = generate_sequence(parse_json(family_json, "family spec"));
    *seq_out = new sphlab_sequence{std::move(s)};
  });
}

int sphlab_sequence_from_json(const char* json, sphlab_sequence** seq_out) {
  if (int rc = require(json != nullptr, "json is NULL")) return rc;
  if (int rc = require(seq_out != nullptr, "seq_out is NULL")) return rc;
  return guarded([&] {
    SequenceTruncation s = sequence_from_json(parse_json(json, "sequence"));
    *seq_out = new sphlab_sequence{std::move(s)};
  });
}

int sphlab_sequence_from_file(const char* path, sphlab_sequence** seq_out) {
  if (int rc = require(path != nullptr, "path is NULL")) return rc;
  if (int rc = require(seq_out != nullptr, "seq_out is NULL")) return rc;
  return guarded([&] { *seq_out = new sphlab_sequence{sequence_from_file(path)}; });
}

int sphlab_sequence_to_json(const sphlab_sequence* s, char** json_out) {
  if (int rc = require(s != nullptr, "sequence is NULL")) return rc;
  if (int rc = require(json_out != nullptr, "json_out is NULL")) return rc;
  return guarded([&] { *json_out = dup_string(dump_json(sequence_to_json(s->s))); });
}

void sphlab_sequence_free(sphlab_sequence* s) { delete s; }

int64_t sphlab_sequence_size(const sphlab_sequence* s) {
  return s ? static_cast<int64_t>(s->s.terms.size()) : 0;
}

const char* sphlab_sequence_name(const sphlab_sequence* s) {
  return s ? s->s.name.c_str() : nullptr;
}

int sphlab_sequence_terms_i64(const sphlab_sequence* s, int64_t* terms_out, size_t n) {
  if (int rc = require(s != nullptr, "sequence is NULL")) return rc;
  if (int rc = require(n == 0 || terms_out != nullptr, "terms_out is NULL but n > 0")) return rc;
  return guarded([&] {
    const std::size_t m = std::min(n, s->s.terms.size());
    const BigInt limit = BigInt(std::numeric_limits<std::int64_t>::max());
    for (std::size_t i = 0; i < m; ++i) {
      if (s->s.terms[i] > limit) fail(errc::overflow, "sequence term does not fit in int64");
      terms_out[i] = s->s.terms[i].convert_to<std::int64_t>();
    }
  });
}

int sphlab_padic_profile_json(const sphlab_sequence* s, int64_t prime, int jmax, int window,
                              char** json_out) {
  if (int rc = require(s != nullptr, "sequence is NULL")) return rc;
  if (int rc = require(json_out != nullptr, "json_out is NULL")) return rc;
  return guarded([&] {
    *json_out = dup_string(dump_json(profile_to_json(padic_profile(s->s, prime, jmax, window))));
  });
}

int sphlab_dyadic_profile_json(const sphlab_sequence* s, int window, char** json_out) {
  if (int rc = require(s != nullptr, "sequence is NULL")) return rc;
  if (int rc = require(json_out != nullptr, "json_out is NULL")) return rc;
  return guarded(
      [&] { *json_out = dup_string(dump_json(profile_to_json(dyadic_profile(s->s, window)))); });
}

int sphlab_eta_json(const sphlab_sequence* s, int d, const char* mode, const int64_t* primes,
                    size_t n_primes, int jmax, int window, char** json_out) {
  if (int rc = require(s != nullptr, "sequence is NULL")) return rc;
  if (int rc = require(mode != nullptr, "mode is NULL")) return rc;
  if (int rc = require(n_primes == 0 || primes != nullptr, "primes is NULL but n_primes > 0"))
    return rc;
  if (int rc = require(json_out != nullptr, "json_out is NULL")) return rc;
  return guarded([&] {
    EtaMode m;
    const std::string ms(mode);
    if (ms == "declared")
      m = EtaMode::declared;
    else if (ms == "estimated")
      m = EtaMode::estimated;
    else if (ms == "auto" || ms == "automatic")
      m = EtaMode::automatic;
    else
      fail(errc::invalid_argument, "mode must be declared, estimated, or auto");
    std::vector<std::int64_t> ps(primes, primes + n_primes);
    const EtaInputs in = assemble_eta_inputs(s->s, d, m, ps, jmax, window);
    *json_out = dup_string(dump_json(eta_to_json(compute_eta(in))));
  });
}

int sphlab_probe_delta_json(int d, const sphlab_sequence* s, double p, int attempt_direct,
                            const sphlab_caps* caps, char** json_out) {
  if (int rc = require(s != nullptr, "sequence is NULL")) return rc;
  if (int rc = require(json_out != nullptr, "json_out is NULL")) return rc;
  return guarded([&] {
    const DeltaProbeResult r = delta_test(d, s->s, p, to_caps(caps), attempt_direct != 0);
    *json_out = dup_string(dump_json(delta_probe_to_json(r)));
  });
}

int sphlab_probe_slope_json(int d, const sphlab_sequence* s, int include_identity,
                            const int64_t* schedule, size_t n_schedule, double p,
                            const sphlab_caps* caps, char** json_out) {
  if (int rc = require(s != nullptr, "sequence is NULL")) return rc;
  if (int rc = require(n_schedule == 0 || schedule != nullptr, "schedule is NULL but n > 0"))
    return rc;
  if (int rc = require(json_out != nullptr, "json_out is NULL")) return rc;
  return guarded([&] {
    std::vector<std::int64_t> ts(schedule, schedule + n_schedule);
    const SlopeProbeResult r =
        divergence_slope(d, s->s, include_identity != 0, ts, p, to_caps(caps));
    *json_out = dup_string(dump_json(slope_probe_to_json(r)));
  });
}

int sphlab_probe_padic_json(int d, const sphlab_sequence* s, int64_t prime, int level, double q,
                            const sphlab_caps* caps, char** json_out) {
  if (int rc = require(s != nullptr, "sequence is NULL")) return rc;
  if (int rc = require(json_out != nullptr, "json_out is NULL")) return rc;
  return guarded([&] {
    const PadicProbeResult r = periodic_padic_probe(d, s->s, prime, level, q, to_caps(caps));
    *json_out = dup_string(dump_json(padic_probe_to_json(r)));
  });
}

int sphlab_report_to_csv(const char* envelope_json, char** csv_out) {
  if (int rc = require(envelope_json != nullptr, "envelope_json is NULL")) return rc;
  if (int rc = require(csv_out != nullptr, "csv_out is NULL")) return rc;
  return guarded([&] {
    *csv_out = dup_string(report_to_csv(parse_json(envelope_json, "envelope")));
  });
}

}  // extern "C"
