#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <nlohmann/json.hpp>

#include "common.hpp"

namespace sphlab {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::rational<long long>;

Rat parse_rational(const std::string& text);
std::string format_rational(const Rat& r);

// Exact dimension values attached to analytically understood families.
// per_prime overrides default_prime; a missing entry means "not declared".
struct DeclaredDims {
  std::optional<Rat> default_prime;
  std::map<std::int64_t, Rat> per_prime;
  std::optional<Rat> delta_inf;
};

struct GeneratorInfo {
  std::string family;
  nlohmann::ordered_json params;
};

struct SequenceTruncation {
  std::string name;
  std::vector<BigInt> terms;  // strictly increasing, all >= 1
  std::optional<DeclaredDims> declared;
  std::optional<GeneratorInfo> generator;
};

// Validates the invariants (nonempty, strictly increasing, >= 1).
SequenceTruncation make_sequence(std::string name, std::vector<BigInt> terms,
                                 std::optional<DeclaredDims> declared = std::nullopt,
                                 std::optional<GeneratorInfo> generator = std::nullopt);

SequenceTruncation make_naturals(std::int64_t bound);
SequenceTruncation make_squares(std::int64_t bound);  // squares <= bound
SequenceTruncation make_geometric(std::int64_t ratio, std::int64_t count);
SequenceTruncation make_lacunary_random(double ratio, std::int64_t count, std::uint64_t seed);

// Breadth-first residue coverage: stage k places one term in every class
// a mod prime^k, each term at least `growth` times its predecessor. Declared
// delta_prime = 1 and delta_inf = 0.
SequenceTruncation make_padic_cover(std::int64_t prime, int stages, double growth,
                                    std::uint64_t seed);

// Family dispatch from a JSON spec {"family": ..., <params>}.
SequenceTruncation generate_sequence(const nlohmann::ordered_json& family_spec);

SequenceTruncation sequence_from_json(const nlohmann::ordered_json& j);
SequenceTruncation sequence_from_text(const std::string& text);
SequenceTruncation sequence_from_file(const std::string& path);
nlohmann::ordered_json sequence_to_json(const SequenceTruncation& seq);

// ---- Dimension profiles -------------------------------------------------

enum class ProfileKind { padic, dyadic };

struct ProfileScale {
  std::int64_t level = 0;
  std::uint64_t count = 0;
};

struct DimensionEstimate {
  double value = 0.0;
  std::vector<double> step_ratios;
  std::int64_t window_first = 0;
  std::int64_t window_last = 0;
  std::size_t points_used = 0;
};

struct DimensionProfile {
  ProfileKind kind = ProfileKind::padic;
  std::int64_t prime = 0;  // 0 for dyadic
  std::vector<ProfileScale> scales;
  std::vector<std::int64_t> saturated_levels;  // count == #terms
  std::uint64_t term_count = 0;
  DimensionEstimate estimate;
  std::string fit_note;  // nonempty when no slope fit was possible
};

// Occupancy of residue classes mod prime^j for j = 1..jmax.
DimensionProfile padic_profile(const SequenceTruncation& seq, std::int64_t prime, int jmax,
                               int window);

// Counts per dyadic block [2^m, 2^{m+1}); the block containing the maximum
// term is treated as incomplete and excluded from the slope fit.
DimensionProfile dyadic_profile(const SequenceTruncation& seq, int window);

// Least-squares slope of log(count) against level*log_base over the trailing
// `window` scales with count > 0 and count != saturation; clamped to [0,1].
DimensionEstimate estimate_dimension(const std::vector<ProfileScale>& scales, double log_base,
                                     int window,
                                     std::optional<std::uint64_t> saturation = std::nullopt);

// ---- Critical exponent --------------------------------------------------

struct DimValue {
  double value = 0.0;
  std::optional<Rat> exact;
  bool is_declared = false;
};

struct EtaInputs {
  int d = 0;
  std::vector<std::pair<std::int64_t, DimValue>> per_prime;  // sorted by prime
  std::optional<DimValue> delta_inf;
};

struct EtaCandidate {
  std::string label;  // "p=2", "archimedean"
  double value = 0.0;
  std::optional<Rat> exact;
};

struct EtaReport {
  EtaInputs inputs;
  double eta = 0.0;
  std::optional<Rat> eta_exact;  // present when every input is exact
  std::vector<std::string> binding_terms;
  std::vector<EtaCandidate> candidates;
};

// eta = max( max_p (1 + delta_p/(d-1)), 1 + 2*delta_inf/(d-2) ).
EtaReport compute_eta(const EtaInputs& inputs);

enum class EtaMode { declared, estimated, automatic };

EtaInputs assemble_eta_inputs(const SequenceTruncation& seq, int d, EtaMode mode,
                              const std::vector<std::int64_t>& primes, int jmax, int window);

std::vector<std::int64_t> primes_up_to(std::int64_t n);

}  // namespace sphlab
