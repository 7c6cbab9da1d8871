#include "sequence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "lattice.hpp"

namespace sphlab {

namespace {

constexpr std::int64_t kMaxMaterializedTerms = 4'000'000;

std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t n) {
  // modulo sampling: bit-stable across platforms, slight bias is irrelevant here
  return rng() % n;
}

template <class T>
void fisher_yates(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(next_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

std::string double_token(double v) {
  return nlohmann::ordered_json(v).dump();  // shortest round-trip text
}

void check_term_budget(std::int64_t count) {
  if (count > kMaxMaterializedTerms)
    fail(errc::invalid_argument,
         "sequence would materialize " + std::to_string(count) + " terms (limit " +
             std::to_string(kMaxMaterializedTerms) + ")");
}

// growth ratios enter exact integer arithmetic as num/den at 2^-20 resolution
std::pair<std::int64_t, std::int64_t> ratio_as_fraction(double ratio) {
  constexpr std::int64_t den = 1 << 20;
  if (!std::isfinite(ratio) || ratio <= 1.0 + 1.0 / den || ratio > 1e6)
    fail(errc::invalid_argument, "growth ratio must lie in (1, 1e6]");
  auto num = static_cast<std::int64_t>(std::llround(ratio * den));
  return {num, den};
}

BigInt parse_term_token(const std::string& tok, const char* what) {
  if (tok.empty()) fail(errc::parse_error, std::string(what) + ": empty integer token");
  for (char c : tok)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      fail(errc::parse_error, std::string(what) + ": invalid integer '" + tok + "'");
  return BigInt(tok);
}

BigInt term_from_json(const nlohmann::ordered_json& v) {
  if (v.is_number_unsigned()) return BigInt(v.get<std::uint64_t>());
  if (v.is_number_integer()) return BigInt(v.get<std::int64_t>());
  if (v.is_string()) return parse_term_token(v.get<std::string>(), "terms");
  fail(errc::parse_error, "sequence terms must be integers or decimal strings");
}

nlohmann::ordered_json term_to_json(const BigInt& t) {
  if (t <= BigInt(9007199254740992ll)) return t.convert_to<std::int64_t>();
  return t.str();
}

Rat rational_from_json(const nlohmann::ordered_json& v, const char* what) {
  if (v.is_number_unsigned() || v.is_number_integer())
    return Rat(v.get<std::int64_t>());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  fail(errc::parse_error, std::string(what) + ": rationals must be integers or 'a/b' strings");
}

void require_dim_range(const Rat& r, const char* what) {
  if (r < Rat(0) || r > Rat(1))
    fail(errc::invalid_argument, std::string(what) + " must lie in [0, 1]");
}

double rat_to_double(const Rat& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::uint64_t distinct_residues_u64(const std::vector<BigInt>& terms, std::uint64_t m) {
  std::vector<std::uint64_t> res;
  res.reserve(terms.size());
  for (const BigInt& t : terms) res.push_back((t % m).convert_to<std::uint64_t>());
  std::sort(res.begin(), res.end());
  return static_cast<std::uint64_t>(std::unique(res.begin(), res.end()) - res.begin());
}

std::uint64_t distinct_residues_big(const std::vector<BigInt>& terms, const BigInt& m) {
  std::vector<BigInt> res;
  res.reserve(terms.size());
  for (const BigInt& t : terms) res.push_back(t % m);
  std::sort(res.begin(), res.end());
  return static_cast<std::uint64_t>(std::unique(res.begin(), res.end()) - res.begin());
}

void attach_estimate(DimensionProfile& profile, const std::vector<ProfileScale>& fit_scales,
                     double log_base, int window) {
  try {
    profile.estimate = estimate_dimension(fit_scales, log_base, window, profile.term_count);
  } catch (const Error& e) {
    if (e.code() != errc::insufficient_data) throw;
    profile.estimate = DimensionEstimate{};
    profile.fit_note = "no slope fit: fewer than 2 usable scales";
  }
}

}  // namespace

Rat parse_rational(const std::string& text) {
  auto bad = [&]() -> Rat {
    fail(errc::parse_error, "invalid rational '" + text + "' (expected 'a' or 'a/b')");
  };
  std::string num = text;
  std::string den;
  if (auto pos = text.find('/'); pos != std::string::npos) {
    num = text.substr(0, pos);
    den = text.substr(pos + 1);
  }
  auto parse_ll = [&](const std::string& s) -> long long {
    if (s.empty()) bad();
    std::size_t i = (s[0] == '-') ? 1 : 0;
    if (i == s.size()) bad();
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) bad();
    try {
      return std::stoll(s);
    } catch (...) {
      bad();
    }
    return 0;
  };
  long long n = parse_ll(num);
  long long d = den.empty() ? 1 : parse_ll(den);
  if (d == 0) fail(errc::parse_error, "rational denominator must be nonzero");
  return Rat(n, d);
}

std::string format_rational(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

SequenceTruncation make_sequence(std::string name, std::vector<BigInt> terms,
                                 std::optional<DeclaredDims> declared,
                                 std::optional<GeneratorInfo> generator) {
  if (terms.empty()) fail(errc::empty_sequence, "sequence has no terms");
  if (terms.front() < 1) fail(errc::invalid_argument, "sequence terms must be >= 1");
  for (std::size_t i = 1; i < terms.size(); ++i)
    if (terms[i] <= terms[i - 1])
      fail(errc::invalid_argument, "sequence terms must be strictly increasing");
  if (declared) {
    if (declared->default_prime) require_dim_range(*declared->default_prime, "declared delta_p");
    for (const auto& [p, r] : declared->per_prime) {
      if (!is_prime(p)) fail(errc::not_prime, std::to_string(p) + " is not prime");
      require_dim_range(r, "declared delta_p");
    }
    if (declared->delta_inf) require_dim_range(*declared->delta_inf, "declared delta_inf");
  }
  SequenceTruncation seq;
  seq.name = std::move(name);
  seq.terms = std::move(terms);
  seq.declared = std::move(declared);
  seq.generator = std::move(generator);
  return seq;
}

SequenceTruncation make_naturals(std::int64_t bound) {
  if (bound < 1) fail(errc::invalid_argument, "naturals bound must be >= 1");
  check_term_budget(bound);
  std::vector<BigInt> terms;
  terms.reserve(static_cast<std::size_t>(bound));
  for (std::int64_t n = 1; n <= bound; ++n) terms.emplace_back(n);
  DeclaredDims dims;
  dims.default_prime = Rat(1);
  dims.delta_inf = Rat(1);
  GeneratorInfo gen{"naturals", {{"bound", bound}}};
  return make_sequence("naturals(" + std::to_string(bound) + ")", std::move(terms), dims, gen);
}

SequenceTruncation make_squares(std::int64_t bound) {
  if (bound < 1) fail(errc::invalid_argument, "squares bound must be >= 1");
  std::int64_t root = isqrt64(bound);
  check_term_budget(root);
  std::vector<BigInt> terms;
  terms.reserve(static_cast<std::size_t>(root));
  for (std::int64_t n = 1; n <= root; ++n) terms.emplace_back(BigInt(n) * n);
  DeclaredDims dims;
  dims.default_prime = Rat(1);
  dims.delta_inf = Rat(1, 2);
  GeneratorInfo gen{"squares", {{"bound", bound}}};
  return make_sequence("squares(" + std::to_string(bound) + ")", std::move(terms), dims, gen);
}

SequenceTruncation make_geometric(std::int64_t ratio, std::int64_t count) {
  if (ratio < 2) fail(errc::invalid_argument, "geometric ratio must be an integer >= 2");
  if (count < 1) fail(errc::invalid_argument, "geometric count must be >= 1");
  if (count > 100000) fail(errc::invalid_argument, "geometric count too large");
  std::vector<BigInt> terms;
  terms.reserve(static_cast<std::size_t>(count));
  BigInt t(1);
  for (std::int64_t k = 0; k < count; ++k) {
    terms.push_back(t);
    t *= ratio;
  }
  DeclaredDims dims;
  dims.delta_inf = Rat(0);
  GeneratorInfo gen{"geometric", {{"ratio", ratio}, {"count", count}}};
  return make_sequence("geometric(" + std::to_string(ratio) + "," + std::to_string(count) + ")",
                       std::move(terms), dims, gen);
}

SequenceTruncation make_lacunary_random(double ratio, std::int64_t count, std::uint64_t seed) {
  auto [num, den] = ratio_as_fraction(ratio);
  if (count < 1 || count > 100000)
    fail(errc::invalid_argument, "lacunary count must lie in [1, 100000]");
  std::mt19937_64 rng(seed);
  std::vector<BigInt> terms;
  terms.reserve(static_cast<std::size_t>(count));
  BigInt t = 1 + BigInt(next_below(rng, 3));
  for (std::int64_t k = 0; k < count; ++k) {
    terms.push_back(t);
    BigInt scaled = (t * num + den - 1) / den;  // ceil(t * ratio)
    t = scaled + BigInt(next_below(rng, static_cast<std::uint64_t>(k) + 2));
  }
  DeclaredDims dims;
  dims.delta_inf = Rat(0);
  GeneratorInfo gen{"lacunary_random",
                    {{"ratio", ratio}, {"count", count}, {"seed", seed}}};
  return make_sequence("lacunary_random(" + double_token(ratio) + "," + std::to_string(count) +
                           "," + std::to_string(seed) + ")",
                       std::move(terms), dims, gen);
}

SequenceTruncation make_padic_cover(std::int64_t prime, int stages, double growth,
                                    std::uint64_t seed) {
  if (!is_prime(prime)) fail(errc::not_prime, std::to_string(prime) + " is not prime");
  if (stages < 1 || stages > 24) fail(errc::invalid_argument, "stages must lie in [1, 24]");
  auto [num, den] = ratio_as_fraction(growth);
  double total = 0;
  double mk = 1;
  for (int k = 1; k <= stages; ++k) {
    mk *= static_cast<double>(prime);
    total += mk;
  }
  if (total > static_cast<double>(kMaxMaterializedTerms))
    fail(errc::invalid_argument, "padic_cover stage sizes exceed the term limit");

  std::mt19937_64 rng(seed);
  std::vector<BigInt> terms;
  BigInt prev(0);
  BigInt modulus(1);
  for (int k = 1; k <= stages; ++k) {
    modulus *= prime;
    std::vector<BigInt> residues;
    for (BigInt a(0); a < modulus; ++a) residues.push_back(a);
    fisher_yates(residues, rng);
    for (const BigInt& a : residues) {
      BigInt lo = (prev * num) / den + 1;  // strictly above growth * prev
      BigInt t = lo + (((a - lo) % modulus) + modulus) % modulus;
      terms.push_back(t);
      prev = t;
    }
  }
  DeclaredDims dims;
  dims.per_prime[prime] = Rat(1);
  dims.delta_inf = Rat(0);
  GeneratorInfo gen{"padic_cover",
                    {{"prime", prime}, {"stages", stages}, {"growth", growth}, {"seed", seed}}};
  return make_sequence("padic_cover(" + std::to_string(prime) + "," + std::to_string(stages) +
                           "," + double_token(growth) + "," + std::to_string(seed) + ")",
                       std::move(terms), dims, gen);
}

SequenceTruncation generate_sequence(const nlohmann::ordered_json& spec) {
  if (!spec.is_object() || !spec.contains("family") || !spec["family"].is_string())
    fail(errc::parse_error, "family spec must be an object with a 'family' string");
  std::string family = spec["family"].get<std::string>();
  auto get_i64 = [&](const char* key, std::optional<std::int64_t> dflt =
                                          std::nullopt) -> std::int64_t {
    if (!spec.contains(key)) {
      if (dflt) return *dflt;
      fail(errc::invalid_argument, family + " requires parameter '" + key + "'");
    }
    if (!spec[key].is_number_integer() && !spec[key].is_number_unsigned())
      fail(errc::parse_error, std::string("parameter '") + key + "' must be an integer");
    return spec[key].get<std::int64_t>();
  };
  auto get_f64 = [&](const char* key) -> double {
    if (!spec.contains(key))
      fail(errc::invalid_argument, family + " requires parameter '" + key + "'");
    if (!spec[key].is_number())
      fail(errc::parse_error, std::string("parameter '") + key + "' must be a number");
    return spec[key].get<double>();
  };
  if (family == "naturals") return make_naturals(get_i64("bound"));
  if (family == "squares") return make_squares(get_i64("bound"));
  if (family == "geometric") return make_geometric(get_i64("ratio"), get_i64("count"));
  if (family == "lacunary_random")
    return make_lacunary_random(get_f64("ratio"), get_i64("count"),
                                static_cast<std::uint64_t>(get_i64("seed", 0)));
  if (family == "padic_cover")
    return make_padic_cover(get_i64("prime"), static_cast<int>(get_i64("stages")),
                            get_f64("growth"), static_cast<std::uint64_t>(get_i64("seed", 0)));
  fail(errc::invalid_argument, "unknown sequence family '" + family + "'");
}

SequenceTruncation sequence_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
    fail(errc::parse_error, "sequence JSON must be an object with a 'terms' array");
  std::vector<BigInt> terms;
  terms.reserve(j["terms"].size());
  for (const auto& v : j["terms"]) terms.push_back(term_from_json(v));

  std::optional<DeclaredDims> declared;
  if (j.contains("declared_dims") && !j["declared_dims"].is_null()) {
    const auto& dd = j["declared_dims"];
    if (!dd.is_object()) fail(errc::parse_error, "declared_dims must be an object");
    DeclaredDims dims;
    if (dd.contains("delta_p_default"))
      dims.default_prime = rational_from_json(dd["delta_p_default"], "delta_p_default");
    if (dd.contains("delta_p")) {
      if (!dd["delta_p"].is_object())
        fail(errc::parse_error, "delta_p must map primes to rationals");
      for (const auto& [key, val] : dd["delta_p"].items()) {
        std::int64_t p = 0;
        try {
          p = std::stoll(key);
        } catch (...) {
          fail(errc::parse_error, "delta_p key '" + key + "' is not an integer");
        }
        dims.per_prime[p] = rational_from_json(val, "delta_p");
      }
    }
    if (dd.contains("delta_inf"))
      dims.delta_inf = rational_from_json(dd["delta_inf"], "delta_inf");
    declared = std::move(dims);
  }

  std::optional<GeneratorInfo> gen;
  if (j.contains("generator") && !j["generator"].is_null()) {
    const auto& g = j["generator"];
    if (!g.is_object() || !g.contains("family") || !g["family"].is_string())
      fail(errc::parse_error, "generator must be an object with a 'family' string");
    GeneratorInfo info;
    info.family = g["family"].get<std::string>();
    for (const auto& [key, val] : g.items())
      if (key != "family") info.params[key] = val;
    gen = std::move(info);
  }

  std::string name = "sequence";
  if (j.contains("name") && j["name"].is_string()) name = j["name"].get<std::string>();
  return make_sequence(std::move(name), std::move(terms), std::move(declared), std::move(gen));
}

SequenceTruncation sequence_from_text(const std::string& text) {
  std::vector<BigInt> terms;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string tok = line.substr(first, last - first + 1);
    if (tok[0] == '#') continue;
    terms.push_back(parse_term_token(tok, "sequence file"));
  }
  return make_sequence("sequence", std::move(terms));
}

SequenceTruncation sequence_from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open sequence file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) fail(errc::parse_error, "sequence file is empty");
  if (text[first] == '{') {
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(text);
    } catch (const std::exception& e) {
      fail(errc::parse_error, std::string("sequence JSON: ") + e.what());
    }
    SequenceTruncation seq = sequence_from_json(j);
    if (seq.name == "sequence") seq.name = path;
    return seq;
  }
  SequenceTruncation seq = sequence_from_text(text);
  seq.name = path;
  return seq;
}

nlohmann::ordered_json sequence_to_json(const SequenceTruncation& seq) {
  nlohmann::ordered_json j;
  j["name"] = seq.name;
  auto terms = nlohmann::ordered_json::array();
  for (const BigInt& t : seq.terms) terms.push_back(term_to_json(t));
  j["terms"] = std::move(terms);
  if (seq.declared) {
    nlohmann::ordered_json dd;
    if (seq.declared->default_prime)
      dd["delta_p_default"] = format_rational(*seq.declared->default_prime);
    if (!seq.declared->per_prime.empty()) {
      nlohmann::ordered_json dp;
      for (const auto& [p, r] : seq.declared->per_prime)
        dp[std::to_string(p)] = format_rational(r);
      dd["delta_p"] = std::move(dp);
    }
    if (seq.declared->delta_inf) dd["delta_inf"] = format_rational(*seq.declared->delta_inf);
    j["declared_dims"] = std::move(dd);
  }
  if (seq.generator) {
    nlohmann::ordered_json g;
    g["family"] = seq.generator->family;
    for (const auto& [key, val] : seq.generator->params.items()) g[key] = val;
    j["generator"] = std::move(g);
  }
  return j;
}

DimensionProfile padic_profile(const SequenceTruncation& seq, std::int64_t prime, int jmax,
                               int window) {
  if (!is_prime(prime)) fail(errc::not_prime, std::to_string(prime) + " is not prime");
  if (jmax < 1 || jmax > 4096) fail(errc::invalid_argument, "jmax must lie in [1, 4096]");

  DimensionProfile profile;
  profile.kind = ProfileKind::padic;
  profile.prime = prime;
  profile.term_count = seq.terms.size();

  const BigInt& max_term = seq.terms.back();
  BigInt modulus(1);
  bool saturated = false;
  for (int j = 1; j <= jmax; ++j) {
    modulus *= prime;
    std::uint64_t count;
    if (saturated) {
      count = profile.term_count;  // distinct residues stay distinct at finer scales
    } else if (modulus > max_term) {
      count = profile.term_count;
    } else if (modulus <= BigInt(std::uint64_t(1) << 62)) {
      count = distinct_residues_u64(seq.terms, modulus.convert_to<std::uint64_t>());
    } else {
      count = distinct_residues_big(seq.terms, modulus);
    }
    if (count == profile.term_count) {
      saturated = true;
      profile.saturated_levels.push_back(j);
    }
    profile.scales.push_back({j, count});
  }
  attach_estimate(profile, profile.scales, std::log(static_cast<double>(prime)), window);
  return profile;
}

DimensionProfile dyadic_profile(const SequenceTruncation& seq, int window) {
  DimensionProfile profile;
  profile.kind = ProfileKind::dyadic;
  profile.prime = 0;
  profile.term_count = seq.terms.size();

  auto block_of = [](const BigInt& t) {
    return static_cast<std::int64_t>(boost::multiprecision::msb(t));
  };
  std::int64_t lo = block_of(seq.terms.front());
  std::int64_t hi = block_of(seq.terms.back());
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const BigInt& t : seq.terms) ++counts[static_cast<std::size_t>(block_of(t) - lo)];

  std::vector<ProfileScale> fit_scales;
  for (std::int64_t m = lo; m <= hi; ++m) {
    std::uint64_t c = counts[static_cast<std::size_t>(m - lo)];
    profile.scales.push_back({m, c});
    if (c == profile.term_count) profile.saturated_levels.push_back(m);
    if (m != hi && c > 0) fit_scales.push_back({m, c});  // top block is incomplete
  }
  attach_estimate(profile, fit_scales, std::log(2.0), window);
  return profile;
}

DimensionEstimate estimate_dimension(const std::vector<ProfileScale>& scales, double log_base,
                                     int window, std::optional<std::uint64_t> saturation) {
  if (window < 2) fail(errc::invalid_argument, "fit window must be >= 2");
  if (!(log_base > 0.0)) fail(errc::invalid_argument, "log base must be positive");
  std::vector<ProfileScale> usable;
  for (const ProfileScale& s : scales) {
    if (s.count == 0) continue;
    if (saturation && s.count == *saturation) continue;
    usable.push_back(s);
  }
  if (usable.size() > static_cast<std::size_t>(window))
    usable.erase(usable.begin(),
                 usable.end() - static_cast<std::ptrdiff_t>(window));
  if (usable.size() < 2)
    fail(errc::insufficient_data, "slope fit needs at least 2 usable scales");

  DimensionEstimate est;
  est.points_used = usable.size();
  est.window_first = usable.front().level;
  est.window_last = usable.back().level;

  std::vector<double> xs(usable.size());
  std::vector<double> ys(usable.size());
  bool all_equal = true;
  for (std::size_t i = 0; i < usable.size(); ++i) {
    xs[i] = static_cast<double>(usable[i].level) * log_base;
    ys[i] = std::log(static_cast<double>(usable[i].count));
    if (usable[i].count != usable[0].count) all_equal = false;
  }
  for (std::size_t i = 0; i + 1 < usable.size(); ++i)
    est.step_ratios.push_back((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));

  if (all_equal) {
    est.value = 0.0;
    return est;
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  est.value = std::clamp(num / den, 0.0, 1.0);
  return est;
}

EtaReport compute_eta(const EtaInputs& inputs) {
  if (inputs.d < 4)
    fail(errc::dimension_too_small, "eta requires dimension >= 4");
  if (inputs.per_prime.empty() && !inputs.delta_inf)
    fail(errc::invalid_argument, "eta needs at least one dimension input");

  auto check_value = [](const DimValue& v, const std::string& what) {
    if (v.exact) {
      if (*v.exact < Rat(0) || *v.exact > Rat(1))
        fail(errc::invalid_argument, what + " must lie in [0, 1]");
    }
    if (!(v.value >= 0.0 && v.value <= 1.0))
      fail(errc::invalid_argument, what + " must lie in [0, 1]");
  };

  EtaReport report;
  report.inputs = inputs;
  bool all_exact = true;

  for (const auto& [p, v] : inputs.per_prime) {
    if (!is_prime(p)) fail(errc::not_prime, std::to_string(p) + " is not prime");
    check_value(v, "delta_" + std::to_string(p));
    EtaCandidate cand;
    cand.label = "p=" + std::to_string(p);
    if (v.exact) {
      cand.exact = Rat(1) + *v.exact / (inputs.d - 1);
      cand.value = rat_to_double(*cand.exact);
    } else {
      all_exact = false;
      cand.value = 1.0 + v.value / static_cast<double>(inputs.d - 1);
    }
    report.candidates.push_back(std::move(cand));
  }
  if (inputs.delta_inf) {
    check_value(*inputs.delta_inf, "delta_inf");
    EtaCandidate cand;
    cand.label = "archimedean";
    if (inputs.delta_inf->exact) {
      cand.exact = Rat(1) + Rat(2) * *inputs.delta_inf->exact / (inputs.d - 2);
      cand.value = rat_to_double(*cand.exact);
    } else {
      all_exact = false;
      cand.value = 1.0 + 2.0 * inputs.delta_inf->value / static_cast<double>(inputs.d - 2);
    }
    report.candidates.push_back(std::move(cand));
  } else {
    all_exact = all_exact && !inputs.per_prime.empty();
  }

  if (all_exact) {
    Rat best(0);
    for (const auto& c : report.candidates) best = std::max(best, *c.exact);
    report.eta_exact = best;
    report.eta = rat_to_double(best);
    for (const auto& c : report.candidates)
      if (*c.exact == best) report.binding_terms.push_back(c.label);
  } else {
    double best = 0.0;
    for (const auto& c : report.candidates) best = std::max(best, c.value);
    report.eta = best;
    for (const auto& c : report.candidates)
      if (c.value == best) report.binding_terms.push_back(c.label);
  }
  return report;
}

EtaInputs assemble_eta_inputs(const SequenceTruncation& seq, int d, EtaMode mode,
                              const std::vector<std::int64_t>& primes, int jmax, int window) {
  EtaInputs inputs;
  inputs.d = d;

  auto declared_for = [&](std::int64_t p) -> std::optional<Rat> {
    if (!seq.declared) return std::nullopt;
    if (auto it = seq.declared->per_prime.find(p); it != seq.declared->per_prime.end())
      return it->second;
    return seq.declared->default_prime;
  };

  for (std::int64_t p : primes) {
    std::optional<Rat> decl = declared_for(p);
    if (mode == EtaMode::declared || (mode == EtaMode::automatic && decl)) {
      if (!decl) continue;
      DimValue v;
      v.exact = *decl;
      v.value = rat_to_double(*decl);
      v.is_declared = true;
      inputs.per_prime.emplace_back(p, v);
    } else {
      DimensionProfile profile = padic_profile(seq, p, jmax, window);
      if (!profile.fit_note.empty()) continue;  // no usable estimate at this prime
      DimValue v;
      v.value = profile.estimate.value;
      v.is_declared = false;
      inputs.per_prime.emplace_back(p, v);
    }
  }

  std::optional<Rat> decl_inf = seq.declared ? seq.declared->delta_inf : std::nullopt;
  if (mode == EtaMode::declared || (mode == EtaMode::automatic && decl_inf)) {
    if (decl_inf) {
      DimValue v;
      v.exact = *decl_inf;
      v.value = rat_to_double(*decl_inf);
      v.is_declared = true;
      inputs.delta_inf = v;
    }
  } else {
    DimensionProfile profile = dyadic_profile(seq, window);
    if (profile.fit_note.empty()) {
      DimValue v;
      v.value = profile.estimate.value;
      v.is_declared = false;
      inputs.delta_inf = v;
    }
  }

  if (inputs.per_prime.empty() && !inputs.delta_inf)
    fail(errc::invalid_argument,
         mode == EtaMode::declared
             ? "sequence declares no dimensions; use estimated mode"
             : "no dimension inputs could be assembled");
  return inputs;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n > 1000000) fail(errc::invalid_argument, "prime bound too large");
  std::vector<bool> sieve(static_cast<std::size_t>(std::max<std::int64_t>(n + 1, 2)), true);
  for (std::int64_t i = 2; i <= n; ++i) {
    if (!sieve[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (std::int64_t k = i * i; k <= n; k += i) sieve[static_cast<std::size_t>(k)] = false;
  }
  return out;
}

}  // namespace sphlab
