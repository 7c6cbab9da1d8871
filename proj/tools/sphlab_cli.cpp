// sphlab command-line front end. Talks to the core exclusively through the
// C interface; JSON here is presentation-layer assembly only.

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sphlab/sphlab.h"

namespace {

using ojson = nlohmann::ordered_json;

struct AppError : std::runtime_error {
  int status;
  AppError(int s, const std::string& msg) : std::runtime_error(msg), status(s) {}
};

[[noreturn]] void die(int status, const std::string& msg) { throw AppError(status, msg); }

void check(int rc) {
  if (rc != SPHLAB_OK) die(rc, sphlab_last_error());
}

struct StringFree {
  void operator()(char* s) const { sphlab_string_free(s); }
};
using CStr = std::unique_ptr<char, StringFree>;

struct GridFree {
  void operator()(sphlab_grid* g) const { sphlab_grid_free(g); }
};
using Grid = std::unique_ptr<sphlab_grid, GridFree>;

struct SeqFree {
  void operator()(sphlab_sequence* s) const { sphlab_sequence_free(s); }
};
using Seq = std::unique_ptr<sphlab_sequence, SeqFree>;

// Options shared by every subcommand. Only one subcommand parses per run.
struct Common {
  std::string format = "json";
  std::string out;
  sphlab_caps caps{};
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", c.out, "Write output to a file instead of stdout");
  cmd->add_option("--threads", c.caps.threads, "Worker threads (never affects results)")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  cmd->add_option("--cap-sphere-points", c.caps.max_sphere_points, "Sphere point budget")
      ->capture_default_str();
  cmd->add_option("--cap-torus-cells", c.caps.max_torus_cells, "Torus cell budget")
      ->capture_default_str();
  cmd->add_option("--cap-sieve-work", c.caps.max_sieve_work, "Sieve work budget")
      ->capture_default_str();
}

void write_output(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) die(SPHLAB_IO_ERROR, "cannot open output file: " + c.out);
  f << text;
  if (!f) die(SPHLAB_IO_ERROR, "write failed: " + c.out);
}

ojson caps_json(const sphlab_caps& caps) {
  // threads deliberately omitted: reports are identical across thread counts
  ojson j;
  j["max_sphere_points"] = caps.max_sphere_points;
  j["max_torus_cells"] = caps.max_torus_cells;
  j["max_sieve_work"] = caps.max_sieve_work;
  return j;
}

ojson parse_payload(const char* text) {
  ojson j = ojson::parse(text, nullptr, false);
  if (j.is_discarded()) die(SPHLAB_INTERNAL, "core returned malformed JSON");
  return j;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

void emit_report(const Common& c, const std::string& command, ojson config, ojson result) {
  ojson env;
  env["tool"] = "sphlab";
  env["version"] = sphlab_version();
  env["command"] = command;
  env["config"] = std::move(config);
  env["result"] = std::move(result);
  if (c.format == "csv") {
    char* csv = nullptr;
    check(sphlab_report_to_csv(dump(env).c_str(), &csv));
    CStr hold(csv);
    write_output(c, csv);
  } else {
    write_output(c, dump(env));
  }
}

std::string csv_token(const ojson& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Grid data output: JSON is the file format itself, CSV a flat x1..xd,value view.
void emit_grid(const Common& c, const sphlab_grid* g) {
  char* raw = nullptr;
  check(sphlab_grid_to_json(g, &raw));
  CStr hold(raw);
  if (c.format == "json") {
    write_output(c, raw);
    return;
  }
  const ojson j = parse_payload(raw);
  const int d = j.at("d").get<int>();
  std::ostringstream out;
  for (int k = 1; k <= d; ++k) out << (k > 1 ? "," : "") << 'x' << k;
  out << ",value\n";
  for (const ojson& rec : j.at("records")) {
    for (std::size_t k = 0; k < rec.size(); ++k) out << (k > 0 ? "," : "") << csv_token(rec[k]);
    out << '\n';
  }
  write_output(c, out.str());
}

Seq load_sequence(const std::string& path) {
  sphlab_sequence* s = nullptr;
  check(sphlab_sequence_from_file(path.c_str(), &s));
  return Seq(s);
}

std::vector<std::int64_t> sequence_terms(const sphlab_sequence* s) {
  std::vector<std::int64_t> terms(std::size_t(sphlab_sequence_size(s)));
  check(sphlab_sequence_terms_i64(s, terms.data(), terms.size()));
  return terms;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) die(SPHLAB_IO_ERROR, "cannot open file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::int64_t> small_primes_upto(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t k = 2; k <= n; ++k) {
    bool prime = true;
    for (std::int64_t q = 2; q * q <= k; ++q)
      if (k % q == 0) {
        prime = false;
        break;
      }
    if (prime) out.push_back(k);
  }
  return out;
}

std::vector<std::int64_t> resolve_primes(const std::vector<std::int64_t>& primes,
                                         std::int64_t primes_up_to) {
  std::vector<std::int64_t> out = primes;
  if (primes_up_to > 0)
    for (std::int64_t p : small_primes_upto(primes_up_to)) out.push_back(p);
  if (out.empty()) out = {2, 3, 5, 7};
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---- subcommand state --------------------------------------------------

struct CountArgs {
  Common common;
  int d = 0;
  std::int64_t lambda = -1;
  std::int64_t max_lambda = -1;
  bool has_lambda = false, has_max = false;
};

struct EnumArgs {
  Common common;
  int d = 0;
  std::int64_t lambda = 0;
  std::int64_t modulus = 0;  // nonzero: residue class view instead of points
};

struct AvgArgs {
  Common common;
  std::string grid_path;
  std::int64_t lambda = 0;
};

struct MaxArgs {
  Common common;
  std::string grid_path;
  std::string seq_path;
  std::vector<std::int64_t> schedule;
};

struct GenArgs {
  Common common;
  std::string family;
  std::int64_t bound = 0;
  std::int64_t count = 0;
  double ratio = 0.0;
  std::int64_t prime = 0;
  int stages = 0;
  double growth = 2.0;
  std::uint64_t seed = 0;
};

struct AnalyzeArgs {
  Common common;
  std::string seq_path;
  std::vector<std::int64_t> primes;
  std::int64_t primes_up_to = 0;
  int jmax = 16;
  int window = 6;
};

struct EtaArgs {
  Common common;
  std::string seq_path;
  int d = 0;
  bool declared = false, estimated = false;
  std::vector<std::int64_t> primes;
  std::int64_t primes_up_to = 0;
  int jmax = 16;
  int window = 6;
};

struct DeltaArgs {
  Common common;
  std::string seq_path;
  int d = 0;
  double p = 2.0;
  bool no_direct = false;
};

struct SlopeArgs {
  Common common;
  std::string seq_path;
  int d = 0;
  double p = 2.0;
  std::vector<std::int64_t> schedule;
  bool no_identity = false;
};

struct PadicArgs {
  Common common;
  std::string seq_path;
  int d = 0;
  std::int64_t prime = 2;
  int level = 3;
  double q = 1.0;
};

// ---- handlers ------------------------------------------------------------

void run_count(const CountArgs& a) {
  if (a.has_lambda == a.has_max)
    die(SPHLAB_INVALID_ARGUMENT, "count needs exactly one of --lambda / --max-lambda");
  ojson config;
  config["d"] = a.d;
  if (a.has_lambda) {
    config["lambda"] = a.lambda;
    config["caps"] = caps_json(a.common.caps);
    char* raw = nullptr;
    check(sphlab_count_reps(a.d, a.lambda, &a.common.caps, &raw));
    CStr hold(raw);
    ojson result;
    result["d"] = a.d;
    result["lambda"] = a.lambda;
    // counts small enough stay JSON numbers, large ones decimal strings
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (errno == 0 && end && *end == '\0' && v <= (1ull << 53))
      result["count"] = v;
    else
      result["count"] = std::string(raw);
    emit_report(a.common, "count", std::move(config), std::move(result));
  } else {
    config["max_lambda"] = a.max_lambda;
    config["caps"] = caps_json(a.common.caps);
    char* raw = nullptr;
    check(sphlab_rep_table_json(a.d, a.max_lambda, &a.common.caps, &raw));
    CStr hold(raw);
    emit_report(a.common, "count", std::move(config), parse_payload(raw));
  }
}

void run_enumerate(const EnumArgs& a) {
  ojson config;
  config["d"] = a.d;
  config["lambda"] = a.lambda;
  if (a.modulus != 0) config["modulus"] = a.modulus;
  config["caps"] = caps_json(a.common.caps);
  char* raw = nullptr;
  if (a.modulus != 0) {
    check(sphlab_residue_counts_json(a.d, a.lambda, a.modulus, &a.common.caps, &raw));
    CStr hold(raw);
    emit_report(a.common, "residue", std::move(config), parse_payload(raw));
  } else {
    check(sphlab_enumerate_json(a.d, a.lambda, &a.common.caps, &raw));
    CStr hold(raw);
    emit_report(a.common, "enumerate", std::move(config), parse_payload(raw));
  }
}

void run_average(const AvgArgs& a) {
  const std::string text = read_file(a.grid_path);
  sphlab_grid* in = nullptr;
  check(sphlab_grid_from_json(text.c_str(), &in));
  Grid hold_in(in);
  sphlab_grid* out = nullptr;
  check(sphlab_grid_average(in, a.lambda, &a.common.caps, &out));
  Grid hold_out(out);
  emit_grid(a.common, out);
}

void run_maximal(const MaxArgs& a) {
  if (a.seq_path.empty() == a.schedule.empty())
    die(SPHLAB_INVALID_ARGUMENT, "maximal needs exactly one of --seq / --schedule");
  std::vector<std::int64_t> radii = a.schedule;
  if (!a.seq_path.empty()) {
    Seq seq = load_sequence(a.seq_path);
    radii = sequence_terms(seq.get());
  }
  const std::string text = read_file(a.grid_path);
  sphlab_grid* in = nullptr;
  check(sphlab_grid_from_json(text.c_str(), &in));
  Grid hold_in(in);
  sphlab_grid* out = nullptr;
  check(sphlab_grid_maximal(in, radii.size(), radii.data(), &a.common.caps, &out));
  Grid hold_out(out);
  emit_grid(a.common, out);
}

void run_generate(const GenArgs& a) {
  ojson spec;
  spec["family"] = a.family;
  if (a.family == "naturals" || a.family == "squares") {
    spec["bound"] = a.bound;
  } else if (a.family == "geometric") {
    if (a.ratio == std::floor(a.ratio) && std::abs(a.ratio) < 9e18)
      spec["ratio"] = std::int64_t(a.ratio);
    else
      spec["ratio"] = a.ratio;
    spec["count"] = a.count;
  } else if (a.family == "lacunary_random") {
    spec["ratio"] = a.ratio;
    spec["count"] = a.count;
    spec["seed"] = a.seed;
  } else if (a.family == "padic_cover") {
    spec["prime"] = a.prime;
    spec["stages"] = a.stages;
    spec["growth"] = a.growth;
    spec["seed"] = a.seed;
  } else {
    die(SPHLAB_INVALID_ARGUMENT, "unknown family: " + a.family);
  }
  sphlab_sequence* s = nullptr;
  check(sphlab_sequence_generate(dump(spec).c_str(), &s));
  Seq hold(s);
  char* raw = nullptr;
  check(sphlab_sequence_to_json(s, &raw));
  CStr hold_raw(raw);
  if (a.common.format == "json") {
    write_output(a.common, raw);
    return;
  }
  // csv: one term per line (also valid text-format sequence input)
  const ojson j = parse_payload(raw);
  std::ostringstream out;
  for (const ojson& t : j.at("terms")) out << csv_token(t) << '\n';
  write_output(a.common, out.str());
}

void run_analyze(const AnalyzeArgs& a) {
  Seq seq = load_sequence(a.seq_path);
  const std::vector<std::int64_t> primes = resolve_primes(a.primes, a.primes_up_to);
  ojson config;
  config["seq"] = a.seq_path;
  config["primes"] = primes;
  config["jmax"] = a.jmax;
  config["window"] = a.window;
  ojson profiles = ojson::array();
  for (std::int64_t p : primes) {
    char* raw = nullptr;
    check(sphlab_padic_profile_json(seq.get(), p, a.jmax, a.window, &raw));
    CStr hold(raw);
    profiles.push_back(parse_payload(raw));
  }
  {
    char* raw = nullptr;
    check(sphlab_dyadic_profile_json(seq.get(), a.window, &raw));
    CStr hold(raw);
    profiles.push_back(parse_payload(raw));
  }
  ojson result;
  result["sequence"] = sphlab_sequence_name(seq.get());
  result["term_count"] = sphlab_sequence_size(seq.get());
  result["profiles"] = std::move(profiles);
  emit_report(a.common, "analyze", std::move(config), std::move(result));
}

void run_eta(const EtaArgs& a) {
  Seq seq = load_sequence(a.seq_path);
  const std::vector<std::int64_t> primes = resolve_primes(a.primes, a.primes_up_to);
  const char* mode = a.declared ? "declared" : (a.estimated ? "estimated" : "auto");
  ojson config;
  config["seq"] = a.seq_path;
  config["d"] = a.d;
  config["mode"] = mode;
  config["primes"] = primes;
  config["jmax"] = a.jmax;
  config["window"] = a.window;
  char* raw = nullptr;
  check(sphlab_eta_json(seq.get(), a.d, mode, primes.data(), primes.size(), a.jmax, a.window, &raw));
  CStr hold(raw);
  emit_report(a.common, "eta", std::move(config), parse_payload(raw));
}

void run_probe_delta(const DeltaArgs& a) {
  Seq seq = load_sequence(a.seq_path);
  ojson config;
  config["seq"] = a.seq_path;
  config["d"] = a.d;
  config["p"] = a.p;
  config["direct"] = !a.no_direct;
  config["caps"] = caps_json(a.common.caps);
  char* raw = nullptr;
  check(sphlab_probe_delta_json(a.d, seq.get(), a.p, a.no_direct ? 0 : 1, &a.common.caps, &raw));
  CStr hold(raw);
  emit_report(a.common, "probe-delta", std::move(config), parse_payload(raw));
}

void run_probe_slope(const SlopeArgs& a) {
  Seq seq = load_sequence(a.seq_path);
  ojson config;
  config["seq"] = a.seq_path;
  config["d"] = a.d;
  config["p"] = a.p;
  config["schedule"] = a.schedule;
  config["include_identity"] = !a.no_identity;
  config["caps"] = caps_json(a.common.caps);
  char* raw = nullptr;
  check(sphlab_probe_slope_json(a.d, seq.get(), a.no_identity ? 0 : 1, a.schedule.data(),
                                a.schedule.size(), a.p, &a.common.caps, &raw));
  CStr hold(raw);
  emit_report(a.common, "probe-slope", std::move(config), parse_payload(raw));
}

void run_probe_padic(const PadicArgs& a) {
  Seq seq = load_sequence(a.seq_path);
  ojson config;
  config["seq"] = a.seq_path;
  config["d"] = a.d;
  config["prime"] = a.prime;
  config["level"] = a.level;
  config["q"] = a.q;
  config["caps"] = caps_json(a.common.caps);
  char* raw = nullptr;
  check(sphlab_probe_padic_json(a.d, seq.get(), a.prime, a.level, a.q, &a.common.caps, &raw));
  CStr hold(raw);
  emit_report(a.common, "probe-padic", std::move(config), parse_payload(raw));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arithmetic spherical averages and maximal operators on Z^d"};
  app.set_version_flag("--version", sphlab_version());
  app.require_subcommand(1);

  sphlab_caps defaults{};
  sphlab_caps_init(&defaults);

  CountArgs count_args;
  EnumArgs enum_args;
  AvgArgs avg_args;
  MaxArgs max_args;
  GenArgs gen_args;
  AnalyzeArgs an_args;
  EtaArgs eta_args;
  DeltaArgs delta_args;
  SlopeArgs slope_args;
  PadicArgs padic_args;
  for (Common* c : {&count_args.common, &enum_args.common, &avg_args.common, &max_args.common,
                    &gen_args.common, &an_args.common, &eta_args.common, &delta_args.common,
                    &slope_args.common, &padic_args.common})
    c->caps = defaults;

  auto* c_count = app.add_subcommand("count", "Representation counts r_d(lambda)");
  c_count->add_option("--d", count_args.d, "Ambient dimension")->required()->check(CLI::Range(4, 1024));
  auto* lam = c_count->add_option("--lambda", count_args.lambda, "Single radius squared");
  auto* maxlam = c_count->add_option("--max-lambda", count_args.max_lambda, "Table 0..max");
  add_common(c_count, count_args.common);
  c_count->callback([&] {
    count_args.has_lambda = lam->count() > 0;
    count_args.has_max = maxlam->count() > 0;
    run_count(count_args);
  });

  auto* c_enum = app.add_subcommand("enumerate", "Sphere points or residue classes");
  c_enum->add_option("--d", enum_args.d, "Ambient dimension")->required()->check(CLI::Range(4, 1024));
  c_enum->add_option("--lambda", enum_args.lambda, "Radius squared")->required();
  c_enum->add_option("--modulus", enum_args.modulus, "Report residue classes mod this instead");
  add_common(c_enum, enum_args.common);
  c_enum->callback([&] { run_enumerate(enum_args); });

  auto* c_avg = app.add_subcommand("average", "Spherical average of a grid function");
  c_avg->add_option("--grid", avg_args.grid_path, "Grid JSON file")->required();
  c_avg->add_option("--lambda", avg_args.lambda, "Radius squared")->required();
  add_common(c_avg, avg_args.common);
  c_avg->callback([&] { run_average(avg_args); });

  auto* c_max = app.add_subcommand("maximal", "Maximal operator over a radius list");
  c_max->add_option("--grid", max_args.grid_path, "Grid JSON file")->required();
  c_max->add_option("--seq", max_args.seq_path, "Radius sequence file");
  c_max->add_option("--schedule", max_args.schedule, "Inline radius list")->delimiter(',');
  add_common(c_max, max_args.common);
  c_max->callback([&] { run_maximal(max_args); });

  auto* c_gen = app.add_subcommand("generate", "Radius sequence families");
  c_gen->add_option("--family", gen_args.family, "naturals|squares|geometric|lacunary_random|padic_cover")
      ->required();
  c_gen->add_option("--bound", gen_args.bound, "Largest term (naturals, squares)");
  c_gen->add_option("--count", gen_args.count, "Number of terms (geometric, lacunary_random)");
  c_gen->add_option("--ratio", gen_args.ratio, "Growth ratio (geometric, lacunary_random)");
  c_gen->add_option("--prime", gen_args.prime, "Prime base (padic_cover)");
  c_gen->add_option("--stages", gen_args.stages, "Coverage stages (padic_cover)");
  c_gen->add_option("--growth", gen_args.growth, "Minimum term growth (padic_cover)")
      ->capture_default_str();
  c_gen->add_option("--seed", gen_args.seed, "RNG seed")->capture_default_str();
  add_common(c_gen, gen_args.common);
  c_gen->callback([&] { run_generate(gen_args); });

  auto* c_an = app.add_subcommand("analyze", "Dimension profiles and estimates");
  c_an->add_option("--seq", an_args.seq_path, "Sequence file")->required();
  c_an->add_option("--prime", an_args.primes, "Profile prime (repeatable)");
  c_an->add_option("--primes-up-to", an_args.primes_up_to, "Profile all primes up to N");
  c_an->add_option("--jmax", an_args.jmax, "Deepest p-adic level")->check(CLI::Range(1, 64))
      ->capture_default_str();
  c_an->add_option("--window", an_args.window, "Slope fit window")->check(CLI::Range(2, 64))
      ->capture_default_str();
  add_common(c_an, an_args.common);
  c_an->callback([&] { run_analyze(an_args); });

  auto* c_eta = app.add_subcommand("eta", "Critical exponent from sequence dimensions");
  c_eta->add_option("--seq", eta_args.seq_path, "Sequence file")->required();
  c_eta->add_option("--d", eta_args.d, "Ambient dimension")->required()->check(CLI::Range(4, 1024));
  auto* fd = c_eta->add_flag("--declared", eta_args.declared, "Use declared dimensions only");
  c_eta->add_flag("--estimated", eta_args.estimated, "Use estimated dimensions only")->excludes(fd);
  c_eta->add_option("--prime", eta_args.primes, "p-adic input prime (repeatable)");
  c_eta->add_option("--primes-up-to", eta_args.primes_up_to, "All primes up to N");
  c_eta->add_option("--jmax", eta_args.jmax, "Deepest p-adic level")->check(CLI::Range(1, 64))
      ->capture_default_str();
  c_eta->add_option("--window", eta_args.window, "Slope fit window")->check(CLI::Range(2, 64))
      ->capture_default_str();
  add_common(c_eta, eta_args.common);
  c_eta->callback([&] { run_eta(eta_args); });

  auto* c_pd = app.add_subcommand("probe-delta", "Point-mass operator-norm lower bound");
  c_pd->add_option("--seq", delta_args.seq_path, "Sequence file")->required();
  c_pd->add_option("--d", delta_args.d, "Ambient dimension")->required()->check(CLI::Range(4, 1024));
  c_pd->add_option("--p", delta_args.p, "Norm exponent")->capture_default_str();
  c_pd->add_flag("--no-direct", delta_args.no_direct, "Skip the direct grid evaluation");
  add_common(c_pd, delta_args.common);
  c_pd->callback([&] { run_probe_delta(delta_args); });

  auto* c_ps = app.add_subcommand("probe-slope", "Divergence slope across truncations");
  c_ps->add_option("--seq", slope_args.seq_path, "Sequence file")->required();
  c_ps->add_option("--d", slope_args.d, "Ambient dimension")->required()->check(CLI::Range(5, 1024));
  c_ps->add_option("--p", slope_args.p, "Norm exponent")->capture_default_str();
  c_ps->add_option("--schedule", slope_args.schedule, "Truncation bounds T1,T2,...")
      ->required()
      ->delimiter(',');
  c_ps->add_flag("--no-identity", slope_args.no_identity, "Exclude the radius-0 average");
  add_common(c_ps, slope_args.common);
  c_ps->callback([&] { run_probe_slope(slope_args); });

  auto* c_pp = app.add_subcommand("probe-padic", "Periodic p-adic torus probe");
  c_pp->add_option("--seq", padic_args.seq_path, "Sequence file")->required();
  c_pp->add_option("--d", padic_args.d, "Ambient dimension")->required()->check(CLI::Range(4, 1024));
  c_pp->add_option("--prime", padic_args.prime, "Torus prime")->required();
  c_pp->add_option("--level", padic_args.level, "Deepest stage k")->check(CLI::Range(1, 64))
      ->capture_default_str();
  c_pp->add_option("--q", padic_args.q, "Torus norm exponent")->capture_default_str();
  add_common(c_pp, padic_args.common);
  c_pp->callback([&] { run_probe_padic(padic_args); });

  const auto t0 = std::chrono::steady_clock::now();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    ojson err;
    err["error"] = {{"status", SPHLAB_INVALID_ARGUMENT},
                    {"name", sphlab_status_name(SPHLAB_INVALID_ARGUMENT)},
                    {"message", e.what()}};
    std::cout << err.dump(2) << "\n";
    return SPHLAB_INVALID_ARGUMENT;
  } catch (const AppError& e) {
    ojson err;
    err["error"] = {{"status", e.status},
                    {"name", sphlab_status_name(e.status)},
                    {"message", e.what()}};
    std::cout << err.dump(2) << "\n";
    return e.status == 0 ? SPHLAB_INTERNAL : e.status;
  } catch (const std::exception& e) {
    ojson err;
    err["error"] = {{"status", SPHLAB_INTERNAL},
                    {"name", sphlab_status_name(SPHLAB_INTERNAL)},
                    {"message", e.what()}};
    std::cout << err.dump(2) << "\n";
    return SPHLAB_INTERNAL;
  }
  const auto t1 = std::chrono::steady_clock::now();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  std::fprintf(stderr, "runtime_ms=%lld\n", static_cast<long long>(ms));
  return 0;
}
