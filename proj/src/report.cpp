#include "report.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace sphlab {

namespace {

constexpr std::uint64_t kJsonExactLimit = 9007199254740992ull;  // 2^53

ordered_json rat_json(const Rat& r) { return ordered_json(format_rational(r)); }

ordered_json dim_value_json(const DimValue& v) {
  ordered_json j;
  j["value"] = v.value;
  if (v.exact) j["exact"] = rat_json(*v.exact);
  j["source"] = v.is_declared ? "declared" : "estimated";
  return j;
}

std::string csv_token(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

ordered_json count_to_json(Count c) {
  if (c <= Count(kJsonExactLimit)) return ordered_json(static_cast<std::uint64_t>(c));
  return ordered_json(count_to_string(c));
}

Count count_from_json(const ordered_json& j) {
  if (j.is_number_unsigned()) return Count(j.get<std::uint64_t>());
  if (j.is_number_integer()) {
    const std::int64_t v = j.get<std::int64_t>();
    if (v < 0) fail(errc::parse_error, "count cannot be negative");
    return Count(std::uint64_t(v));
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.empty()) fail(errc::parse_error, "empty count literal");
    Count c = 0;
    for (char ch : s) {
      if (ch < '0' || ch > '9') fail(errc::parse_error, "count literal must be decimal digits");
      c = checked_add(checked_mul_small(c, 10u), Count(unsigned(ch - '0')));
    }
    return c;
  }
  fail(errc::parse_error, "count must be a number or decimal string");
}

ordered_json caps_to_json(const Caps& caps) {
  ordered_json j;
  j["max_sphere_points"] = caps.max_sphere_points;
  j["max_torus_cells"] = caps.max_torus_cells;
  j["max_sieve_work"] = caps.max_sieve_work;
  return j;
}

ordered_json make_envelope(const std::string& command, ordered_json config, ordered_json result) {
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["config"] = std::move(config);
  j["result"] = std::move(result);
  return j;
}

ordered_json error_to_json(int status, const std::string& message) {
  ordered_json e;
  e["status"] = status;
  e["name"] = errc_name(static_cast<errc>(status));
  e["message"] = message;
  ordered_json j;
  j["error"] = std::move(e);
  return j;
}

ordered_json grid_to_json(const GridFunction& f) {
  ordered_json j;
  j["d"] = f.dimension();
  ordered_json records = ordered_json::array();
  const int d = f.dimension();
  for (std::size_t i = 0; i < f.support_size(); ++i) {
    ordered_json rec = ordered_json::array();
    const std::int32_t* pt = f.point(i);
    for (int k = 0; k < d; ++k) rec.push_back(pt[k]);
    rec.push_back(f.value(i));
    records.push_back(std::move(rec));
  }
  j["records"] = std::move(records);
  return j;
}

GridFunction grid_from_json(const ordered_json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("records"))
    fail(errc::parse_error, "grid JSON needs \"d\" and \"records\"");
  if (!j["d"].is_number_integer() && !j["d"].is_number_unsigned())
    fail(errc::parse_error, "grid dimension must be an integer");
  const std::int64_t d64 = j["d"].get<std::int64_t>();
  if (d64 < 1 || d64 > 1024) fail(errc::parse_error, "grid dimension out of range");
  const int d = int(d64);
  const ordered_json& records = j["records"];
  if (!records.is_array()) fail(errc::parse_error, "grid records must be an array");

  std::vector<std::int32_t> coords;
  std::vector<double> values;
  coords.reserve(records.size() * std::size_t(d));
  values.reserve(records.size());
  for (const ordered_json& rec : records) {
    if (!rec.is_array() || rec.size() != std::size_t(d) + 1)
      fail(errc::parse_error, "grid record must be an array of d coordinates plus a value");
    for (int k = 0; k < d; ++k) {
      const ordered_json& c = rec[std::size_t(k)];
      if (!c.is_number_integer() && !c.is_number_unsigned())
        fail(errc::parse_error, "grid coordinates must be integers");
      const std::int64_t v = c.get<std::int64_t>();
      if (v < -(std::int64_t(1) << 30) || v > (std::int64_t(1) << 30))
        fail(errc::cap_exceeded, "grid coordinate outside the representable box");
      coords.push_back(static_cast<std::int32_t>(v));
    }
    const ordered_json& val = rec[std::size_t(d)];
    if (!val.is_number()) fail(errc::parse_error, "grid value must be a number");
    values.push_back(val.get<double>());
  }
  return GridFunction::from_records(d, std::move(coords), std::move(values));
}

ordered_json norm_to_json(const NormReport& n) {
  ordered_json j;
  if (std::isinf(n.p))
    j["p"] = "inf";
  else
    j["p"] = n.p;
  j["value"] = n.value;
  j["terms"] = n.summation_terms;
  return j;
}

ordered_json rep_table_to_json(const RepCountTable& t) {
  ordered_json j;
  j["d"] = t.d;
  j["max_lambda"] = t.max_lambda;
  ordered_json counts = ordered_json::array();
  for (const Count& c : t.counts) counts.push_back(count_to_json(c));
  j["counts"] = std::move(counts);
  return j;
}

ordered_json residue_to_json(const ResidueClassCounts& rc) {
  ordered_json j;
  j["d"] = rc.d;
  j["lambda"] = rc.lambda;
  j["modulus"] = rc.modulus;
  j["total"] = count_to_json(rc.total);
  ordered_json classes = ordered_json::array();
  for (const ResidueClassOrbit& o : rc.orbits) {
    ordered_json c;
    c["residues"] = o.canonical;
    c["orbit_size"] = o.orbit_size;
    c["count"] = count_to_json(o.count);
    classes.push_back(std::move(c));
  }
  j["classes"] = std::move(classes);
  return j;
}

ordered_json profile_to_json(const DimensionProfile& p) {
  ordered_json j;
  j["kind"] = p.kind == ProfileKind::padic ? "padic" : "dyadic";
  if (p.kind == ProfileKind::padic) j["prime"] = p.prime;
  j["term_count"] = p.term_count;
  ordered_json scales = ordered_json::array();
  for (const ProfileScale& s : p.scales) {
    ordered_json e;
    e["level"] = s.level;
    e["count"] = s.count;
    scales.push_back(std::move(e));
  }
  j["scales"] = std::move(scales);
  j["saturated_levels"] = p.saturated_levels;
  ordered_json est;
  est["value"] = p.estimate.value;
  est["window"] = ordered_json::array({p.estimate.window_first, p.estimate.window_last});
  est["points_used"] = p.estimate.points_used;
  est["step_ratios"] = p.estimate.step_ratios;
  j["estimate"] = std::move(est);
  if (!p.fit_note.empty()) j["fit_note"] = p.fit_note;
  return j;
}

ordered_json eta_to_json(const EtaReport& r) {
  ordered_json j;
  j["d"] = r.inputs.d;
  ordered_json inputs;
  ordered_json per_prime = ordered_json::array();
  for (const auto& [prime, dv] : r.inputs.per_prime) {
    ordered_json e;
    e["prime"] = prime;
    e["value"] = dv.value;
    if (dv.exact) e["exact"] = rat_json(*dv.exact);
    e["source"] = dv.is_declared ? "declared" : "estimated";
    per_prime.push_back(std::move(e));
  }
  inputs["per_prime"] = std::move(per_prime);
  if (r.inputs.delta_inf) inputs["delta_inf"] = dim_value_json(*r.inputs.delta_inf);
  j["inputs"] = std::move(inputs);
  j["eta"] = r.eta;
  if (r.eta_exact) j["eta_exact"] = rat_json(*r.eta_exact);
  j["binding"] = r.binding_terms;
  ordered_json cands = ordered_json::array();
  for (const EtaCandidate& c : r.candidates) {
    ordered_json e;
    e["term"] = c.label;
    e["value"] = c.value;
    if (c.exact) e["exact"] = rat_json(*c.exact);
    cands.push_back(std::move(e));
  }
  j["candidates"] = std::move(cands);
  return j;
}

ordered_json delta_probe_to_json(const DeltaProbeResult& r) {
  ordered_json j;
  j["kind"] = "delta";
  ordered_json params;
  params["d"] = r.d;
  params["p"] = r.p;
  params["sequence"] = r.sequence_name;
  params["term_count"] = r.term_count;
  params["max_lambda"] = r.max_lambda;
  j["parameters"] = std::move(params);
  j["stages"] = ordered_json::array({r.term_count});
  j["values"] = ordered_json::array({r.closed_form});
  j["closed_form"] = r.closed_form;
  if (r.direct) {
    j["direct"] = *r.direct;
    j["relative_gap"] = *r.relative_gap;
  }
  j["notes"] = r.notes;
  return j;
}

ordered_json slope_probe_to_json(const SlopeProbeResult& r) {
  ordered_json j;
  j["kind"] = "slope";
  ordered_json params;
  params["d"] = r.d;
  params["p"] = r.p;
  params["sequence"] = r.sequence_name;
  params["include_identity"] = r.include_identity;
  j["parameters"] = std::move(params);
  j["stages"] = r.schedule;
  j["values"] = r.values;
  j["log_sums"] = r.log_sums;
  j["slope"] = r.slope;
  j["notes"] = r.notes;
  return j;
}

ordered_json padic_probe_to_json(const PadicProbeResult& r) {
  ordered_json j;
  j["kind"] = "padic";
  ordered_json params;
  params["d"] = r.d;
  params["prime"] = r.prime;
  params["level"] = r.level;
  params["q"] = r.q;
  params["sequence"] = r.sequence_name;
  j["parameters"] = std::move(params);
  j["stages"] = r.stages;
  j["values"] = r.ratios;
  j["slope"] = r.slope;
  j["notes"] = r.notes;
  return j;
}

std::string report_to_csv(const ordered_json& envelope) {
  if (!envelope.is_object() || !envelope.contains("command") || !envelope.contains("result"))
    fail(errc::invalid_argument, "not a report envelope");
  const std::string cmd = envelope["command"].get<std::string>();
  const ordered_json& res = envelope["result"];
  std::ostringstream out;

  if (cmd == "count") {
    out << "lambda,count\n";
    if (res.contains("counts")) {
      const ordered_json& counts = res["counts"];
      for (std::size_t i = 0; i < counts.size(); ++i)
        out << i << ',' << csv_token(counts[i]) << '\n';
    } else {
      out << csv_token(res.at("lambda")) << ',' << csv_token(res.at("count")) << '\n';
    }
    return out.str();
  }
  if (cmd == "enumerate") {
    const int d = res.at("d").get<int>();
    for (int k = 1; k <= d; ++k) out << (k > 1 ? "," : "") << 'x' << k;
    out << '\n';
    for (const ordered_json& pt : res.at("points")) {
      for (std::size_t k = 0; k < pt.size(); ++k) out << (k > 0 ? "," : "") << csv_token(pt[k]);
      out << '\n';
    }
    return out.str();
  }
  if (cmd == "residue") {
    out << "residues,orbit_size,count\n";
    for (const ordered_json& c : res.at("classes")) {
      const ordered_json& residues = c.at("residues");
      for (std::size_t k = 0; k < residues.size(); ++k)
        out << (k > 0 ? " " : "") << csv_token(residues[k]);
      out << ',' << csv_token(c.at("orbit_size")) << ',' << csv_token(c.at("count")) << '\n';
    }
    return out.str();
  }
  if (cmd == "analyze") {
    out << "kind,prime,level,count\n";
    for (const ordered_json& prof : res.at("profiles")) {
      const std::string kind = prof.at("kind").get<std::string>();
      const std::string prime = prof.contains("prime") ? csv_token(prof["prime"]) : "";
      for (const ordered_json& s : prof.at("scales"))
        out << kind << ',' << prime << ',' << csv_token(s.at("level")) << ','
            << csv_token(s.at("count")) << '\n';
    }
    return out.str();
  }
  if (cmd == "eta") {
    out << "term,value\n";
    for (const ordered_json& c : res.at("candidates"))
      out << csv_token(c.at("term")) << ',' << csv_token(c.at("value")) << '\n';
    out << "eta," << csv_token(res.at("eta")) << '\n';
    return out.str();
  }
  if (cmd == "probe-delta" || cmd == "probe-slope" || cmd == "probe-padic") {
    out << "stage,value\n";
    const ordered_json& stages = res.at("stages");
    const ordered_json& values = res.at("values");
    for (std::size_t i = 0; i < stages.size(); ++i)
      out << csv_token(stages[i]) << ',' << csv_token(values[i]) << '\n';
    return out.str();
  }
  fail(errc::invalid_argument, "no CSV view for command \"" + cmd + "\"");
}

std::string grid_to_csv(const GridFunction& f) {
  std::ostringstream out;
  const int d = f.dimension();
  for (int k = 1; k <= d; ++k) out << (k > 1 ? "," : "") << 'x' << k;
  out << ",value\n";
  for (std::size_t i = 0; i < f.support_size(); ++i) {
    const std::int32_t* pt = f.point(i);
    for (int k = 0; k < d; ++k) out << pt[k] << ',';
    out << csv_token(ordered_json(f.value(i))) << '\n';
  }
  return out.str();
}

std::string sequence_to_text(const SequenceTruncation& seq) {
  std::ostringstream out;
  for (const BigInt& t : seq.terms) out << t << '\n';
  return out.str();
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace sphlab
