#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "common.hpp"
#include "grid.hpp"
#include "lattice.hpp"
#include "probes.hpp"
#include "sequence.hpp"

namespace sphlab {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "sphlab";
inline constexpr const char* kToolVersion = "0.1.0";

// Counts at or below 2^53 serialize as JSON numbers, larger ones as decimal
// strings (keeps every value exact through a JSON round trip).
ordered_json count_to_json(Count c);
Count count_from_json(const ordered_json& j);

// Cap settings that affect results. Thread count is deliberately absent:
// outputs are identical across thread counts and the echoed config must be too.
ordered_json caps_to_json(const Caps& caps);

// Report envelope shared by all analysis commands.
ordered_json make_envelope(const std::string& command, ordered_json config, ordered_json result);

ordered_json error_to_json(int status, const std::string& message);

// Grid file format: {"d": n, "records": [[x1..xd, value], ...]}.
// Records are emitted in canonical (lexicographic) support order; on input,
// duplicate points are summed and zero values dropped.
ordered_json grid_to_json(const GridFunction& f);
GridFunction grid_from_json(const ordered_json& j);

ordered_json norm_to_json(const NormReport& n);
ordered_json rep_table_to_json(const RepCountTable& t);
ordered_json residue_to_json(const ResidueClassCounts& rc);
ordered_json profile_to_json(const DimensionProfile& p);
ordered_json eta_to_json(const EtaReport& r);
ordered_json delta_probe_to_json(const DeltaProbeResult& r);
ordered_json slope_probe_to_json(const SlopeProbeResult& r);
ordered_json padic_probe_to_json(const PadicProbeResult& r);

// Flattened plotting view of an analysis envelope. Probe reports flatten to
// "stage,value" rows; profiles to "level,count"; tables to "lambda,count".
std::string report_to_csv(const ordered_json& envelope);

std::string grid_to_csv(const GridFunction& f);
std::string sequence_to_text(const SequenceTruncation& seq);

// Serialization with a fixed layout: 2-space indent and a trailing newline.
std::string dump_json(const ordered_json& j);

}  // namespace sphlab
