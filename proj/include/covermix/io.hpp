#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "covermix/counting.hpp"
#include "covermix/cover.hpp"
#include "covermix/fit.hpp"
#include "covermix/mixing.hpp"
#include "covermix/presentation.hpp"
#include "covermix/shift.hpp"
#include "json.hpp"

namespace covermix {

inline constexpr const char* kVersion = "0.1.0";

// FNV-1a over the bytes of s; used to stamp outputs with a config hash.
std::uint64_t fnv1a64(const std::string& s);

// Full-precision decimal rendering (17 significant digits, round-trip safe).
std::string fmt_g17(double x);

// Comment header stamped at the top of every CSV: version, the effective
// configuration (one line of JSON, defaults resolved), its hash, and the
// seed.  Identical configuration and seed give a byte-identical header.
std::string csv_provenance(const nlohmann::json& config, std::uint64_t seed);

// The same stamp as a JSON object, embedded in every JSON report.
nlohmann::json provenance_json(const nlohmann::json& config,
                               std::uint64_t seed);

// Parse text as JSON; ErrKind::validation on syntax errors.
nlohmann::json parse_json_text(const std::string& text,
                               const std::string& what);
nlohmann::json load_json_file(const std::string& path);

// Group document: generator matrices as integer quadruples, cusp words as
// signed 1-based index lists, polygon sides as geodesic endpoint pairs
// (numbers, "p/q" strings, or "inf") plus the pairing word that returns
// outside points across the side.  Side orientations are resolved against
// "inside_point" (default (0,1)); full structural validation runs after
// assembly.
GroupPresentation group_from_json(const nlohmann::json& j);

// Cover document {"d": int, "phi": [[int,...],...]} or a bare matrix
// [[int,...],...]; "identity" (string form) maps generators to Z^rank.
CoverSpec cover_from_json(const nlohmann::json& j, int rank);
CoverSpec cover_from_string(const std::string& text, int rank);

// Gram document {"q": [[real,...],...]}.
HGram gram_from_json(const nlohmann::json& j);

// Flow-box document {"xrange":[a,b], "yrange":[c,d], "arc":[t1,t2],
// "sheet":[n,...]}.
FlowBox box_from_json(const nlohmann::json& j);

// A loaded symbolic system: shift, edge potential, displacement.
struct ShiftSystem {
  MarkovShift shift;
  Potential pot;
  Displacement f;
};

// Shift document: "states" (count or label list), "transition" (0/1 matrix),
// "r" (edge table), optional "f" (one row per state), optional
// "certificate" {"C": real, "K": int} which is verified on load.  Without a
// stated certificate one is searched for; if none exists the potential is
// loaded uncertified (operations that need positivity reject it there).
// truncate_to > 0 keeps only the first truncate_to states and re-validates
// the transition rows, the loader for countable specs given by finite data.
ShiftSystem shift_from_json(const nlohmann::json& j, int truncate_to = 0);

nlohmann::json fit_report_json(const FitReport& r);

// CSV with a provenance header.  Counting series: columns T, N, and one
// model column C*exp(T)*T^-alpha per fitted candidate.  Mixing series:
// columns t, estimate, stderr, discards.
std::string count_series_csv(const CountSeries& s, const FitReport* fit,
                             const std::string& header);
std::string mixing_series_csv(const MixingSeries& s,
                              const std::string& header);

// "lo:hi:step" (step optional, default 1) -> inclusive grid.
std::vector<double> parse_grid(const std::string& text);
// Comma-separated lists.
std::vector<double> parse_double_list(const std::string& text);
std::vector<long long> parse_int_list(const std::string& text);

}  // namespace covermix
