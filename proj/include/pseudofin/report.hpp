#pragma once

// JSON records for every verdict type. Big integers and rationals are
// written as decimal strings ("num/den" for rationals) so no precision is
// lost. Field names are part of the report schema.

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pseudofin/bilinear.hpp"
#include "pseudofin/comprehensive.hpp"
#include "pseudofin/groups.hpp"
#include "pseudofin/modelcheck.hpp"

namespace pseudofin {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;
inline constexpr const char* kToolVersion = "1.0.0";
// Every timing field carries this name; strip_timing removes them.
inline constexpr const char* kTimingField = "wall_time_ms";

Json to_json(const VectorFp& v);
Json to_json(const GroupElement& g);
Json to_json(const AxiomVerdict& v);
Json to_json(const FailureDensity& d);
Json to_json(const ExhaustReport& r);
Json to_json(const CountingBound& b);
Json to_json(const ConstructionCertificate& c);
Json to_json(const SeriesReport& s);
Json to_json(const IdentityReport& r);
Json to_json(const LaurentReport& r);
Json to_json(const RhoReport& r);
Json to_json(const GroupSigmaVerdict& v);
Json to_json(const ChainReport& c);
Json to_json(const MaximalityReport& m);
Json to_json(const StarInstance& inst);
Json to_json(const StarScanReport& r);

// 64-bit FNV-1a, lower-case hex.
std::string fnv1a_hex(std::string_view bytes);

// Copy of j with every "wall_time_ms" member removed, recursively.
Json strip_timing(const Json& j);

// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace pseudofin
