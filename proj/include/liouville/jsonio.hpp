#pragma once

#include <json.hpp>
#include <string>

#include "liouville/critical.hpp"
#include "liouville/pde2d.hpp"
#include "liouville/radial.hpp"

namespace liouville {

/// 17-significant-digit float formatting used by every emitter; identical
/// inputs yield byte-identical output.
std::string format_double(double v);

/// Canonical JSON: sorted keys, floats via format_double, no whitespace
/// except a trailing newline.
std::string emit_canonical(const nlohmann::json& j);

nlohmann::json to_json(const CriticalPointReport& rep);
nlohmann::json to_json(const SearchSummary& s);
nlohmann::json to_json(const BranchPoint& bp);
nlohmann::json to_json(const PeakReport& pr);

/// Field CSV: header "r,theta,u", origin row first, then row-major by radial
/// index, 17 significant digits.
std::string field_to_csv(const Field2D& f);

} // namespace liouville
