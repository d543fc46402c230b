#pragma once

#include <string>

#include "json.hpp"

#include "gapkit/potential.hpp"

namespace gapkit {

/// {"breakpoints": [...], "segments": [...], "class": "...", "bound": M,
///  "background": {...} | null, "sign": 1 | -1}
///
/// A segment is {"left": a, "right": b}, a pair [a, b], or a number for a
/// constant piece. "class", "bound", "background" and "sign" are optional.
Potential potential_from_json(const nlohmann::json& j);
nlohmann::json potential_to_json(const Potential& V);

Potential read_potential(const std::string& path);
void write_potential(const Potential& V, const std::string& path);

}  // namespace gapkit
