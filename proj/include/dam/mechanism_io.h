#pragma once

#include <string>
#include <string_view>

#include "dam/mechanism.h"

namespace dam {

// JSON mechanism files:
//
//   { "sellers": [ {"id", "names", "budget"} ],
//     "buyers":  [ {"id", "names", "budget", "valuation",
//                   "incentives": {sellerId: rat}} ],
//     "edges":   [ [idA, idB] ],
//     "rule":    "smf" }
//
// Rationals are JSON integers or "p/q" strings. Missing incentives are 0.
// Duplicate or reversed edges are rejected, and the result must pass
// validate_mechanism. Every failure throws InvalidMechanism.
Mechanism parse_mechanism(std::string_view json_text);
Mechanism load_mechanism(const std::string& path);

std::string format_mechanism(const Mechanism& m);
void save_mechanism(const std::string& path, const Mechanism& m);

}  // namespace dam
