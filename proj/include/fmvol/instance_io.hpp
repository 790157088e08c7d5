#pragma once

#include <istream>
#include <string>

#include "fmvol/hypergraph.hpp"

namespace fmvol {

/// Instance format: one hyperedge per line as whitespace-separated vertex
/// ids; lines starting with '#' and blank lines are skipped; n = 1 + max id.
/// Throws ParseError on malformed input (including duplicate ids in a line).
Hypergraph parse_instance(std::istream& in);

Hypergraph load_instance(const std::string& path);

} // namespace fmvol
