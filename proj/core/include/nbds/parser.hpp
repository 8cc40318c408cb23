#pragma once

#include <string>

#include "nbds/system.hpp"

namespace nbds {

/// Parses the line-oriented system DSL into a validated DynSystem.
/// Throws ParseError on malformed text and ValidationError on well-formed
/// text violating the IR invariants (unresolved names, missing scales, ...).
DynSystem parse(const std::string& source);

/// Parses a single expression against the given system's declared names.
ExprPtr parse_expr(const std::string& source, const DynSystem& sys);

}  // namespace nbds
