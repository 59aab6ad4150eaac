#pragma once

#include <string>

#include "tuffley/forest.hpp"

namespace tuffley {

/// Canonical byte-string code identifying an XForest up to label-preserving
/// isomorphism. Built from a canonical rooted encoding computed from every
/// vertex as root (sorted child-code concatenation, label sets serialized
/// sorted); the tree code is the lexicographic minimum over roots and the
/// forest code is the sorted list of tree codes.
using CanonicalCode = std::string;

CanonicalCode tree_code(const XTree& t);
CanonicalCode canonical_code(const XForest& f);

/// Inverse of canonical_code: reproduces an XForest with the same code.
XForest decode_forest(const CanonicalCode& code);

std::string code_to_hex(const CanonicalCode& code);
CanonicalCode code_from_hex(const std::string& hex);

}  // namespace tuffley
