#pragma once

// Algebra spec files (JSON).
//
//   {
//     "schema": "supercas.algebra/1",
//     "family": "sl", "params": [2, 1],          // or a full family string in "family"
//     "name": "...",
//     "basis": [{"label": "x", "parity": 0}, ...],   // explicit algebras only
//     "brackets": [["x", "y", {"z": "1/2"}], ...],  // [e_x, e_y]; the mirrored entry is implied
//     "form": {"parity": 0, "entries": [["x", "y", "1"], ...]},
//     "cartan": ["h1", ...], "cartan_names": ["h1", ...],
//     "splitter_H": {"h1": "3"},
//     "grading": "parity" | {"r": 2, "classes": {"x": 1, ...}},
//     "sigma": [["x", "y", "-1"], ...],            // sigma(e_x) = c e_y
//     "weights": {"a": ["2", "0"], ...},
//     "notes": ["..."]
//   }
//
// Rationals are written "p/q" (plain integers are accepted too). When a family
// is given, the remaining fields override the built algebra.

#include <string>
#include <string_view>

#include "supercas/liesuper.hpp"

namespace supercas {

/// ParseError on malformed input, unknown labels or inconsistent sizes.
SuperAlgebra parse_algebra_spec(std::string_view json_text);

/// Explicit (family-free) spec; parse_algebra_spec(algebra_spec_json(g)) rebuilds g.
std::string algebra_spec_json(const SuperAlgebra& g, int indent = 2);

/// A path to an existing spec file, otherwise a family string.
SuperAlgebra load_algebra(std::string_view ref);

}  // namespace supercas
