#pragma once
// Translations between the metric language (distances and numbers) and the
// relational language (betweenness B and segment congruence D only).
//
// The relational-to-metric direction is a plain homomorphism: B(a,b,c)
// becomes an additivity equation and D(p,q,u,v) a distance equation.
//
// The metric-to-relational direction eliminates number terms. Two frequent
// shapes short-circuit to clean relational atoms; everything else is
// flattened onto a coordinate axis: an existential frame (origin, unit
// point, off-axis point) is introduced, every number variable becomes a
// point variable constrained to the axis, and every compound number term
// gets a helper point pinned down by segment-arithmetic atoms. The helper
// points are uniquely determined by their constraints, which is what makes
// the local existential placement sound under negation.

#include <string>
#include <vector>

#include "geoform/ast.hpp"

namespace geo::xlate {

// One introduced point variable and the metric number term whose value it
// carries (as a signed coordinate on the frame axis). Lets callers evaluate
// a translated formula by placing each helper analytically.
struct temp_binding {
    std::string name;
    term_ptr stands_for;
};

struct translation_result {
    formula_ptr out;
    std::vector<temp_binding> temps;
    // frame variable names; empty when the translation needed no frame
    std::string origin, unit, off_axis;
};

// Relational to metric. Defined atoms pass through when they are available
// in the metric language; otherwise language_mismatch.
formula_ptr e2_to_ed(const formula_ptr& f);

// Metric to relational. Angle terms have no relational counterpart and
// raise language_mismatch.
translation_result ed_to_e2(const formula_ptr& f);

}  // namespace geo::xlate
