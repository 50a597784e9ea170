#pragma once
// Quantifier-free evaluation of formulas over a numeric model. Primitive
// atoms compare metric quantities against a tolerance; defined atoms are
// evaluated by dedicated numeric criteria that agree with their definitional
// expansions on nondegenerate configurations (eval.cpp documents each case,
// including how degenerate rays and frames are resolved). Number equalities
// and comparisons switch to the angle tolerance when either side mentions an
// angle term, since angle measures live on a different scale than distances.

#include <map>
#include <string>
#include <vector>

#include "geoform/ast.hpp"
#include "geoform/model.hpp"

namespace geo::models {

struct valuation {
    std::map<std::string, pt> points;
    std::map<std::string, double> numbers;
};

struct eval_options {
    double tol = 1e-9;        // distance-scale comparisons
    double angle_tol = 1e-6;  // degree-scale comparisons
};

// Raised when an atom has no interpretation in the given model (for example
// the parallel-projection arithmetic atoms in a curved model).
struct unsupported_atom : error {
    using error::error;
};

double eval_num(const model& m, const valuation& val, const term_ptr& t);
const pt& eval_point(const valuation& val, const term_ptr& t);
bool mentions_angle(const term_ptr& t);

// One entry per atom that was actually evaluated (short-circuited branches
// are skipped); used to annotate failing samples.
struct atom_trace {
    std::vector<std::pair<std::string, bool>> atoms;  // printed atom, value
};

bool eval_qf(const model& m, const eval_options& opt, const valuation& val, const formula_ptr& f,
             atom_trace* trace = nullptr);

}  // namespace geo::models
