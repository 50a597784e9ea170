#pragma once
// Reduction of geometric sentences to ordered-field arithmetic. Point
// variables become coordinate tuples, distances become fresh length
// variables constrained by their squared-distance equations (quantified
// existentially under an even number of negations, universally under an odd
// number, so the reduction preserves meaning), and angle comparisons become
// cosine constraints. The output mentions only number variables, so it can
// be evaluated exactly over the rationals or handed to an external solver.
//
// Angle support is deliberately narrow: equalities between two angle terms,
// and equalities between an angle term and one of the tabulated degree
// values. Those translate to algebraic conditions on the cosine (unique in
// [-1,1] per table entry). Anything else involving angles, for example sums
// of angle measures, is not polynomial in the coordinates and raises
// reduction_unsupported. Angle constraints assume nondegenerate rays; the
// emitted side conditions require positive norms.

#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "geoform/ast.hpp"

namespace geo::rcf {

using rational = boost::multiprecision::cpp_rational;

struct reduction_unsupported : error {
    using error::error;
};

struct length_entry {
    std::string name;  // the variable carrying d(p,q)
    std::string p, q;
};

struct angle_entry {
    std::string cos_name;  // the variable carrying cos of the angle at v
    std::string p, v, q;
};

struct coordinatization {
    formula_ptr out;
    int dim = 2;
    // point variable -> its coordinate variable names, in axis order
    std::map<std::string, std::vector<std::string>> point_coords;
    std::vector<length_entry> lengths;
    std::vector<angle_entry> angles;
};

// Expands defined atoms, renames bound variables apart, and rewrites the
// sentence over coordinates. `lang` selects the definition bodies (ed or
// eda); relational input should be translated to the metric language first.
coordinatization coordinatize(const formula_ptr& f, language lang, int dim);

// Exact evaluation of a quantifier-free arithmetic formula. Every variable
// must be assigned; dist or angle terms are an error (coordinatize first).
rational eval_exact_term(const term_ptr& t, const std::map<std::string, rational>& env);
bool eval_exact(const formula_ptr& f, const std::map<std::string, rational>& env);

// SMT-LIB2 rendering of (not sentence), ready for a check-sat query. A pure
// function of the formula tree, so repeated runs emit identical bytes.
std::string emit_solver(const formula_ptr& sentence);

enum class solver_verdict { valid, invalid, unknown, unavailable };

struct solver_options {
    std::string command;  // executable invoked as `command <file.smt2>`
    int timeout_sec = 30;
};

// Runs the external solver on the emitted query. `valid` means the solver
// reported the negation unsatisfiable. A missing executable or an empty
// command reports `unavailable`; timeouts and unparseable output report
// `unknown`.
solver_verdict solve_external(const std::string& smt, const solver_options& opt);

std::string to_string(solver_verdict v);

}  // namespace geo::rcf
