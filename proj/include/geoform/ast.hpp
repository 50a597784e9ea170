#pragma once
// Two-sorted first-order ASTs for the geometry languages handled by this
// toolkit: E2 (betweenness/segment-congruence over points), Ed (points plus a
// real-valued distance function) and Eda (Ed plus an angle-measure function).
// Terms and formulas are immutable and shared; all operations build new trees.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace geo {

// ---------------------------------------------------------------------------
// errors

struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

struct sort_mismatch : error {
    explicit sort_mismatch(const std::string& what) : error(what) {}
};

struct negative_literal : error {
    explicit negative_literal(const std::string& what) : error(what) {}
};

struct unknown_definition : error {
    explicit unknown_definition(const std::string& what) : error(what) {}
};

struct cyclic_definition : error {
    explicit cyclic_definition(const std::string& what) : error(what) {}
};

struct language_mismatch : error {
    explicit language_mismatch(const std::string& what) : error(what) {}
};

struct unbound_variable : error {
    explicit unbound_variable(const std::string& what) : error(what) {}
};

// ---------------------------------------------------------------------------
// sorts and languages

enum class sort : std::uint8_t { point, number };

inline const char* sort_name(sort s) { return s == sort::point ? "P" : "N"; }

enum class language : std::uint8_t { e2, ed, eda };

inline const char* language_name(language l) {
    switch (l) {
    case language::e2: return "e2";
    case language::ed: return "ed";
    default: return "eda";
    }
}

// Ed and Eda admit number-sorted machinery; only Eda admits angle terms and
// only E2 admits the Tarski primitives B and D.
inline bool has_numbers(language l) { return l != language::e2; }
inline bool has_angles(language l) { return l == language::eda; }

// ---------------------------------------------------------------------------
// terms

struct term;
using term_ptr = std::shared_ptr<const term>;

enum class term_kind : std::uint8_t {
    point_var,
    num_var,
    num_zero,
    num_one,
    int_lit,  // sugar for a left-nested sum of ones, kept readable until expanded
    add,
    mul,
    neg,
    dist,   // d(p,q), Ed/Eda
    angle,  // ang(p,v,q) in degrees, Eda only
};

struct term {
    term_kind kind;
    std::string name;          // point_var / num_var
    unsigned long long value = 0;  // int_lit
    std::vector<term_ptr> args;

    sort result_sort() const { return kind == term_kind::point_var ? sort::point : sort::number; }
};

term_ptr pvar(std::string name);
term_ptr nvar(std::string name);
term_ptr num0();
term_ptr num1();
term_ptr add(term_ptr a, term_ptr b);
term_ptr mul(term_ptr a, term_ptr b);
term_ptr neg(term_ptr a);
term_ptr dist(term_ptr p, term_ptr q);
term_ptr angle(term_ptr p, term_ptr v, term_ptr q);

// int_literal(0) is num0, int_literal(1) is num1, larger values keep a literal
// node until expand_literals lowers them. Negative input is rejected.
term_ptr int_literal(long long n);

// ---------------------------------------------------------------------------
// formulas

struct formula;
using formula_ptr = std::shared_ptr<const formula>;

enum class formula_kind : std::uint8_t {
    eq_point,  // p == q
    eq_num,    // s = t
    less,      // s < t
    tarski_b,  // B(a,b,c), E2
    tarski_d,  // D(p,q,u,v), E2
    defined,   // registered defined atom applied to point terms
    f_not,
    f_and,
    f_or,
    f_implies,
    f_iff,
    f_forall,
    f_exists,
};

struct formula {
    formula_kind kind;
    std::string name;  // defined-atom name, or bound-variable name for quantifiers
    sort var_sort = sort::point;
    std::vector<term_ptr> terms;
    std::vector<formula_ptr> subs;
};

formula_ptr eq_point(term_ptr p, term_ptr q);
formula_ptr eq_num(term_ptr s, term_ptr t);
formula_ptr less(term_ptr s, term_ptr t);
formula_ptr leq(term_ptr s, term_ptr t);  // sugar: s < t | s = t
formula_ptr tarski_b(term_ptr a, term_ptr b, term_ptr c);
formula_ptr tarski_d(term_ptr p, term_ptr q, term_ptr u, term_ptr v);
formula_ptr datom(std::string name, std::vector<term_ptr> args);
formula_ptr f_not(formula_ptr a);
formula_ptr f_and(formula_ptr a, formula_ptr b);
formula_ptr f_or(formula_ptr a, formula_ptr b);
formula_ptr implies(formula_ptr a, formula_ptr b);
formula_ptr iff(formula_ptr a, formula_ptr b);
formula_ptr forall(std::string var, sort s, formula_ptr body);
formula_ptr exists(std::string var, sort s, formula_ptr body);
formula_ptr neq(term_ptr a, term_ptr b);  // ~(a == b) or ~(a = b) by sort

// Right-nested conjunction/disjunction over a list; empty input is rejected.
formula_ptr conj(const std::vector<formula_ptr>& fs);
formula_ptr disj(const std::vector<formula_ptr>& fs);

// ---------------------------------------------------------------------------
// structural operations

bool equal(const term_ptr& a, const term_ptr& b);
bool equal(const formula_ptr& a, const formula_ptr& b);

struct var_decl {
    std::string name;
    sort s;
    bool operator<(const var_decl& o) const {
        return name != o.name ? name < o.name : s < o.s;
    }
    bool operator==(const var_decl& o) const { return name == o.name && s == o.s; }
};

// Free variables in lexicographic (name, sort) order.
std::vector<var_decl> free_vars(const formula_ptr& f);
std::vector<var_decl> free_vars(const term_ptr& t);

// Capture-avoiding substitution of `replacement` for free occurrences of
// `var`. Binders that would capture a free variable of the replacement are
// renamed with the lowest unused numeric suffix. Throws sort_mismatch if the
// replacement's sort differs from the variable's.
formula_ptr substitute(const formula_ptr& f, const var_decl& var, const term_ptr& replacement);

// Fresh name: `base` with the lowest numeric suffix (base1, base2, ...) that
// avoids everything in `used`; returns `base` itself if unused.
std::string fresh_name(const std::string& base, const std::vector<std::string>& used);

// Sort-and-language checking. A well-sorted result is an empty diagnostic
// list; entries carry a dotted path from the root for error reporting.
struct sort_diag {
    std::string path;
    std::string message;
};

class definition_view;  // implemented by the definition registry (defs.hpp)

std::vector<sort_diag> well_sorted(const formula_ptr& f, language lang,
                                   const definition_view* defs = nullptr);

// Arity/sort/home-language lookup interface the checker and parser use for
// defined atoms without depending on the registry implementation.
class definition_view {
public:
    virtual ~definition_view() = default;
    virtual bool known(const std::string& name) const = 0;
    virtual std::size_t arity(const std::string& name) const = 0;
    virtual bool available_in(const std::string& name, language lang) const = 0;
};

// Prenex normal form: biconditionals are unfolded first, then quantifiers are
// pulled to a single prefix preserving their left-to-right order of
// appearance (antecedent quantifiers flip). Bound names are renamed with
// fresh suffixes only when pulling would cause a clash.
formula_ptr prenex(const formula_ptr& f);

// Splits a prenexed formula into its quantifier prefix and matrix.
struct prefix_entry {
    bool universal;
    std::string name;
    sort s;
};
void split_prefix(const formula_ptr& f, std::vector<prefix_entry>& prefix, formula_ptr& matrix);

bool is_quantifier_free(const formula_ptr& f);

// Lowers int_lit sugar to left-nested sums of ones (3 becomes (1 + 1) + 1).
term_ptr expand_literals(const term_ptr& t);
formula_ptr expand_literals(const formula_ptr& f);

// Total node count (formula and term nodes, leaves included; int_lit counts
// as a single node). This is the size measure used by expanded_size.
std::size_t node_count(const term_ptr& t);
std::size_t node_count(const formula_ptr& f);

}  // namespace geo
