#pragma once
// Registry of defined geometric predicates and their expansion into primitive
// vocabulary. Each definition has point-sorted parameters and a body that is
// closed except for those parameters. Bodies may mention other defined atoms;
// the reference graph is acyclic (checked at startup). Two predicates are
// language-split at the leaves: Bet (betweenness) and CongSeg (segment
// congruence) expand to distance equations in Ed/Eda and to the Tarski
// primitives B/D in E2. Everything defined on top of them expands correctly
// in every language it is registered for.

#include <vector>

#include "geoform/ast.hpp"

namespace geo::defs {

struct definition {
    std::string name;
    std::vector<std::string> params;  // all point-sorted
    formula_ptr body_ed;              // used when expanding in Ed / Eda
    formula_ptr body_e2;              // used when expanding in E2
    bool in_e2 = false, in_ed = false, in_eda = false;

    bool available_in(language l) const {
        return l == language::e2 ? in_e2 : l == language::ed ? in_ed : in_eda;
    }
    const formula_ptr& body_for(language l) const {
        return l == language::e2 ? body_e2 : body_ed;
    }
};

class registry : public definition_view {
public:
    static const registry& instance();

    const definition* find(const std::string& name) const;
    const std::vector<definition>& all() const { return defs_; }

    bool known(const std::string& name) const override;
    std::size_t arity(const std::string& name) const override;
    bool available_in(const std::string& name, language lang) const override;

private:
    registry();
    void add(definition d);
    void check_acyclic() const;
    std::vector<definition> defs_;
};

// Instantiates a definition body at the given arguments (capture-avoiding;
// arguments may reuse parameter names freely).
formula_ptr instantiate(const definition& d, language lang, const std::vector<term_ptr>& args);

enum class expand_depth { one, full };

// Replaces defined atoms by their bodies. `one` unfolds each atom a single
// step; `full` iterates to the primitive fixpoint.
formula_ptr expand(const formula_ptr& f, language lang, expand_depth depth);

// Node count of the full primitive expansion (literal sugar kept as single
// nodes; see node_count for the counting rule).
std::size_t expanded_size(const formula_ptr& f, language lang);

}  // namespace geo::defs
