#pragma once
// Concrete syntax for sentences, shared by the corpus files and the CLI.
//
//   formula  :=  iff-chain over  '<->' | '->' | '|' | '&' | '~'  (loosest to
//                tightest, binaries right-associative), quantifiers written
//                `forall x:P.` / `exists t:N.` with maximal scope
//   atoms    :=  p == q | s = t | s < t | s <= t | B(a,b,c) | D(p,q,u,v)
//                | Name(p1,...,pk) for registered defined atoms
//   terms    :=  numbers built from variables, integer literals, d(p,q),
//                ang(p,v,q), '+', '-', '*', unary '-', parentheses
//
// `s <= t` is sugar for `s < t | s = t`; binary '-' is sugar for adding a
// negation; `Coll` accepts more than three points and folds to a conjunction
// of triples anchored at the first two. The printer emits the minimal-paren
// canonical form, and parse(print(f)) == f structurally.
//
// Sentence files are UTF-8 text split into blocks by lines containing only
// `---`. Lines starting with '#' are comments; a `# name: <ident>` comment
// names the block for the corpus.

#include <optional>
#include <string>
#include <vector>

#include "geoform/ast.hpp"

namespace geo::syntax {

struct diagnostic {
    int line = 0;  // 1-based
    int col = 0;   // 1-based
    std::string message;
};

struct parse_result {
    formula_ptr ast;  // null when diagnostics are fatal
    std::vector<diagnostic> diags;
    bool ok() const { return ast != nullptr; }
};

// Parses one sentence. `defs` (optional) enables arity and name checking of
// defined atoms at parse time.
parse_result parse_sentence(const std::string& text, const definition_view* defs = nullptr);

// Canonical printing; minimal parentheses, `<=` and binary '-' sugar restored.
std::string print_sentence(const formula_ptr& f);
std::string print_term(const term_ptr& t);

struct sentence_block {
    std::string name;        // from `# name:`, may be empty
    std::string text;        // sentence source with comments stripped
    int first_line = 1;      // line of the block's first sentence line
    parse_result parsed;
};

// Splits and parses a `---`-separated sentence file. Parsing continues past
// blocks with errors; their diagnostics stay attached to the block.
std::vector<sentence_block> parse_sentence_file(const std::string& text,
                                                const definition_view* defs = nullptr);

}  // namespace geo::syntax
