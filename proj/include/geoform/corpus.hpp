#pragma once
// The bundled sentence corpus and its checking plan.
//
// items() loads and parses the .geo files shipped with the project. plan()
// lists every (sentence, model) pair the checker runs by default, each with
// its witness recipes, custom sampler, probes and expected outcome.
// Sentences in the relational language are checked through their metric
// translation, so a single numeric evaluator serves both languages.

#include <string>
#include <vector>

#include "geoform/ast.hpp"
#include "geoform/check.hpp"

namespace geo::corpus {

struct item {
    std::string name;
    std::string file;  // basename of the .geo file the item came from
    std::string text;  // sentence source with comments stripped
    formula_ptr sentence;
    language lang = language::ed;
};

// Corpus directory resolution: explicit argument, then the
// GEOFORM_CORPUS_DIR environment variable, then the build-time default.
std::string corpus_dir(const std::string& override_dir = "");

// All corpus items in file order. Loaded once per directory; throws
// geo::error when a file is missing, unnamed, or fails to parse.
const std::vector<item>& items(const std::string& dir = "");

// Item by name, or null.
const item* find(const std::string& name, const std::string& dir = "");

// The form a check of `it` evaluates: relational sentences are translated
// to the metric language, everything else is checked as written.
formula_ptr check_form(const item& it);

// Language inferred from the syntax tree: angle terms force the angle
// language, relational primitives the relational one, metric otherwise.
language infer_language(const formula_ptr& f);

// Every registered check in corpus order. Models referenced by name.
const std::vector<check::check_task>& plan();

// The registered checks for one item (possibly several models).
std::vector<check::check_task> plan_for(const std::string& item_name);

// Vertices of a regular simplex in R^k with k+1 vertices and side
// sqrt(2): the standard basis plus a point on the main diagonal. Used by
// the dimension-ladder witnesses and probes, and by tests as an
// independent equidistance oracle.
std::vector<std::vector<double>> simplex_coords(int k);

// Witness recipe for the inner Pasch configuration in flat 2D models:
// intersects the segments p-q and a-c analytically, falling back to q in
// the degenerate branches where that intersection collapses.
check::point_recipe_ptr pasch_witness();

}  // namespace geo::corpus
