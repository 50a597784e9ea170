#pragma once
// Randomized checking of sentences against a model. A sentence is prenexed,
// its universal variables are filled by a sampler (custom per item, or the
// generic hypothesis-driven patterns in check.cpp), and its existential
// variables are produced by witness recipes registered with the item. A
// sentence whose existentials have no recipes cannot be checked and is
// reported as unsupported rather than silently passed.
//
// Recipes are tiny construction programs (field arithmetic plus the model's
// geodesic primitives) so that one registration works in every model that
// supports the construction; model-specific recipes (raw coordinates) are
// only registered for the models they make sense in.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "geoform/ast.hpp"
#include "geoform/eval.hpp"
#include "geoform/model.hpp"

namespace geo::check {

using models::model;
using models::pt;
using models::rng_stream;
using models::valuation;

// Raised when a recipe cannot be evaluated (unbound reference, bad index,
// square root of a clearly negative number).
struct recipe_error : error {
    using error::error;
};

struct num_recipe;
struct point_recipe;
using num_recipe_ptr = std::shared_ptr<const num_recipe>;
using point_recipe_ptr = std::shared_ptr<const point_recipe>;

enum class num_op {
    constant,  // value
    ref,       // named number variable
    dist,      // distance between two point recipes
    coord,     // coordinate `index` of a point recipe
    add,
    sub,
    mul,
    div0,   // a / b, with a / 0 = 0 so recipes stay total
    sqrt0,  // sqrt, clamping tiny negatives to 0; clearly negative input errors
    neg,
    abs_val,
};

struct num_recipe {
    num_op op;
    double value = 0.0;
    std::string name;
    std::size_t index = 0;
    std::vector<num_recipe_ptr> args;
    std::vector<point_recipe_ptr> pts;
};

enum class point_op {
    ref,       // named point variable
    coords,    // build from coordinate recipes (padded with zeros to the dimension)
    extend,    // extend(a, b, x): beyond b on the ray a->b by arc length x
    ray,       // ray(v, w, ell): on the ray v->w at arc length ell from v
    lerp,      // lerp(a, b, t): fraction t of the way along the geodesic a->b
    midpoint,
    branch,  // branch(cond, then, else): cond > 0 picks `then`
    canned_equilateral,   // vertex `index` of the model's equilateral witness
    canned_noncollinear,  // vertex `index` of the model's noncollinear witness
};

struct point_recipe {
    point_op op;
    std::string name;
    std::size_t index = 0;
    std::vector<point_recipe_ptr> pts;
    std::vector<num_recipe_ptr> nums;
};

num_recipe_ptr rc_const(double v);
num_recipe_ptr rc_ref(std::string name);
num_recipe_ptr rc_dist(point_recipe_ptr a, point_recipe_ptr b);
num_recipe_ptr rc_dist(const std::string& a, const std::string& b);
num_recipe_ptr rc_coord(point_recipe_ptr p, std::size_t index);
num_recipe_ptr rc_add(num_recipe_ptr a, num_recipe_ptr b);
num_recipe_ptr rc_sub(num_recipe_ptr a, num_recipe_ptr b);
num_recipe_ptr rc_mul(num_recipe_ptr a, num_recipe_ptr b);
num_recipe_ptr rc_div0(num_recipe_ptr a, num_recipe_ptr b);
num_recipe_ptr rc_sqrt0(num_recipe_ptr a);
num_recipe_ptr rc_neg(num_recipe_ptr a);
num_recipe_ptr rc_abs(num_recipe_ptr a);

point_recipe_ptr rp_ref(std::string name);
point_recipe_ptr rp_coords(std::vector<num_recipe_ptr> cs);
point_recipe_ptr rp_extend(point_recipe_ptr a, point_recipe_ptr b, num_recipe_ptr x);
point_recipe_ptr rp_ray(point_recipe_ptr v, point_recipe_ptr w, num_recipe_ptr ell);
point_recipe_ptr rp_lerp(point_recipe_ptr a, point_recipe_ptr b, num_recipe_ptr t);
point_recipe_ptr rp_midpoint(point_recipe_ptr a, point_recipe_ptr b);
point_recipe_ptr rp_branch(num_recipe_ptr cond, point_recipe_ptr then_p, point_recipe_ptr else_p);
point_recipe_ptr rp_equilateral(std::size_t index);
point_recipe_ptr rp_noncollinear(std::size_t index);

double eval_num_recipe(const model& m, const valuation& val, const num_recipe_ptr& r);
pt eval_point_recipe(const model& m, const valuation& val, const point_recipe_ptr& r);

// Witnesses for the existential variables of one sentence, keyed by the
// variable names the prenexed sentence ends up with.
struct witness_script {
    std::map<std::string, point_recipe_ptr> points;
    std::map<std::string, num_recipe_ptr> numbers;
};

// Fills some (or all) universal variables of a sample before the generic
// patterns run; whatever it leaves unset is sampled generically.
using sampler_fn = std::function<void(const model&, rng_stream&, valuation&)>;

// A deterministic assignment checked before sampling starts. Universals must
// all be covered by the probe; existentials fall back to the item's script.
struct probe {
    std::string label;
    std::map<std::string, point_recipe_ptr> points;
    std::map<std::string, num_recipe_ptr> numbers;
};

enum class task_mode {
    sample,                 // probes, then randomized samples
    d5_search,              // hunt for a similar-triangles counterexample
    declared_unsupported,   // no sound checking procedure in this model
};

enum class expectation { pass, refuted, unsupported };
enum class outcome { pass, refuted, fail, unsupported };

std::string to_string(task_mode m);
std::string to_string(expectation e);
std::string to_string(outcome o);

struct run_config {
    std::uint64_t seed = 42;
    long samples = 10000;
    double tol = 1e-9;
    double angle_tol = 1e-6;
    double box = 10.0;
    int max_failures = 10;  // cap on recorded failures; counting never stops
};

struct check_task {
    std::string item;
    std::string model_name;
    task_mode mode = task_mode::sample;
    expectation expect = expectation::pass;
    witness_script script;
    sampler_fn sampler;  // may be empty
    std::vector<probe> probes;
    std::string note;  // reason shown for declared_unsupported
    long search_limit = 1000;
    double search_min_gap = 0.01;
};

struct failure_record {
    std::string kind;   // "probe" or "sample"
    long index = -1;    // sample number, -1 for probes
    std::string label;  // probe label
    std::string detail;
    std::map<std::string, std::vector<double>> points;
    std::map<std::string, double> numbers;
    std::vector<std::pair<std::string, bool>> atoms;  // trace of the failing evaluation
};

struct d5_search_result {
    bool found = false;
    long tries = 0;
    double gap = 0.0;
    pt a, b, c, bp, cp;
};

// Samples nondegenerate triangles, cuts both legs at their exact midpoints,
// and reports the first sample where the midline deviates from half the base
// by more than min_gap. In a flat model this never fires; in the disk model
// it fires quickly (the hyperbolic midline is shorter than half the base).
d5_search_result search_d5_counterexample(const model& m, std::uint64_t seed, long max_tries,
                                          double min_gap);

struct check_report {
    std::string item;
    std::string model_name;
    task_mode mode = task_mode::sample;
    expectation expect = expectation::pass;
    outcome result = outcome::fail;
    bool ok = false;  // result matches the expectation
    long probes_run = 0;
    long samples_run = 0;
    long falsified = 0;  // probes + samples whose matrix came out false
    std::vector<failure_record> failures;
    std::string detail;  // unsupported reason, or a short result note
    d5_search_result search;
};

nlohmann::ordered_json to_json(const check_report& rep);

check_report run_check(const formula_ptr& sentence, const check_task& task, const run_config& cfg);

}  // namespace geo::check
