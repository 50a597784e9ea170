#include "geoform/corpus.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "geoform/defs.hpp"
#include "geoform/model.hpp"
#include "geoform/syntax.hpp"
#include "geoform/xlate.hpp"

namespace geo::corpus {

using check::check_task;
using check::expectation;
using check::num_recipe_ptr;
using check::point_recipe_ptr;
using check::probe;
using check::rc_abs;
using check::rc_add;
using check::rc_const;
using check::rc_coord;
using check::rc_dist;
using check::rc_div0;
using check::rc_mul;
using check::rc_neg;
using check::rc_ref;
using check::rc_sub;
using check::rp_branch;
using check::rp_coords;
using check::rp_equilateral;
using check::rp_extend;
using check::rp_lerp;
using check::rp_midpoint;
using check::rp_noncollinear;
using check::rp_ray;
using check::rp_ref;
using check::sampler_fn;
using check::task_mode;
using check::witness_script;
using models::model;
using models::pt;
using models::rng_stream;
using models::valuation;
using models::vadd;
using models::vscale;
using models::vsub;

namespace {

const char* const kFiles[] = {
    "metric_axioms.geo",     "metric_theorems.geo",   "relational_axioms.geo",
    "relational_theorems.geo", "dimension_ladder.geo", "order_completeness.geo",
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open corpus file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void scan_term(const term_ptr& t, bool& has_angle, bool& has_dist) {
    if (!t) return;
    if (t->kind == term_kind::angle) has_angle = true;
    if (t->kind == term_kind::dist) has_dist = true;
    for (const auto& a : t->args) scan_term(a, has_angle, has_dist);
}

void scan_formula(const formula_ptr& f, bool& has_angle, bool& has_dist, bool& has_rel) {
    if (!f) return;
    if (f->kind == formula_kind::tarski_b || f->kind == formula_kind::tarski_d) has_rel = true;
    if (f->kind == formula_kind::defined &&
        !defs::registry::instance().available_in(f->name, language::ed))
        has_rel = true;
    for (const auto& t : f->terms) scan_term(t, has_angle, has_dist);
    for (const auto& s : f->subs) scan_formula(s, has_angle, has_dist, has_rel);
}

// ---------------------------------------------------------------------------
// samplers

// Samples the base points, then fills the copies with a random rigid image
// of them. `share` of the samples are rigid; the rest fall through to the
// generic patterns, which keeps the hypothesis-false side of equivalences
// exercised.
sampler_fn make_rigid_sampler(std::vector<std::string> bases, std::vector<std::string> copies,
                              double share) {
    return [bases = std::move(bases), copies = std::move(copies), share](
               const model& m, rng_stream& rng, valuation& val) {
        if (rng.unit() >= share) return;
        std::vector<pt> ps;
        ps.reserve(bases.size());
        for (const auto& name : bases) {
            pt s = m.sample(rng);
            val.points[name] = s;
            ps.push_back(s);
        }
        auto qs = m.rigid_copy(ps, rng);
        for (std::size_t i = 0; i < copies.size(); ++i) val.points[copies[i]] = qs[i];
    };
}

// The five-segment configuration: u beyond b on the ray a->b, and a rigid
// image of the whole quadruple on the primed names.
sampler_fn make_five_segment_sampler() {
    return [](const model& m, rng_stream& rng, valuation& val) {
        pt a = m.sample(rng), b = m.sample(rng), c = m.sample(rng);
        pt u = m.extend(a, b, rng.range(0.0, m.box() / 2));
        auto qs = m.rigid_copy({a, b, c, u}, rng);
        val.points["a"] = a;
        val.points["b"] = b;
        val.points["c"] = c;
        val.points["u"] = u;
        val.points["a1"] = qs[0];
        val.points["b1"] = qs[1];
        val.points["c1"] = qs[2];
        val.points["u1"] = qs[3];
    };
}

// Cuts both rays from the apex a at the same fraction w, producing an exact
// proportional (similar-triangle) configuration. With `with_apex_copy` the
// name a1 is pinned to a, which the hyperbolic-replacement check uses to
// refute equal-angles-implies-congruence in flat models.
sampler_fn make_scale_sampler(bool with_apex_copy) {
    return [with_apex_copy](const model& m, rng_stream& rng, valuation& val) {
        pt a = m.sample(rng), b = m.sample(rng), c = m.sample(rng);
        double w = rng.unit();
        val.points["a"] = a;
        val.points["b"] = b;
        val.points["c"] = c;
        val.points["b1"] = m.geo_lerp(a, b, w);
        val.points["c1"] = m.geo_lerp(a, c, w);
        if (with_apex_copy) val.points["a1"] = a;
    };
}

// Half the samples put t on a chord between the two rays at v (inside the
// angle, where the measures add); the other half leave t to the generic
// sampler (outside, where both sides of the equivalence go false).
sampler_fn make_angle_sum_sampler() {
    return [](const model& m, rng_stream& rng, valuation& val) {
        pt p = m.sample(rng), v = m.sample(rng), q = m.sample(rng);
        val.points["p"] = p;
        val.points["v"] = v;
        val.points["q"] = q;
        if (rng.unit() < 0.5) {
            pt rp = m.ray_point(v, p, rng.range(0.2, 1.0) * m.distance(v, p));
            pt rq = m.ray_point(v, q, rng.range(0.2, 1.0) * m.distance(v, q));
            val.points["t"] = m.geo_lerp(rp, rq, rng.unit());
        }
    };
}

// Half the samples put v on the segment p-q (a straight angle), half leave
// everything generic.
sampler_fn make_straight_angle_sampler() {
    return [](const model& m, rng_stream& rng, valuation& val) {
        if (rng.unit() >= 0.5) return;
        pt p = m.sample(rng), q = m.sample(rng);
        val.points["p"] = p;
        val.points["q"] = q;
        val.points["v"] = m.geo_lerp(p, q, rng.unit());
    };
}

// A right angle at a by construction.
sampler_fn make_right_triangle_sampler() {
    return [](const model& m, rng_stream& rng, valuation& val) {
        pt a = m.sample(rng), b = m.sample(rng);
        val.points["a"] = a;
        val.points["b"] = b;
        val.points["c"] = m.perp_point(a, b, rng.range(0.5, m.box() / 2), rng.coin());
    };
}

double cross2(const pt& u, const pt& v) { return u[0] * v[1] - u[1] * v[0]; }

// Intersection of the line through P with direction dP and the line through
// Q with direction dQ. Returns false when the directions are parallel.
bool line_intersect(const pt& P, const pt& dP, const pt& Q, const pt& dQ, pt& out) {
    double det = cross2(dP, dQ);
    if (std::abs(det) < 1e-9) return false;
    double t = cross2(vsub(Q, P), dQ) / det;
    out = vadd(P, vscale(t, dP));
    return true;
}

// The squares-on-the-legs configuration behind the relational Pythagoras
// sentence: a right triangle at a, a unit segment marked from b on one leg
// and matched from c on the other, mirror points on the two relevant lines
// (either side, by coin), and the three parallel projections onto the line
// bc. Every hypothesis holds by construction; the degenerate fallbacks
// break a collinearity hypothesis instead, so those samples are vacuous.
sampler_fn make_leg_squares_sampler() {
    return [](const model& m, rng_stream& rng, valuation& val) {
        pt a = m.sample(rng);
        double th = rng.range(0.0, 6.283185307179586);
        double lab = rng.range(1.0, 4.0), lac = rng.range(1.0, 4.0);
        double orient = rng.coin() ? 1.0 : -1.0;
        pt dirb{std::cos(th), std::sin(th)};
        pt dirc{-orient * std::sin(th), orient * std::cos(th)};
        pt b = vadd(a, vscale(lab, dirb));
        pt c = vadd(a, vscale(lac, dirc));
        double bc = std::hypot(lab, lac);
        double w = rng.range(0.3, 1.7);
        pt e1 = m.ray_point(b, a, w * lab);
        pt e2 = m.ray_point(c, a, w * lab);
        pt a1 = m.ray_point(b, c, (rng.coin() ? 1.0 : -1.0) * lab);
        pt c1 = m.ray_point(b, a, (rng.coin() ? 1.0 : -1.0) * bc);
        pt a2 = m.ray_point(c, b, (rng.coin() ? 1.0 : -1.0) * lac);
        pt base = vsub(c, b);
        pt s1, s2, s3;
        bool ok = line_intersect(a, vsub(e1, a1), b, base, s1) &&
                  line_intersect(a, vsub(e2, a2), b, base, s2) &&
                  line_intersect(c1, vsub(e1, c), b, base, s3);
        if (!ok) s1 = s2 = s3 = a;  // off the line bc: hypotheses fail
        val.points = {{"a", a},   {"b", b},   {"c", c},  {"a1", a1}, {"a2", a2}, {"c1", c1},
                      {"e1", e1}, {"e2", e2}, {"s1", s1}, {"s2", s2}, {"s3", s3}};
    };
}

// An orthogonal frame, three marked points with signed coordinates bounded
// away from the axes, their perpendicular feet, and the matching
// coordinate values for the number variables. Half the samples place u on
// the line through p and q; the other half push it off by a definite
// perpendicular margin, so both sides of the concluding equivalence are
// exercised with room to spare.
sampler_fn make_line_equation_sampler() {
    return [](const model& m, rng_stream& rng, valuation& val) {
        pt o = m.sample(rng);
        double th = rng.range(0.0, 6.283185307179586);
        pt ex{std::cos(th), std::sin(th)};
        pt ey{-std::sin(th), std::cos(th)};
        pt e1 = vadd(o, vscale(rng.range(0.5, 3.0), ex));
        pt e2 = vadd(o, vscale(rng.range(0.5, 3.0), ey));
        auto coord = [&rng]() {
            double s = rng.range(0.5, 4.0);
            return rng.coin() ? s : -s;
        };
        double pxv = coord(), pyv = coord(), qxv = coord(), qyv = coord();
        if (std::abs(pxv - qxv) + std::abs(pyv - qyv) < 0.3) {
            qxv += 1.0;
            qyv += 1.5;
        }
        double xv, yv;
        double dx = qxv - pxv, dy = qyv - pyv, len = std::hypot(dx, dy);
        double t = rng.range(-1.5, 1.5);
        if (rng.coin()) {
            xv = pxv + t * dx;
            yv = pyv + t * dy;
        } else {
            double off = (rng.coin() ? 1.0 : -1.0) * rng.range(0.2, 2.0);
            xv = pxv + t * dx - off * dy / len;
            yv = pyv + t * dy + off * dx / len;
        }
        auto place = [&](double cx, double cy) {
            return vadd(o, vadd(vscale(cx, ex), vscale(cy, ey)));
        };
        val.points = {{"o", o},
                      {"e1", e1},
                      {"e2", e2},
                      {"p", place(pxv, pyv)},
                      {"q", place(qxv, qyv)},
                      {"u", place(xv, yv)},
                      {"p1", place(pxv, 0)},
                      {"p2", place(0, pyv)},
                      {"q1", place(qxv, 0)},
                      {"q2", place(0, qyv)},
                      {"u1", place(xv, 0)},
                      {"u2", place(0, yv)}};
        val.numbers = {{"x", xv}, {"y", yv},  {"px", pxv},
                       {"py", pyv}, {"qx", qxv}, {"qy", qyv}};
    };
}

// ---------------------------------------------------------------------------
// probes and witness scripts

probe coincident_probe(const std::vector<std::string>& names) {
    probe pr;
    pr.label = "coincident";
    for (const auto& n : names) pr.points[n] = rp_coords({});
    return pr;
}

probe simplex_probe(int k, const std::vector<std::string>& names) {
    probe pr;
    pr.label = "simplex" + std::to_string(k);
    auto vs = simplex_coords(k);
    for (std::size_t i = 0; i < names.size(); ++i) {
        std::vector<num_recipe_ptr> cs;
        for (double c : vs[i]) cs.push_back(rc_const(c));
        pr.points[names[i]] = rp_coords(std::move(cs));
    }
    return pr;
}

witness_script simplex_script(int k, const std::vector<std::string>& names) {
    witness_script ws;
    auto vs = simplex_coords(k);
    for (std::size_t i = 0; i < names.size(); ++i) {
        std::vector<num_recipe_ptr> cs;
        for (double c : vs[i]) cs.push_back(rc_const(c));
        ws.points[names[i]] = rp_coords(std::move(cs));
    }
    return ws;
}

std::vector<std::string> point_names(const char* stem, int count) {
    std::vector<std::string> out;
    for (int i = 0; i < count; ++i) out.push_back(stem + std::to_string(i));
    return out;
}

// The concrete 3-4-5 five-segment probe: a right triangle over the segment
// a-b with u two units past b, copied identically to the primed names.
probe five_segment_probe() {
    probe pr;
    pr.label = "cong345";
    auto at = [](double x, double y) {
        return rp_coords({rc_const(x), rc_const(y)});
    };
    pr.points["a"] = at(0, 0);
    pr.points["b"] = at(4, 0);
    pr.points["c"] = at(4, 3);
    pr.points["u"] = at(6, 0);
    pr.points["a1"] = at(0, 0);
    pr.points["b1"] = at(4, 0);
    pr.points["c1"] = at(4, 3);
    pr.points["u1"] = at(6, 0);
    return pr;
}

}  // namespace

std::vector<std::vector<double>> simplex_coords(int k) {
    // standard basis vectors e_1..e_k plus c*(1,..,1); the diagonal factor
    // solves c^2 k - 2 c - 1 = 0, making every pairwise distance sqrt(2)
    double c = (1.0 + std::sqrt(1.0 + k)) / k;
    std::vector<std::vector<double>> vs;
    vs.push_back(std::vector<double>(k, c));
    for (int i = 0; i < k; ++i) {
        std::vector<double> v(k, 0.0);
        v[i] = 1.0;
        vs.push_back(std::move(v));
    }
    return vs;
}

check::point_recipe_ptr pasch_witness() {
    // Intersect segment p-q with segment a-c in coordinates at b: ex along
    // b->c, ey toward a from its foot on that axis. With alpha = d(b,c),
    // beta = d(b,p), k = d(q,b)/d(a,b) and mu, nu the coordinates of a, the
    // intersection sits at
    //   x = ((1-k) alpha beta + k mu (beta - alpha)) / (beta - k alpha)
    //   y = k nu (beta - alpha) / (beta - k alpha).
    // When b = c or the denominator collapses (p = c and q = a), q itself
    // is a valid witness, so the branches fall back to it.
    auto A = rp_ref("a");
    auto B = rp_ref("b");
    auto C = rp_ref("c");
    auto alpha = rc_dist("b", "c");
    auto beta = rc_dist("b", "p");
    auto k = rc_div0(rc_dist("q", "b"), rc_dist("a", "b"));
    auto denom = rc_sub(beta, rc_mul(k, alpha));
    auto bx = rc_coord(B, 0), by = rc_coord(B, 1);
    auto exx = rc_div0(rc_sub(rc_coord(C, 0), bx), alpha);
    auto exy = rc_div0(rc_sub(rc_coord(C, 1), by), alpha);
    auto mu = rc_add(rc_mul(rc_sub(rc_coord(A, 0), bx), exx),
                     rc_mul(rc_sub(rc_coord(A, 1), by), exy));
    auto fx = rc_add(bx, rc_mul(mu, exx));
    auto fy = rc_add(by, rc_mul(mu, exy));
    auto foot = rp_coords({fx, fy});
    auto nu = rc_dist(A, foot);
    auto eyx = rc_div0(rc_sub(rc_coord(A, 0), fx), nu);
    auto eyy = rc_div0(rc_sub(rc_coord(A, 1), fy), nu);
    auto bma = rc_sub(beta, alpha);
    auto x = rc_div0(rc_add(rc_mul(rc_sub(rc_const(1), k), rc_mul(alpha, beta)),
                            rc_mul(k, rc_mul(mu, bma))),
                     denom);
    auto y = rc_div0(rc_mul(k, rc_mul(nu, bma)), denom);
    auto tx = rc_add(bx, rc_add(rc_mul(x, exx), rc_mul(y, eyx)));
    auto ty = rc_add(by, rc_add(rc_mul(x, exy), rc_mul(y, eyy)));
    auto crossing = rp_coords({tx, ty});
    auto guarded = rp_branch(rc_sub(rc_abs(denom), rc_const(1e-9)), crossing, rp_ref("q"));
    return rp_branch(rc_sub(alpha, rc_const(1e-9)), guarded, rp_ref("q"));
}

std::string corpus_dir(const std::string& override_dir) {
    if (!override_dir.empty()) return override_dir;
    if (const char* env = std::getenv("GEOFORM_CORPUS_DIR"); env != nullptr && *env != '\0')
        return env;
#ifdef GEOFORM_DEFAULT_CORPUS_DIR
    return GEOFORM_DEFAULT_CORPUS_DIR;
#else
    return "corpus";
#endif
}

const std::vector<item>& items(const std::string& dir) {
    static std::map<std::string, std::vector<item>> cache;
    std::string where = corpus_dir(dir);
    auto hit = cache.find(where);
    if (hit != cache.end()) return hit->second;

    std::vector<item> loaded;
    const auto& reg = defs::registry::instance();
    for (const char* base : kFiles) {
        std::string path = where + "/" + base;
        auto blocks = syntax::parse_sentence_file(read_file(path), &reg);
        for (const auto& blk : blocks) {
            if (blk.name.empty())
                throw error(path + ":" + std::to_string(blk.first_line) + ": unnamed block");
            if (!blk.parsed.ok()) {
                std::string msg = path + ": block '" + blk.name + "' does not parse";
                for (const auto& d : blk.parsed.diags)
                    msg += "\n  line " + std::to_string(d.line) + ": " + d.message;
                throw error(msg);
            }
            item it;
            it.name = blk.name;
            it.file = base;
            it.text = blk.text;
            it.sentence = blk.parsed.ast;
            it.lang = infer_language(it.sentence);
            loaded.push_back(std::move(it));
        }
    }
    return cache.emplace(std::move(where), std::move(loaded)).first->second;
}

const item* find(const std::string& name, const std::string& dir) {
    for (const auto& it : items(dir))
        if (it.name == name) return &it;
    return nullptr;
}

language infer_language(const formula_ptr& f) {
    bool has_angle = false, has_dist = false, has_rel = false;
    scan_formula(f, has_angle, has_dist, has_rel);
    if (has_angle) return language::eda;
    if (has_rel && !has_dist) return language::e2;
    return language::ed;
}

formula_ptr check_form(const item& it) {
    if (it.lang == language::e2) return xlate::e2_to_ed(it.sentence);
    return it.sentence;
}

const std::vector<check::check_task>& plan() {
    static const std::vector<check_task> tasks = [] {
        std::vector<check_task> out;
        auto add = [&out](const std::string& item_name, const std::string& model_name,
                          expectation expect = expectation::pass) -> check_task& {
            check_task t;
            t.item = item_name;
            t.model_name = model_name;
            t.expect = expect;
            out.push_back(std::move(t));
            return out.back();
        };

        const std::vector<std::string> abc = {"a", "b", "c"};
        const std::vector<std::string> abc1 = {"a1", "b1", "c1"};

        // ------------------------------------------------------ metric axioms
        for (const char* mdl : {"cartesian2", "disk"}) {
            add("D1", mdl);
            {
                auto& t = add("D2", mdl);
                probe same;
                same.label = "coincident";
                same.points["a"] = rp_equilateral(0);
                same.points["b"] = rp_ref("a");
                probe apart;
                apart.label = "distinct";
                apart.points["a"] = rp_equilateral(0);
                apart.points["b"] = rp_equilateral(1);
                t.probes = {same, apart};
            }
            add("D3", mdl);
            {
                auto& t = add("D4", mdl);
                t.script.points["c"] = rp_extend(rp_ref("a"), rp_ref("b"), rc_ref("x"));
            }
            {
                auto& t = add("D6", mdl);
                for (int i = 0; i < 3; ++i)
                    t.script.points["p" + std::to_string(i)] = rp_equilateral(i);
            }
            {
                auto& t = add("D6w", mdl);
                for (int i = 0; i < 3; ++i)
                    t.script.points["p" + std::to_string(i)] = rp_equilateral(i);
            }
            {
                auto& t = add("D7", mdl);
                t.probes = {coincident_probe(point_names("p", 4))};
            }
            add("A1", mdl);
            {
                auto& t = add("A2", mdl);
                t.sampler = make_rigid_sampler({"p", "v", "q"}, {"p1", "v1", "q1"}, 0.5);
            }
            {
                auto& t = add("A3", mdl);
                t.sampler = make_angle_sum_sampler();
            }
            {
                auto& t = add("A4", mdl);
                t.sampler = make_straight_angle_sampler();
            }
        }
        {
            auto& t = add("D5", "cartesian2");
            t.sampler = make_scale_sampler(false);
        }
        {
            auto& t = add("D5", "disk", expectation::refuted);
            t.mode = task_mode::d5_search;
        }

        // ---------------------------------------------------- metric theorems
        for (const char* mdl : {"cartesian2", "disk"}) {
            add("Lemma1", mdl);
            add("Thm16", mdl);
            add("Thm17", mdl);
            add("Thm18", mdl);
            add("Thm19", mdl);
            add("Thm4", mdl);
            add("Thm11", mdl);
            {
                auto& t = add("Thm1", mdl);
                t.sampler = make_rigid_sampler(abc, abc1, 1.0);
            }
            {
                auto& t = add("Thm13", mdl);
                t.sampler = make_five_segment_sampler();
                if (std::string(mdl) == "cartesian2") t.probes = {five_segment_probe()};
            }
        }
        {
            auto& t = add("Thm2", "cartesian2");
            t.sampler = make_rigid_sampler(abc, abc1, 1.0);
        }
        {
            auto& t = add("Thm3", "cartesian2");
            t.sampler = make_rigid_sampler(abc, abc1, 1.0);
        }
        {
            auto& t = add("Thm5", "cartesian2");
            t.sampler = make_scale_sampler(false);
        }
        {
            auto& t = add("Thm6", "cartesian2");
            t.sampler = make_scale_sampler(false);
        }
        {
            auto& t = add("Thm10", "cartesian2");
            t.sampler = make_right_triangle_sampler();
        }
        {
            // hyperbolic: the squared-lengths relation fails for genuine
            // right triangles
            auto& t = add("Thm10", "disk", expectation::refuted);
            t.sampler = make_right_triangle_sampler();
        }
        add("Thm12", "cartesian2");
        // hyperbolic: the midline triangle shrinks, so its angles differ
        add("Thm12", "disk", expectation::refuted);
        {
            auto& t = add("Thm14", "cartesian2");
            t.script.points["t"] = pasch_witness();
        }
        {
            auto& t = add("D5h", "cartesian2", expectation::refuted);
            t.sampler = make_scale_sampler(true);
        }
        {
            auto& t = add("D5h", "disk", expectation::unsupported);
            t.mode = task_mode::declared_unsupported;
            t.note =
                "equal-angle hypotheses form a measure-zero set; building "
                "hyperbolic triangles from their angles would presuppose the "
                "statement under test";
        }

        // ------------------------------------------------- relational axioms
        add("T1", "cartesian2");
        add("T2", "cartesian2");
        {
            auto& t = add("T3", "cartesian2");
            probe pr;
            pr.label = "collapsed";
            pr.points["p"] = rp_equilateral(0);
            pr.points["q"] = rp_ref("p");
            pr.points["t"] = rp_equilateral(1);
            t.probes = {pr};
        }
        {
            auto& t = add("T4", "cartesian2");
            t.script.points["a"] = rp_extend(rp_ref("p"), rp_ref("q"), rc_dist("u", "v"));
        }
        for (const char* mdl : {"cartesian2", "disk"}) {
            auto& t = add("T5", mdl);
            t.sampler = make_five_segment_sampler();
        }
        add("T6", "cartesian2");
        {
            auto& t = add("T7", "cartesian2");
            t.script.points["t"] = pasch_witness();
        }
        {
            auto& t = add("T8", "cartesian2");
            for (int i = 0; i < 3; ++i) t.script.points[abc[i]] = rp_noncollinear(i);
        }
        add("T9", "cartesian2");
        {
            auto& t = add("T10", "cartesian2");
            auto scale_to = [](const char* leg) {
                return rc_div0(rc_mul(rc_dist("a", "v"), rc_dist("a", leg)), rc_dist("a", "u"));
            };
            t.script.points["p"] = rp_ray(rp_ref("a"), rp_ref("b"), scale_to("b"));
            t.script.points["q"] = rp_ray(rp_ref("a"), rp_ref("c"), scale_to("c"));
        }
        {
            // no witness recipes on purpose: the checker must report that it
            // cannot certify a continuity instance it has no construction for
            add("T11", "cartesian2", expectation::unsupported);
        }
        {
            auto& t = add("T11Inst", "cartesian2");
            t.script.points["p"] = rp_ref("a");
            t.script.points["q"] = rp_ref("a");
            t.script.points["b"] = rp_ref("a");
        }

        // ----------------------------------------------- relational theorems
        {
            auto& t = add("PythagorasTarski", "cartesian2");
            t.sampler = make_leg_squares_sampler();
            t.script.points["q"] = rp_ray(rp_ref("b"), rp_ref("s3"), rc_dist("b", "s1"));
        }
        {
            auto& t = add("LineEquation", "cartesian2");
            t.sampler = make_line_equation_sampler();
        }

        // ------------------------------------------------- dimension ladder
        for (int n = 2; n <= 4; ++n) {
            std::string own = "cartesian" + std::to_string(n);
            std::string above = "cartesian" + std::to_string(n + 1);
            std::string d6 = "D6n" + std::to_string(n);
            std::string d7 = "D7n" + std::to_string(n);
            {
                auto& t = add(d6, own);
                t.script = simplex_script(n, point_names("p", n + 1));
            }
            {
                auto& t = add(d7, own);
                t.probes = {coincident_probe(point_names("p", n + 2))};
            }
            {
                // one dimension up the simplex refutes the upper bound
                auto& t = add(d7, above, expectation::refuted);
                t.probes = {simplex_probe(n + 1, point_names("p", n + 2))};
            }
        }

        // ----------------------------------------------- order completeness
        for (const char* name : {"RCF17", "RCF17Inst"}) {
            auto& t = add(name, "cartesian2");
            t.script.numbers["x"] = rc_const(0);
            t.script.numbers["y"] = rc_const(0);
            t.script.numbers["z"] = rc_const(1);
        }

        return out;
    }();
    return tasks;
}

std::vector<check::check_task> plan_for(const std::string& item_name) {
    std::vector<check_task> out;
    for (const auto& t : plan())
        if (t.item == item_name) out.push_back(t);
    return out;
}

}  // namespace geo::corpus
