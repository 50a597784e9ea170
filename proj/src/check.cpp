// Sampling engine. The interesting part is how universal variables get their
// values: most hypotheses in this corpus are betweenness and congruence
// constraints, so a small set of syntactic patterns (midpoint, point on a
// segment, point beyond a segment, point on a perpendicular bisector, point
// on a sphere) covers the majority of items; items with thicker hypotheses
// (rigid copies, scaled copies, right angles) register a custom sampler.
// Sampling is blocked so that sample i of an (item, model) pair is the same
// no matter how many other items ran before it.

#include <algorithm>
#include <cmath>
#include <set>

#include "geoform/check.hpp"
#include "geoform/syntax.hpp"

namespace geo::check {

// ---------------------------------------------------------------------------
// recipes

num_recipe_ptr rc_const(double v) {
    auto r = std::make_shared<num_recipe>();
    r->op = num_op::constant;
    r->value = v;
    return r;
}

num_recipe_ptr rc_ref(std::string name) {
    auto r = std::make_shared<num_recipe>();
    r->op = num_op::ref;
    r->name = std::move(name);
    return r;
}

num_recipe_ptr rc_dist(point_recipe_ptr a, point_recipe_ptr b) {
    auto r = std::make_shared<num_recipe>();
    r->op = num_op::dist;
    r->pts = {std::move(a), std::move(b)};
    return r;
}

num_recipe_ptr rc_dist(const std::string& a, const std::string& b) {
    return rc_dist(rp_ref(a), rp_ref(b));
}

num_recipe_ptr rc_coord(point_recipe_ptr p, std::size_t index) {
    auto r = std::make_shared<num_recipe>();
    r->op = num_op::coord;
    r->index = index;
    r->pts = {std::move(p)};
    return r;
}

namespace {
num_recipe_ptr rc_bin(num_op op, num_recipe_ptr a, num_recipe_ptr b) {
    auto r = std::make_shared<num_recipe>();
    r->op = op;
    r->args = {std::move(a), std::move(b)};
    return r;
}

num_recipe_ptr rc_un(num_op op, num_recipe_ptr a) {
    auto r = std::make_shared<num_recipe>();
    r->op = op;
    r->args = {std::move(a)};
    return r;
}
}  // namespace

num_recipe_ptr rc_add(num_recipe_ptr a, num_recipe_ptr b) {
    return rc_bin(num_op::add, std::move(a), std::move(b));
}
num_recipe_ptr rc_sub(num_recipe_ptr a, num_recipe_ptr b) {
    return rc_bin(num_op::sub, std::move(a), std::move(b));
}
num_recipe_ptr rc_mul(num_recipe_ptr a, num_recipe_ptr b) {
    return rc_bin(num_op::mul, std::move(a), std::move(b));
}
num_recipe_ptr rc_div0(num_recipe_ptr a, num_recipe_ptr b) {
    return rc_bin(num_op::div0, std::move(a), std::move(b));
}
num_recipe_ptr rc_sqrt0(num_recipe_ptr a) { return rc_un(num_op::sqrt0, std::move(a)); }
num_recipe_ptr rc_neg(num_recipe_ptr a) { return rc_un(num_op::neg, std::move(a)); }
num_recipe_ptr rc_abs(num_recipe_ptr a) { return rc_un(num_op::abs_val, std::move(a)); }

point_recipe_ptr rp_ref(std::string name) {
    auto r = std::make_shared<point_recipe>();
    r->op = point_op::ref;
    r->name = std::move(name);
    return r;
}

point_recipe_ptr rp_coords(std::vector<num_recipe_ptr> cs) {
    auto r = std::make_shared<point_recipe>();
    r->op = point_op::coords;
    r->nums = std::move(cs);
    return r;
}

namespace {
point_recipe_ptr rp_geo(point_op op, point_recipe_ptr a, point_recipe_ptr b, num_recipe_ptr x) {
    auto r = std::make_shared<point_recipe>();
    r->op = op;
    r->pts = {std::move(a), std::move(b)};
    if (x) r->nums = {std::move(x)};
    return r;
}
}  // namespace

point_recipe_ptr rp_extend(point_recipe_ptr a, point_recipe_ptr b, num_recipe_ptr x) {
    return rp_geo(point_op::extend, std::move(a), std::move(b), std::move(x));
}
point_recipe_ptr rp_ray(point_recipe_ptr v, point_recipe_ptr w, num_recipe_ptr ell) {
    return rp_geo(point_op::ray, std::move(v), std::move(w), std::move(ell));
}
point_recipe_ptr rp_lerp(point_recipe_ptr a, point_recipe_ptr b, num_recipe_ptr t) {
    return rp_geo(point_op::lerp, std::move(a), std::move(b), std::move(t));
}
point_recipe_ptr rp_midpoint(point_recipe_ptr a, point_recipe_ptr b) {
    return rp_geo(point_op::midpoint, std::move(a), std::move(b), nullptr);
}

point_recipe_ptr rp_branch(num_recipe_ptr cond, point_recipe_ptr then_p, point_recipe_ptr else_p) {
    auto r = std::make_shared<point_recipe>();
    r->op = point_op::branch;
    r->pts = {std::move(then_p), std::move(else_p)};
    r->nums = {std::move(cond)};
    return r;
}

namespace {
point_recipe_ptr rp_canned(point_op op, std::size_t index) {
    auto r = std::make_shared<point_recipe>();
    r->op = op;
    r->index = index;
    return r;
}
}  // namespace

point_recipe_ptr rp_equilateral(std::size_t index) {
    return rp_canned(point_op::canned_equilateral, index);
}
point_recipe_ptr rp_noncollinear(std::size_t index) {
    return rp_canned(point_op::canned_noncollinear, index);
}

double eval_num_recipe(const model& m, const valuation& val, const num_recipe_ptr& r) {
    switch (r->op) {
        case num_op::constant:
            return r->value;
        case num_op::ref: {
            auto it = val.numbers.find(r->name);
            if (it == val.numbers.end()) throw recipe_error("recipe refers to unset " + r->name);
            return it->second;
        }
        case num_op::dist:
            return m.distance(eval_point_recipe(m, val, r->pts[0]),
                              eval_point_recipe(m, val, r->pts[1]));
        case num_op::coord: {
            pt p = eval_point_recipe(m, val, r->pts[0]);
            if (r->index >= p.size()) throw recipe_error("coordinate index out of range");
            return p[r->index];
        }
        case num_op::add:
            return eval_num_recipe(m, val, r->args[0]) + eval_num_recipe(m, val, r->args[1]);
        case num_op::sub:
            return eval_num_recipe(m, val, r->args[0]) - eval_num_recipe(m, val, r->args[1]);
        case num_op::mul:
            return eval_num_recipe(m, val, r->args[0]) * eval_num_recipe(m, val, r->args[1]);
        case num_op::div0: {
            double b = eval_num_recipe(m, val, r->args[1]);
            if (b == 0.0) return 0.0;
            return eval_num_recipe(m, val, r->args[0]) / b;
        }
        case num_op::sqrt0: {
            double v = eval_num_recipe(m, val, r->args[0]);
            if (v < -1e-12) throw recipe_error("sqrt of negative value");
            return v <= 0.0 ? 0.0 : std::sqrt(v);
        }
        case num_op::neg:
            return -eval_num_recipe(m, val, r->args[0]);
        case num_op::abs_val:
            return std::fabs(eval_num_recipe(m, val, r->args[0]));
    }
    throw recipe_error("corrupt number recipe");
}

pt eval_point_recipe(const model& m, const valuation& val, const point_recipe_ptr& r) {
    switch (r->op) {
        case point_op::ref: {
            auto it = val.points.find(r->name);
            if (it == val.points.end()) throw recipe_error("recipe refers to unset " + r->name);
            return it->second;
        }
        case point_op::coords: {
            if (r->nums.size() > static_cast<std::size_t>(m.dim()))
                throw recipe_error("coordinate recipe wider than the model");
            pt p(m.dim(), 0.0);
            for (std::size_t i = 0; i < r->nums.size(); ++i)
                p[i] = eval_num_recipe(m, val, r->nums[i]);
            m.check_domain(p);
            return p;
        }
        case point_op::extend:
            return m.extend(eval_point_recipe(m, val, r->pts[0]),
                            eval_point_recipe(m, val, r->pts[1]),
                            eval_num_recipe(m, val, r->nums[0]));
        case point_op::ray:
            return m.ray_point(eval_point_recipe(m, val, r->pts[0]),
                               eval_point_recipe(m, val, r->pts[1]),
                               eval_num_recipe(m, val, r->nums[0]));
        case point_op::lerp:
            return m.geo_lerp(eval_point_recipe(m, val, r->pts[0]),
                              eval_point_recipe(m, val, r->pts[1]),
                              eval_num_recipe(m, val, r->nums[0]));
        case point_op::midpoint:
            return m.midpoint(eval_point_recipe(m, val, r->pts[0]),
                              eval_point_recipe(m, val, r->pts[1]));
        case point_op::branch:
            return eval_num_recipe(m, val, r->nums[0]) > 0.0
                       ? eval_point_recipe(m, val, r->pts[0])
                       : eval_point_recipe(m, val, r->pts[1]);
        case point_op::canned_equilateral: {
            auto ps = m.equilateral();
            if (r->index >= ps.size()) throw recipe_error("equilateral index out of range");
            return ps[r->index];
        }
        case point_op::canned_noncollinear: {
            auto ps = m.noncollinear();
            if (r->index >= ps.size()) throw recipe_error("noncollinear index out of range");
            return ps[r->index];
        }
    }
    throw recipe_error("corrupt point recipe");
}

// ---------------------------------------------------------------------------
// hypothesis patterns

namespace {

struct bet_fact {
    std::string a, b, c;  // b between a and c
};
struct cong_fact {
    std::string p, q, u, v;  // d(p,q) = d(u,v)
};

struct hyp_facts {
    std::vector<bet_fact> bets;
    std::vector<cong_fact> congs;
    std::set<std::string> nonneg;  // number variables bounded below by 0
};

bool as_point_var(const term_ptr& t, std::string& out) {
    if (t->kind != term_kind::point_var) return false;
    out = t->name;
    return true;
}

bool as_dist(const term_ptr& t, std::string& a, std::string& b) {
    return t->kind == term_kind::dist && as_point_var(t->args[0], a) &&
           as_point_var(t->args[1], b);
}

// d(a,c) = d(a,b) + d(b,c), with the sum in either order.
bool as_dsum_bet(const term_ptr& whole, const term_ptr& sum, bet_fact& out) {
    std::string a, c;
    if (!as_dist(whole, a, c)) return false;
    if (sum->kind != term_kind::add) return false;
    for (int flip = 0; flip < 2; ++flip) {
        const term_ptr& first = sum->args[flip];
        const term_ptr& second = sum->args[1 - flip];
        std::string x1, y1, x2, y2;
        if (as_dist(first, x1, y1) && as_dist(second, x2, y2) && x1 == a && y2 == c && y1 == x2) {
            out = {a, y1, c};
            return true;
        }
    }
    return false;
}

bool as_nonneg(const formula_ptr& f, std::string& var) {
    auto zero_less_var = [&](const formula_ptr& g) {
        return g->kind == formula_kind::less && g->terms[0]->kind == term_kind::num_zero &&
               g->terms[1]->kind == term_kind::num_var && (var = g->terms[1]->name, true);
    };
    if (zero_less_var(f)) return true;
    if (f->kind != formula_kind::f_or) return false;
    std::string v2;
    auto zero_eq_var = [&](const formula_ptr& g) {
        if (g->kind != formula_kind::eq_num) return false;
        const term_ptr &l = g->terms[0], &r = g->terms[1];
        if (l->kind == term_kind::num_zero && r->kind == term_kind::num_var) return (v2 = r->name, true);
        if (r->kind == term_kind::num_zero && l->kind == term_kind::num_var) return (v2 = l->name, true);
        return false;
    };
    for (int flip = 0; flip < 2; ++flip)
        if (zero_less_var(f->subs[flip]) && zero_eq_var(f->subs[1 - flip]) && v2 == var)
            return true;
    return false;
}

void note_conjunct(const formula_ptr& f, hyp_facts& out) {
    std::string a, b, c, d;
    switch (f->kind) {
        case formula_kind::tarski_b:
            if (as_point_var(f->terms[0], a) && as_point_var(f->terms[1], b) &&
                as_point_var(f->terms[2], c))
                out.bets.push_back({a, b, c});
            return;
        case formula_kind::tarski_d:
            if (as_point_var(f->terms[0], a) && as_point_var(f->terms[1], b) &&
                as_point_var(f->terms[2], c) && as_point_var(f->terms[3], d))
                out.congs.push_back({a, b, c, d});
            return;
        case formula_kind::defined:
            if (f->name == "Bet" && as_point_var(f->terms[0], a) &&
                as_point_var(f->terms[1], b) && as_point_var(f->terms[2], c))
                out.bets.push_back({a, b, c});
            if (f->name == "CongSeg" && as_point_var(f->terms[0], a) &&
                as_point_var(f->terms[1], b) && as_point_var(f->terms[2], c) &&
                as_point_var(f->terms[3], d))
                out.congs.push_back({a, b, c, d});
            return;
        case formula_kind::eq_num: {
            bet_fact bf;
            if (as_dsum_bet(f->terms[0], f->terms[1], bf) ||
                as_dsum_bet(f->terms[1], f->terms[0], bf)) {
                out.bets.push_back(bf);
                return;
            }
            std::string p, q, u, v;
            if (as_dist(f->terms[0], p, q) && as_dist(f->terms[1], u, v))
                out.congs.push_back({p, q, u, v});
            return;
        }
        default: {
            std::string var;
            if (as_nonneg(f, var)) out.nonneg.insert(var);
            return;
        }
    }
}

void conjuncts_of(const formula_ptr& f, hyp_facts& out) {
    if (f->kind == formula_kind::f_and) {
        conjuncts_of(f->subs[0], out);
        conjuncts_of(f->subs[1], out);
        return;
    }
    note_conjunct(f, out);
}

// Left sides of implications contribute their conjuncts as hypotheses; the
// walk continues into conclusions so nested implications also contribute.
void collect_hypotheses(const formula_ptr& f, hyp_facts& out) {
    switch (f->kind) {
        case formula_kind::f_and:
            collect_hypotheses(f->subs[0], out);
            collect_hypotheses(f->subs[1], out);
            return;
        case formula_kind::f_implies:
            conjuncts_of(f->subs[0], out);
            collect_hypotheses(f->subs[1], out);
            return;
        default:
            return;
    }
}

bool same_pair(const std::string& a1, const std::string& a2, const std::string& b1,
               const std::string& b2) {
    return (a1 == b1 && a2 == b2) || (a1 == b2 && a2 == b1);
}

// Do the facts say x is equidistant from the ends of some assigned segment?
// Matches d(x,p) = d(x,q) in any orientation.
bool bisector_target(const hyp_facts& facts, const valuation& val, const std::string& x, pt& p,
                     pt& q) {
    for (const auto& cg : facts.congs) {
        std::string first, second;
        if (cg.p == x) first = cg.q;
        else if (cg.q == x) first = cg.p;
        else continue;
        if (cg.u == x) second = cg.v;
        else if (cg.v == x) second = cg.u;
        else continue;
        if (first == second) continue;
        auto ip = val.points.find(first);
        auto iq = val.points.find(second);
        if (ip == val.points.end() || iq == val.points.end()) continue;
        p = ip->second;
        q = iq->second;
        return true;
    }
    return false;
}

// Fills one universal point variable from the hypothesis facts, or by a
// plain model sample when nothing matches.
pt sample_point_var(const model& m, rng_stream& rng, const hyp_facts& facts, const valuation& val,
                    const std::string& x) {
    auto assigned = [&](const std::string& n) { return val.points.count(n) != 0; };

    // Midpoint: between two assigned points with equal halves.
    for (const auto& bt : facts.bets) {
        if (bt.b != x || !assigned(bt.a) || !assigned(bt.c)) continue;
        for (const auto& cg : facts.congs) {
            bool touches = same_pair(cg.p, cg.q, bt.a, x) && same_pair(cg.u, cg.v, x, bt.c);
            bool touches_rev = same_pair(cg.p, cg.q, x, bt.c) && same_pair(cg.u, cg.v, bt.a, x);
            if (touches || touches_rev)
                return m.midpoint(val.points.at(bt.a), val.points.at(bt.c));
        }
    }
    // Interior of an assigned segment.
    for (const auto& bt : facts.bets)
        if (bt.b == x && assigned(bt.a) && assigned(bt.c))
            return m.geo_lerp(val.points.at(bt.a), val.points.at(bt.c), rng.unit());
    // Beyond the end of an assigned segment. The extension length is floored
    // away from zero: a point almost on the segment end gives later
    // constructions a direction read off two nearly coincident points, and
    // in the hyperbolic model that noise grows with sinh of the distance
    // walked. Exact-coincidence cases are covered by probes, not samples.
    const double ext_min = m.box() / 200.0;
    for (const auto& bt : facts.bets) {
        if (bt.c == x && assigned(bt.a) && assigned(bt.b))
            return m.extend(val.points.at(bt.a), val.points.at(bt.b),
                            rng.range(ext_min, m.box() / 2.0));
        if (bt.a == x && assigned(bt.c) && assigned(bt.b))
            return m.extend(val.points.at(bt.c), val.points.at(bt.b),
                            rng.range(ext_min, m.box() / 2.0));
    }
    // Perpendicular bisector.
    {
        pt p, q;
        if (bisector_target(facts, val, x, p, q)) return m.equidistant(p, q, rng);
    }
    // Sphere: x once in a congruence whose other three points are assigned.
    for (const auto& cg : facts.congs) {
        const std::string* names[4] = {&cg.p, &cg.q, &cg.u, &cg.v};
        int where = -1;
        int count = 0;
        for (int i = 0; i < 4; ++i)
            if (*names[i] == x) {
                where = i;
                ++count;
            }
        if (count != 1) continue;
        int partner = where ^ 1;           // other end of x's pair
        int r1 = (where < 2) ? 2 : 0;      // the pair giving the radius
        if (!assigned(*names[partner]) || !assigned(*names[r1]) || !assigned(*names[r1 + 1]))
            continue;
        double radius = m.distance(val.points.at(*names[r1]), val.points.at(*names[r1 + 1]));
        return m.ray_point(val.points.at(*names[partner]), m.sample(rng), radius);
    }
    return m.sample(rng);
}

double sample_num_var(const model& m, rng_stream& rng, const hyp_facts& facts,
                      const std::string& x) {
    if (facts.nonneg.count(x)) return rng.range(0.0, m.box());
    return rng.range(-m.box(), m.box());
}

void dump_valuation(const valuation& val, failure_record& rec) {
    for (const auto& [name, p] : val.points) rec.points[name] = p;
    for (const auto& [name, v] : val.numbers) rec.numbers[name] = v;
}

}  // namespace

// ---------------------------------------------------------------------------
// similar-triangle counterexample search

d5_search_result search_d5_counterexample(const model& m, std::uint64_t seed, long max_tries,
                                          double min_gap) {
    d5_search_result res;
    rng_stream rng(models::mix_seed(seed, models::name_salt("d5-search/" + m.name())));
    for (long i = 0; i < max_tries; ++i) {
        res.tries = i + 1;
        pt a = m.sample(rng), b = m.sample(rng), c = m.sample(rng);
        double ab = m.distance(a, b), ac = m.distance(a, c), bc = m.distance(b, c);
        if (ab < 0.1 || ac < 0.1 || bc < 0.1) continue;
        double straightness = std::min({std::fabs(ac - ab - bc), std::fabs(ab - ac - bc),
                                        std::fabs(bc - ab - ac)});
        if (straightness < 0.05) continue;  // nearly collinear, gap would be noise
        pt bp = m.midpoint(a, b);
        pt cp = m.midpoint(a, c);
        double gap = std::fabs(m.distance(bp, cp) - bc / 2.0);
        if (gap > min_gap) {
            res.found = true;
            res.gap = gap;
            res.a = a;
            res.b = b;
            res.c = c;
            res.bp = bp;
            res.cp = cp;
            return res;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// the run loop

namespace {

// Assigns every prefix variable for one sample or probe, in prefix order.
// `directed` supplies deterministic values (probe recipes); when it is null
// the universals come from the custom sampler prefill or the patterns.
void assign_prefix(const model& m, const std::vector<prefix_entry>& prefix,
                   const hyp_facts& facts, const check_task& task, const probe* directed,
                   rng_stream* rng, valuation& val) {
    for (const auto& e : prefix) {
        if (e.s == sort::point) {
            if (val.points.count(e.name)) continue;  // prefilled by the sampler
            const point_recipe_ptr* rp = nullptr;
            if (directed) {
                auto it = directed->points.find(e.name);
                if (it != directed->points.end()) rp = &it->second;
                else if (e.universal)
                    throw recipe_error("probe leaves universal " + e.name + " unset");
            }
            if (!rp && !e.universal) {
                auto it = task.script.points.find(e.name);
                if (it == task.script.points.end())
                    throw recipe_error("no witness recipe for " + e.name);
                rp = &it->second;
            }
            if (rp) {
                val.points[e.name] = eval_point_recipe(m, val, *rp);
            } else {
                val.points[e.name] = sample_point_var(m, *rng, facts, val, e.name);
            }
        } else {
            if (val.numbers.count(e.name)) continue;
            const num_recipe_ptr* rc = nullptr;
            if (directed) {
                auto it = directed->numbers.find(e.name);
                if (it != directed->numbers.end()) rc = &it->second;
                else if (e.universal)
                    throw recipe_error("probe leaves universal " + e.name + " unset");
            }
            if (!rc && !e.universal) {
                auto it = task.script.numbers.find(e.name);
                if (it == task.script.numbers.end())
                    throw recipe_error("no witness recipe for " + e.name);
                rc = &it->second;
            }
            if (rc) {
                val.numbers[e.name] = eval_num_recipe(m, val, *rc);
            } else {
                val.numbers[e.name] = sample_num_var(m, *rng, facts, e.name);
            }
        }
    }
}

void finish(check_report& rep) {
    bool falsified = rep.falsified > 0;
    if (rep.mode == task_mode::d5_search) {
        rep.result = rep.search.found ? outcome::refuted : outcome::fail;
    } else if (rep.expect == expectation::refuted) {
        rep.result = falsified ? outcome::refuted : outcome::fail;
    } else {
        rep.result = falsified ? outcome::fail : outcome::pass;
    }
    rep.ok = (rep.result == outcome::pass && rep.expect == expectation::pass) ||
             (rep.result == outcome::refuted && rep.expect == expectation::refuted) ||
             (rep.result == outcome::unsupported && rep.expect == expectation::unsupported);
}

}  // namespace

check_report run_check(const formula_ptr& sentence, const check_task& task,
                       const run_config& cfg) {
    check_report rep;
    rep.item = task.item;
    rep.model_name = task.model_name;
    rep.mode = task.mode;
    rep.expect = task.expect;

    auto unsupported = [&](const std::string& why) {
        rep.result = outcome::unsupported;
        rep.detail = why;
        rep.ok = (task.expect == expectation::unsupported);
        return rep;
    };

    if (task.mode == task_mode::declared_unsupported)
        return unsupported(task.note.empty() ? "no checking procedure registered" : task.note);

    auto m = models::make_model(task.model_name, cfg.box);

    if (task.mode == task_mode::d5_search) {
        rep.search = search_d5_counterexample(*m, cfg.seed, task.search_limit,
                                              task.search_min_gap);
        finish(rep);
        return rep;
    }

    std::vector<prefix_entry> prefix;
    formula_ptr matrix;
    split_prefix(prenex(sentence), prefix, matrix);

    for (const auto& e : prefix) {
        if (e.universal) continue;
        bool have = (e.s == sort::point) ? task.script.points.count(e.name) != 0
                                         : task.script.numbers.count(e.name) != 0;
        if (!have) return unsupported("no witness recipe for " + e.name);
    }

    hyp_facts facts;
    collect_hypotheses(matrix, facts);

    models::eval_options opts{cfg.tol, cfg.angle_tol};
    const std::uint64_t key =
        cfg.seed ^ models::name_salt(task.item + "/" + task.model_name);

    auto run_one = [&](const probe* directed, rng_stream* rng, const std::string& kind,
                       long index, const std::string& label) {
        valuation val;
        std::string problem;
        bool value = false;
        try {
            if (!directed && task.sampler) task.sampler(*m, *rng, val);
            assign_prefix(*m, prefix, facts, task, directed, rng, val);
            value = models::eval_qf(*m, opts, val, matrix);
        } catch (const models::unsupported_atom&) {
            throw;  // the whole task is unsupported, handled by the caller
        } catch (const error& e) {
            problem = e.what();
        }
        if (value && problem.empty()) return;
        ++rep.falsified;
        if (static_cast<int>(rep.failures.size()) >= cfg.max_failures) return;
        failure_record rec;
        rec.kind = kind;
        rec.index = index;
        rec.label = label;
        rec.detail = problem;
        dump_valuation(val, rec);
        if (problem.empty()) {
            models::atom_trace trace;
            models::eval_qf(*m, opts, val, matrix, &trace);
            rec.atoms = std::move(trace.atoms);
        }
        rep.failures.push_back(std::move(rec));
    };

    try {
        for (const auto& pr : task.probes) {
            ++rep.probes_run;
            run_one(&pr, nullptr, "probe", -1, pr.label);
        }
        for (long i = 0; i < cfg.samples; ++i) {
            // One stream per sample: sample i is a pure function of
            // (item, model, seed, i), independent of every other sample.
            rng_stream rng(models::mix_seed(key, static_cast<std::uint64_t>(i)));
            ++rep.samples_run;
            run_one(nullptr, &rng, "sample", i, "");
        }
    } catch (const models::unsupported_atom& e) {
        return unsupported(e.what());
    }

    finish(rep);
    return rep;
}

// ---------------------------------------------------------------------------
// names and report serialization

std::string to_string(task_mode m) {
    switch (m) {
        case task_mode::sample: return "sample";
        case task_mode::d5_search: return "d5-search";
        case task_mode::declared_unsupported: return "unsupported";
    }
    return "?";
}

std::string to_string(expectation e) {
    switch (e) {
        case expectation::pass: return "pass";
        case expectation::refuted: return "refuted";
        case expectation::unsupported: return "unsupported";
    }
    return "?";
}

std::string to_string(outcome o) {
    switch (o) {
        case outcome::pass: return "pass";
        case outcome::refuted: return "refuted";
        case outcome::fail: return "fail";
        case outcome::unsupported: return "unsupported";
    }
    return "?";
}

nlohmann::ordered_json to_json(const check_report& rep) {
    nlohmann::ordered_json j;
    j["item"] = rep.item;
    j["model"] = rep.model_name;
    j["mode"] = to_string(rep.mode);
    j["expect"] = to_string(rep.expect);
    j["outcome"] = to_string(rep.result);
    j["ok"] = rep.ok;
    j["probes_run"] = rep.probes_run;
    j["samples_run"] = rep.samples_run;
    j["falsified"] = rep.falsified;
    if (!rep.detail.empty()) j["detail"] = rep.detail;
    if (rep.mode == task_mode::d5_search) {
        nlohmann::ordered_json s;
        s["found"] = rep.search.found;
        s["tries"] = rep.search.tries;
        s["gap"] = rep.search.gap;
        if (rep.search.found) {
            s["a"] = rep.search.a;
            s["b"] = rep.search.b;
            s["c"] = rep.search.c;
            s["b1"] = rep.search.bp;
            s["c1"] = rep.search.cp;
        }
        j["search"] = std::move(s);
    }
    auto fails = nlohmann::ordered_json::array();
    for (const auto& f : rep.failures) {
        nlohmann::ordered_json fj;
        fj["kind"] = f.kind;
        if (f.kind == "probe") fj["label"] = f.label;
        else fj["sample"] = f.index;
        if (!f.detail.empty()) fj["detail"] = f.detail;
        fj["points"] = f.points;
        fj["numbers"] = f.numbers;
        auto atoms = nlohmann::ordered_json::array();
        for (const auto& [text, v] : f.atoms) atoms.push_back({{"atom", text}, {"value", v}});
        fj["atoms"] = std::move(atoms);
        fails.push_back(std::move(fj));
    }
    j["failures"] = std::move(fails);
    return j;
}

}  // namespace geo::check
