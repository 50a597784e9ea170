#include "geoform/defs.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace geo::defs {

namespace {

term_ptr p(const char* n) { return pvar(n); }

// Bet(a,t,b) | Bet(a,b,t): t lies on the ray from a through b (or b on the
// ray through t); shorthand used by several bodies below.
formula_ptr on_ray(const char* v, const char* x, const char* anchor) {
    return f_or(datom("Bet", {p(v), p(x), p(anchor)}), datom("Bet", {p(v), p(anchor), p(x)}));
}

definition make_shared_body(std::string name, std::vector<std::string> params, formula_ptr body,
                            bool e2, bool ed, bool eda) {
    definition d;
    d.name = std::move(name);
    d.params = std::move(params);
    d.body_ed = body;
    d.body_e2 = std::move(body);
    d.in_e2 = e2;
    d.in_ed = ed;
    d.in_eda = eda;
    return d;
}

}  // namespace

registry::registry() {
    // Bet(a,b,c): b lies between a and c (endpoints included).
    {
        definition d;
        d.name = "Bet";
        d.params = {"a", "b", "c"};
        d.body_ed = eq_num(dist(p("a"), p("c")),
                           geo::add(dist(p("a"), p("b")), dist(p("b"), p("c"))));
        d.body_e2 = tarski_b(p("a"), p("b"), p("c"));
        d.in_e2 = d.in_ed = d.in_eda = true;
        add(std::move(d));
    }
    // CongSeg(p,q,u,v): segment pq is congruent to uv.
    {
        definition d;
        d.name = "CongSeg";
        d.params = {"p", "q", "u", "v"};
        d.body_ed = eq_num(dist(p("p"), p("q")), dist(p("u"), p("v")));
        d.body_e2 = tarski_d(p("p"), p("q"), p("u"), p("v"));
        d.in_e2 = d.in_ed = d.in_eda = true;
        add(std::move(d));
    }
    // Coll(a,b,c): the three points are collinear.
    add(make_shared_body("Coll", {"a", "b", "c"},
                         disj({datom("Bet", {p("a"), p("b"), p("c")}),
                               datom("Bet", {p("b"), p("c"), p("a")}),
                               datom("Bet", {p("c"), p("a"), p("b")})}),
                         true, true, true));
    // CongT: triangle congruence, side-side-side.
    add(make_shared_body("CongT", {"a", "b", "c", "a1", "b1", "c1"},
                         conj({datom("CongSeg", {p("a"), p("b"), p("a1"), p("b1")}),
                               datom("CongSeg", {p("b"), p("c"), p("b1"), p("c1")}),
                               datom("CongSeg", {p("c"), p("a"), p("c1"), p("a1")})}),
                         true, true, true));
    // SimT: triangle similarity via a nonzero scale factor (needs numbers, so
    // no E2 home).
    add(make_shared_body(
        "SimT", {"a", "b", "c", "a1", "b1", "c1"},
        exists("k", sort::number,
               conj({neq(nvar("k"), num0()),
                     eq_num(dist(p("a"), p("b")), mul(nvar("k"), dist(p("a1"), p("b1")))),
                     eq_num(dist(p("b"), p("c")), mul(nvar("k"), dist(p("b1"), p("c1")))),
                     eq_num(dist(p("c"), p("a")), mul(nvar("k"), dist(p("c1"), p("a1"))))})),
        false, true, true));
    // CongA: angle pvq is congruent to angle p1v1q1. A congruent copy of
    // triangle pvq is docked onto the rays of the second angle.
    add(make_shared_body(
        "CongA", {"p", "v", "q", "p1", "v1", "q1"},
        exists("p2", sort::point,
               exists("q2", sort::point,
                      conj({datom("CongT",
                                  {p("p2"), p("v1"), p("q2"), p("p"), p("v"), p("q")}),
                            on_ray("v1", "p2", "p1"), on_ray("v1", "q2", "q1")}))),
        true, true, true));
    // AddA(p,v,t,q): ray vt lies in the angle pvq, splitting it into the two
    // angles pvt and tvq. First disjunct: t sits on a segment joining the two
    // rays. Second disjunct: the straight-angle case, where every ray from v
    // splits the angle.
    add(make_shared_body(
        "AddA", {"p", "v", "t", "q"},
        f_or(f_and(f_not(datom("Bet", {p("p"), p("v"), p("q")})),
                   exists("a", sort::point,
                          exists("b", sort::point,
                                 conj({datom("Bet", {p("a"), p("t"), p("b")}),
                                       on_ray("v", "a", "p"), on_ray("v", "b", "q")})))),
             conj({datom("Bet", {p("p"), p("v"), p("q")}), neq(p("p"), p("v")),
                   neq(p("q"), p("v")), neq(p("t"), p("v"))})),
        true, true, true));
    // AddA4: angle u1au2 is the sum of angles p1bp2 and q1cq2, realized by
    // congruent copies sharing a vertex.
    add(make_shared_body(
        "AddA4", {"u1", "a", "u2", "p1", "b", "p2", "q1", "c", "q2"},
        exists("p", sort::point,
               exists("v", sort::point,
                      exists("t", sort::point,
                             exists("q", sort::point,
                                    conj({datom("CongA", {p("p1"), p("b"), p("p2"), p("p"),
                                                          p("v"), p("t")}),
                                          datom("CongA", {p("q1"), p("c"), p("q2"), p("t"),
                                                          p("v"), p("q")}),
                                          datom("CongA", {p("u1"), p("a"), p("u2"), p("p"),
                                                          p("v"), p("q")}),
                                          datom("AddA", {p("p"), p("v"), p("t"), p("q")})}))))),
        true, true, true));
    // LeA: angle p1bp2 is no larger than angle u1au2.
    add(make_shared_body(
        "LeA", {"p1", "b", "p2", "u1", "a", "u2"},
        exists("q1", sort::point,
               exists("c", sort::point,
                      exists("q2", sort::point,
                             datom("AddA4", {p("u1"), p("a"), p("u2"), p("p1"), p("b"), p("p2"),
                                             p("q1"), p("c"), p("q2")})))),
        true, true, true));
    add(make_shared_body("LtA", {"p1", "b", "p2", "u1", "a", "u2"},
                         f_and(datom("LeA", {p("p1"), p("b"), p("p2"), p("u1"), p("a"), p("u2")}),
                               f_not(datom("CongA", {p("p1"), p("b"), p("p2"), p("u1"), p("a"),
                                                     p("u2")}))),
                         true, true, true));
    // Right(a,b,c): the angle at b is right: reflecting a through b leaves
    // its distance to c unchanged.
    add(make_shared_body(
        "Right", {"a", "b", "c"},
        conj({neq(p("a"), p("b")), neq(p("a"), p("c")), neq(p("b"), p("c")),
              exists("a1", sort::point,
                     conj({datom("Bet", {p("a"), p("b"), p("a1")}),
                           datom("CongSeg", {p("b"), p("a"), p("b"), p("a1")}),
                           datom("CongSeg", {p("c"), p("a"), p("c"), p("a1")})}))}),
        true, true, true));
    // Par(p,q,u,v): distinct lines pq and uv share no point.
    add(make_shared_body(
        "Par", {"p", "q", "u", "v"},
        conj({neq(p("p"), p("q")), neq(p("u"), p("v")),
              f_not(exists("t", sort::point, f_and(datom("Coll", {p("t"), p("p"), p("q")}),
                                                   datom("Coll", {p("t"), p("u"), p("v")}))))}),
        true, true, true));
    // ParL: parallel or the same line. The projection steps of the arithmetic
    // schemas need this weakening so that their edge configurations (for
    // instance multiplying by the unit) stay satisfiable.
    add(make_shared_body(
        "ParL", {"p", "q", "u", "v"},
        conj({neq(p("p"), p("q")), neq(p("u"), p("v")),
              f_or(datom("Par", {p("p"), p("q"), p("u"), p("v")}),
                   f_and(datom("Coll", {p("u"), p("v"), p("p")}),
                         datom("Coll", {p("u"), p("v"), p("q")})))}),
        true, true, true));
    // NN(o,e,z): z lies on the closed ray from o through e, i.e. the
    // nonnegative half of the o-e number line.
    add(make_shared_body("NN", {"o", "e", "z"},
                         f_or(datom("Bet", {p("o"), p("z"), p("e")}),
                              datom("Bet", {p("o"), p("e"), p("z")})),
                         true, true, true));
    // GSum(o,e,ep,a,b,c): with (o,e,ep) a coordinate frame (o origin, e unit
    // on the number line, ep off the line), points a,b,c on line oe satisfy
    // c = a + b. The main clause is the parallel-projection construction:
    // project a through direction e-ep onto line o-ep, translate b along that
    // direction, and come back. Degenerate summands are split off so the
    // parallelism constraints stay nondegenerate.
    add(make_shared_body(
        "GSum", {"o", "e", "ep", "a", "b", "c"},
        disj({conj({eq_point(p("a"), p("o")), eq_point(p("c"), p("b")),
                    datom("Coll", {p("o"), p("e"), p("b")})}),
              conj({eq_point(p("b"), p("o")), eq_point(p("c"), p("a")),
                    datom("Coll", {p("o"), p("e"), p("a")})}),
              conj({neq(p("a"), p("o")), neq(p("b"), p("o")),
                    datom("Coll", {p("o"), p("e"), p("a")}),
                    datom("Coll", {p("o"), p("e"), p("b")}),
                    datom("Coll", {p("o"), p("e"), p("c")}),
                    exists("b1", sort::point,
                           exists("c1", sort::point,
                                  conj({datom("Coll", {p("o"), p("ep"), p("b1")}),
                                        datom("ParL", {p("a"), p("b1"), p("e"), p("ep")}),
                                        datom("ParL", {p("b1"), p("c1"), p("o"), p("e")}),
                                        datom("ParL", {p("b"), p("c1"), p("o"), p("ep")}),
                                        datom("ParL", {p("c1"), p("c"), p("a"), p("b1")})})))})}),
        true, false, false));
    // GProd(o,e,ep,a,b,c): same frame, c = a * b with e as the unit. Project
    // b onto line o-ep through direction e-ep, then back through the
    // direction a-ep.
    add(make_shared_body(
        "GProd", {"o", "e", "ep", "a", "b", "c"},
        disj({conj({eq_point(p("b"), p("o")), eq_point(p("c"), p("o")),
                    datom("Coll", {p("o"), p("e"), p("a")})}),
              conj({neq(p("b"), p("o")), datom("Coll", {p("o"), p("e"), p("a")}),
                    datom("Coll", {p("o"), p("e"), p("b")}),
                    datom("Coll", {p("o"), p("e"), p("c")}),
                    exists("b1", sort::point,
                           conj({datom("Coll", {p("o"), p("ep"), p("b1")}),
                                 datom("ParL", {p("b"), p("b1"), p("e"), p("ep")}),
                                 datom("ParL", {p("b1"), p("c"), p("a"), p("ep")})}))})}),
        true, false, false));

    check_acyclic();
}

void registry::add(definition d) {
    // a body must be closed except for the declared parameters
    for (const formula_ptr& body : {d.body_ed, d.body_e2}) {
        for (const auto& v : free_vars(body)) {
            if (std::find(d.params.begin(), d.params.end(), v.name) == d.params.end() ||
                v.s != sort::point)
                throw error("definition " + d.name + ": body has stray free variable " + v.name);
        }
    }
    defs_.push_back(std::move(d));
}

namespace {

void collect_atom_names(const formula_ptr& f, std::set<std::string>& out) {
    if (f->kind == formula_kind::defined) out.insert(f->name);
    for (const auto& s : f->subs) collect_atom_names(s, out);
}

}  // namespace

void registry::check_acyclic() const {
    std::map<std::string, std::set<std::string>> edges;
    for (const auto& d : defs_) {
        std::set<std::string> used;
        collect_atom_names(d.body_ed, used);
        collect_atom_names(d.body_e2, used);
        edges[d.name] = std::move(used);
    }
    // DFS with colors; any back edge is a definitional cycle
    std::map<std::string, int> color;
    std::vector<std::pair<std::string, bool>> stack;
    for (const auto& [name, _] : edges) {
        if (color[name]) continue;
        stack.push_back({name, false});
        while (!stack.empty()) {
            auto [n, done] = stack.back();
            stack.pop_back();
            if (done) {
                color[n] = 2;
                continue;
            }
            if (color[n] == 2) continue;
            if (color[n] == 1) continue;
            color[n] = 1;
            stack.push_back({n, true});
            for (const auto& m : edges[n]) {
                if (!edges.count(m)) throw unknown_definition("definition " + n + " uses unregistered " + m);
                if (color[m] == 1) throw cyclic_definition("definitional cycle through " + m);
                if (color[m] == 0) stack.push_back({m, false});
            }
        }
    }
}

const registry& registry::instance() {
    static registry r;
    return r;
}

const definition* registry::find(const std::string& name) const {
    for (const auto& d : defs_)
        if (d.name == name) return &d;
    return nullptr;
}

bool registry::known(const std::string& name) const { return find(name) != nullptr; }

std::size_t registry::arity(const std::string& name) const {
    const definition* d = find(name);
    if (!d) throw unknown_definition("unknown defined atom " + name);
    return d->params.size();
}

bool registry::available_in(const std::string& name, language lang) const {
    const definition* d = find(name);
    if (!d) throw unknown_definition("unknown defined atom " + name);
    return d->available_in(lang);
}

formula_ptr instantiate(const definition& d, language lang, const std::vector<term_ptr>& args) {
    if (args.size() != d.params.size())
        throw error(d.name + " expects " + std::to_string(d.params.size()) + " arguments");
    formula_ptr body = d.body_for(lang);
    if (!body || !d.available_in(lang))
        throw language_mismatch(d.name + " is not available in " + language_name(lang));
    // Rename parameters to throwaway names first so that arguments that
    // happen to reuse parameter names cannot be re-substituted.
    std::vector<std::string> used;
    for (const auto& v : free_vars(body)) used.push_back(v.name);
    for (const auto& a : args)
        for (const auto& v : free_vars(a)) used.push_back(v.name);
    std::vector<std::string> tmp_names;
    for (std::size_t i = 0; i < d.params.size(); ++i) {
        std::string t = fresh_name("gfp" + std::to_string(i), used);
        used.push_back(t);
        tmp_names.push_back(t);
        body = substitute(body, {d.params[i], sort::point}, pvar(t));
    }
    for (std::size_t i = 0; i < d.params.size(); ++i)
        body = substitute(body, {tmp_names[i], sort::point}, args[i]);
    return body;
}

namespace {

formula_ptr expand_once(const formula_ptr& f, language lang, bool* changed) {
    if (f->kind == formula_kind::defined) {
        const definition* d = registry::instance().find(f->name);
        if (!d) throw unknown_definition("unknown defined atom " + f->name);
        *changed = true;
        return instantiate(*d, lang, f->terms);
    }
    if (f->subs.empty()) return f;
    std::vector<formula_ptr> subs;
    subs.reserve(f->subs.size());
    bool any = false;
    for (const auto& s : f->subs) {
        auto ns = expand_once(s, lang, &any);
        subs.push_back(std::move(ns));
    }
    if (!any) return f;
    *changed = true;
    auto g = std::make_shared<formula>();
    g->kind = f->kind;
    g->name = f->name;
    g->var_sort = f->var_sort;
    g->terms = f->terms;
    g->subs = std::move(subs);
    return g;
}

}  // namespace

formula_ptr expand(const formula_ptr& f, language lang, expand_depth depth) {
    bool changed = false;
    formula_ptr cur = expand_once(f, lang, &changed);
    if (depth == expand_depth::one) return cur;
    int rounds = 0;
    while (changed) {
        if (++rounds > 64) throw cyclic_definition("expansion did not terminate");
        changed = false;
        cur = expand_once(cur, lang, &changed);
    }
    return cur;
}

std::size_t expanded_size(const formula_ptr& f, language lang) {
    return node_count(expand(f, lang, expand_depth::full));
}

}  // namespace geo::defs
