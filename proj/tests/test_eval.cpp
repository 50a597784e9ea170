#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "geoform/ast.hpp"
#include "geoform/defs.hpp"
#include "geoform/eval.hpp"
#include "geoform/model.hpp"

#include <cmath>

using namespace geo;
using namespace geo::models;

namespace {

constexpr double kPi = 3.14159265358979323846;

const eval_options kOpt{};  // 1e-9 distances, 1e-6 degrees

pt dir(double deg, double len = 1.0) {
    return {len * std::cos(deg * kPi / 180.0), len * std::sin(deg * kPi / 180.0)};
}

pt shift(const pt& base, const pt& off) { return vadd(base, off); }

formula_ptr at(const char* name, std::initializer_list<const char*> args) {
    std::vector<term_ptr> ts;
    for (const auto* a : args) ts.push_back(pvar(a));
    return datom(name, std::move(ts));
}

}  // namespace

TEST_CASE("eval_num covers the full term grammar") {
    auto m = make_model("cartesian2");
    valuation v;
    v.points["p"] = {0.0, 0.0};
    v.points["q"] = {3.0, 4.0};
    v.numbers["x"] = 2.5;
    CHECK(eval_num(*m, v, num0()) == 0.0);
    CHECK(eval_num(*m, v, num1()) == 1.0);
    CHECK(eval_num(*m, v, int_literal(7)) == 7.0);
    CHECK(eval_num(*m, v, nvar("x")) == 2.5);
    CHECK(eval_num(*m, v, dist(pvar("p"), pvar("q"))) == doctest::Approx(5.0));
    auto t = add(mul(nvar("x"), int_literal(2)), neg(num1()));
    CHECK(eval_num(*m, v, t) == doctest::Approx(4.0));
    CHECK_THROWS_AS(eval_num(*m, v, nvar("missing")), unbound_variable);
    CHECK_THROWS_AS(eval_point(v, dist(pvar("p"), pvar("q"))), error);
    CHECK_THROWS_AS((void)eval_point(v, pvar("missing")), unbound_variable);
}

TEST_CASE("mentions_angle sees through arithmetic") {
    CHECK_FALSE(mentions_angle(dist(pvar("p"), pvar("q"))));
    CHECK(mentions_angle(angle(pvar("p"), pvar("v"), pvar("q"))));
    CHECK(mentions_angle(add(num1(), mul(num1(), angle(pvar("p"), pvar("v"), pvar("q"))))));
}

TEST_CASE("number comparisons pick the tolerance by angle content") {
    auto m = make_model("cartesian2");
    valuation v;
    v.points["p"] = {1.0, 0.0};
    v.points["v"] = {0.0, 0.0};
    v.points["q"] = {0.0, 1.0};  // right angle, distance 1 legs
    auto ang_term = angle(pvar("p"), pvar("v"), pvar("q"));
    auto dist_term = dist(pvar("p"), pvar("v"));

    // 1e-8 off: inside the degree tolerance, outside the distance one
    v.numbers["x"] = 90.0 + 1e-8;
    CHECK(eval_qf(*m, kOpt, v, eq_num(ang_term, nvar("x"))));
    v.numbers["x"] = 90.0 + 1e-5;
    CHECK_FALSE(eval_qf(*m, kOpt, v, eq_num(ang_term, nvar("x"))));
    v.numbers["x"] = 1.0 + 1e-8;
    CHECK_FALSE(eval_qf(*m, kOpt, v, eq_num(dist_term, nvar("x"))));
    v.numbers["x"] = 1.0 + 1e-10;
    CHECK(eval_qf(*m, kOpt, v, eq_num(dist_term, nvar("x"))));

    // strict less is lenient on ties so boundary witnesses hold
    v.numbers["x"] = 1.0;
    CHECK(eval_qf(*m, kOpt, v, less(dist_term, nvar("x"))));
    CHECK_FALSE(eval_qf(*m, kOpt, v, less(nvar("x"), dist(pvar("p"), pvar("p")))));
}

TEST_CASE("point equality is distance-based") {
    auto m = make_model("cartesian2");
    valuation v;
    v.points["p"] = {0.0, 0.0};
    v.points["q"] = {1e-12, 0.0};
    v.points["r"] = {1e-6, 0.0};
    CHECK(eval_qf(*m, kOpt, v, eq_point(pvar("p"), pvar("q"))));
    CHECK_FALSE(eval_qf(*m, kOpt, v, eq_point(pvar("p"), pvar("r"))));
}

TEST_CASE("quantifier-free expansions agree with the atom criteria") {
    auto m = make_model("cartesian2");
    rng_stream rng(500);
    const char* atoms[] = {"Bet(a,b,c)", "CongSeg(a,b,c,e)", "Coll(a,b,c)"};
    (void)atoms;
    int bet_hits = 0;
    for (int i = 0; i < 500; ++i) {
        valuation v;
        for (const char* n : {"a", "b", "c", "e", "a1", "b1", "c1"}) v.points[n] = m->sample(rng);
        // half the time plant b on the segment a-c so Bet/Coll go true
        if (rng.coin()) v.points["b"] = m->geo_lerp(v.points["a"], v.points["c"], rng.unit());
        // and sometimes make the primed triangle a rigid copy
        if (rng.coin()) {
            auto copy = m->rigid_copy({v.points["a"], v.points["b"], v.points["c"]}, rng);
            v.points["a1"] = copy[0];
            v.points["b1"] = copy[1];
            v.points["c1"] = copy[2];
        }
        for (const char* spec : {"Bet", "CongSeg", "Coll", "CongT"}) {
            formula_ptr f = spec == std::string("Bet")   ? at("Bet", {"a", "b", "c"})
                            : spec == std::string("CongSeg") ? at("CongSeg", {"a", "b", "c", "e"})
                            : spec == std::string("Coll") ? at("Coll", {"a", "b", "c"})
                                : at("CongT", {"a", "b", "c", "a1", "b1", "c1"});
            auto expanded = defs::expand(f, language::ed, defs::expand_depth::full);
            CAPTURE(spec);
            bool direct = eval_qf(*m, kOpt, v, f);
            CHECK(direct == eval_qf(*m, kOpt, v, expanded));
            if (spec == std::string("Bet") && direct) ++bet_hits;
        }
    }
    CHECK(bet_hits > 100);  // the designed half really exercised the true case
}

TEST_CASE("angle congruence docks one angle onto the other") {
    auto m = make_model("cartesian2");
    valuation v;
    v.points["v"] = {0.0, 0.0};
    v.points["p"] = dir(0.0, 2.0);
    v.points["q"] = dir(40.0, 0.5);
    v.points["v1"] = {3.0, -1.0};
    v.points["p1"] = shift(v.points["v1"], dir(77.0, 1.3));
    SUBCASE("equal measure, any ray lengths and any orientation") {
        v.points["q1"] = shift(v.points["v1"], dir(77.0 + 40.0, 0.25));
        CHECK(eval_qf(*m, kOpt, v, at("CongA", {"p", "v", "q", "p1", "v1", "q1"})));
        v.points["q1"] = shift(v.points["v1"], dir(77.0 - 40.0, 4.0));  // mirrored
        CHECK(eval_qf(*m, kOpt, v, at("CongA", {"p", "v", "q", "p1", "v1", "q1"})));
    }
    SUBCASE("different measure") {
        v.points["q1"] = shift(v.points["v1"], dir(77.0 + 50.0, 0.5));
        CHECK_FALSE(eval_qf(*m, kOpt, v, at("CongA", {"p", "v", "q", "p1", "v1", "q1"})));
    }
    SUBCASE("a collapsed ray satisfies the docking outright") {
        v.points["q1"] = v.points["v1"];
        CHECK(eval_qf(*m, kOpt, v, at("CongA", {"p", "v", "q", "p1", "v1", "q1"})));
        v.points["p"] = v.points["v"];
        v.points["q1"] = shift(v.points["v1"], dir(0.0, 1.0));
        CHECK(eval_qf(*m, kOpt, v, at("CongA", {"p", "v", "q", "p1", "v1", "q1"})));
    }
}

TEST_CASE("angle splitting accepts exactly the rays inside the sector") {
    auto m = make_model("cartesian2");
    valuation v;
    v.points["v"] = {0.0, 0.0};
    v.points["p"] = dir(0.0, 1.5);
    v.points["q"] = dir(80.0, 0.7);
    auto f = at("AddA", {"p", "v", "t", "q"});
    v.points["t"] = dir(30.0, 3.0);
    CHECK(eval_qf(*m, kOpt, v, f));
    v.points["t"] = dir(0.0, 0.4);  // boundary ray counts
    CHECK(eval_qf(*m, kOpt, v, f));
    v.points["t"] = dir(-10.0, 1.0);
    CHECK_FALSE(eval_qf(*m, kOpt, v, f));
    v.points["t"] = dir(100.0, 1.0);
    CHECK_FALSE(eval_qf(*m, kOpt, v, f));
    // t at the vertex: fine unless the angle is straight
    v.points["t"] = v.points["v"];
    CHECK(eval_qf(*m, kOpt, v, f));
    v.points["q"] = dir(180.0, 2.0);
    CHECK_FALSE(eval_qf(*m, kOpt, v, f));
    // on a straight angle every ray from the vertex splits it
    v.points["t"] = {5.0, 7.0};
    CHECK(eval_qf(*m, kOpt, v, f));
}

TEST_CASE("right angles are detected via the reflected point") {
    auto m = make_model("cartesian2");
    valuation v;
    v.points["b"] = {0.0, 0.0};
    v.points["a"] = {1.0, 0.0};
    v.points["c"] = {0.0, 2.0};
    CHECK(eval_qf(*m, kOpt, v, at("Right", {"a", "b", "c"})));
    v.points["c"] = {0.1, 2.0};
    CHECK_FALSE(eval_qf(*m, kOpt, v, at("Right", {"a", "b", "c"})));
    v.points["a"] = v.points["b"];  // degenerate arms are not right angles
    v.points["c"] = {0.0, 2.0};
    CHECK_FALSE(eval_qf(*m, kOpt, v, at("Right", {"a", "b", "c"})));
    // a genuinely perpendicular construction
    rng_stream rng(9);
    for (int i = 0; i < 50; ++i) {
        pt x = m->sample(rng), y = m->sample(rng);
        if (m->distance(x, y) < 0.1) continue;
        valuation w;
        w.points["a"] = y;
        w.points["b"] = x;
        w.points["c"] = m->perp_point(x, y, 1.7, rng.coin());
        CHECK(eval_qf(*m, kOpt, w, at("Right", {"a", "b", "c"})));
    }
}

TEST_CASE("parallelism distinguishes disjoint, coincident and crossing lines") {
    auto m = make_model("cartesian2");
    valuation v;
    v.points["p"] = {0.0, 0.0};
    v.points["q"] = {1.0, 0.0};
    v.points["u"] = {0.0, 1.0};
    v.points["w"] = {2.0, 1.0};
    CHECK(eval_qf(*m, kOpt, v, at("Par", {"p", "q", "u", "w"})));
    CHECK(eval_qf(*m, kOpt, v, at("ParL", {"p", "q", "u", "w"})));
    v.points["w"] = {1.0, -1.0};  // crosses
    CHECK_FALSE(eval_qf(*m, kOpt, v, at("Par", {"p", "q", "u", "w"})));
    CHECK_FALSE(eval_qf(*m, kOpt, v, at("ParL", {"p", "q", "u", "w"})));
    v.points["u"] = {2.0, 0.0};  // same line
    v.points["w"] = {5.0, 0.0};
    CHECK_FALSE(eval_qf(*m, kOpt, v, at("Par", {"p", "q", "u", "w"})));
    CHECK(eval_qf(*m, kOpt, v, at("ParL", {"p", "q", "u", "w"})));
    v.points["u"] = v.points["w"];  // degenerate second segment
    CHECK_FALSE(eval_qf(*m, kOpt, v, at("Par", {"p", "q", "u", "w"})));
}

TEST_CASE("skew lines in three dimensions are parallel in the no-meet sense") {
    auto m = make_model("cartesian3");
    valuation v;
    v.points["p"] = {0.0, 0.0, 0.0};
    v.points["q"] = {1.0, 0.0, 0.0};
    v.points["u"] = {0.0, 0.0, 1.0};
    v.points["w"] = {0.0, 1.0, 1.0};
    CHECK(eval_qf(*m, kOpt, v, at("Par", {"p", "q", "u", "w"})));
    CHECK_FALSE(eval_qf(*m, kOpt, v, at("ParL", {"p", "q", "u", "w"})));
}

TEST_CASE("line arithmetic atoms have no curved-space reading") {
    auto m = make_model("disk");
    valuation v;
    v.points["p"] = {0.0, 0.0};
    v.points["q"] = {0.5, 0.0};
    v.points["u"] = {0.0, 0.5};
    v.points["w"] = {0.5, 0.5};
    CHECK_THROWS_AS(eval_qf(*m, kOpt, v, at("Par", {"p", "q", "u", "w"})),
                    unsupported_atom);
    valuation g;
    for (const char* n : {"o", "e", "ep", "a", "b", "c"}) g.points[n] = {0.1, 0.1};
    CHECK_THROWS_AS(eval_qf(*m, kOpt, g, at("GSum", {"o", "e", "ep", "a", "b", "c"})),
                    unsupported_atom);
}

TEST_CASE("nonnegativity means lying on the unit-point side") {
    auto m = make_model("cartesian2");
    valuation v;
    v.points["o"] = {0.0, 0.0};
    v.points["e"] = {1.0, 0.0};
    auto f = at("NN", {"o", "e", "z"});
    v.points["z"] = {0.5, 0.0};
    CHECK(eval_qf(*m, kOpt, v, f));
    v.points["z"] = {7.0, 0.0};
    CHECK(eval_qf(*m, kOpt, v, f));
    v.points["z"] = v.points["o"];
    CHECK(eval_qf(*m, kOpt, v, f));
    v.points["z"] = {-0.5, 0.0};
    CHECK_FALSE(eval_qf(*m, kOpt, v, f));
}

TEST_CASE("segment sum and product arithmetic on the frame axis") {
    auto m = make_model("cartesian2");
    valuation v;
    v.points["o"] = {0.0, 0.0};
    v.points["e"] = {1.0, 0.0};
    v.points["ep"] = {0.0, 1.0};
    auto set = [&](const char* n, double x) { v.points[n] = pt{x, 0.0}; };
    auto gsum = at("GSum", {"o", "e", "ep", "a", "b", "c"});
    auto gprod = at("GProd", {"o", "e", "ep", "a", "b", "c"});

    set("a", 2.0), set("b", 3.0), set("c", 5.0);
    CHECK(eval_qf(*m, kOpt, v, gsum));
    set("c", 4.0);
    CHECK_FALSE(eval_qf(*m, kOpt, v, gsum));
    set("a", -2.0), set("b", 3.0), set("c", 1.0);  // signed coordinates
    CHECK(eval_qf(*m, kOpt, v, gsum));
    set("a", 0.0), set("b", 3.0), set("c", 3.0);  // zero summand shortcut
    CHECK(eval_qf(*m, kOpt, v, gsum));

    set("a", 2.0), set("b", 3.0), set("c", 6.0);
    CHECK(eval_qf(*m, kOpt, v, gprod));
    set("c", 5.0);
    CHECK_FALSE(eval_qf(*m, kOpt, v, gprod));
    set("a", -2.0), set("b", 3.0), set("c", -6.0);
    CHECK(eval_qf(*m, kOpt, v, gprod));
    set("a", 4.0), set("b", 0.0), set("c", 0.0);  // zero factor forces zero
    CHECK(eval_qf(*m, kOpt, v, gprod));
    set("c", 1.0);
    CHECK_FALSE(eval_qf(*m, kOpt, v, gprod));

    // off-axis operands refute the geometric branch
    v.points["a"] = {2.0, 0.5};
    set("b", 3.0), set("c", 5.0);
    CHECK_FALSE(eval_qf(*m, kOpt, v, gsum));
    // and a collapsed frame refutes everything nontrivial
    v.points["a"] = {2.0, 0.0};
    v.points["ep"] = {0.5, 0.0};
    CHECK_FALSE(eval_qf(*m, kOpt, v, gsum));
}

TEST_CASE("angle order: le, strict lt and the added-angle form") {
    auto m = make_model("cartesian2");
    valuation v;
    v.points["b"] = {0.0, 0.0};
    v.points["p1"] = dir(0.0);
    v.points["p2"] = dir(30.0);
    v.points["a"] = {4.0, 4.0};
    v.points["u1"] = shift(v.points["a"], dir(10.0));
    v.points["u2"] = shift(v.points["a"], dir(70.0));  // 60 degrees
    CHECK(eval_qf(*m, kOpt, v, at("LeA", {"p1", "b", "p2", "u1", "a", "u2"})));
    CHECK_FALSE(eval_qf(*m, kOpt, v, at("LeA", {"u1", "a", "u2", "p1", "b", "p2"})));
    CHECK(eval_qf(*m, kOpt, v, at("LtA", {"p1", "b", "p2", "u1", "a", "u2"})));
    // equal angles: le yes, lt no
    v.points["p2"] = dir(60.0);
    CHECK(eval_qf(*m, kOpt, v, at("LeA", {"p1", "b", "p2", "u1", "a", "u2"})));
    CHECK_FALSE(eval_qf(*m, kOpt, v, at("LtA", {"p1", "b", "p2", "u1", "a", "u2"})));
    // degenerate comparison arm admits anything
    v.points["p2"] = v.points["b"];
    CHECK(eval_qf(*m, kOpt, v, at("LeA", {"p1", "b", "p2", "u1", "a", "u2"})));

    valuation w;
    w.points["a"] = {0.0, 0.0};
    w.points["u1"] = dir(0.0);
    w.points["u2"] = dir(90.0);
    w.points["b"] = {5.0, 5.0};
    w.points["p1"] = shift(w.points["b"], dir(0.0));
    w.points["p2"] = shift(w.points["b"], dir(30.0));
    w.points["c"] = {-4.0, 2.0};
    w.points["q1"] = shift(w.points["c"], dir(45.0));
    w.points["q2"] = shift(w.points["c"], dir(105.0));  // 30 + 60 = 90
    auto whole_first = at("AddA4", {"u1", "a", "u2", "p1", "b", "p2", "q1", "c", "q2"});
    CHECK(eval_qf(*m, kOpt, w, whole_first));
    w.points["q2"] = shift(w.points["c"], dir(85.0));  // 30 + 40 != 90
    CHECK_FALSE(eval_qf(*m, kOpt, w, whole_first));
}

TEST_CASE("similarity scales all three sides by one factor") {
    auto m = make_model("cartesian2");
    valuation v;
    v.points["a"] = {0.0, 0.0};
    v.points["b"] = {4.0, 0.0};
    v.points["c"] = {1.0, 2.0};
    for (double k : {0.5, 1.0, 3.0}) {
        for (const char* n : {"a", "b", "c"}) {
            pt scaled = vscale(k, v.points[n]);
            v.points[std::string(n) + "1"] = pt{scaled[0] + 2.0, scaled[1] - 1.0};
        }
        CAPTURE(k);
        // note the primed triangle is the *second* group, so the factor is 1/k
        CHECK(eval_qf(*m, kOpt, v, at("SimT", {"a", "b", "c", "a1", "b1", "c1"})));
    }
    v.points["c1"] = {9.0, 9.0};
    CHECK_FALSE(eval_qf(*m, kOpt, v, at("SimT", {"a", "b", "c", "a1", "b1", "c1"})));
    // collapsed primed triangle pairs only with a collapsed one
    for (const char* n : {"a1", "b1", "c1"}) v.points[n] = pt{1.0, 1.0};
    CHECK_FALSE(eval_qf(*m, kOpt, v, at("SimT", {"a", "b", "c", "a1", "b1", "c1"})));
    for (const char* n : {"a", "b", "c"}) v.points[n] = pt{-2.0, 0.5};
    CHECK(eval_qf(*m, kOpt, v, at("SimT", {"a", "b", "c", "a1", "b1", "c1"})));
}

TEST_CASE("traces record evaluated atoms and respect short-circuiting") {
    auto m = make_model("cartesian2");
    valuation v;
    v.points["p"] = {0.0, 0.0};
    v.points["q"] = {1.0, 0.0};
    auto t = eq_point(pvar("p"), pvar("p"));
    auto f = eq_point(pvar("p"), pvar("q"));
    atom_trace trace;
    CHECK_FALSE(eval_qf(*m, kOpt, v, f_and(f, t), &trace));
    REQUIRE(trace.atoms.size() == 1);  // the right side never ran
    CHECK(trace.atoms[0].second == false);
    trace.atoms.clear();
    CHECK(eval_qf(*m, kOpt, v, f_or(t, f), &trace));
    REQUIRE(trace.atoms.size() == 1);
    CHECK(trace.atoms[0].first == "p == p");
    trace.atoms.clear();
    CHECK_FALSE(eval_qf(*m, kOpt, v, iff(t, f), &trace));
    CHECK(trace.atoms.size() == 2);  // iff always evaluates both sides
}

TEST_CASE("quantifiers and unknown atoms are hard errors") {
    auto m = make_model("cartesian2");
    valuation v;
    v.points["p"] = {0.0, 0.0};
    CHECK_THROWS_AS(eval_qf(*m, kOpt, v, forall("p", sort::point, eq_point(pvar("p"), pvar("p")))),
                    error);
    CHECK_THROWS_AS(eval_qf(*m, kOpt, v, datom("Mystery", {pvar("p")})), unknown_definition);
}
