#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "geoform/ast.hpp"
#include "geoform/defs.hpp"
#include "geoform/syntax.hpp"

#include <functional>
#include <set>
#include <string>

using namespace geo;

namespace {

// Parses, expands one step in `lang`, and prints the quantifier-stripped body.
std::string expand_one(const std::string& quantified_atom, language lang) {
    auto r = syntax::parse_sentence(quantified_atom, &defs::registry::instance());
    REQUIRE(r.ok());
    auto e = defs::expand(r.ast, lang, defs::expand_depth::one);
    while (e->kind == formula_kind::f_forall) e = e->subs[0];
    return syntax::print_sentence(e);
}

bool mentions_defined(const formula_ptr& f) {
    if (f->kind == formula_kind::defined) return true;
    for (const auto& s : f->subs)
        if (mentions_defined(s)) return true;
    return false;
}

const std::string all7 = "forall a:P. forall b:P. forall c:P. forall e:P. "
                         "forall a1:P. forall b1:P. forall c1:P. ";

}  // namespace

TEST_CASE("registry knows the sixteen predicates with their arities") {
    const auto& reg = defs::registry::instance();
    struct row {
        const char* name;
        std::size_t arity;
    };
    const row expected[] = {
        {"Bet", 3},  {"CongSeg", 4}, {"Coll", 3}, {"CongT", 6}, {"SimT", 6}, {"CongA", 6},
        {"AddA", 4}, {"AddA4", 9},   {"LeA", 6},  {"LtA", 6},   {"Right", 3}, {"Par", 4},
        {"ParL", 4}, {"NN", 3},      {"GSum", 6}, {"GProd", 6},
    };
    CHECK(reg.all().size() == 16);
    for (const auto& e : expected) {
        CAPTURE(e.name);
        CHECK(reg.known(e.name));
        CHECK(reg.arity(e.name) == e.arity);
    }
    CHECK_FALSE(reg.known("NoSuch"));
}

TEST_CASE("language homes: similarity needs numbers, segment arithmetic needs E2") {
    const auto& reg = defs::registry::instance();
    CHECK(reg.available_in("Bet", language::e2));
    CHECK(reg.available_in("Bet", language::ed));
    CHECK(reg.available_in("Bet", language::eda));
    CHECK_FALSE(reg.available_in("SimT", language::e2));
    CHECK(reg.available_in("SimT", language::ed));
    CHECK(reg.available_in("GSum", language::e2));
    CHECK_FALSE(reg.available_in("GSum", language::ed));
    CHECK_FALSE(reg.available_in("GProd", language::eda));
    CHECK(reg.available_in("Par", language::ed));
}

TEST_CASE("betweenness and congruence expand to their language-specific leaves") {
    CHECK(expand_one(all7 + "Bet(a,b,c)", language::ed) == "d(a,c) = d(a,b) + d(b,c)");
    CHECK(expand_one(all7 + "Bet(a,b,c)", language::e2) == "B(a,b,c)");
    CHECK(expand_one(all7 + "CongSeg(a,b,c,e)", language::ed) == "d(a,b) = d(c,e)");
    CHECK(expand_one(all7 + "CongSeg(a,b,c,e)", language::e2) == "D(a,b,c,e)");
}

TEST_CASE("one-step expansion goldens for the layered predicates") {
    CHECK(expand_one(all7 + "Coll(a,b,c)", language::ed) ==
          "Bet(a,b,c) | Bet(b,c,a) | Bet(c,a,b)");
    CHECK(expand_one(all7 + "CongT(a,b,c,a1,b1,c1)", language::ed) ==
          "CongSeg(a,b,a1,b1) & CongSeg(b,c,b1,c1) & CongSeg(c,a,c1,a1)");
    CHECK(expand_one(all7 + "Right(b,a,c)", language::ed) ==
          "~b == a & ~b == c & ~a == c & "
          "(exists a1:P. Bet(b,a,a1) & CongSeg(a,b,a,a1) & CongSeg(c,b,c,a1))");
    CHECK(expand_one(all7 + "Par(a,b,c,e)", language::e2) ==
          "~a == b & ~c == e & ~(exists t:P. Coll(t,a,b) & Coll(t,c,e))");
}

TEST_CASE("full expansion reaches the primitive fixpoint") {
    const char* atoms[] = {"Coll(a,b,c)", "CongA(a,b,c,a1,b1,c1)", "LtA(a,b,c,a1,b1,c1)",
                           "Right(a,b,c)", "Par(a,b,c,e)"};
    for (language lang : {language::e2, language::ed}) {
        for (const auto* atom : atoms) {
            CAPTURE(atom);
            auto r = syntax::parse_sentence(all7 + atom, &defs::registry::instance());
            REQUIRE(r.ok());
            auto full = defs::expand(r.ast, lang, defs::expand_depth::full);
            CHECK_FALSE(mentions_defined(full));
            CHECK(equal(defs::expand(full, lang, defs::expand_depth::full), full));
            CHECK(well_sorted(full, lang).empty());
        }
    }
    // one step is not enough for nested definitions
    auto r = syntax::parse_sentence(all7 + "Coll(a,b,c)", &defs::registry::instance());
    auto once = defs::expand(r.ast, language::ed, defs::expand_depth::one);
    CHECK(mentions_defined(once));
}

TEST_CASE("expansion in a language without the predicate is rejected") {
    auto r = syntax::parse_sentence(all7 + "SimT(a,b,c,a1,b1,c1)", &defs::registry::instance());
    REQUIRE(r.ok());
    CHECK_THROWS_AS(defs::expand(r.ast, language::e2, defs::expand_depth::full),
                    language_mismatch);
    auto g = syntax::parse_sentence("forall o:P. forall e:P. forall p:P. forall a:P. "
                                    "forall b:P. forall c:P. GSum(o,e,p,a,b,c)",
                                    &defs::registry::instance());
    REQUIRE(g.ok());
    CHECK_THROWS_AS(defs::expand(g.ast, language::ed, defs::expand_depth::full),
                    language_mismatch);
}

TEST_CASE("instantiate avoids capturing arguments that reuse binder names") {
    const auto& reg = defs::registry::instance();
    const auto* conga = reg.find("CongA");
    REQUIRE(conga != nullptr);
    // CongA's body binds p2 and q2; pass p2 as an argument
    std::vector<term_ptr> args = {pvar("p2"), pvar("v"), pvar("q"),
                                  pvar("x"),  pvar("y"), pvar("z")};
    auto inst = defs::instantiate(*conga, language::ed, args);
    auto fv = free_vars(inst);
    bool p2_free = false;
    for (const auto& v : fv) p2_free = p2_free || v.name == "p2";
    CHECK(p2_free);
    // and the binders moved aside
    std::function<void(const formula_ptr&)> walk = [&](const formula_ptr& f) {
        if (f->kind == formula_kind::f_exists || f->kind == formula_kind::f_forall)
            CHECK(f->name != "p2");
        for (const auto& s : f->subs) walk(s);
    };
    walk(inst);
}

TEST_CASE("instantiate checks the argument count") {
    const auto& reg = defs::registry::instance();
    const auto* bet = reg.find("Bet");
    REQUIRE(bet != nullptr);
    CHECK_THROWS_AS(defs::instantiate(*bet, language::ed, {pvar("a"), pvar("b")}), error);
}

TEST_CASE("expanded_size equals the node count of the full expansion") {
    const char* sentences[] = {
        "forall a:P. forall b:P. forall c:P. Coll(a,b,c)",
        "forall a:P. forall b:P. forall c:P. Right(a,b,c) & ~a == b",
        "forall a:P. forall b:P. forall c:P. forall e:P. Par(a,b,c,e) -> ParL(a,b,c,e)",
        "forall p:P. forall v:P. forall q:P. forall t:P. AddA(p,v,t,q)",
    };
    for (language lang : {language::e2, language::ed}) {
        for (const auto* s : sentences) {
            CAPTURE(s);
            auto r = syntax::parse_sentence(s, &defs::registry::instance());
            REQUIRE(r.ok());
            CHECK(defs::expanded_size(r.ast, lang) ==
                  node_count(defs::expand(r.ast, lang, defs::expand_depth::full)));
        }
    }
}

TEST_CASE("expansion leaves primitive formulas alone") {
    auto r = syntax::parse_sentence("forall a:P. forall b:P. d(a,b) = d(b,a)",
                                    &defs::registry::instance());
    REQUIRE(r.ok());
    CHECK(equal(defs::expand(r.ast, language::ed, defs::expand_depth::full), r.ast));
}
