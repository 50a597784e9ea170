#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "geoform/ast.hpp"
#include "geoform/defs.hpp"
#include "geoform/eval.hpp"
#include "geoform/model.hpp"
#include "geoform/syntax.hpp"
#include "geoform/xlate.hpp"

#include "support/qf_gen.hpp"

using namespace geo;

namespace {

formula_ptr sent(const std::string& text) {
    auto r = syntax::parse_sentence(text, &defs::registry::instance());
    REQUIRE(r.ok());
    return r.ast;
}

std::string rt(const std::string& text) {
    return syntax::print_sentence(xlate::e2_to_ed(sent(text)));
}

// every term in a purely relational sentence is a bare point variable
bool points_only(const formula_ptr& f) {
    for (const auto& t : f->terms)
        if (t->kind != term_kind::point_var) return false;
    if (f->kind == formula_kind::eq_num || f->kind == formula_kind::less) return false;
    for (const auto& s : f->subs)
        if (!points_only(s)) return false;
    return true;
}

}  // namespace

TEST_CASE("relational atoms become distance equations") {
    CHECK(rt("forall a:P. forall b:P. forall c:P. B(a,b,c) -> B(c,b,a)") ==
          "forall a:P. forall b:P. forall c:P. d(a,c) = d(a,b) + d(b,c) -> "
          "d(c,a) = d(c,b) + d(b,a)");
    CHECK(rt("forall p:P. forall q:P. forall u:P. forall v:P. D(p,q,u,v) -> D(u,v,p,q)") ==
          "forall p:P. forall q:P. forall u:P. forall v:P. d(p,q) = d(u,v) -> d(u,v) = d(p,q)");
    // defined atoms and point quantifiers pass through untouched
    CHECK(rt("forall a:P. forall b:P. forall c:P. Coll(a,b,c) | ~Coll(a,b,c)") ==
          "forall a:P. forall b:P. forall c:P. Coll(a,b,c) | ~Coll(a,b,c)");
    CHECK(rt("forall a:P. exists x:P. B(a,x,a) & D(a,x,x,a)") ==
          "forall a:P. exists x:P. d(a,a) = d(a,x) + d(x,a) & d(a,x) = d(x,a)");
}

TEST_CASE("relational-to-metric rejects what has no metric reading") {
    CHECK_THROWS_AS(xlate::e2_to_ed(sent("forall x:N. x = x")), language_mismatch);
    CHECK_THROWS_AS(
        xlate::e2_to_ed(sent("forall o:P. forall e:P. forall t:P. forall a:P. forall b:P. "
                             "forall c:P. GSum(o,e,t,a,b,c)")),
        language_mismatch);
}

TEST_CASE("a plain congruence translates to one relational atom") {
    auto r = xlate::ed_to_e2(sent("forall p:P. forall q:P. forall u:P. forall v:P. "
                                  "d(p,q) = d(u,v)"));
    CHECK(syntax::print_sentence(r.out) ==
          "forall p:P. forall q:P. forall u:P. forall v:P. D(p,q,u,v)");
    CHECK(r.temps.empty());
    CHECK(r.origin.empty());
}

TEST_CASE("a distance sum lays the segments end to end") {
    auto r = xlate::ed_to_e2(
        sent("forall p:P. forall q:P. forall u:P. forall v:P. forall r:P. forall s:P. "
             "d(p,q) = d(u,v) + d(r,s)"));
    CHECK(syntax::print_sentence(r.out) ==
          "forall p:P. forall q:P. forall u:P. forall v:P. forall r:P. forall s:P. "
          "exists a:P. exists b:P. exists c:P. B(a,b,c) & D(p,q,a,c) & D(u,v,a,b) & "
          "D(r,s,b,c)");
    CHECK(r.temps.empty());
    CHECK(r.origin.empty());

    // laying the sub-segments out on an axis decides the original equation
    auto m = models::make_model("cartesian2");
    std::vector<prefix_entry> prefix;
    formula_ptr matrix;
    split_prefix(prenex(r.out), prefix, matrix);
    REQUIRE(prefix.size() == 9);
    CHECK(prefix[5].universal);        // the quantified originals
    CHECK_FALSE(prefix[6].universal);  // then the laid-out segment
    auto place = [&](double dpq) {
        models::valuation val;
        val.points["p"] = {0.0, 0.0};
        val.points["q"] = {dpq, 0.0};
        val.points["u"] = {0.0, 0.0};
        val.points["v"] = {0.0, 3.0};
        val.points["r"] = {1.0, 1.0};
        val.points["s"] = {5.0, 1.0};
        val.points["a"] = {0.0, 0.0};
        val.points["b"] = {3.0, 0.0};
        val.points["c"] = {7.0, 0.0};
        return models::eval_qf(*m, models::eval_options{}, val, matrix);
    };
    CHECK(place(7.0));        // 3 + 4 = 7
    CHECK_FALSE(place(8.0));  // the witness no longer fits
}

TEST_CASE("a congruence beside other atoms still short-circuits") {
    auto r = xlate::ed_to_e2(
        sent("forall a:P. forall b:P. forall c:P. Bet(a,b,c) & d(a,b) = d(b,c)"));
    CHECK(syntax::print_sentence(r.out) ==
          "forall a:P. forall b:P. forall c:P. Bet(a,b,c) & D(a,b,b,c)");
    CHECK(r.temps.empty());
}

TEST_CASE("general arithmetic flattens onto an existential frame") {
    auto r = xlate::ed_to_e2(
        sent("forall p:P. forall q:P. forall u:P. forall v:P. forall x:N. forall y:N. "
             "3 * (d(p,q) * d(u,v)) + ((x + 2) * y) * y + 1 = y + d(p,q)"));
    CHECK(r.origin == "oh");
    CHECK(r.unit == "eh");
    CHECK(r.off_axis == "ep");
    CHECK(syntax::print_sentence(r.out) ==
          "exists oh:P. exists eh:P. exists ep:P. ~Coll(oh,eh,ep) & (forall p:P. forall q:P. "
          "forall u:P. forall v:P. forall xh:P. Coll(oh,eh,xh) -> (forall yh:P. "
          "Coll(oh,eh,yh) -> (exists h1:P. exists h2:P. exists h3:P. exists h4:P. "
          "exists h5:P. exists h6:P. exists h7:P. exists h8:P. exists h9:P. exists h10:P. "
          "exists h11:P. exists h12:P. exists h13:P. exists h14:P. GSum(oh,eh,ep,eh,eh,h1) & "
          "GSum(oh,eh,ep,h1,eh,h2) & D(oh,h3,p,q) & Coll(oh,eh,h3) & NN(oh,eh,h3) & "
          "D(oh,h4,u,v) & Coll(oh,eh,h4) & NN(oh,eh,h4) & GProd(oh,eh,ep,h3,h4,h5) & "
          "GProd(oh,eh,ep,h2,h5,h6) & GSum(oh,eh,ep,eh,eh,h7) & GSum(oh,eh,ep,xh,h7,h8) & "
          "GProd(oh,eh,ep,h8,yh,h9) & GProd(oh,eh,ep,h9,yh,h10) & GSum(oh,eh,ep,h6,h10,h11) & "
          "GSum(oh,eh,ep,h11,eh,h12) & D(oh,h13,p,q) & Coll(oh,eh,h13) & NN(oh,eh,h13) & "
          "GSum(oh,eh,ep,yh,h13,h14) & h12 == h14)))");

    // no number-sorted syntax survives the translation
    CHECK(points_only(r.out));

    // hats for the number variables come first, then the helpers in
    // evaluation order, each carrying the metric term it stands for
    std::vector<std::pair<std::string, std::string>> expected = {
        {"xh", "x"},
        {"yh", "y"},
        {"h1", "2"},
        {"h2", "3"},
        {"h3", "d(p,q)"},
        {"h4", "d(u,v)"},
        {"h5", "d(p,q) * d(u,v)"},
        {"h6", "3 * (d(p,q) * d(u,v))"},
        {"h7", "2"},
        {"h8", "x + 2"},
        {"h9", "(x + 2) * y"},
        {"h10", "(x + 2) * y * y"},
        {"h11", "3 * (d(p,q) * d(u,v)) + (x + 2) * y * y"},
        {"h12", "3 * (d(p,q) * d(u,v)) + (x + 2) * y * y + 1"},
        {"h13", "d(p,q)"},
        {"h14", "y + d(p,q)"},
    };
    REQUIRE(r.temps.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(r.temps[i].name == expected[i].first);
        CHECK(syntax::print_term(r.temps[i].stands_for) == expected[i].second);
    }
}

TEST_CASE("introduced names dodge the sentence's own variables") {
    auto r = xlate::ed_to_e2(
        sent("forall oh:P. forall eh:P. forall ep:P. forall x:N. x = d(oh,eh)"));
    CHECK(r.origin == "oh1");
    CHECK(r.unit == "eh1");
    CHECK(r.off_axis == "ep1");
    CHECK(syntax::print_sentence(r.out) ==
          "exists oh1:P. exists eh1:P. exists ep1:P. ~Coll(oh1,eh1,ep1) & (forall oh:P. "
          "forall eh:P. forall ep:P. forall xh:P. Coll(oh1,eh1,xh) -> (exists h1:P. "
          "D(oh1,h1,oh,eh) & Coll(oh1,eh1,h1) & NN(oh1,eh1,h1) & xh == h1))");

    auto r2 = xlate::ed_to_e2(sent("forall x:N. forall xh:P. forall h1:P. x = 0"));
    REQUIRE(r2.temps.size() == 1);
    CHECK(r2.temps[0].name == "xh1");
    CHECK(syntax::print_sentence(r2.out) ==
          "exists oh:P. exists eh:P. exists ep:P. ~Coll(oh,eh,ep) & (forall xh1:P. "
          "Coll(oh,eh,xh1) -> (forall xh:P. forall h1:P. xh1 == oh))");
}

TEST_CASE("angle terms have no relational translation") {
    CHECK_THROWS_AS(xlate::ed_to_e2(sent("forall p:P. forall v:P. forall q:P. "
                                         "ang(p,v,q) = 90")),
                    language_mismatch);
}

TEST_CASE("random comparisons agree with their translations at the analytic placement") {
    auto m = models::make_model("cartesian2");
    int truths = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto round = qfgen::run_round(*m, seed);
        CAPTURE(seed);
        CAPTURE(syntax::print_sentence(round.formula));
        CHECK(round.agree());
        if (round.metric) ++truths;
    }
    // both truth values must actually occur or the comparison is vacuous
    CHECK(truths > 40);
    CHECK(truths < 160);
}
