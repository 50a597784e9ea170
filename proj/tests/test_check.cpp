#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "geoform/check.hpp"
#include "geoform/defs.hpp"
#include "geoform/syntax.hpp"

#include <cmath>

using namespace geo;
using namespace geo::check;

namespace {

formula_ptr sent(const std::string& text) {
    auto r = syntax::parse_sentence(text, &defs::registry::instance());
    REQUIRE(r.ok());
    return r.ast;
}

run_config small_cfg(long samples = 200, std::uint64_t seed = 42) {
    run_config cfg;
    cfg.seed = seed;
    cfg.samples = samples;
    return cfg;
}

check_task task_for(const std::string& item, const std::string& model = "cartesian2") {
    check_task t;
    t.item = item;
    t.model_name = model;
    return t;
}

}  // namespace

TEST_CASE("number recipes evaluate as total field arithmetic") {
    auto m = models::make_model("cartesian2");
    valuation v;
    v.numbers["x"] = 9.0;
    v.points["a"] = {0.0, 0.0};
    v.points["b"] = {3.0, 4.0};
    auto num = [&](const num_recipe_ptr& r) { return eval_num_recipe(*m, v, r); };

    CHECK(num(rc_const(2.5)) == 2.5);
    CHECK(num(rc_ref("x")) == 9.0);
    CHECK(num(rc_dist("a", "b")) == doctest::Approx(5.0));
    CHECK(num(rc_dist(rp_ref("b"), rp_ref("a"))) == doctest::Approx(5.0));
    CHECK(num(rc_coord(rp_ref("b"), 1)) == 4.0);
    CHECK(num(rc_add(rc_const(1), rc_const(2))) == 3.0);
    CHECK(num(rc_sub(rc_const(1), rc_const(2))) == -1.0);
    CHECK(num(rc_mul(rc_ref("x"), rc_const(2))) == 18.0);
    CHECK(num(rc_neg(rc_const(4))) == -4.0);
    CHECK(num(rc_abs(rc_const(-4))) == 4.0);
    CHECK(num(rc_sqrt0(rc_ref("x"))) == 3.0);

    // division stays total and tiny negative radicands clamp to zero
    CHECK(num(rc_div0(rc_const(6), rc_const(3))) == 2.0);
    CHECK(num(rc_div0(rc_const(6), rc_const(0))) == 0.0);
    CHECK(num(rc_sqrt0(rc_const(-1e-15))) == 0.0);
    CHECK_THROWS_AS(num(rc_sqrt0(rc_const(-1.0))), recipe_error);
    CHECK_THROWS_AS(num(rc_ref("nope")), recipe_error);
    CHECK_THROWS_AS(num(rc_dist("a", "nope")), recipe_error);
}

TEST_CASE("point recipes mirror the model constructions") {
    auto m = models::make_model("cartesian3");
    valuation v;
    v.points["a"] = {0.0, 0.0, 0.0};
    v.points["b"] = {2.0, 0.0, 0.0};
    auto p = [&](const point_recipe_ptr& r) { return eval_point_recipe(*m, v, r); };

    CHECK(p(rp_ref("b")) == v.points["b"]);
    CHECK_THROWS_AS(p(rp_ref("nope")), recipe_error);

    // coordinate lists pad with zeros up to the model dimension
    pt c = p(rp_coords({rc_const(1.5)}));
    CHECK(c == pt{1.5, 0.0, 0.0});

    pt mid = p(rp_midpoint(rp_ref("a"), rp_ref("b")));
    CHECK(mid == pt{1.0, 0.0, 0.0});
    pt ext = p(rp_extend(rp_ref("a"), rp_ref("b"), rc_const(3.0)));
    CHECK(m->distance(v.points["b"], ext) == doctest::Approx(3.0));
    CHECK(m->distance(v.points["a"], ext) == doctest::Approx(5.0));
    pt ray = p(rp_ray(rp_ref("a"), rp_ref("b"), rc_const(0.5)));
    CHECK(ray == pt{0.5, 0.0, 0.0});
    pt lerped = p(rp_lerp(rp_ref("a"), rp_ref("b"), rc_const(0.25)));
    CHECK(lerped == pt{0.5, 0.0, 0.0});

    pt then_p = p(rp_branch(rc_const(1.0), rp_ref("a"), rp_ref("b")));
    CHECK(then_p == v.points["a"]);
    pt else_p = p(rp_branch(rc_const(-1.0), rp_ref("a"), rp_ref("b")));
    CHECK(else_p == v.points["b"]);

    CHECK(p(rp_equilateral(2)) == m->equilateral()[2]);
    CHECK(p(rp_noncollinear(0)) == m->noncollinear()[0]);
}

TEST_CASE("a true universal sentence passes with no falsifications") {
    auto rep = run_check(sent("forall a:P. forall b:P. d(a,b) = d(b,a)"),
                         task_for("sym"), small_cfg());
    CHECK(rep.result == outcome::pass);
    CHECK(rep.ok);
    CHECK(rep.samples_run == 200);
    CHECK(rep.probes_run == 0);
    CHECK(rep.falsified == 0);
    CHECK(rep.failures.empty());
}

TEST_CASE("an expected refutation is confirmed by falsifying samples") {
    auto t = task_for("bad");
    t.expect = expectation::refuted;
    auto rep = run_check(sent("forall a:P. forall b:P. d(a,b) = 0"), t, small_cfg(50));
    CHECK(rep.result == outcome::refuted);
    CHECK(rep.ok);
    CHECK(rep.falsified == 50);  // every random pair is apart
    CHECK(rep.samples_run == 50);
    REQUIRE(!rep.failures.empty());
    CHECK(rep.failures[0].kind == "sample");
    CHECK(rep.failures[0].points.count("a") == 1);
    CHECK(!rep.failures[0].atoms.empty());
}

TEST_CASE("recorded failures are capped but counting continues") {
    auto t = task_for("bad");
    t.expect = expectation::refuted;
    auto cfg = small_cfg(50);
    cfg.max_failures = 3;
    auto rep = run_check(sent("forall a:P. forall b:P. d(a,b) = 0"), t, cfg);
    CHECK(rep.falsified == 50);
    CHECK(rep.failures.size() == 3);
}

TEST_CASE("a falsified sentence with a pass expectation comes out not-ok") {
    auto rep = run_check(sent("forall a:P. forall b:P. d(a,b) = 0"),
                         task_for("bad"), small_cfg(20));
    CHECK(rep.result == outcome::fail);
    CHECK_FALSE(rep.ok);
}

TEST_CASE("existentials without witness recipes make the task unsupported") {
    auto f = sent("forall a:P. exists b:P. d(a,b) = 1");
    auto rep = run_check(f, task_for("ex"), small_cfg());
    CHECK(rep.result == outcome::unsupported);
    CHECK_FALSE(rep.ok);
    CHECK(rep.detail == "no witness recipe for b");
    CHECK(rep.samples_run == 0);  // rejected before any sampling

    auto t = task_for("ex");
    t.expect = expectation::unsupported;
    CHECK(run_check(f, t, small_cfg()).ok);
}

TEST_CASE("a witness recipe turns the same sentence into a pass") {
    auto t = task_for("ex");
    t.script.points["b"] = rp_ray(rp_ref("a"), rp_noncollinear(0), rc_const(1.0));
    auto rep = run_check(sent("forall a:P. exists b:P. d(a,b) = 1"), t, small_cfg());
    CHECK(rep.result == outcome::pass);
    CHECK(rep.ok);
    CHECK(rep.falsified == 0);
}

TEST_CASE("probes run first and count as falsifications") {
    // Random pairs never coincide, so only the probe can refute this.
    auto t = task_for("probe-demo");
    t.expect = expectation::refuted;
    probe pr;
    pr.label = "coincident";
    pr.points["a"] = rp_noncollinear(0);
    pr.points["b"] = rp_noncollinear(0);
    t.probes.push_back(pr);
    auto rep = run_check(sent("forall a:P. forall b:P. ~ d(a,b) = 0"), t, small_cfg(50));
    CHECK(rep.result == outcome::refuted);
    CHECK(rep.ok);
    CHECK(rep.probes_run == 1);
    CHECK(rep.falsified == 1);
    REQUIRE(rep.failures.size() == 1);
    CHECK(rep.failures[0].kind == "probe");
    CHECK(rep.failures[0].label == "coincident");
    CHECK(rep.failures[0].index == -1);
}

TEST_CASE("a custom sampler controls the universal assignment") {
    // Generically false, but the sampler only ever produces coincident pairs.
    auto t = task_for("pinned");
    t.sampler = [](const model& m, rng_stream& rng, valuation& v) {
        pt x = m.sample(rng);
        v.points["a"] = x;
        v.points["b"] = x;
    };
    auto rep = run_check(sent("forall a:P. forall b:P. a == b"), t, small_cfg(100));
    CHECK(rep.result == outcome::pass);
    CHECK(rep.falsified == 0);
}

TEST_CASE("hypothesis-driven patterns reach measure-zero configurations") {
    // Each sentence is vacuously true on random data; a refutation proves the
    // sampler actually constructed the hypothesis.
    auto refuted = [&](const std::string& text) {
        auto t = task_for("pattern");
        t.expect = expectation::refuted;
        return run_check(sent(text), t, small_cfg(300)).result == outcome::refuted;
    };
    // a point strictly between two others
    CHECK(refuted("forall a:P. forall b:P. forall c:P. Bet(a,b,c) -> d(a,b) = d(b,c)"));
    // a point beyond a segment end
    CHECK(refuted("forall a:P. forall b:P. forall x:P. Bet(a,b,x) -> x == b"));
    // a point equidistant from two others
    CHECK(refuted("forall a:P. forall b:P. forall x:P. d(x,a) = d(x,b) -> a == b"));
    // a point at a prescribed distance from an anchor
    CHECK(refuted("forall a:P. forall b:P. forall c:P. forall x:P. d(x,a) = d(b,c) -> x == a"));
    // a nonnegative number
    CHECK(refuted("forall x:N. 0 <= x -> x * x < 50"));
}

TEST_CASE("reports are a pure function of the task and seed") {
    auto run = [&](std::uint64_t seed) {
        auto t = task_for("det");
        t.expect = expectation::refuted;
        return to_json(run_check(sent("forall a:P. forall b:P. d(a,b) = 0"), t,
                                 small_cfg(40, seed)))
            .dump(2);
    };
    CHECK(run(7) == run(7));
    // same shape, different witnesses under a different seed
    auto a = nlohmann::ordered_json::parse(run(7));
    auto b = nlohmann::ordered_json::parse(run(8));
    CHECK(a["falsified"] == b["falsified"]);
    CHECK(a["failures"][0]["points"] != b["failures"][0]["points"]);
}

TEST_CASE("report serialization carries the run in a stable layout") {
    auto t = task_for("sym", "cartesian3");
    auto j = to_json(run_check(sent("forall a:P. forall b:P. d(a,b) = d(b,a)"), t,
                               small_cfg(25)));
    CHECK(j["item"] == "sym");
    CHECK(j["model"] == "cartesian3");
    CHECK(j["mode"] == "sample");
    CHECK(j["expect"] == "pass");
    CHECK(j["outcome"] == "pass");
    CHECK(j["ok"] == true);
    CHECK(j["samples_run"] == 25);
    CHECK(j["failures"].is_array());
    CHECK(j.count("detail") == 0);
    CHECK(j.count("search") == 0);
}

TEST_CASE("the midline search refutes on the disk and exhausts elsewhere") {
    auto dummy = sent("forall a:P. a == a");  // d5-search ignores the sentence text
    auto t = task_for("mid", "disk");
    t.mode = task_mode::d5_search;
    t.expect = expectation::refuted;
    auto rep = run_check(dummy, t, small_cfg());
    CHECK(rep.result == outcome::refuted);
    CHECK(rep.ok);
    CHECK(rep.search.found);
    CHECK(rep.search.gap > 0.01);
    CHECK(rep.search.tries <= 1000);
    auto j = to_json(rep);
    CHECK(j["search"]["found"] == true);
    CHECK(j["search"].count("a") == 1);

    t.model_name = "cartesian2";
    auto flat = run_check(dummy, t, small_cfg());
    CHECK_FALSE(flat.search.found);
    CHECK(flat.search.tries == 1000);
    CHECK(flat.result == outcome::fail);
    CHECK_FALSE(flat.ok);
}

TEST_CASE("declared-unsupported tasks pass their note through") {
    auto t = task_for("decl", "disk");
    t.mode = task_mode::declared_unsupported;
    t.note = "sampling cannot certify this form here";
    t.expect = expectation::unsupported;
    auto rep = run_check(sent("forall a:P. a == a"), t, small_cfg());
    CHECK(rep.result == outcome::unsupported);
    CHECK(rep.ok);
    CHECK(rep.detail == "sampling cannot certify this form here");
    CHECK(rep.samples_run == 0);
}
