// Numeric evaluation of quantifier-free formulas. Each defined atom gets a
// direct metric criterion instead of expanding its definition, because the
// definitions quantify over auxiliary points that a sampler cannot produce.
// The criteria below were checked against the expansions case by case; the
// comments on each one record how the degenerate configurations (zero-length
// rays, collapsed frames, straight angles) are resolved so that the shortcut
// and the expansion pick the same truth value wherever both are defined.

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "geoform/eval.hpp"
#include "geoform/syntax.hpp"

namespace geo::models {

namespace {

double bet_res(const model& m, const pt& a, const pt& b, const pt& c) {
    return std::fabs(m.distance(a, c) - (m.distance(a, b) + m.distance(b, c)));
}

double coll_res(const model& m, const pt& a, const pt& b, const pt& c) {
    return std::min({bet_res(m, a, b, c), bet_res(m, b, c, a), bet_res(m, c, a, b)});
}

// Distance from x to the line through p with direction dir (flat models).
double line_gap(const pt& x, const pt& p, const pt& dir) {
    pt w = vsub(x, p);
    double n2 = vdot(dir, dir);
    if (n2 == 0.0) return vnorm(w);
    double along = vdot(w, dir) / n2;
    pt off = vsub(w, vscale(along, dir));
    return vnorm(off);
}

// Signed coordinate of x on the line through o and e, in distance units:
// negative exactly when x and e lie on opposite sides of o.
double signed_coord(const model& m, double tol, const pt& o, const pt& e, const pt& x) {
    double d = m.distance(o, x);
    if (d > tol && bet_res(m, x, o, e) <= tol) return -d;
    return d;
}

struct angle_interval {
    double lo, hi;
};

// Angle at v between the rays toward x and y, widened to the full range when
// either ray degenerates (the definitional guards then admit any filler).
angle_interval group_interval(const model& m, double tol, const pt& x, const pt& v, const pt& y) {
    if (m.distance(x, v) <= tol || m.distance(y, v) <= tol) return {0.0, 180.0};
    double a = m.angle_deg(x, v, y);
    return {a, a};
}

class evaluator {
public:
    evaluator(const model& m, const eval_options& opt, const valuation& val, atom_trace* trace)
        : m_(m), opt_(opt), val_(val), trace_(trace) {}

    bool eval(const formula_ptr& f) {
        switch (f->kind) {
            case formula_kind::f_not:
                return !eval(f->subs[0]);
            case formula_kind::f_and:
                return eval(f->subs[0]) && eval(f->subs[1]);
            case formula_kind::f_or:
                return eval(f->subs[0]) || eval(f->subs[1]);
            case formula_kind::f_implies:
                return !eval(f->subs[0]) || eval(f->subs[1]);
            case formula_kind::f_iff:
                return eval(f->subs[0]) == eval(f->subs[1]);
            case formula_kind::f_forall:
            case formula_kind::f_exists:
                throw error("eval_qf reached a quantifier; strip the prefix first");
            default:
                return record(f, atom(f));
        }
    }

private:
    bool record(const formula_ptr& f, bool v) {
        if (trace_) trace_->atoms.emplace_back(syntax::print_sentence(f), v);
        return v;
    }

    const pt& point(const term_ptr& t) { return eval_point(val_, t); }
    double num(const term_ptr& t) { return eval_num(m_, val_, t); }
    double dist(const term_ptr& a, const term_ptr& b) { return m_.distance(point(a), point(b)); }

    bool atom(const formula_ptr& f) {
        double tol = opt_.tol;
        switch (f->kind) {
            case formula_kind::eq_point:
                return dist(f->terms[0], f->terms[1]) <= tol;
            case formula_kind::eq_num: {
                double eff = (mentions_angle(f->terms[0]) || mentions_angle(f->terms[1]))
                                 ? opt_.angle_tol
                                 : tol;
                return std::fabs(num(f->terms[0]) - num(f->terms[1])) <= eff;
            }
            case formula_kind::less: {
                // Lenient on ties: a strict comparison that holds in the limit
                // still counts, so boundary witnesses do not flap.
                double eff = (mentions_angle(f->terms[0]) || mentions_angle(f->terms[1]))
                                 ? opt_.angle_tol
                                 : tol;
                return num(f->terms[0]) < num(f->terms[1]) + eff;
            }
            case formula_kind::tarski_b:
                return bet_res(m_, point(f->terms[0]), point(f->terms[1]), point(f->terms[2])) <=
                       tol;
            case formula_kind::tarski_d:
                return std::fabs(dist(f->terms[0], f->terms[1]) - dist(f->terms[2], f->terms[3])) <=
                       tol;
            case formula_kind::defined:
                return defined_atom(f);
            default:
                throw error("eval_qf: not an atom");
        }
    }

    bool defined_atom(const formula_ptr& f) {
        const auto& n = f->name;
        const auto& ts = f->terms;
        double tol = opt_.tol;

        if (n == "Bet")
            return bet_res(m_, point(ts[0]), point(ts[1]), point(ts[2])) <= tol;
        if (n == "CongSeg")
            return std::fabs(dist(ts[0], ts[1]) - dist(ts[2], ts[3])) <= tol;
        if (n == "Coll")
            return coll_res(m_, point(ts[0]), point(ts[1]), point(ts[2])) <= tol;
        if (n == "CongT")
            return std::fabs(dist(ts[0], ts[1]) - dist(ts[3], ts[4])) <= tol &&
                   std::fabs(dist(ts[1], ts[2]) - dist(ts[4], ts[5])) <= tol &&
                   std::fabs(dist(ts[2], ts[0]) - dist(ts[5], ts[3])) <= tol;
        if (n == "SimT") return simt(ts);
        if (n == "CongA") return conga(ts, 0);
        if (n == "AddA") return adda(ts);
        if (n == "AddA4") return adda4(ts, 0);
        if (n == "LeA") return lea(ts);
        if (n == "LtA") return lea(ts) && !conga(ts, 0);
        if (n == "Right") return right(ts);
        if (n == "NN")
            return std::min(bet_res(m_, point(ts[0]), point(ts[2]), point(ts[1])),
                            bet_res(m_, point(ts[0]), point(ts[1]), point(ts[2]))) <= tol;
        if (n == "Par" || n == "ParL" || n == "GSum" || n == "GProd") {
            if (!m_.flat())
                throw unsupported_atom(n + " has no interpretation in model " + m_.name());
            if (n == "Par") return par(ts, false);
            if (n == "ParL") return par(ts, true);
            if (n == "GSum") return gsum(ts);
            return gprod(ts);
        }
        throw unknown_definition("no evaluation rule for defined atom " + n);
    }

    // SimT(a,b,c,a1,b1,c1): some k != 0 scales triangle a1b1c1 onto abc.
    // The scale is read off the longest primed side so that a fully collapsed
    // primed triangle (all sides ~0) demands a collapsed unprimed one, which
    // is what the existential over k degenerates to.
    bool simt(const std::vector<term_ptr>& ts) {
        double tol = opt_.tol;
        double s[3] = {dist(ts[0], ts[1]), dist(ts[1], ts[2]), dist(ts[2], ts[0])};
        double s1[3] = {dist(ts[3], ts[4]), dist(ts[4], ts[5]), dist(ts[5], ts[3])};
        int i = 0;
        if (s1[1] > s1[i]) i = 1;
        if (s1[2] > s1[i]) i = 2;
        if (s1[i] <= tol) return s[0] <= tol && s[1] <= tol && s[2] <= tol;
        double k = s[i] / s1[i];
        if (std::fabs(k) <= tol) return false;
        for (int j = 0; j < 3; ++j)
            if (std::fabs(s[j] - k * s1[j]) > tol * std::max(1.0, s1[j])) return false;
        return true;
    }

    // CongA(p,v,q,p1,v1,q1) at argument offset `at`. The definition docks a
    // congruent copy of triangle pvq onto the rays of angle p1v1q1. When any
    // of the four rays has zero length the docking is unconstrained in the
    // relevant direction and the atom is satisfiable outright (for a zero
    // unprimed ray the copy collapses onto the vertex; for a zero primed ray
    // the ray membership clause Bet(v1,x,anchor) v Bet(v1,anchor,x) is free).
    bool conga(const std::vector<term_ptr>& ts, size_t at) {
        double tol = opt_.tol;
        const pt &p = point(ts[at]), &v = point(ts[at + 1]), &q = point(ts[at + 2]);
        const pt &p1 = point(ts[at + 3]), &v1 = point(ts[at + 4]), &q1 = point(ts[at + 5]);
        double lp = m_.distance(v, p), lq = m_.distance(v, q);
        if (lp <= tol || lq <= tol) return true;
        if (m_.distance(v1, p1) <= tol || m_.distance(v1, q1) <= tol) return true;
        pt p2 = m_.ray_point(v1, p1, lp);
        pt q2 = m_.ray_point(v1, q1, lq);
        return std::fabs(m_.distance(p2, q2) - m_.distance(p, q)) <= tol;
    }

    // AddA(p,v,t,q): ray vt lies in the angular sector pvq. With t = v the
    // chord clause fires for any non-straight angle (pick a = b = v), so the
    // atom reduces to ~Bet(p,v,q); on a straight angle only the second
    // disjunct can hold and it just demands the three non-degeneracies.
    // Otherwise membership in the sector is a tangent-cone test at v: t's
    // direction must be a nonnegative combination of p's and q's directions.
    bool adda(const std::vector<term_ptr>& ts) {
        double tol = opt_.tol;
        const pt &p = point(ts[0]), &v = point(ts[1]), &t = point(ts[2]), &q = point(ts[3]);
        if (m_.distance(t, v) <= tol) return bet_res(m_, p, v, q) > tol;
        if (bet_res(m_, p, v, q) <= tol)
            return m_.distance(p, v) > tol && m_.distance(q, v) > tol;
        if (m_.distance(p, v) <= tol || m_.distance(q, v) <= tol) return false;
        pt u1 = m_.tangent(v, p), u2 = m_.tangent(v, q), w = m_.tangent(v, t);
        double n1 = vnorm(u1), n2 = vnorm(u2), nw = vnorm(w);
        if (cross_mag(u1, u2) <= tol * n1 * n2) {
            // Zero angle (the straight case was handled above): the sector is
            // the common ray, so t must sit on it.
            double along = vdot(w, u1) / n1;
            double off2 = vdot(w, w) - along * along;
            return along >= -tol && std::sqrt(std::max(0.0, off2)) <= tol * std::max(1.0, nw);
        }
        // Solve w = s*u1 + r*u2. In the plane Cramer's rule on cross
        // products is exact (no residual) and its conditioning is the sine of
        // the sector angle rather than its square, which keeps thin sectors
        // honest.
        if (u1.size() == 2) {
            double cz = u1[0] * u2[1] - u1[1] * u2[0];
            double s = (w[0] * u2[1] - w[1] * u2[0]) / cz;
            double r = (u1[0] * w[1] - u1[1] * w[0]) / cz;
            return s >= -tol && r >= -tol;
        }
        // Higher dimensions go through the Gram system plus an out-of-plane
        // residual test. The Gram determinant squares the sector's sine, so
        // the residual bound carries a conditioning term.
        double g11 = vdot(u1, u1), g22 = vdot(u2, u2), g12 = vdot(u1, u2);
        double b1 = vdot(w, u1), b2 = vdot(w, u2);
        double det = g11 * g22 - g12 * g12;
        double s = (g22 * b1 - g12 * b2) / det;
        double r = (g11 * b2 - g12 * b1) / det;
        pt lhs = vadd(vscale(s, u1), vscale(r, u2));
        double resid = vnorm(vsub(lhs, w));
        double slack = tol * std::max(1.0, nw) + 1e-12 * nw * n1 * n2 / cross_mag(u1, u2);
        return resid <= slack && s >= -tol && r >= -tol;
    }

    // AddA4(u1,a,u2, p1,b,p2, q1,c,q2): angle u1au2 is the sum of the other
    // two. Each group contributes the interval of angle measures its CongA
    // copy can realize; the atom holds when the sum interval of the parts
    // meets the interval of the whole.
    bool adda4(const std::vector<term_ptr>& ts, size_t at) {
        angle_interval w = group_interval(m_, opt_.tol, point(ts[at]), point(ts[at + 1]),
                                          point(ts[at + 2]));
        angle_interval i1 = group_interval(m_, opt_.tol, point(ts[at + 3]), point(ts[at + 4]),
                                           point(ts[at + 5]));
        angle_interval i2 = group_interval(m_, opt_.tol, point(ts[at + 6]), point(ts[at + 7]),
                                           point(ts[at + 8]));
        double lo = std::max(w.lo, i1.lo + i2.lo);
        double hi = std::min(w.hi, i1.hi + i2.hi);
        return lo <= hi + opt_.angle_tol;
    }

    // LeA(p1,b,p2, u1,a,u2): angle p1bp2 <= angle u1au2, i.e. some third
    // angle completes the smaller one to the larger.
    bool lea(const std::vector<term_ptr>& ts) {
        angle_interval small =
            group_interval(m_, opt_.tol, point(ts[0]), point(ts[1]), point(ts[2]));
        angle_interval big = group_interval(m_, opt_.tol, point(ts[3]), point(ts[4]), point(ts[5]));
        return small.lo <= big.hi + opt_.angle_tol;
    }

    // Right(a,b,c): the angle at b is right, stated metrically: reflecting a
    // through b leaves its distance to c unchanged.
    bool right(const std::vector<term_ptr>& ts) {
        double tol = opt_.tol;
        const pt &a = point(ts[0]), &b = point(ts[1]), &c = point(ts[2]);
        double lab = m_.distance(a, b);
        if (lab <= tol || m_.distance(a, c) <= tol || m_.distance(b, c) <= tol) return false;
        pt a1 = m_.ray_point(b, a, -lab);
        return std::fabs(m_.distance(c, a) - m_.distance(c, a1)) <= tol;
    }

    // Par(p,q,u,v): distinct lines pq and uv share no point. ParL weakens
    // this to equal directions (the lines may coincide). Non-parallel lines
    // in dimension >= 3 can still be disjoint (skew), so the general test is
    // the closest-approach gap between the two lines.
    bool par(const std::vector<term_ptr>& ts, bool allow_same_line) {
        double tol = opt_.tol;
        const pt &p = point(ts[0]), &q = point(ts[1]), &u = point(ts[2]), &v = point(ts[3]);
        pt d1 = vsub(q, p), d2 = vsub(v, u);
        double n1 = vnorm(d1), n2 = vnorm(d2);
        if (n1 <= tol || n2 <= tol) return false;
        bool same_dir = cross_mag(d1, d2) <= tol * n1 * n2;
        if (allow_same_line) return same_dir;
        if (same_dir) return line_gap(u, p, d1) > tol;
        double g11 = vdot(d1, d1), g22 = vdot(d2, d2), g12 = vdot(d1, d2);
        pt b = vsub(u, p);
        double det = g11 * g22 - g12 * g12;
        double s = (g22 * vdot(d1, b) - g12 * vdot(d2, b)) / det;
        double t = (g12 * vdot(d1, b) - g11 * vdot(d2, b)) / det;
        pt x1 = vadd(p, vscale(s, d1));
        pt x2 = vadd(u, vscale(t, d2));
        return m_.distance(x1, x2) > tol;
    }

    bool frame_ok(const pt& o, const pt& e, const pt& ep) {
        return m_.distance(o, e) > opt_.tol && line_gap(ep, o, vsub(e, o)) > opt_.tol;
    }

    bool on_axis(const pt& o, const pt& e, const pt& x) {
        return coll_res(m_, o, e, x) <= opt_.tol;
    }

    // GSum(o,e,ep,a,b,c): c = a + b on the number line through o and e, by
    // parallel transport through the off-axis point ep. The first two
    // disjuncts of the definition handle a = o and b = o without using the
    // frame at all; the geometric disjunct needs a sound frame and reduces to
    // signed-coordinate arithmetic.
    bool gsum(const std::vector<term_ptr>& ts) {
        double tol = opt_.tol;
        const pt &o = point(ts[0]), &e = point(ts[1]), &ep = point(ts[2]);
        const pt &a = point(ts[3]), &b = point(ts[4]), &c = point(ts[5]);
        if (m_.distance(a, o) <= tol && m_.distance(c, b) <= tol && on_axis(o, e, b)) return true;
        if (m_.distance(b, o) <= tol && m_.distance(c, a) <= tol && on_axis(o, e, a)) return true;
        if (m_.distance(a, o) <= tol || m_.distance(b, o) <= tol) return false;
        if (!frame_ok(o, e, ep)) return false;
        if (!on_axis(o, e, a) || !on_axis(o, e, b) || !on_axis(o, e, c)) return false;
        double sa = signed_coord(m_, tol, o, e, a);
        double sb = signed_coord(m_, tol, o, e, b);
        double sc = signed_coord(m_, tol, o, e, c);
        return std::fabs(sa + sb - sc) <= tol;
    }

    // GProd(o,e,ep,a,b,c): c = a * b in units of d(o,e), same frame scheme.
    // b = o forces c = o (with a anywhere on the axis); otherwise everything
    // is on the axis and the signed coordinates multiply.
    bool gprod(const std::vector<term_ptr>& ts) {
        double tol = opt_.tol;
        const pt &o = point(ts[0]), &e = point(ts[1]), &ep = point(ts[2]);
        const pt &a = point(ts[3]), &b = point(ts[4]), &c = point(ts[5]);
        if (m_.distance(b, o) <= tol && m_.distance(c, o) <= tol && on_axis(o, e, a)) return true;
        if (m_.distance(b, o) <= tol) return false;
        if (!frame_ok(o, e, ep)) return false;
        if (!on_axis(o, e, a) || !on_axis(o, e, b) || !on_axis(o, e, c)) return false;
        double unit = m_.distance(o, e);
        double sa = signed_coord(m_, tol, o, e, a) / unit;
        double sb = signed_coord(m_, tol, o, e, b) / unit;
        double sc = signed_coord(m_, tol, o, e, c) / unit;
        return std::fabs(sa * sb - sc) <=
               tol * std::max({1.0, std::fabs(sa), std::fabs(sb), std::fabs(sc)});
    }

    const model& m_;
    const eval_options& opt_;
    const valuation& val_;
    atom_trace* trace_;
};

}  // namespace

double eval_num(const model& m, const valuation& val, const term_ptr& t) {
    switch (t->kind) {
        case term_kind::num_var: {
            auto it = val.numbers.find(t->name);
            if (it == val.numbers.end())
                throw unbound_variable("number variable " + t->name + " has no value");
            return it->second;
        }
        case term_kind::num_zero:
            return 0.0;
        case term_kind::num_one:
            return 1.0;
        case term_kind::int_lit:
            return static_cast<double>(t->value);
        case term_kind::add:
            return eval_num(m, val, t->args[0]) + eval_num(m, val, t->args[1]);
        case term_kind::mul:
            return eval_num(m, val, t->args[0]) * eval_num(m, val, t->args[1]);
        case term_kind::neg:
            return -eval_num(m, val, t->args[0]);
        case term_kind::dist:
            return m.distance(eval_point(val, t->args[0]), eval_point(val, t->args[1]));
        case term_kind::angle:
            return m.angle_deg(eval_point(val, t->args[0]), eval_point(val, t->args[1]),
                               eval_point(val, t->args[2]));
        default:
            throw error("eval_num: point term in number position");
    }
}

const pt& eval_point(const valuation& val, const term_ptr& t) {
    if (t->kind != term_kind::point_var) throw error("eval_point: not a point variable");
    auto it = val.points.find(t->name);
    if (it == val.points.end())
        throw unbound_variable("point variable " + t->name + " has no value");
    return it->second;
}

bool mentions_angle(const term_ptr& t) {
    if (t->kind == term_kind::angle) return true;
    for (const auto& a : t->args)
        if (mentions_angle(a)) return true;
    return false;
}

bool eval_qf(const model& m, const eval_options& opt, const valuation& val, const formula_ptr& f,
             atom_trace* trace) {
    evaluator ev(m, opt, val, trace);
    return ev.eval(f);
}

}  // namespace geo::models
