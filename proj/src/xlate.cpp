#include "geoform/xlate.hpp"

#include <map>
#include <set>

#include "geoform/defs.hpp"

namespace geo::xlate {

namespace {

bool as_dist(const term_ptr& t, term_ptr& a, term_ptr& b) {
    if (t->kind != term_kind::dist) return false;
    a = t->args[0];
    b = t->args[1];
    return true;
}

// ---------------------------------------------------------------------------
// relational to metric

formula_ptr rel_to_metric(const formula_ptr& f) {
    switch (f->kind) {
        case formula_kind::eq_point:
            return f;
        case formula_kind::tarski_b:
            return eq_num(dist(f->terms[0], f->terms[2]),
                          add(dist(f->terms[0], f->terms[1]), dist(f->terms[1], f->terms[2])));
        case formula_kind::tarski_d:
            return eq_num(dist(f->terms[0], f->terms[1]), dist(f->terms[2], f->terms[3]));
        case formula_kind::defined:
            if (!defs::registry::instance().available_in(f->name, language::ed))
                throw language_mismatch(f->name + " has no metric reading");
            return f;
        case formula_kind::eq_num:
        case formula_kind::less:
            throw language_mismatch("number comparison in relational input");
        case formula_kind::f_not:
            return f_not(rel_to_metric(f->subs[0]));
        case formula_kind::f_and:
            return f_and(rel_to_metric(f->subs[0]), rel_to_metric(f->subs[1]));
        case formula_kind::f_or:
            return f_or(rel_to_metric(f->subs[0]), rel_to_metric(f->subs[1]));
        case formula_kind::f_implies:
            return implies(rel_to_metric(f->subs[0]), rel_to_metric(f->subs[1]));
        case formula_kind::f_iff:
            return iff(rel_to_metric(f->subs[0]), rel_to_metric(f->subs[1]));
        case formula_kind::f_forall:
        case formula_kind::f_exists: {
            if (f->var_sort != sort::point)
                throw language_mismatch("relational input cannot bind number variables");
            auto body = rel_to_metric(f->subs[0]);
            return f->kind == formula_kind::f_forall ? forall(f->name, sort::point, body)
                                                     : exists(f->name, sort::point, body);
        }
    }
    throw error("rel_to_metric: corrupt formula");
}

// ---------------------------------------------------------------------------
// metric to relational

class metric_to_rel {
public:
    explicit metric_to_rel(const formula_ptr& f) {
        collect(f);
        for (const auto& n : num_names_) hat_[n] = pick(n + "h");
        origin_ = pick("oh");
        unit_ = pick("eh");
        off_axis_ = pick("ep");
    }

    translation_result run(const formula_ptr& f) {
        formula_ptr core = go(f);
        translation_result res;
        if (frame_used_) {
            auto guard = f_not(datom("Coll", {pvar(origin_), pvar(unit_), pvar(off_axis_)}));
            core = exists(origin_, sort::point,
                          exists(unit_, sort::point,
                                 exists(off_axis_, sort::point, f_and(guard, core))));
            res.origin = origin_;
            res.unit = unit_;
            res.off_axis = off_axis_;
        }
        res.out = core;
        for (const auto& [n, h] : hat_) res.temps.push_back({h, nvar(n)});
        for (auto& t : temps_) res.temps.push_back(std::move(t));
        return res;
    }

private:
    std::set<std::string> used_;
    std::set<std::string> num_names_;
    std::map<std::string, std::string> hat_;
    std::vector<temp_binding> temps_;
    std::string origin_, unit_, off_axis_;
    bool frame_used_ = false;
    int temp_counter_ = 0;

    void collect_term(const term_ptr& t) {
        if (t->kind == term_kind::point_var) used_.insert(t->name);
        if (t->kind == term_kind::num_var) {
            used_.insert(t->name);
            num_names_.insert(t->name);
        }
        for (const auto& a : t->args) collect_term(a);
    }

    void collect(const formula_ptr& f) {
        if (f->kind == formula_kind::f_forall || f->kind == formula_kind::f_exists) {
            used_.insert(f->name);
            if (f->var_sort == sort::number) num_names_.insert(f->name);
        }
        for (const auto& t : f->terms) collect_term(t);
        for (const auto& s : f->subs) collect(s);
    }

    std::string pick(const std::string& base) {
        std::string n = fresh_name(base, {used_.begin(), used_.end()});
        used_.insert(n);
        return n;
    }

    std::string new_temp(const term_ptr& stands_for, std::vector<std::string>& binders) {
        std::string name;
        do {
            name = "h" + std::to_string(++temp_counter_);
        } while (used_.count(name));
        used_.insert(name);
        temps_.push_back({name, stands_for});
        binders.push_back(name);
        return name;
    }

    term_ptr frame_origin() {
        frame_used_ = true;
        return pvar(origin_);
    }
    term_ptr frame_unit() {
        frame_used_ = true;
        return pvar(unit_);
    }

    formula_ptr axis(const term_ptr& p) {
        return datom("Coll", {frame_origin(), frame_unit(), p});
    }

    formula_ptr gsum(const term_ptr& a, const term_ptr& b, const term_ptr& c) {
        frame_used_ = true;
        return datom("GSum", {pvar(origin_), pvar(unit_), pvar(off_axis_), a, b, c});
    }

    formula_ptr gprod(const term_ptr& a, const term_ptr& b, const term_ptr& c) {
        frame_used_ = true;
        return datom("GProd", {pvar(origin_), pvar(unit_), pvar(off_axis_), a, b, c});
    }

    // Returns the point carrying the value of `t`, appending the constraints
    // that pin it down and the helper binders they introduce.
    term_ptr flatten(const term_ptr& t, std::vector<formula_ptr>& anchors,
                     std::vector<std::string>& binders) {
        switch (t->kind) {
            case term_kind::num_var:
                return pvar(hat_.at(t->name));
            case term_kind::num_zero:
                return frame_origin();
            case term_kind::num_one:
                return frame_unit();
            case term_kind::int_lit: {
                if (t->value == 0) return frame_origin();
                term_ptr acc = frame_unit();
                for (unsigned long long k = 2; k <= t->value; ++k) {
                    term_ptr h = pvar(new_temp(int_literal(k), binders));
                    anchors.push_back(gsum(acc, frame_unit(), h));
                    acc = h;
                }
                return acc;
            }
            case term_kind::dist: {
                term_ptr h = pvar(new_temp(t, binders));
                anchors.push_back(tarski_d(frame_origin(), h, t->args[0], t->args[1]));
                anchors.push_back(axis(h));
                anchors.push_back(datom("NN", {frame_origin(), frame_unit(), h}));
                return h;
            }
            case term_kind::add: {
                term_ptr l = flatten(t->args[0], anchors, binders);
                term_ptr r = flatten(t->args[1], anchors, binders);
                term_ptr h = pvar(new_temp(t, binders));
                anchors.push_back(gsum(l, r, h));
                return h;
            }
            case term_kind::mul: {
                term_ptr l = flatten(t->args[0], anchors, binders);
                term_ptr r = flatten(t->args[1], anchors, binders);
                term_ptr h = pvar(new_temp(t, binders));
                anchors.push_back(gprod(l, r, h));
                return h;
            }
            case term_kind::neg: {
                term_ptr inner = flatten(t->args[0], anchors, binders);
                term_ptr h = pvar(new_temp(t, binders));
                anchors.push_back(gsum(inner, h, frame_origin()));
                return h;
            }
            case term_kind::angle:
                throw language_mismatch("angle terms have no relational reading");
            case term_kind::point_var:
                break;
        }
        throw error("flatten: point term in number position");
    }

    formula_ptr wrap(std::vector<std::string> binders, std::vector<formula_ptr> parts) {
        formula_ptr body = conj(parts);
        for (auto it = binders.rbegin(); it != binders.rend(); ++it)
            body = exists(*it, sort::point, body);
        return body;
    }

    formula_ptr translate_eq(const formula_ptr& f) {
        const term_ptr &lhs = f->terms[0], &rhs = f->terms[1];
        term_ptr p, q, u, v, r, s;
        if (as_dist(lhs, p, q) && as_dist(rhs, u, v)) return tarski_d(p, q, u, v);
        // d(p,q) = d(u,v) + d(r,s): lay the two summands end to end
        for (int flip = 0; flip < 2; ++flip) {
            const term_ptr& whole = flip ? rhs : lhs;
            const term_ptr& sum = flip ? lhs : rhs;
            if (as_dist(whole, p, q) && sum->kind == term_kind::add &&
                as_dist(sum->args[0], u, v) && as_dist(sum->args[1], r, s)) {
                std::vector<std::string> taken = {p->name, q->name, u->name,
                                                  v->name, r->name, s->name};
                std::string a = fresh_name("a", taken);
                taken.push_back(a);
                std::string b = fresh_name("b", taken);
                taken.push_back(b);
                std::string c = fresh_name("c", taken);
                auto pa = pvar(a), pb = pvar(b), pc = pvar(c);
                auto body = conj({tarski_b(pa, pb, pc), tarski_d(p, q, pa, pc),
                                  tarski_d(u, v, pa, pb), tarski_d(r, s, pb, pc)});
                return exists(a, sort::point,
                              exists(b, sort::point, exists(c, sort::point, body)));
            }
        }
        std::vector<formula_ptr> anchors;
        std::vector<std::string> binders;
        term_ptr hl = flatten(lhs, anchors, binders);
        term_ptr hr = flatten(rhs, anchors, binders);
        anchors.push_back(eq_point(hl, hr));
        return wrap(std::move(binders), std::move(anchors));
    }

    // s < t becomes: some nonzero z on the nonnegative ray with s + z = t.
    formula_ptr translate_less(const formula_ptr& f) {
        std::vector<formula_ptr> anchors;
        std::vector<std::string> binders;
        term_ptr hs = flatten(f->terms[0], anchors, binders);
        term_ptr ht = flatten(f->terms[1], anchors, binders);
        term_ptr z = pvar(new_temp(add(f->terms[1], neg(f->terms[0])), binders));
        anchors.push_back(datom("NN", {frame_origin(), frame_unit(), z}));
        anchors.push_back(neq(z, frame_origin()));
        anchors.push_back(gsum(hs, z, ht));
        return wrap(std::move(binders), std::move(anchors));
    }

    formula_ptr go(const formula_ptr& f) {
        switch (f->kind) {
            case formula_kind::eq_point:
            case formula_kind::tarski_b:
            case formula_kind::tarski_d:
                return f;
            case formula_kind::defined:
                if (!defs::registry::instance().available_in(f->name, language::e2))
                    throw language_mismatch(f->name + " has no relational definition");
                return f;
            case formula_kind::eq_num:
                return translate_eq(f);
            case formula_kind::less:
                return translate_less(f);
            case formula_kind::f_not:
                return f_not(go(f->subs[0]));
            case formula_kind::f_and:
                return f_and(go(f->subs[0]), go(f->subs[1]));
            case formula_kind::f_or:
                return f_or(go(f->subs[0]), go(f->subs[1]));
            case formula_kind::f_implies:
                return implies(go(f->subs[0]), go(f->subs[1]));
            case formula_kind::f_iff:
                return iff(go(f->subs[0]), go(f->subs[1]));
            case formula_kind::f_forall:
            case formula_kind::f_exists: {
                bool uni = f->kind == formula_kind::f_forall;
                if (f->var_sort == sort::point) {
                    auto body = go(f->subs[0]);
                    return uni ? forall(f->name, sort::point, body)
                               : exists(f->name, sort::point, body);
                }
                const std::string& h = hat_.at(f->name);
                auto body = go(f->subs[0]);
                auto guard = axis(pvar(h));
                return uni ? forall(h, sort::point, implies(guard, body))
                           : exists(h, sort::point, f_and(guard, body));
            }
        }
        throw error("metric_to_rel: corrupt formula");
    }
};

}  // namespace

formula_ptr e2_to_ed(const formula_ptr& f) { return rel_to_metric(f); }

translation_result ed_to_e2(const formula_ptr& f) {
    metric_to_rel tr(f);
    return tr.run(f);
}

}  // namespace geo::xlate
