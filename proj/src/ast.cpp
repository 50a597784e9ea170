#include "geoform/ast.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace geo {

namespace {

term_ptr mk_term(term_kind k, std::string name, unsigned long long value,
                 std::vector<term_ptr> args) {
    auto t = std::make_shared<term>();
    t->kind = k;
    t->name = std::move(name);
    t->value = value;
    t->args = std::move(args);
    return t;
}

formula_ptr mk_formula(formula_kind k, std::string name, sort vs,
                       std::vector<term_ptr> terms, std::vector<formula_ptr> subs) {
    auto f = std::make_shared<formula>();
    f->kind = k;
    f->name = std::move(name);
    f->var_sort = vs;
    f->terms = std::move(terms);
    f->subs = std::move(subs);
    return f;
}

void require_sort(const term_ptr& t, sort s, const char* where) {
    if (t->result_sort() != s)
        throw sort_mismatch(std::string(where) + ": expected " + sort_name(s) + "-sorted argument");
}

}  // namespace

term_ptr pvar(std::string name) { return mk_term(term_kind::point_var, std::move(name), 0, {}); }
term_ptr nvar(std::string name) { return mk_term(term_kind::num_var, std::move(name), 0, {}); }
term_ptr num0() { return mk_term(term_kind::num_zero, "", 0, {}); }
term_ptr num1() { return mk_term(term_kind::num_one, "", 0, {}); }

term_ptr add(term_ptr a, term_ptr b) {
    require_sort(a, sort::number, "add");
    require_sort(b, sort::number, "add");
    return mk_term(term_kind::add, "", 0, {std::move(a), std::move(b)});
}

term_ptr mul(term_ptr a, term_ptr b) {
    require_sort(a, sort::number, "mul");
    require_sort(b, sort::number, "mul");
    return mk_term(term_kind::mul, "", 0, {std::move(a), std::move(b)});
}

term_ptr neg(term_ptr a) {
    require_sort(a, sort::number, "neg");
    return mk_term(term_kind::neg, "", 0, {std::move(a)});
}

term_ptr dist(term_ptr p, term_ptr q) {
    require_sort(p, sort::point, "dist");
    require_sort(q, sort::point, "dist");
    return mk_term(term_kind::dist, "", 0, {std::move(p), std::move(q)});
}

term_ptr angle(term_ptr p, term_ptr v, term_ptr q) {
    require_sort(p, sort::point, "angle");
    require_sort(v, sort::point, "angle");
    require_sort(q, sort::point, "angle");
    return mk_term(term_kind::angle, "", 0, {std::move(p), std::move(v), std::move(q)});
}

term_ptr int_literal(long long n) {
    if (n < 0) throw negative_literal("int_literal: negative value " + std::to_string(n));
    if (n == 0) return num0();
    if (n == 1) return num1();
    return mk_term(term_kind::int_lit, "", static_cast<unsigned long long>(n), {});
}

formula_ptr eq_point(term_ptr p, term_ptr q) {
    require_sort(p, sort::point, "eq_point");
    require_sort(q, sort::point, "eq_point");
    return mk_formula(formula_kind::eq_point, "", sort::point, {std::move(p), std::move(q)}, {});
}

formula_ptr eq_num(term_ptr s, term_ptr t) {
    require_sort(s, sort::number, "eq_num");
    require_sort(t, sort::number, "eq_num");
    return mk_formula(formula_kind::eq_num, "", sort::point, {std::move(s), std::move(t)}, {});
}

formula_ptr less(term_ptr s, term_ptr t) {
    require_sort(s, sort::number, "less");
    require_sort(t, sort::number, "less");
    return mk_formula(formula_kind::less, "", sort::point, {std::move(s), std::move(t)}, {});
}

formula_ptr leq(term_ptr s, term_ptr t) { return f_or(less(s, t), eq_num(s, t)); }

formula_ptr tarski_b(term_ptr a, term_ptr b, term_ptr c) {
    require_sort(a, sort::point, "tarski_b");
    require_sort(b, sort::point, "tarski_b");
    require_sort(c, sort::point, "tarski_b");
    return mk_formula(formula_kind::tarski_b, "", sort::point,
                      {std::move(a), std::move(b), std::move(c)}, {});
}

formula_ptr tarski_d(term_ptr p, term_ptr q, term_ptr u, term_ptr v) {
    require_sort(p, sort::point, "tarski_d");
    require_sort(q, sort::point, "tarski_d");
    require_sort(u, sort::point, "tarski_d");
    require_sort(v, sort::point, "tarski_d");
    return mk_formula(formula_kind::tarski_d, "", sort::point,
                      {std::move(p), std::move(q), std::move(u), std::move(v)}, {});
}

formula_ptr datom(std::string name, std::vector<term_ptr> args) {
    for (const auto& a : args) require_sort(a, sort::point, "defined atom");
    return mk_formula(formula_kind::defined, std::move(name), sort::point, std::move(args), {});
}

formula_ptr f_not(formula_ptr a) {
    return mk_formula(formula_kind::f_not, "", sort::point, {}, {std::move(a)});
}

formula_ptr f_and(formula_ptr a, formula_ptr b) {
    return mk_formula(formula_kind::f_and, "", sort::point, {}, {std::move(a), std::move(b)});
}

formula_ptr f_or(formula_ptr a, formula_ptr b) {
    return mk_formula(formula_kind::f_or, "", sort::point, {}, {std::move(a), std::move(b)});
}

formula_ptr implies(formula_ptr a, formula_ptr b) {
    return mk_formula(formula_kind::f_implies, "", sort::point, {}, {std::move(a), std::move(b)});
}

formula_ptr iff(formula_ptr a, formula_ptr b) {
    return mk_formula(formula_kind::f_iff, "", sort::point, {}, {std::move(a), std::move(b)});
}

formula_ptr forall(std::string var, sort s, formula_ptr body) {
    return mk_formula(formula_kind::f_forall, std::move(var), s, {}, {std::move(body)});
}

formula_ptr exists(std::string var, sort s, formula_ptr body) {
    return mk_formula(formula_kind::f_exists, std::move(var), s, {}, {std::move(body)});
}

formula_ptr neq(term_ptr a, term_ptr b) {
    if (a->result_sort() == sort::point) return f_not(eq_point(std::move(a), std::move(b)));
    return f_not(eq_num(std::move(a), std::move(b)));
}

formula_ptr conj(const std::vector<formula_ptr>& fs) {
    if (fs.empty()) throw error("conj: empty conjunction");
    formula_ptr r = fs.back();
    for (std::size_t i = fs.size() - 1; i-- > 0;) r = f_and(fs[i], r);
    return r;
}

formula_ptr disj(const std::vector<formula_ptr>& fs) {
    if (fs.empty()) throw error("disj: empty disjunction");
    formula_ptr r = fs.back();
    for (std::size_t i = fs.size() - 1; i-- > 0;) r = f_or(fs[i], r);
    return r;
}

// ---------------------------------------------------------------------------
// equality

bool equal(const term_ptr& a, const term_ptr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind || a->name != b->name || a->value != b->value) return false;
    if (a->args.size() != b->args.size()) return false;
    for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!equal(a->args[i], b->args[i])) return false;
    return true;
}

bool equal(const formula_ptr& a, const formula_ptr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind || a->name != b->name) return false;
    if ((a->kind == formula_kind::f_forall || a->kind == formula_kind::f_exists) &&
        a->var_sort != b->var_sort)
        return false;
    if (a->terms.size() != b->terms.size() || a->subs.size() != b->subs.size()) return false;
    for (std::size_t i = 0; i < a->terms.size(); ++i)
        if (!equal(a->terms[i], b->terms[i])) return false;
    for (std::size_t i = 0; i < a->subs.size(); ++i)
        if (!equal(a->subs[i], b->subs[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// free variables

namespace {

void collect_free_terms(const term_ptr& t, const std::set<var_decl>& bound,
                        std::set<var_decl>& out) {
    if (t->kind == term_kind::point_var || t->kind == term_kind::num_var) {
        var_decl v{t->name, t->result_sort()};
        if (!bound.count(v)) out.insert(v);
        return;
    }
    for (const auto& a : t->args) collect_free_terms(a, bound, out);
}

void collect_free(const formula_ptr& f, std::set<var_decl> bound, std::set<var_decl>& out) {
    if (f->kind == formula_kind::f_forall || f->kind == formula_kind::f_exists) {
        bound.insert({f->name, f->var_sort});
        collect_free(f->subs[0], bound, out);
        return;
    }
    for (const auto& t : f->terms) collect_free_terms(t, bound, out);
    for (const auto& s : f->subs) collect_free(s, bound, out);
}

}  // namespace

std::vector<var_decl> free_vars(const formula_ptr& f) {
    std::set<var_decl> out;
    collect_free(f, {}, out);
    return {out.begin(), out.end()};
}

std::vector<var_decl> free_vars(const term_ptr& t) {
    std::set<var_decl> out;
    collect_free_terms(t, {}, out);
    return {out.begin(), out.end()};
}

std::string fresh_name(const std::string& base, const std::vector<std::string>& used) {
    auto taken = [&](const std::string& n) {
        return std::find(used.begin(), used.end(), n) != used.end();
    };
    if (!taken(base)) return base;
    for (unsigned long long i = 1;; ++i) {
        std::string cand = base + std::to_string(i);
        if (!taken(cand)) return cand;
    }
}

// ---------------------------------------------------------------------------
// substitution

namespace {

term_ptr subst_term(const term_ptr& t, const var_decl& var, const term_ptr& repl) {
    if (t->kind == term_kind::point_var || t->kind == term_kind::num_var) {
        if (t->name == var.name && t->result_sort() == var.s) return repl;
        return t;
    }
    if (t->args.empty()) return t;
    std::vector<term_ptr> args;
    args.reserve(t->args.size());
    bool changed = false;
    for (const auto& a : t->args) {
        auto na = subst_term(a, var, repl);
        changed = changed || na.get() != a.get();
        args.push_back(std::move(na));
    }
    if (!changed) return t;
    return mk_term(t->kind, t->name, t->value, std::move(args));
}

formula_ptr subst_formula(const formula_ptr& f, const var_decl& var, const term_ptr& repl,
                          const std::vector<var_decl>& repl_free) {
    if (f->kind == formula_kind::f_forall || f->kind == formula_kind::f_exists) {
        var_decl bv{f->name, f->var_sort};
        if (bv == var) return f;  // shadowed, nothing free below
        bool would_capture = std::find(repl_free.begin(), repl_free.end(), bv) != repl_free.end();
        formula_ptr body = f->subs[0];
        std::string bound_name = f->name;
        if (would_capture) {
            // Renaming is only warranted when the substituted variable in fact
            // occurs below; otherwise the whole subtree is untouched.
            auto body_free = free_vars(body);
            if (std::find(body_free.begin(), body_free.end(), var) == body_free.end()) return f;
            std::vector<std::string> used;
            for (const auto& v : body_free) used.push_back(v.name);
            for (const auto& v : repl_free) used.push_back(v.name);
            used.push_back(var.name);
            bound_name = fresh_name(f->name, used);
            body = subst_formula(body, bv, bv.s == sort::point ? pvar(bound_name) : nvar(bound_name),
                                 {{bound_name, bv.s}});
        }
        auto nb = subst_formula(body, var, repl, repl_free);
        if (nb.get() == body.get() && bound_name == f->name) return f;
        return mk_formula(f->kind, bound_name, f->var_sort, {}, {std::move(nb)});
    }
    std::vector<term_ptr> terms;
    std::vector<formula_ptr> subs;
    bool changed = false;
    terms.reserve(f->terms.size());
    for (const auto& t : f->terms) {
        auto nt = subst_term(t, var, repl);
        changed = changed || nt.get() != t.get();
        terms.push_back(std::move(nt));
    }
    subs.reserve(f->subs.size());
    for (const auto& s : f->subs) {
        auto ns = subst_formula(s, var, repl, repl_free);
        changed = changed || ns.get() != s.get();
        subs.push_back(std::move(ns));
    }
    if (!changed) return f;
    return mk_formula(f->kind, f->name, f->var_sort, std::move(terms), std::move(subs));
}

}  // namespace

formula_ptr substitute(const formula_ptr& f, const var_decl& var, const term_ptr& replacement) {
    if (replacement->result_sort() != var.s)
        throw sort_mismatch("substitute: replacement for " + var.name + " has wrong sort");
    return subst_formula(f, var, replacement, free_vars(replacement));
}

// ---------------------------------------------------------------------------
// well-sortedness

namespace {

struct sort_checker {
    language lang;
    const definition_view* defs;
    std::vector<sort_diag> diags;

    void bad(const std::string& path, std::string msg) { diags.push_back({path, std::move(msg)}); }

    void check_term(const term_ptr& t, const std::string& path,
                    std::map<std::string, sort>& env) {
        switch (t->kind) {
        case term_kind::point_var:
        case term_kind::num_var: {
            auto it = env.find(t->name);
            if (it != env.end() && it->second != t->result_sort())
                bad(path, "variable " + t->name + " used as " + sort_name(t->result_sort()) +
                              " but bound/used as " + sort_name(it->second));
            else if (it == env.end())
                env.emplace(t->name, t->result_sort());  // free var, pin its sort
            break;
        }
        case term_kind::num_zero:
        case term_kind::num_one:
        case term_kind::int_lit:
            break;
        case term_kind::add:
        case term_kind::mul:
        case term_kind::neg:
            for (std::size_t i = 0; i < t->args.size(); ++i)
                check_term(t->args[i], path + ".arg" + std::to_string(i), env);
            break;
        case term_kind::dist:
            if (!has_numbers(lang)) bad(path, "distance term outside Ed/Eda");
            for (std::size_t i = 0; i < t->args.size(); ++i)
                check_term(t->args[i], path + ".arg" + std::to_string(i), env);
            break;
        case term_kind::angle:
            if (!has_angles(lang)) bad(path, "angle term outside Eda");
            for (std::size_t i = 0; i < t->args.size(); ++i)
                check_term(t->args[i], path + ".arg" + std::to_string(i), env);
            break;
        }
        if (t->result_sort() == sort::number && !has_numbers(lang) &&
            t->kind != term_kind::point_var)
            bad(path, "number-sorted term in E2");
    }

    void check(const formula_ptr& f, const std::string& path, std::map<std::string, sort> env) {
        switch (f->kind) {
        case formula_kind::eq_point:
        case formula_kind::eq_num:
        case formula_kind::less:
            if ((f->kind != formula_kind::eq_point) && !has_numbers(lang))
                bad(path, "number comparison in E2");
            for (std::size_t i = 0; i < f->terms.size(); ++i)
                check_term(f->terms[i], path + ".arg" + std::to_string(i), env);
            break;
        case formula_kind::tarski_b:
        case formula_kind::tarski_d:
            if (lang != language::e2)
                bad(path, "Tarski primitive outside E2");
            for (std::size_t i = 0; i < f->terms.size(); ++i)
                check_term(f->terms[i], path + ".arg" + std::to_string(i), env);
            break;
        case formula_kind::defined:
            if (defs) {
                if (!defs->known(f->name))
                    bad(path, "unknown defined atom " + f->name);
                else {
                    if (defs->arity(f->name) != f->terms.size())
                        bad(path, f->name + " expects " + std::to_string(defs->arity(f->name)) +
                                      " arguments, got " + std::to_string(f->terms.size()));
                    if (!defs->available_in(f->name, lang))
                        bad(path, f->name + " is not available in " + language_name(lang));
                }
            }
            for (std::size_t i = 0; i < f->terms.size(); ++i)
                check_term(f->terms[i], path + ".arg" + std::to_string(i), env);
            break;
        case formula_kind::f_not:
        case formula_kind::f_and:
        case formula_kind::f_or:
        case formula_kind::f_implies:
        case formula_kind::f_iff:
            for (std::size_t i = 0; i < f->subs.size(); ++i)
                check(f->subs[i], path + ".sub" + std::to_string(i), env);
            break;
        case formula_kind::f_forall:
        case formula_kind::f_exists:
            if (f->var_sort == sort::number && !has_numbers(lang))
                bad(path, "number quantifier in E2");
            env[f->name] = f->var_sort;
            check(f->subs[0], path + ".body", env);
            break;
        }
    }
};

}  // namespace

std::vector<sort_diag> well_sorted(const formula_ptr& f, language lang,
                                   const definition_view* defs) {
    sort_checker c{lang, defs, {}};
    c.check(f, "f", {});
    return c.diags;
}

// ---------------------------------------------------------------------------
// prenex normal form

namespace {

formula_ptr unfold_iff(const formula_ptr& f) {
    if (f->subs.empty()) return f;
    std::vector<formula_ptr> subs;
    bool changed = false;
    subs.reserve(f->subs.size());
    for (const auto& s : f->subs) {
        auto ns = unfold_iff(s);
        changed = changed || ns.get() != s.get();
        subs.push_back(std::move(ns));
    }
    if (f->kind == formula_kind::f_iff)
        return f_and(implies(subs[0], subs[1]), implies(subs[1], subs[0]));
    if (!changed) return f;
    return mk_formula(f->kind, f->name, f->var_sort, f->terms, std::move(subs));
}

struct pulled {
    std::vector<prefix_entry> prefix;
    formula_ptr matrix;
};

// Pulls quantifiers of `f` into a prefix, renaming bound variables that clash
// with `used`. Prefix order follows the left-to-right appearance of the
// quantifiers in the source.
pulled pull(const formula_ptr& f, std::vector<std::string>& used) {
    switch (f->kind) {
    case formula_kind::f_forall:
    case formula_kind::f_exists: {
        var_decl bv{f->name, f->var_sort};
        formula_ptr body = f->subs[0];
        std::string name = f->name;
        if (std::find(used.begin(), used.end(), name) != used.end()) {
            name = fresh_name(f->name, used);
            body = substitute(body, bv, bv.s == sort::point ? pvar(name) : nvar(name));
        }
        used.push_back(name);
        auto inner = pull(body, used);
        inner.prefix.insert(inner.prefix.begin(),
                            {f->kind == formula_kind::f_forall, name, f->var_sort});
        return inner;
    }
    case formula_kind::f_not: {
        auto inner = pull(f->subs[0], used);
        for (auto& e : inner.prefix) e.universal = !e.universal;
        inner.matrix = f_not(inner.matrix);
        return inner;
    }
    case formula_kind::f_and:
    case formula_kind::f_or:
    case formula_kind::f_implies: {
        auto left = pull(f->subs[0], used);
        if (f->kind == formula_kind::f_implies)
            for (auto& e : left.prefix) e.universal = !e.universal;
        auto right = pull(f->subs[1], used);
        pulled out;
        out.prefix = std::move(left.prefix);
        out.prefix.insert(out.prefix.end(), right.prefix.begin(), right.prefix.end());
        out.matrix = mk_formula(f->kind, "", sort::point, {},
                                {std::move(left.matrix), std::move(right.matrix)});
        return out;
    }
    default:
        return {{}, f};
    }
}

}  // namespace

formula_ptr prenex(const formula_ptr& f) {
    auto g = unfold_iff(f);
    std::vector<std::string> used;
    for (const auto& v : free_vars(g)) used.push_back(v.name);
    auto p = pull(g, used);
    formula_ptr out = p.matrix;
    for (std::size_t i = p.prefix.size(); i-- > 0;) {
        const auto& e = p.prefix[i];
        out = mk_formula(e.universal ? formula_kind::f_forall : formula_kind::f_exists, e.name,
                         e.s, {}, {std::move(out)});
    }
    return out;
}

void split_prefix(const formula_ptr& f, std::vector<prefix_entry>& prefix, formula_ptr& matrix) {
    prefix.clear();
    formula_ptr cur = f;
    while (cur->kind == formula_kind::f_forall || cur->kind == formula_kind::f_exists) {
        prefix.push_back({cur->kind == formula_kind::f_forall, cur->name, cur->var_sort});
        cur = cur->subs[0];
    }
    matrix = cur;
}

bool is_quantifier_free(const formula_ptr& f) {
    if (f->kind == formula_kind::f_forall || f->kind == formula_kind::f_exists) return false;
    for (const auto& s : f->subs)
        if (!is_quantifier_free(s)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// literal lowering, node counting

term_ptr expand_literals(const term_ptr& t) {
    if (t->kind == term_kind::int_lit) {
        term_ptr r = num1();
        for (unsigned long long i = 1; i < t->value; ++i) r = add(r, num1());
        return r;
    }
    if (t->args.empty()) return t;
    std::vector<term_ptr> args;
    bool changed = false;
    args.reserve(t->args.size());
    for (const auto& a : t->args) {
        auto na = expand_literals(a);
        changed = changed || na.get() != a.get();
        args.push_back(std::move(na));
    }
    if (!changed) return t;
    return mk_term(t->kind, t->name, t->value, std::move(args));
}

formula_ptr expand_literals(const formula_ptr& f) {
    std::vector<term_ptr> terms;
    std::vector<formula_ptr> subs;
    bool changed = false;
    terms.reserve(f->terms.size());
    for (const auto& t : f->terms) {
        auto nt = expand_literals(t);
        changed = changed || nt.get() != t.get();
        terms.push_back(std::move(nt));
    }
    subs.reserve(f->subs.size());
    for (const auto& s : f->subs) {
        auto ns = expand_literals(s);
        changed = changed || ns.get() != s.get();
        subs.push_back(std::move(ns));
    }
    if (!changed) return f;
    return mk_formula(f->kind, f->name, f->var_sort, std::move(terms), std::move(subs));
}

std::size_t node_count(const term_ptr& t) {
    std::size_t n = 1;
    for (const auto& a : t->args) n += node_count(a);
    return n;
}

std::size_t node_count(const formula_ptr& f) {
    std::size_t n = 1;
    for (const auto& t : f->terms) n += node_count(t);
    for (const auto& s : f->subs) n += node_count(s);
    return n;
}

}  // namespace geo
