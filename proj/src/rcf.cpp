#include "geoform/rcf.hpp"

#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "geoform/defs.hpp"

namespace geo::rcf {

namespace {

bool has_angle(const term_ptr& t) {
    if (t->kind == term_kind::angle) return true;
    for (const auto& a : t->args)
        if (has_angle(a)) return true;
    return false;
}

// f_or(less(s,t), eq_num(s,t)), the shape the <= sugar builds; translated as
// one atom so both disjuncts share their length variables.
bool is_le_sugar(const formula_ptr& f) {
    return f->kind == formula_kind::f_or && f->subs[0]->kind == formula_kind::less &&
           f->subs[1]->kind == formula_kind::eq_num &&
           equal(f->subs[0]->terms[0], f->subs[1]->terms[0]) &&
           equal(f->subs[0]->terms[1], f->subs[1]->terms[1]);
}

// Makes every bound variable distinct from every other binding and from the
// free variables, so one flat coordinate namespace works.
formula_ptr rename_apart(const formula_ptr& f, std::set<std::string>& used) {
    switch (f->kind) {
        case formula_kind::f_forall:
        case formula_kind::f_exists: {
            std::string name = fresh_name(f->name, {used.begin(), used.end()});
            used.insert(name);
            formula_ptr body = f->subs[0];
            if (name != f->name) {
                term_ptr repl = f->var_sort == sort::point ? pvar(name) : nvar(name);
                body = substitute(body, {f->name, f->var_sort}, repl);
            }
            body = rename_apart(body, used);
            return f->kind == formula_kind::f_forall ? forall(name, f->var_sort, body)
                                                     : exists(name, f->var_sort, body);
        }
        case formula_kind::f_not:
            return f_not(rename_apart(f->subs[0], used));
        case formula_kind::f_and:
            return f_and(rename_apart(f->subs[0], used), rename_apart(f->subs[1], used));
        case formula_kind::f_or:
            return f_or(rename_apart(f->subs[0], used), rename_apart(f->subs[1], used));
        case formula_kind::f_implies:
            return implies(rename_apart(f->subs[0], used), rename_apart(f->subs[1], used));
        case formula_kind::f_iff:
            return iff(rename_apart(f->subs[0], used), rename_apart(f->subs[1], used));
        default:
            return f;
    }
}

class coordinatizer {
public:
    coordinatizer(int dim) { res_.dim = dim; }

    coordinatization run(const formula_ptr& f) {
        std::set<std::string> used;
        for (const auto& v : free_vars(f)) used.insert(v.name);
        formula_ptr apart = rename_apart(f, used);
        used_ = std::move(used);
        collect_all_names(apart);
        res_.out = go(apart, true);
        return std::move(res_);
    }

private:
    coordinatization res_;
    std::set<std::string> used_;
    int l_counter_ = 0, n_counter_ = 0, c_counter_ = 0;

    void collect_term_names(const term_ptr& t) {
        if (t->kind == term_kind::point_var || t->kind == term_kind::num_var)
            used_.insert(t->name);
        for (const auto& a : t->args) collect_term_names(a);
    }
    void collect_all_names(const formula_ptr& f) {
        if (f->kind == formula_kind::f_forall || f->kind == formula_kind::f_exists)
            used_.insert(f->name);
        for (const auto& t : f->terms) collect_term_names(t);
        for (const auto& s : f->subs) collect_all_names(s);
    }

    std::string claim(const std::string& base) {
        std::string n = fresh_name(base, {used_.begin(), used_.end()});
        used_.insert(n);
        return n;
    }

    const std::vector<std::string>& coords(const std::string& point) {
        auto it = res_.point_coords.find(point);
        if (it != res_.point_coords.end()) return it->second;
        std::vector<std::string> names;
        static const char* axis[3] = {"x_", "y_", "z_"};
        for (int i = 0; i < res_.dim; ++i) {
            std::string base = res_.dim <= 3 ? axis[i] + point
                                             : "c" + std::to_string(i + 1) + "_" + point;
            names.push_back(claim(base));
        }
        return res_.point_coords.emplace(point, std::move(names)).first->second;
    }

    term_ptr coord(const std::string& point, int i) { return nvar(coords(point)[i]); }

    term_ptr diff(const std::string& p, const std::string& q, int i) {
        return add(coord(p, i), neg(coord(q, i)));
    }

    // sum over axes of (p_i - q_i)^2
    term_ptr sq_dist(const std::string& p, const std::string& q) {
        term_ptr sum;
        for (int i = 0; i < res_.dim; ++i) {
            term_ptr d = diff(p, q, i);
            term_ptr sq = mul(d, d);
            sum = sum ? add(sum, sq) : sq;
        }
        return sum;
    }

    term_ptr dot(const std::string& p, const std::string& q, const std::string& v) {
        term_ptr sum;
        for (int i = 0; i < res_.dim; ++i) {
            term_ptr t = mul(diff(p, v, i), diff(q, v, i));
            sum = sum ? add(sum, t) : t;
        }
        return sum;
    }

    struct atom_scope {
        std::vector<std::string> binders;
        std::vector<formula_ptr> constraints;
        std::map<std::pair<std::string, std::string>, term_ptr> dist_cache;
        std::map<std::pair<std::string, std::string>, term_ptr> norm_cache;
        std::map<std::vector<std::string>, term_ptr> cos_cache;
    };

    term_ptr length_var(atom_scope& sc, const std::string& p, const std::string& q) {
        auto key = std::make_pair(p, q);
        auto it = sc.dist_cache.find(key);
        if (it != sc.dist_cache.end()) return it->second;
        std::string name = claim("l" + std::to_string(++l_counter_));
        term_ptr l = nvar(name);
        sc.binders.push_back(name);
        sc.constraints.push_back(leq(num0(), l));
        sc.constraints.push_back(eq_num(mul(l, l), sq_dist(p, q)));
        res_.lengths.push_back({name, p, q});
        sc.dist_cache.emplace(key, l);
        return l;
    }

    term_ptr norm_var(atom_scope& sc, const std::string& p, const std::string& v) {
        auto key = std::make_pair(p, v);
        auto it = sc.norm_cache.find(key);
        if (it != sc.norm_cache.end()) return it->second;
        std::string name = claim("n" + std::to_string(++n_counter_));
        term_ptr n = nvar(name);
        sc.binders.push_back(name);
        sc.constraints.push_back(less(num0(), n));  // nondegenerate ray
        sc.constraints.push_back(eq_num(mul(n, n), sq_dist(p, v)));
        return sc.norm_cache.emplace(key, n).first->second;
    }

    // cosine of the angle p-v-q, pinned by |vp| |vq| cos = (p-v).(q-v)
    term_ptr cos_var(atom_scope& sc, const std::string& p, const std::string& v,
                     const std::string& q) {
        std::vector<std::string> key = {p, v, q};
        auto it = sc.cos_cache.find(key);
        if (it != sc.cos_cache.end()) return it->second;
        term_ptr n1 = norm_var(sc, p, v);
        term_ptr n2 = norm_var(sc, q, v);
        std::string name = claim("cos" + std::to_string(++c_counter_));
        term_ptr c = nvar(name);
        sc.binders.push_back(name);
        sc.constraints.push_back(leq(neg(num1()), c));
        sc.constraints.push_back(leq(c, num1()));
        sc.constraints.push_back(eq_num(mul(mul(n1, n2), c), dot(p, q, v)));
        res_.angles.push_back({name, p, v, q});
        return sc.cos_cache.emplace(key, c).first->second;
    }

    term_ptr rewrite_term(atom_scope& sc, const term_ptr& t) {
        switch (t->kind) {
            case term_kind::dist:
                return length_var(sc, t->args[0]->name, t->args[1]->name);
            case term_kind::angle:
                throw reduction_unsupported(
                    "angle term outside a supported comparison shape");
            case term_kind::add:
                return add(rewrite_term(sc, t->args[0]), rewrite_term(sc, t->args[1]));
            case term_kind::mul:
                return mul(rewrite_term(sc, t->args[0]), rewrite_term(sc, t->args[1]));
            case term_kind::neg:
                return neg(rewrite_term(sc, t->args[0]));
            default:
                return t;
        }
    }

    // Conditions on the cosine for each degree value with an algebraic
    // characterization. Each pair of conditions pins a single value in
    // [-1,1], so the reduction of ang = const is exact.
    formula_ptr cos_condition(unsigned long long degrees, const term_ptr& c) {
        auto two = int_literal(2);
        auto four = int_literal(4);
        auto three = int_literal(3);
        switch (degrees) {
            case 0: return eq_num(c, num1());
            case 30: return f_and(eq_num(mul(four, mul(c, c)), three), less(num0(), c));
            case 45: return f_and(eq_num(mul(two, mul(c, c)), num1()), less(num0(), c));
            case 60: return eq_num(mul(two, c), num1());
            case 90: return eq_num(c, num0());
            case 120: return eq_num(mul(two, c), neg(num1()));
            case 135: return f_and(eq_num(mul(two, mul(c, c)), num1()), less(c, num0()));
            case 150: return f_and(eq_num(mul(four, mul(c, c)), three), less(c, num0()));
            case 180: return eq_num(c, neg(num1()));
            default:
                throw reduction_unsupported(std::to_string(degrees) +
                                            " degrees has no tabulated cosine condition");
        }
    }

    bool angle_const(const term_ptr& t, unsigned long long& degrees) {
        if (t->kind == term_kind::int_lit) return degrees = t->value, true;
        if (t->kind == term_kind::num_zero) return degrees = 0, true;
        if (t->kind == term_kind::num_one) return degrees = 1, true;
        return false;
    }

    formula_ptr angle_atom(atom_scope& sc, const formula_ptr& f) {
        if (f->kind != formula_kind::eq_num)
            throw reduction_unsupported("angle terms only reduce inside equalities");
        const term_ptr &lhs = f->terms[0], &rhs = f->terms[1];
        auto is_ang = [](const term_ptr& t) { return t->kind == term_kind::angle; };
        if (is_ang(lhs) && is_ang(rhs)) {
            term_ptr c1 = cos_var(sc, lhs->args[0]->name, lhs->args[1]->name, lhs->args[2]->name);
            term_ptr c2 = cos_var(sc, rhs->args[0]->name, rhs->args[1]->name, rhs->args[2]->name);
            return eq_num(c1, c2);  // cos is injective on [0, 180]
        }
        for (int flip = 0; flip < 2; ++flip) {
            const term_ptr& a = flip ? rhs : lhs;
            const term_ptr& k = flip ? lhs : rhs;
            unsigned long long degrees = 0;
            if (is_ang(a) && angle_const(k, degrees)) {
                term_ptr c = cos_var(sc, a->args[0]->name, a->args[1]->name, a->args[2]->name);
                return cos_condition(degrees, c);
            }
        }
        throw reduction_unsupported("unsupported angle comparison shape");
    }

    formula_ptr wrap_atom(atom_scope&& sc, formula_ptr atom, bool positive) {
        if (sc.binders.empty()) return atom;
        formula_ptr guard = conj(sc.constraints);
        formula_ptr body = positive ? f_and(guard, atom) : implies(guard, atom);
        for (auto it = sc.binders.rbegin(); it != sc.binders.rend(); ++it)
            body = positive ? exists(*it, sort::number, body)
                            : forall(*it, sort::number, body);
        return body;
    }

    formula_ptr compare_atom(const formula_ptr& f, bool positive) {
        atom_scope sc;
        formula_ptr atom;
        if (is_le_sugar(f)) {
            if (has_angle(f->subs[0]->terms[0]) || has_angle(f->subs[0]->terms[1]))
                throw reduction_unsupported("unsupported angle comparison shape");
            term_ptr l = rewrite_term(sc, f->subs[0]->terms[0]);
            term_ptr r = rewrite_term(sc, f->subs[0]->terms[1]);
            atom = leq(l, r);
        } else if (has_angle(f->terms[0]) || has_angle(f->terms[1])) {
            atom = angle_atom(sc, f);
        } else {
            term_ptr l = rewrite_term(sc, f->terms[0]);
            term_ptr r = rewrite_term(sc, f->terms[1]);
            atom = f->kind == formula_kind::eq_num ? eq_num(l, r) : less(l, r);
        }
        return wrap_atom(std::move(sc), atom, positive);
    }

    formula_ptr point_eq(const formula_ptr& f) {
        const std::string& p = f->terms[0]->name;
        const std::string& q = f->terms[1]->name;
        std::vector<formula_ptr> parts;
        for (int i = 0; i < res_.dim; ++i) parts.push_back(eq_num(coord(p, i), coord(q, i)));
        return conj(parts);
    }

    formula_ptr go(const formula_ptr& f, bool positive) {
        switch (f->kind) {
            case formula_kind::eq_point:
                return point_eq(f);
            case formula_kind::eq_num:
            case formula_kind::less:
                return compare_atom(f, positive);
            case formula_kind::f_not:
                return f_not(go(f->subs[0], !positive));
            case formula_kind::f_or:
                if (is_le_sugar(f)) return compare_atom(f, positive);
                return f_or(go(f->subs[0], positive), go(f->subs[1], positive));
            case formula_kind::f_and:
                return f_and(go(f->subs[0], positive), go(f->subs[1], positive));
            case formula_kind::f_implies:
                return implies(go(f->subs[0], !positive), go(f->subs[1], positive));
            case formula_kind::f_iff:
                return f_and(go(implies(f->subs[0], f->subs[1]), positive),
                             go(implies(f->subs[1], f->subs[0]), positive));
            case formula_kind::f_forall:
            case formula_kind::f_exists: {
                bool uni = f->kind == formula_kind::f_forall;
                formula_ptr body = go(f->subs[0], positive);
                if (f->var_sort == sort::number)
                    return uni ? forall(f->name, sort::number, body)
                               : exists(f->name, sort::number, body);
                const auto names = coords(f->name);
                for (auto it = names.rbegin(); it != names.rend(); ++it)
                    body = uni ? forall(*it, sort::number, body)
                               : exists(*it, sort::number, body);
                return body;
            }
            case formula_kind::tarski_b:
            case formula_kind::tarski_d:
                throw reduction_unsupported("relational primitives: translate to metric first");
            case formula_kind::defined:
                throw error("coordinatize: defined atom survived expansion");
        }
        throw error("coordinatize: corrupt formula");
    }
};

}  // namespace

coordinatization coordinatize(const formula_ptr& f, language lang, int dim) {
    if (dim < 1) throw error("coordinatize: dimension must be positive");
    formula_ptr expanded = defs::expand(f, lang, defs::expand_depth::full);
    coordinatizer c(dim);
    return c.run(expanded);
}

// ---------------------------------------------------------------------------
// exact evaluation

rational eval_exact_term(const term_ptr& t, const std::map<std::string, rational>& env) {
    switch (t->kind) {
        case term_kind::num_var: {
            auto it = env.find(t->name);
            if (it == env.end()) throw unbound_variable(t->name + " has no exact value");
            return it->second;
        }
        case term_kind::num_zero:
            return rational(0);
        case term_kind::num_one:
            return rational(1);
        case term_kind::int_lit:
            return rational(t->value);
        case term_kind::add:
            return eval_exact_term(t->args[0], env) + eval_exact_term(t->args[1], env);
        case term_kind::mul:
            return eval_exact_term(t->args[0], env) * eval_exact_term(t->args[1], env);
        case term_kind::neg:
            return -eval_exact_term(t->args[0], env);
        default:
            throw error("eval_exact_term: non-arithmetic term (coordinatize first)");
    }
}

bool eval_exact(const formula_ptr& f, const std::map<std::string, rational>& env) {
    switch (f->kind) {
        case formula_kind::eq_num:
            return eval_exact_term(f->terms[0], env) == eval_exact_term(f->terms[1], env);
        case formula_kind::less:
            return eval_exact_term(f->terms[0], env) < eval_exact_term(f->terms[1], env);
        case formula_kind::f_not:
            return !eval_exact(f->subs[0], env);
        case formula_kind::f_and:
            return eval_exact(f->subs[0], env) && eval_exact(f->subs[1], env);
        case formula_kind::f_or:
            return eval_exact(f->subs[0], env) || eval_exact(f->subs[1], env);
        case formula_kind::f_implies:
            return !eval_exact(f->subs[0], env) || eval_exact(f->subs[1], env);
        case formula_kind::f_iff:
            return eval_exact(f->subs[0], env) == eval_exact(f->subs[1], env);
        default:
            throw error("eval_exact: expected a quantifier-free arithmetic formula");
    }
}

// ---------------------------------------------------------------------------
// solver interface

namespace {

void emit_term(std::ostringstream& os, const term_ptr& t) {
    switch (t->kind) {
        case term_kind::num_var:
            os << t->name;
            return;
        case term_kind::num_zero:
            os << "0";
            return;
        case term_kind::num_one:
            os << "1";
            return;
        case term_kind::int_lit:
            os << t->value;
            return;
        case term_kind::add:
            os << "(+ ";
            emit_term(os, t->args[0]);
            os << " ";
            emit_term(os, t->args[1]);
            os << ")";
            return;
        case term_kind::mul:
            os << "(* ";
            emit_term(os, t->args[0]);
            os << " ";
            emit_term(os, t->args[1]);
            os << ")";
            return;
        case term_kind::neg:
            os << "(- ";
            emit_term(os, t->args[0]);
            os << ")";
            return;
        default:
            throw error("emit_solver: non-arithmetic term (coordinatize first)");
    }
}

void emit_formula(std::ostringstream& os, const formula_ptr& f) {
    auto binary = [&](const char* op) {
        os << "(" << op << " ";
        emit_formula(os, f->subs[0]);
        os << " ";
        emit_formula(os, f->subs[1]);
        os << ")";
    };
    switch (f->kind) {
        case formula_kind::eq_num:
            os << "(= ";
            emit_term(os, f->terms[0]);
            os << " ";
            emit_term(os, f->terms[1]);
            os << ")";
            return;
        case formula_kind::less:
            os << "(< ";
            emit_term(os, f->terms[0]);
            os << " ";
            emit_term(os, f->terms[1]);
            os << ")";
            return;
        case formula_kind::f_not:
            os << "(not ";
            emit_formula(os, f->subs[0]);
            os << ")";
            return;
        case formula_kind::f_and:
            binary("and");
            return;
        case formula_kind::f_or:
            if (is_le_sugar(f)) {
                os << "(<= ";
                emit_term(os, f->subs[0]->terms[0]);
                os << " ";
                emit_term(os, f->subs[0]->terms[1]);
                os << ")";
                return;
            }
            binary("or");
            return;
        case formula_kind::f_implies:
            binary("=>");
            return;
        case formula_kind::f_iff:
            binary("=");
            return;
        case formula_kind::f_forall:
        case formula_kind::f_exists:
            os << (f->kind == formula_kind::f_forall ? "(forall ((" : "(exists ((") << f->name
               << " Real)) ";
            emit_formula(os, f->subs[0]);
            os << ")";
            return;
        default:
            throw error("emit_solver: expected an arithmetic formula (coordinatize first)");
    }
}

}  // namespace

std::string emit_solver(const formula_ptr& sentence) {
    std::ostringstream os;
    os << "(set-logic NRA)\n";
    for (const auto& v : free_vars(sentence)) {
        if (v.s != sort::number)
            throw error("emit_solver: free point variable " + v.name);
        os << "(declare-fun " << v.name << " () Real)\n";
    }
    os << "(assert (not ";
    emit_formula(os, sentence);
    os << "))\n(check-sat)\n";
    return os.str();
}

solver_verdict solve_external(const std::string& smt, const solver_options& opt) {
    if (opt.command.empty()) return solver_verdict::unavailable;

    char path[] = "/tmp/geoform_query_XXXXXX";
    int fd = mkstemp(path);
    if (fd < 0) return solver_verdict::unknown;
    {
        FILE* out = fdopen(fd, "w");
        if (!out) {
            close(fd);
            unlink(path);
            return solver_verdict::unknown;
        }
        fputs(smt.c_str(), out);
        fclose(out);
    }

    std::string cmd = "timeout " + std::to_string(opt.timeout_sec) + " " + opt.command + " " +
                      path + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        unlink(path);
        return solver_verdict::unknown;
    }
    std::string output;
    char buf[256];
    while (fgets(buf, sizeof buf, pipe)) output += buf;
    int status = pclose(pipe);
    unlink(path);

    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (code == 127 || code == 126) return solver_verdict::unavailable;
    if (output.rfind("unsat", 0) == 0) return solver_verdict::valid;
    if (output.rfind("sat", 0) == 0) return solver_verdict::invalid;
    return solver_verdict::unknown;  // timeout, "unknown", or noise
}

std::string to_string(solver_verdict v) {
    switch (v) {
        case solver_verdict::valid: return "valid";
        case solver_verdict::invalid: return "invalid";
        case solver_verdict::unknown: return "unknown";
        case solver_verdict::unavailable: return "unavailable";
    }
    return "?";
}

}  // namespace geo::rcf
