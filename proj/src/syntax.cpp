#include "geoform/syntax.hpp"

#include <cctype>
#include <sstream>

namespace geo::syntax {

namespace {

// ---------------------------------------------------------------------------
// lexer

enum class tok : std::uint8_t {
    ident, integer,
    lparen, rparen, comma, dot, colon,
    tilde, amp, pipe, arrow, iff_arrow,
    eqeq, eq, lt, le, plus, star, minus,
    kw_forall, kw_exists,
    end,
};

struct token {
    tok kind;
    std::string text;
    int line, col;
};

struct lex_error {
    diagnostic d;
};

std::vector<token> lex(const std::string& src) {
    std::vector<token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](tok k, std::string t, int l, int c) { out.push_back({k, std::move(t), l, c}); };
    while (i < src.size()) {
        char c = src[i];
        if (c == '\n') { ++line; col = 1; ++i; continue; }
        if (c == ' ' || c == '\t' || c == '\r') { ++col; ++i; continue; }
        if (c == '#') {  // comment to end of line
            while (i < src.size() && src[i] != '\n') { ++i; ++col; }
            continue;
        }
        int tl = line, tc = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            std::string word = src.substr(i, j - i);
            col += static_cast<int>(j - i);
            i = j;
            if (word == "forall") push(tok::kw_forall, word, tl, tc);
            else if (word == "exists") push(tok::kw_exists, word, tl, tc);
            else push(tok::ident, word, tl, tc);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            push(tok::integer, src.substr(i, j - i), tl, tc);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        auto two = [&](char a, char b) {
            return c == a && i + 1 < src.size() && src[i + 1] == b;
        };
        if (c == '<' && i + 2 < src.size() && src[i + 1] == '-' && src[i + 2] == '>') {
            push(tok::iff_arrow, "<->", tl, tc); i += 3; col += 3; continue;
        }
        if (two('-', '>')) { push(tok::arrow, "->", tl, tc); i += 2; col += 2; continue; }
        if (two('<', '=')) { push(tok::le, "<=", tl, tc); i += 2; col += 2; continue; }
        if (two('=', '=')) { push(tok::eqeq, "==", tl, tc); i += 2; col += 2; continue; }
        switch (c) {
        case '(': push(tok::lparen, "(", tl, tc); break;
        case ')': push(tok::rparen, ")", tl, tc); break;
        case ',': push(tok::comma, ",", tl, tc); break;
        case '.': push(tok::dot, ".", tl, tc); break;
        case ':': push(tok::colon, ":", tl, tc); break;
        case '~': push(tok::tilde, "~", tl, tc); break;
        case '&': push(tok::amp, "&", tl, tc); break;
        case '|': push(tok::pipe, "|", tl, tc); break;
        case '=': push(tok::eq, "=", tl, tc); break;
        case '<': push(tok::lt, "<", tl, tc); break;
        case '+': push(tok::plus, "+", tl, tc); break;
        case '*': push(tok::star, "*", tl, tc); break;
        case '-': push(tok::minus, "-", tl, tc); break;
        default:
            throw lex_error{{tl, tc, std::string("unexpected character '") + c + "'"}};
        }
        ++i; ++col;
    }
    int el = line, ec = col;
    out.push_back({tok::end, "", el, ec});
    return out;
}

// ---------------------------------------------------------------------------
// parser (recursive descent with backtracking at '(' and at comparisons)

struct parse_abort {
    diagnostic d;
};

class parser {
public:
    parser(std::vector<token> toks, const definition_view* defs)
        : toks_(std::move(toks)), defs_(defs) {}

    formula_ptr run() {
        auto f = parse_formula();
        expect(tok::end, "trailing input after sentence");
        return f;
    }

private:
    std::vector<token> toks_;
    const definition_view* defs_;
    std::size_t pos_ = 0;

    const token& cur() const { return toks_[pos_]; }
    const token& peek(std::size_t k = 1) const {
        return toks_[std::min(pos_ + k, toks_.size() - 1)];
    }
    bool at(tok k) const { return cur().kind == k; }
    token take() { return toks_[pos_++]; }
    bool accept(tok k) {
        if (!at(k)) return false;
        ++pos_;
        return true;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_abort{{cur().line, cur().col, msg}};
    }
    void expect(tok k, const std::string& msg) {
        if (!accept(k)) fail(msg);
    }

    // formula := iff
    formula_ptr parse_formula() { return parse_iff(); }

    formula_ptr parse_iff() {
        auto l = parse_implies();
        if (accept(tok::iff_arrow)) return iff(l, parse_iff());
        return l;
    }

    formula_ptr parse_implies() {
        auto l = parse_or();
        if (accept(tok::arrow)) return implies(l, parse_implies());
        return l;
    }

    formula_ptr parse_or() {
        auto l = parse_and();
        if (accept(tok::pipe)) return f_or(l, parse_or());
        return l;
    }

    formula_ptr parse_and() {
        auto l = parse_unary();
        if (accept(tok::amp)) return f_and(l, parse_and());
        return l;
    }

    formula_ptr parse_unary() {
        if (accept(tok::tilde)) return f_not(parse_unary());
        if (at(tok::kw_forall) || at(tok::kw_exists)) {
            bool uni = take().kind == tok::kw_forall;
            if (!at(tok::ident)) fail("expected variable name after quantifier");
            std::string name = take().text;
            expect(tok::colon, "expected ':' and a sort (P or N) after quantified variable");
            if (!at(tok::ident) || (cur().text != "P" && cur().text != "N"))
                fail("expected sort P or N");
            sort s = take().text == "P" ? sort::point : sort::number;
            expect(tok::dot, "expected '.' after quantifier binding");
            auto body = parse_formula();
            return uni ? forall(name, s, body) : exists(name, s, body);
        }
        return parse_atom();
    }

    // A '(' can open either a bracketed formula or a bracketed number term.
    // Try the formula route first and fall back to a comparison whose left
    // operand starts with the parenthesis.
    formula_ptr parse_atom() {
        if (at(tok::lparen)) {
            std::size_t snap = pos_;
            ++pos_;
            try {
                auto f = parse_formula();
                expect(tok::rparen, "expected ')'");
                // If a term operator follows, this was a term parenthesis.
                if (at(tok::plus) || at(tok::star) || at(tok::minus) || at(tok::eq) ||
                    at(tok::lt) || at(tok::le))
                    throw parse_abort{{cur().line, cur().col, "term context"}};
                return f;
            } catch (const parse_abort&) {
                pos_ = snap;
                return parse_comparison();
            }
        }
        // point equality fast path: IDENT == IDENT
        if (at(tok::ident) && peek().kind == tok::eqeq) {
            auto l = pvar(take().text);
            take();  // ==
            if (!at(tok::ident)) fail("expected a point variable after '=='");
            return eq_point(l, pvar(take().text));
        }
        // named atoms: B(...), D(...), registered defined atoms
        if (at(tok::ident) && peek().kind == tok::lparen) {
            const std::string& name = cur().text;
            if (name != "d" && name != "ang") return parse_named_atom();
        }
        return parse_comparison();
    }

    formula_ptr parse_named_atom() {
        token nm = take();
        expect(tok::lparen, "expected '('");
        std::vector<term_ptr> args;
        if (!at(tok::rparen)) {
            for (;;) {
                if (!at(tok::ident)) fail("expected a point variable");
                args.push_back(pvar(take().text));
                if (!accept(tok::comma)) break;
            }
        }
        if (!accept(tok::rparen))
            throw parse_abort{{cur().line, cur().col, "unclosed argument list of " + nm.text}};
        if (nm.text == "B") {
            if (args.size() != 3)
                throw parse_abort{{nm.line, nm.col, "B expects 3 arguments"}};
            return tarski_b(args[0], args[1], args[2]);
        }
        if (nm.text == "D") {
            if (args.size() != 4)
                throw parse_abort{{nm.line, nm.col, "D expects 4 arguments"}};
            return tarski_d(args[0], args[1], args[2], args[3]);
        }
        if (nm.text == "Coll" && args.size() > 3) {
            // n-ary collinearity folds to triples anchored at the first two
            std::vector<formula_ptr> parts;
            for (std::size_t i = 2; i < args.size(); ++i)
                parts.push_back(datom("Coll", {args[0], args[1], args[i]}));
            return conj(parts);
        }
        if (defs_) {
            if (!defs_->known(nm.text))
                throw parse_abort{{nm.line, nm.col, "unknown atom " + nm.text}};
            if (defs_->arity(nm.text) != args.size())
                throw parse_abort{{nm.line, nm.col,
                                   nm.text + " expects " + std::to_string(defs_->arity(nm.text)) +
                                       " arguments, got " + std::to_string(args.size())}};
        }
        return datom(nm.text, std::move(args));
    }

    formula_ptr parse_comparison() {
        auto l = parse_sum();
        if (accept(tok::eq)) return eq_num(l, parse_sum());
        if (accept(tok::lt)) return less(l, parse_sum());
        if (accept(tok::le)) return leq(l, parse_sum());
        fail("expected a comparison operator");
    }

    term_ptr parse_sum() {
        auto l = parse_product();
        for (;;) {
            if (accept(tok::plus)) l = add(l, parse_product());
            else if (accept(tok::minus)) l = add(l, neg(parse_product()));
            else return l;
        }
    }

    term_ptr parse_product() {
        auto l = parse_term_unary();
        while (accept(tok::star)) l = mul(l, parse_term_unary());
        return l;
    }

    term_ptr parse_term_unary() {
        if (accept(tok::minus)) return neg(parse_term_unary());
        return parse_term_primary();
    }

    term_ptr parse_term_primary() {
        if (at(tok::integer)) {
            token t = take();
            long long v = 0;
            for (char c : t.text) {
                v = v * 10 + (c - '0');
                if (v > 1000000000LL)
                    throw parse_abort{{t.line, t.col, "integer literal too large"}};
            }
            return int_literal(v);
        }
        if (at(tok::ident) && peek().kind == tok::lparen) {
            token nm = take();
            take();  // (
            std::vector<term_ptr> args;
            if (!at(tok::rparen)) {
                for (;;) {
                    if (!at(tok::ident)) fail("expected a point variable");
                    args.push_back(pvar(take().text));
                    if (!accept(tok::comma)) break;
                }
            }
            if (!accept(tok::rparen))
                throw parse_abort{{cur().line, cur().col, "unclosed argument list of " + nm.text}};
            if (nm.text == "d") {
                if (args.size() != 2)
                    throw parse_abort{{nm.line, nm.col, "d expects 2 arguments"}};
                return dist(args[0], args[1]);
            }
            if (nm.text == "ang") {
                if (args.size() != 3)
                    throw parse_abort{{nm.line, nm.col, "ang expects 3 arguments"}};
                return angle(args[0], args[1], args[2]);
            }
            throw parse_abort{{nm.line, nm.col, nm.text + " is an atom, not a number term"}};
        }
        if (at(tok::ident)) return nvar(take().text);
        if (accept(tok::lparen)) {
            auto t = parse_sum();
            expect(tok::rparen, "expected ')' in term");
            return t;
        }
        fail("expected a number term");
    }
};

}  // namespace

parse_result parse_sentence(const std::string& text, const definition_view* defs) {
    parse_result r;
    try {
        parser p(lex(text), defs);
        r.ast = p.run();
    } catch (const lex_error& e) {
        r.diags.push_back(e.d);
    } catch (const parse_abort& e) {
        r.diags.push_back(e.d);
    } catch (const error& e) {
        r.diags.push_back({0, 0, e.what()});
    }
    return r;
}

// ---------------------------------------------------------------------------
// printer

namespace {

// term precedence: 1 sum, 2 product, 3 unary minus, 4 primary
void print_term_prec(std::ostringstream& os, const term_ptr& t, int prec) {
    switch (t->kind) {
    case term_kind::point_var:
    case term_kind::num_var:
        os << t->name;
        return;
    case term_kind::num_zero: os << "0"; return;
    case term_kind::num_one: os << "1"; return;
    case term_kind::int_lit: os << t->value; return;
    case term_kind::add: {
        bool minus = t->args[1]->kind == term_kind::neg;
        if (prec > 1) os << "(";
        print_term_prec(os, t->args[0], 1);
        if (minus) {
            os << " - ";
            print_term_prec(os, t->args[1]->args[0], 2);
        } else {
            os << " + ";
            print_term_prec(os, t->args[1], 2);
        }
        if (prec > 1) os << ")";
        return;
    }
    case term_kind::mul:
        if (prec > 2) os << "(";
        print_term_prec(os, t->args[0], 2);
        os << " * ";
        print_term_prec(os, t->args[1], 3);
        if (prec > 2) os << ")";
        return;
    case term_kind::neg:
        if (prec > 3) os << "(";
        os << "-";
        print_term_prec(os, t->args[0], 3);
        if (prec > 3) os << ")";
        return;
    case term_kind::dist:
        os << "d(";
        print_term_prec(os, t->args[0], 0);
        os << ",";
        print_term_prec(os, t->args[1], 0);
        os << ")";
        return;
    case term_kind::angle:
        os << "ang(";
        print_term_prec(os, t->args[0], 0);
        os << ",";
        print_term_prec(os, t->args[1], 0);
        os << ",";
        print_term_prec(os, t->args[2], 0);
        os << ")";
        return;
    }
}

// matches Or(Lt(s,t), EqNum(s,t)), the shape leq() builds
bool is_le_sugar(const formula_ptr& f) {
    if (f->kind != formula_kind::f_or) return false;
    const auto& l = f->subs[0];
    const auto& r = f->subs[1];
    return l->kind == formula_kind::less && r->kind == formula_kind::eq_num &&
           equal(l->terms[0], r->terms[0]) && equal(l->terms[1], r->terms[1]);
}

// formula precedence: 0 quantifier body, 1 iff, 2 implies, 3 or, 4 and, 5 not, 6 atom
void print_formula_prec(std::ostringstream& os, const formula_ptr& f, int prec) {
    switch (f->kind) {
    case formula_kind::eq_point:
        print_term_prec(os, f->terms[0], 0);
        os << " == ";
        print_term_prec(os, f->terms[1], 0);
        return;
    case formula_kind::eq_num:
        print_term_prec(os, f->terms[0], 1);
        os << " = ";
        print_term_prec(os, f->terms[1], 1);
        return;
    case formula_kind::less:
        print_term_prec(os, f->terms[0], 1);
        os << " < ";
        print_term_prec(os, f->terms[1], 1);
        return;
    case formula_kind::tarski_b:
    case formula_kind::tarski_d:
    case formula_kind::defined: {
        os << (f->kind == formula_kind::tarski_b ? "B"
               : f->kind == formula_kind::tarski_d ? "D"
                                                   : f->name);
        os << "(";
        for (std::size_t i = 0; i < f->terms.size(); ++i) {
            if (i) os << ",";
            print_term_prec(os, f->terms[i], 0);
        }
        os << ")";
        return;
    }
    case formula_kind::f_not:
        if (prec > 5) os << "(";
        os << "~";
        print_formula_prec(os, f->subs[0], 5);
        if (prec > 5) os << ")";
        return;
    case formula_kind::f_or:
        if (is_le_sugar(f)) {
            print_term_prec(os, f->subs[0]->terms[0], 1);
            os << " <= ";
            print_term_prec(os, f->subs[0]->terms[1], 1);
            return;
        }
        [[fallthrough]];
    case formula_kind::f_and:
    case formula_kind::f_implies:
    case formula_kind::f_iff: {
        int my = f->kind == formula_kind::f_iff       ? 1
                 : f->kind == formula_kind::f_implies ? 2
                 : f->kind == formula_kind::f_or      ? 3
                                                      : 4;
        const char* op = f->kind == formula_kind::f_iff       ? " <-> "
                         : f->kind == formula_kind::f_implies ? " -> "
                         : f->kind == formula_kind::f_or      ? " | "
                                                              : " & ";
        if (prec > my) os << "(";
        print_formula_prec(os, f->subs[0], my + 1);
        os << op;
        print_formula_prec(os, f->subs[1], my);
        if (prec > my) os << ")";
        return;
    }
    case formula_kind::f_forall:
    case formula_kind::f_exists:
        if (prec > 0) os << "(";
        os << (f->kind == formula_kind::f_forall ? "forall " : "exists ") << f->name << ":"
           << sort_name(f->var_sort) << ". ";
        print_formula_prec(os, f->subs[0], 0);
        if (prec > 0) os << ")";
        return;
    }
}

}  // namespace

std::string print_sentence(const formula_ptr& f) {
    std::ostringstream os;
    print_formula_prec(os, f, 0);
    return os.str();
}

std::string print_term(const term_ptr& t) {
    std::ostringstream os;
    print_term_prec(os, t, 0);
    return os.str();
}

// ---------------------------------------------------------------------------
// sentence files

std::vector<sentence_block> parse_sentence_file(const std::string& text,
                                                const definition_view* defs) {
    std::vector<sentence_block> blocks;
    sentence_block cur;
    bool cur_has_content = false;
    int line_no = 0;
    int content_start = 1;

    auto flush = [&]() {
        if (cur_has_content) {
            cur.first_line = content_start;
            cur.parsed = parse_sentence(cur.text, defs);
            // report positions relative to the whole file
            for (auto& d : cur.parsed.diags)
                if (d.line > 0) d.line += content_start - 1;
            blocks.push_back(std::move(cur));
        }
        cur = sentence_block{};
        cur_has_content = false;
    };

    std::istringstream is(text);
    std::string raw;
    while (std::getline(is, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::size_t b = raw.find_first_not_of(" \t");
        std::string trimmed = b == std::string::npos ? "" : raw.substr(b);
        while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t'))
            trimmed.pop_back();
        if (trimmed == "---") {
            flush();
            continue;
        }
        if (!trimmed.empty() && trimmed[0] == '#') {
            const std::string key = "# name:";
            if (trimmed.rfind(key, 0) == 0) {
                std::string v = trimmed.substr(key.size());
                std::size_t vb = v.find_first_not_of(" \t");
                if (vb != std::string::npos) cur.name = v.substr(vb);
            }
            continue;
        }
        if (trimmed.empty() && !cur_has_content) continue;
        if (!cur_has_content) content_start = line_no;
        cur.text += raw;
        cur.text += '\n';
        cur_has_content = true;
    }
    flush();
    return blocks;
}

}  // namespace geo::syntax
