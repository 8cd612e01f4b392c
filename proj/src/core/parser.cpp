#include <cctype>
#include <functional>
#include <sstream>

#include "lang.hpp"

namespace hosc {

namespace {

enum class Tok {
    Ident, Int, LParen, RParen, Lt, Gt, Ne, Comma, Colon, Dot, Semi, Assign, Bang,
    Plus, Minus, Star, Eq, Arrow, Hole, End,
};

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

const std::set<std::string> kKeywords = {
    "let", "in", "fun", "fix", "if", "then", "else", "ref", "fst", "snd", "not",
    "callcc", "throw", "to", "tt", "ff", "omega", "div", "Unit", "Int", "Bool", "cont",
};

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto adv = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char ch = src[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            adv(1);
            continue;
        }
        if (ch == '#') {
            while (i < src.size() && src[i] != '\n') adv(1);
            continue;
        }
        Token t{Tok::End, "", line, col};
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
                ++j;
            t.kind = Tok::Ident;
            t.text = src.substr(i, j - i);
            out.push_back(t);
            adv(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.kind = Tok::Int;
            t.text = src.substr(i, j - i);
            out.push_back(t);
            adv(j - i);
            continue;
        }
        auto two = [&](const char* s) { return src.compare(i, 2, s) == 0; };
        std::size_t n = 1;
        if (two("<>")) {
            t.kind = Tok::Ne;
            n = 2;
        } else if (two(":=")) {
            t.kind = Tok::Assign;
            n = 2;
        } else if (two("->")) {
            t.kind = Tok::Arrow;
            n = 2;
        } else if (two("[]")) {
            t.kind = Tok::Hole;
            n = 2;
        } else {
            switch (ch) {
                case '(': t.kind = Tok::LParen; break;
                case ')': t.kind = Tok::RParen; break;
                case '<': t.kind = Tok::Lt; break;
                case '>': t.kind = Tok::Gt; break;
                case ',': t.kind = Tok::Comma; break;
                case ':': t.kind = Tok::Colon; break;
                case '.': t.kind = Tok::Dot; break;
                case ';': t.kind = Tok::Semi; break;
                case '!': t.kind = Tok::Bang; break;
                case '+': t.kind = Tok::Plus; break;
                case '-': t.kind = Tok::Minus; break;
                case '*': t.kind = Tok::Star; break;
                case '=': t.kind = Tok::Eq; break;
                default: {
                    std::ostringstream os;
                    os << line << ":" << col << ": unexpected character '" << ch << "'";
                    throw SyntaxError(os.str());
                }
            }
        }
        t.text = src.substr(i, n);
        out.push_back(t);
        adv(n);
    }
    out.push_back(Token{Tok::End, "<end of input>", line, col});
    return out;
}

class Parser {
public:
    explicit Parser(const std::string& src, bool allow_hole = false) : toks_(lex(src)), allow_hole_(allow_hole) {}

    TermP term() {
        TermP m = expr();
        expect_end();
        return m;
    }
    TypeP type_only() {
        TypeP t = type();
        expect_end();
        return t;
    }
    int holes() const { return holes_; }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    bool allow_hole_;
    int holes_ = 0;

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool is(Tok k) const { return peek().kind == k; }
    bool is_kw(const char* kw) const { return peek().kind == Tok::Ident && peek().text == kw; }

    [[noreturn]] void fail(const std::string& what) const {
        const Token& t = peek();
        std::ostringstream os;
        os << t.line << ":" << t.col << ": " << what << " (found '" << t.text << "')";
        throw SyntaxError(os.str());
    }
    Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    void expect(Tok k, const char* what) {
        if (!is(k)) fail(std::string("expected ") + what);
        next();
    }
    void expect_kw(const char* kw) {
        if (!is_kw(kw)) fail(std::string("expected '") + kw + "'");
        next();
    }
    void expect_end() {
        if (!is(Tok::End)) fail("unexpected trailing input");
    }
    std::string ident(bool binder) {
        if (!is(Tok::Ident) || kKeywords.count(peek().text)) fail("expected identifier");
        std::string s = next().text;
        if (!binder && s == "_") fail("'_' cannot be referenced");
        return s;
    }

    // Types ------------------------------------------------------------------
    TypeP type() {
        TypeP a = type_prod();
        if (is(Tok::Arrow)) {
            next();
            return t_arrow(a, type());
        }
        return a;
    }
    TypeP type_prod() {
        TypeP a = type_prefix();
        while (is(Tok::Star)) {
            next();
            a = t_prod(a, type_prefix());
        }
        return a;
    }
    TypeP type_prefix() {
        if (is_kw("ref")) {
            next();
            return t_ref(type_prefix());
        }
        if (is_kw("cont")) {
            next();
            return t_cont(type_prefix());
        }
        if (is_kw("Unit")) return next(), t_unit();
        if (is_kw("Int")) return next(), t_int();
        if (is_kw("Bool")) return next(), t_bool();
        if (is(Tok::LParen)) {
            next();
            TypeP t = type();
            expect(Tok::RParen, "')'");
            return t;
        }
        fail("expected a type");
    }

    // Terms ------------------------------------------------------------------
    TermP expr() {
        TermP m = stmt();
        if (is(Tok::Semi)) {
            next();
            return mk_seq(m, expr());
        }
        return m;
    }

    TermP stmt() {
        if (is_kw("let")) {
            next();
            std::string x = ident(true);
            TypeP t = nullptr;
            if (is(Tok::Colon)) {
                next();
                t = type();
            }
            expect(Tok::Eq, "'='");
            TermP m = expr();
            expect_kw("in");
            return mk_let(x, t, m, expr());
        }
        if (is_kw("fun")) {
            next();
            expect(Tok::LParen, "'('");
            std::string x = ident(true);
            expect(Tok::Colon, "':'");
            TypeP t = type();
            expect(Tok::RParen, "')'");
            return mk_lam(x, t, expr());
        }
        if (is_kw("fix")) {
            next();
            std::string f = ident(true);
            expect(Tok::LParen, "'('");
            std::string x = ident(true);
            expect(Tok::Colon, "':'");
            TypeP t = type();
            expect(Tok::RParen, "')'");
            TypeP r = nullptr;
            if (is(Tok::Colon)) {
                next();
                r = type_prefix_or_paren();
            }
            return mk_fix(f, x, t, r, expr());
        }
        if (is_kw("if")) {
            next();
            TermP c = expr();
            expect_kw("then");
            TermP a = stmt();
            expect_kw("else");
            TermP b = stmt();
            return mk_if(c, a, b);
        }
        if (is_kw("throw")) {
            next();
            TermP v = stmt();
            expect_kw("to");
            TermP k = stmt();
            return mk_throw(v, k, nullptr);
        }
        return assign();
    }

    // A fix result annotation stops before the body, so arrows must be parenthesized.
    TypeP type_prefix_or_paren() { return type_prod(); }

    TermP assign() {
        TermP a = cmp();
        if (is(Tok::Assign)) {
            next();
            return mk_assign(a, cmp());
        }
        return a;
    }

    TermP cmp() {
        TermP a = add();
        if (is(Tok::Eq)) {
            next();
            return mk_cmp(Op::Eq, a, add());
        }
        if (is(Tok::Lt)) {
            next();
            return mk_cmp(Op::Lt, a, add());
        }
        if (is(Tok::Ne)) {
            next();
            return mk_not(mk_cmp(Op::Eq, a, add()));
        }
        return a;
    }

    TermP add() {
        TermP a = mul();
        while (is(Tok::Plus) || is(Tok::Minus)) {
            Op op = next().kind == Tok::Plus ? Op::Add : Op::Sub;
            a = mk_arith(op, a, mul());
        }
        return a;
    }

    TermP mul() {
        TermP a = app();
        while (is(Tok::Star)) {
            next();
            a = mk_arith(Op::Mul, a, app());
        }
        return a;
    }

    bool starts_arg() const {
        switch (peek().kind) {
            case Tok::Int:
            case Tok::LParen:
            case Tok::Bang:
            case Tok::Hole: return true;
            case Tok::Ident: {
                const std::string& s = peek().text;
                if (!kKeywords.count(s)) return true;
                return s == "tt" || s == "ff" || s == "ref" || s == "fst" || s == "snd" || s == "not" ||
                       s == "callcc" || s == "omega" || s == "div" || s == "cont";
            }
            default: return false;
        }
    }

    TermP app() {
        TermP a = prefix();
        while (starts_arg()) a = mk_app(a, prefix());
        return a;
    }

    TermP prefix() {
        if (is(Tok::Bang)) {
            next();
            return mk_deref(prefix());
        }
        if (is_kw("ref")) {
            next();
            return mk_ref(prefix());
        }
        if (is_kw("fst")) {
            next();
            return mk_fst(prefix());
        }
        if (is_kw("snd")) {
            next();
            return mk_snd(prefix());
        }
        if (is_kw("not")) {
            next();
            return mk_not(prefix());
        }
        return atom();
    }

    TermP atom() {
        if (is(Tok::Int)) return mk_int(mpz_class(next().text));
        if (is(Tok::Hole)) {
            if (!allow_hole_) fail("hole '[]' outside a context");
            next();
            ++holes_;
            return mk_hole();
        }
        if (is(Tok::Lt)) {
            next();
            TermP a = expr();
            expect(Tok::Comma, "','");
            TermP b = expr();
            expect(Tok::Gt, "'>'");
            return mk_pair(a, b);
        }
        if (is(Tok::LParen)) {
            next();
            if (is(Tok::RParen)) {
                next();
                return mk_unit();
            }
            if (is(Tok::Minus) && peek(1).kind == Tok::Int && peek(2).kind == Tok::RParen) {
                next();
                mpz_class n(next().text);
                next();
                return mk_int(-n);
            }
            TermP m = expr();
            if (is(Tok::Colon)) {
                next();
                TypeP t = type();
                expect(Tok::RParen, "')'");
                return mk_ascribe(m, t);
            }
            expect(Tok::RParen, "')'");
            return m;
        }
        if (is_kw("tt")) return next(), mk_bool(true);
        if (is_kw("ff")) return next(), mk_bool(false);
        if (is_kw("omega") || is_kw("div")) return next(), mk_omega(nullptr);
        if (is_kw("cont")) {
            next();
            expect(Tok::LParen, "'('");
            TypeP t = type();
            expect(Tok::Dot, "'.'");
            bool saved_allow = allow_hole_;
            int saved_holes = holes_;
            allow_hole_ = true;
            holes_ = 0;
            TermP body = expr();
            if (holes_ != 1) fail("a continuation literal needs exactly one hole '[]'");
            allow_hole_ = saved_allow;
            holes_ = saved_holes;
            expect(Tok::RParen, "')'");
            auto raw = std::make_shared<Term>();
            raw->tag = Tag::Cont;
            raw->ty = t;
            raw->a = body;
            return raw;
        }
        if (is_kw("callcc")) {
            next();
            expect(Tok::LParen, "'('");
            std::string x = ident(true);
            expect(Tok::Colon, "':'");
            TypeP t = type();
            expect(Tok::Dot, "'.'");
            TermP m = expr();
            expect(Tok::RParen, "')'");
            return mk_callcc(x, t, m);
        }
        if (is(Tok::Ident) && !kKeywords.count(peek().text)) return mk_var(ident(false));
        fail("expected a term");
    }
};

// ---------------------------------------------------------------------------
// Elaboration: fills in the annotations the surface syntax leaves implicit.

const char* kHoleVar = "[]";

Context extract_context(const TermP& m);

struct Elab {
    VarEnv env;

    [[noreturn]] static void type_fail(const std::string& rule, const std::string& msg) {
        throw TypeError(rule + ": " + msg);
    }

    TypeP lookup(const std::string& x) const {
        for (auto it = env.rbegin(); it != env.rend(); ++it)
            if (it->first == x) return it->second;
        type_fail("var", "unbound variable " + x);
    }

    static void expect_eq(TypeP got, TypeP want, const std::string& rule, const TermP& m) {
        if (want && got != want)
            type_fail(rule, "expected " + show_type(want) + " but found " + show_type(got) + " in " + show_term(m));
    }

    // True when the term's type cannot be synthesized without a hint.
    static bool flexible(const TermP& m) {
        switch (m->tag) {
            case Tag::Omega: return m->ty == nullptr;
            case Tag::Throw: return m->ty == nullptr;
            case Tag::Fix: return m->ty2 == nullptr;
            case Tag::If: return flexible(m->b) && flexible(m->c);
            case Tag::App:
                if (m->a->tag == Tag::Lam && m->a->x == "_") return flexible(m->a->a);
                if (m->a->tag == Tag::Lam) return flexible(m->a->a);
                return false;
            default: return false;
        }
    }

    std::pair<TermP, TypeP> with(const std::string& x, TypeP t, const TermP& m, TypeP want) {
        env.emplace_back(x, t);
        auto r = go(m, want);
        env.pop_back();
        return r;
    }

    std::pair<TermP, TypeP> go(const TermP& m, TypeP want) {
        auto r = go_inner(m, want);
        expect_eq(r.second, want, "check", m);
        return r;
    }

    std::pair<TermP, TypeP> go_inner(const TermP& m, TypeP want) {
        switch (m->tag) {
            case Tag::Unit: return {m, t_unit()};
            case Tag::True:
            case Tag::False: return {m, t_bool()};
            case Tag::Int: return {m, t_int()};
            case Tag::Var: return {m, lookup(m->x)};
            case Tag::Pair: {
                TypeP wa = want && want->kind == TypeKind::Prod ? want->a : nullptr;
                TypeP wb = want && want->kind == TypeKind::Prod ? want->b : nullptr;
                auto [a, ta] = go(m->a, wa);
                auto [b, tb] = go(m->b, wb);
                return {mk_pair(a, b), t_prod(ta, tb)};
            }
            case Tag::Fst:
            case Tag::Snd: {
                auto [a, ta] = go(m->a, nullptr);
                if (ta->kind != TypeKind::Prod) type_fail("proj", "projection of non-product " + show_type(ta));
                return {m->tag == Tag::Fst ? mk_fst(a) : mk_snd(a), m->tag == Tag::Fst ? ta->a : ta->b};
            }
            case Tag::Lam: {
                if (!m->ty) type_fail("lam", "binder " + m->x + " needs a type");
                TypeP wr = want && want->kind == TypeKind::Arrow ? want->b : nullptr;
                auto [body, tb] = with(m->x, m->ty, m->a, wr);
                return {mk_lam(m->x, m->ty, body), t_arrow(m->ty, tb)};
            }
            case Tag::Fix: {
                TypeP r = m->ty2;
                if (!r && want && want->kind == TypeKind::Arrow && want->a == m->ty) r = want->b;
                if (!r) type_fail("fix", "fix " + m->f + " needs a result type annotation");
                TypeP ft = t_arrow(m->ty, r);
                env.emplace_back(m->f, ft);
                auto [body, tb] = with(m->x, m->ty, m->a, r);
                env.pop_back();
                (void)tb;
                return {mk_fix(m->f, m->x, m->ty, r, body), ft};
            }
            case Tag::App: {
                if (m->a->tag == Tag::Lam && !m->a->ty) {
                    // let / sequencing
                    const TermP& lam = m->a;
                    TypeP hint = lam->x == "_" && flexible(m->b) ? t_unit() : nullptr;
                    auto [arg, targ] = go(m->b, hint);
                    auto [body, tb] = with(lam->x, targ, lam->a, want);
                    return {mk_app(mk_lam(lam->x, targ, body), arg), tb};
                }
                auto [f, tf] = go(m->a, nullptr);
                if (tf->kind != TypeKind::Arrow)
                    type_fail("app", "applying non-function of type " + show_type(tf) + " in " + show_term(m));
                auto [arg, targ] = go(m->b, tf->a);
                (void)targ;
                return {mk_app(f, arg), tf->b};
            }
            case Tag::Ref: {
                TypeP w = want && want->kind == TypeKind::Ref ? want->a : nullptr;
                auto [a, ta] = go(m->a, w);
                return {mk_ref(a, ta), t_ref(ta)};
            }
            case Tag::Deref: {
                auto [a, ta] = go(m->a, want ? t_ref(want) : nullptr);
                if (ta->kind != TypeKind::Ref) type_fail("deref", "dereferencing non-reference " + show_type(ta));
                return {mk_deref(a), ta->a};
            }
            case Tag::Assign: {
                auto [a, ta] = go(m->a, nullptr);
                if (ta->kind != TypeKind::Ref) type_fail("assign", "assigning to non-reference " + show_type(ta));
                auto [b, tb] = go(m->b, ta->a);
                (void)tb;
                return {mk_assign(a, b), t_unit()};
            }
            case Tag::If: {
                auto [c, tc] = go(m->a, t_bool());
                (void)tc;
                TermP a, b;
                TypeP t = want;
                if (!t && flexible(m->b) && !flexible(m->c)) {
                    auto rb = go(m->c, nullptr);
                    b = rb.first;
                    t = rb.second;
                    a = go(m->b, t).first;
                } else {
                    auto ra = go(m->b, t);
                    a = ra.first;
                    t = ra.second;
                    b = go(m->c, t).first;
                }
                return {mk_if(c, a, b), t};
            }
            case Tag::Arith: {
                auto a = go(m->a, t_int()).first;
                auto b = go(m->b, t_int()).first;
                return {mk_arith(m->op, a, b), t_int()};
            }
            case Tag::Cmp: {
                if (m->op == Op::Lt) {
                    auto a = go(m->a, t_int()).first;
                    auto b = go(m->b, t_int()).first;
                    return {mk_cmp(Op::Lt, a, b), t_bool()};
                }
                auto [a, ta] = go(m->a, nullptr);
                if (ta->kind == TypeKind::Ref) {
                    auto b = go(m->b, ta).first;
                    return {mk_cmp(Op::RefEq, a, b), t_bool()};
                }
                expect_eq(ta, t_int(), "cmp", m->a);
                auto b = go(m->b, t_int()).first;
                return {mk_cmp(m->op, a, b), t_bool()};
            }
            case Tag::Callcc: {
                auto [body, tb] = with(m->x, t_cont(m->ty), m->a, m->ty);
                (void)tb;
                return {mk_callcc(m->x, m->ty, body), m->ty};
            }
            case Tag::Throw: {
                auto [k, tk] = go(m->b, nullptr);
                if (tk->kind != TypeKind::Cont) type_fail("throw", "throwing to non-continuation " + show_type(tk));
                auto v = go(m->a, tk->a).first;
                TypeP r = m->ty ? m->ty : (want ? want : t_unit());
                return {mk_throw(v, k, r), r};
            }
            case Tag::Omega: {
                TypeP r = m->ty ? m->ty : (want ? want : t_unit());
                return {mk_omega_term(r), r};
            }
            case Tag::Ascribe: {
                auto r = go(m->a, m->ty);
                return r;
            }
            case Tag::Hole: return {mk_var(kHoleVar), lookup(kHoleVar)};
            case Tag::Cont: {
                if (!m->a) type_fail("source", "run-time form in source term");
                auto [body, tb] = with(kHoleVar, m->ty, m->a, nullptr);
                (void)tb;
                return {mk_cont(m->ty, std::make_shared<const Context>(extract_context(body))), t_cont(m->ty)};
            }
            default: type_fail("source", "run-time form in source term");
        }
    }
};

// Turns a term with a single occurrence of the hole variable in evaluation
// position into a context.
Context extract_context(const TermP& m) {
    Context k;
    TermP cur = m;
    auto is_hole = [](const TermP& t) { return t->tag == Tag::Var && t->x == kHoleVar; };
    auto contains = [&](const TermP& t) {
        bool found = false;
        rewrite(t, [&](const TermP& s) -> TermP {
            if (is_hole(s)) found = true;
            return nullptr;
        });
        return found;
    };
    while (!is_hole(cur)) {
        Frame fr{FrameKind::Fst};
        TermP nextp;
        auto left_right = [&](FrameKind lk, FrameKind rk) {
            if (contains(cur->a)) {
                if (contains(cur->b)) throw SyntaxError("hole occurs twice");
                fr.kind = lk;
                fr.t1 = cur->b;
                nextp = cur->a;
            } else {
                if (!cur->a->value) throw SyntaxError("hole not in evaluation position");
                fr.kind = rk;
                fr.t1 = cur->a;
                nextp = cur->b;
            }
        };
        switch (cur->tag) {
            case Tag::Pair: left_right(FrameKind::PairL, FrameKind::PairR); break;
            case Tag::App: left_right(FrameKind::AppL, FrameKind::AppR); break;
            case Tag::Assign: left_right(FrameKind::AssignL, FrameKind::AssignR); break;
            case Tag::Arith:
                left_right(FrameKind::ArithL, FrameKind::ArithR);
                fr.op = cur->op;
                break;
            case Tag::Cmp:
                left_right(FrameKind::CmpL, FrameKind::CmpR);
                fr.op = cur->op;
                break;
            case Tag::Throw:
                left_right(FrameKind::ThrowL, FrameKind::ThrowR);
                fr.ty = cur->ty;
                break;
            case Tag::Fst: fr.kind = FrameKind::Fst, nextp = cur->a; break;
            case Tag::Snd: fr.kind = FrameKind::Snd, nextp = cur->a; break;
            case Tag::Deref: fr.kind = FrameKind::Deref, nextp = cur->a; break;
            case Tag::Ref:
                fr.kind = FrameKind::Ref, fr.ty = cur->ty, nextp = cur->a;
                break;
            case Tag::If:
                if (contains(cur->b) || contains(cur->c)) throw SyntaxError("hole not in evaluation position");
                fr.kind = FrameKind::If, fr.t1 = cur->b, fr.t2 = cur->c, nextp = cur->a;
                break;
            default: throw SyntaxError("hole not in evaluation position");
        }
        if (!contains(nextp)) throw SyntaxError("hole not in evaluation position");
        k.push_back(fr);
        cur = nextp;
    }
    return k;
}

}  // namespace

TypeP parse_type(const std::string& text) { return Parser(text).type_only(); }

TermP parse_term(const std::string& text, const VarEnv& gamma) {
    TermP raw = Parser(text).term();
    Elab e{gamma};
    return e.go(raw, nullptr).first;
}

Context parse_context(const std::string& text, TypeP hole, const VarEnv& gamma) {
    Parser p(text, true);
    TermP raw = p.term();
    if (p.holes() != 1) throw SyntaxError("a context needs exactly one hole '[]'");
    Elab e{gamma};
    e.env.emplace_back(kHoleVar, hole);
    TermP m = e.go(raw, nullptr).first;
    return extract_context(m);
}

TermFile parse_term_file(const std::string& text) {
    TermFile tf;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::size_t p = line.find_first_not_of(" \t");
        if (p == std::string::npos || line.compare(p, 6, "#gamma") != 0) continue;
        std::string decl = line.substr(p + 6);
        std::size_t colon = decl.find(':');
        if (colon == std::string::npos) throw SyntaxError("malformed #gamma line: " + line);
        std::string x = decl.substr(0, colon);
        x.erase(0, x.find_first_not_of(" \t"));
        x.erase(x.find_last_not_of(" \t") + 1);
        tf.gamma.emplace_back(x, parse_type(decl.substr(colon + 1)));
    }
    tf.term = parse_term(text, tf.gamma);
    tf.type = infer_type(TypeEnv{{}, tf.gamma}, tf.term);
    return tf;
}

}  // namespace hosc
