#include "avals.hpp"

#include <cctype>
#include <set>

namespace hosc {

namespace {

void decompose_into(const TermP& v, TypeP t, NameAlloc& fresh, AValSplit& out, AVal& pat) {
    switch (t->kind) {
        case TypeKind::Unit:
            if (v->tag != Tag::Unit) throw TypeError("aval: expected () at Unit, got " + show_term(v));
            pat = v;
            return;
        case TypeKind::Bool:
            if (v->tag != Tag::True && v->tag != Tag::False)
                throw TypeError("aval: expected a boolean, got " + show_term(v));
            pat = v;
            return;
        case TypeKind::Int:
            if (v->tag != Tag::Int) throw TypeError("aval: expected an integer, got " + show_term(v));
            pat = v;
            return;
        case TypeKind::Arrow: {
            if (!v->value) throw TypeError("aval: not a value: " + show_term(v));
            Name f = fresh.fresh_fun(t);
            out.gamma.emplace_back(f, v);
            pat = mk_fname(f);
            return;
        }
        case TypeKind::Prod: {
            if (v->tag != Tag::Pair) throw TypeError("aval: expected a pair, got " + show_term(v));
            AVal a, b;
            decompose_into(v->a, t->a, fresh, out, a);
            decompose_into(v->b, t->b, fresh, out, b);
            pat = mk_pair(a, b);
            return;
        }
        default: throw TypeError("aval: " + show_type(t) + " is not a boundary type");
    }
}

void names_into(const AVal& a, std::vector<Name>& out) {
    if (a->tag == Tag::FName) out.push_back(a->name);
    if (a->tag == Tag::Pair) {
        names_into(a->a, out);
        names_into(a->b, out);
    }
}

// Shape of t with its arrow leaves already named.
struct Skeleton {
    TypeP t;
    std::vector<Skeleton> kids;
    Name name;
};

Skeleton skeleton(TypeP t, NameAlloc& fresh) {
    Skeleton s{t, {}, {}};
    if (t->kind == TypeKind::Arrow) {
        s.name = fresh.fresh_fun(t);
    } else if (t->kind == TypeKind::Prod) {
        s.kids.push_back(skeleton(t->a, fresh));
        s.kids.push_back(skeleton(t->b, fresh));
    } else if (t->kind == TypeKind::Ref || t->kind == TypeKind::Cont) {
        throw TypeError("aval: " + show_type(t) + " is not a boundary type");
    }
    return s;
}

std::vector<AVal> expand(const Skeleton& s, const std::vector<mpz_class>& ints) {
    switch (s.t->kind) {
        case TypeKind::Unit: return {mk_unit()};
        case TypeKind::Bool: return {mk_bool(true), mk_bool(false)};
        case TypeKind::Int: {
            std::vector<AVal> out;
            for (const auto& n : ints) out.push_back(mk_int(n));
            return out;
        }
        case TypeKind::Arrow: return {mk_fname(s.name)};
        default: {
            std::vector<AVal> out;
            auto left = expand(s.kids[0], ints);
            auto right = expand(s.kids[1], ints);
            for (const auto& a : left)
                for (const auto& b : right) out.push_back(mk_pair(a, b));
            return out;
        }
    }
}

}  // namespace

AValSplit aval_decompose(const TermP& v, TypeP t, NameAlloc& fresh) {
    AValSplit out;
    decompose_into(v, t, fresh, out, out.pattern);
    return out;
}

std::vector<AVal> enumerate_avals(TypeP t, const std::vector<mpz_class>& ints, NameAlloc& fresh) {
    return expand(skeleton(t, fresh), ints);
}

std::size_t count_avals(TypeP t, std::size_t n_ints) {
    switch (t->kind) {
        case TypeKind::Int: return n_ints;
        case TypeKind::Bool: return 2;
        case TypeKind::Prod: return count_avals(t->a, n_ints) * count_avals(t->b, n_ints);
        default: return 1;
    }
}

bool is_aval(const TermP& a) {
    switch (a->tag) {
        case Tag::Unit:
        case Tag::True:
        case Tag::False:
        case Tag::Int:
        case Tag::FName: return true;
        case Tag::Pair: return is_aval(a->a) && is_aval(a->b);
        default: return false;
    }
}

std::vector<Name> aval_names(const AVal& a) {
    std::vector<Name> out;
    names_into(a, out);
    return out;
}

bool aval_linear(const AVal& a) {
    auto ns = aval_names(a);
    std::set<Name> seen(ns.begin(), ns.end());
    return seen.size() == ns.size();
}

TypeP aval_type(const AVal& a) {
    switch (a->tag) {
        case Tag::Unit: return t_unit();
        case Tag::True:
        case Tag::False: return t_bool();
        case Tag::Int: return t_int();
        case Tag::FName: return a->name.type;
        case Tag::Pair: return t_prod(aval_type(a->a), aval_type(a->b));
        default: throw TypeError("not an abstract value: " + show_term(a));
    }
}

std::string show_aval(const AVal& a) {
    switch (a->tag) {
        case Tag::Unit: return "()";
        case Tag::True: return "tt";
        case Tag::False: return "ff";
        case Tag::Int: return a->num.get_str();
        case Tag::FName: return show_name(a->name);
        case Tag::Pair: return "(" + show_aval(a->a) + "," + show_aval(a->b) + ")";
        default: throw TypeError("not an abstract value: " + show_term(a));
    }
}

Name read_name(const std::string& s, std::size_t& pos) {
    auto fail = [&](const std::string& why) -> Name {
        throw SyntaxError("bad name at column " + std::to_string(pos + 1) + ": " + why);
    };
    auto word_end = [&](std::size_t p) {
        while (p < s.size() && (std::isalnum(static_cast<unsigned char>(s[p])) || s[p] == '_')) ++p;
        return p;
    };
    std::size_t e = word_end(pos);
    std::string head = s.substr(pos, e - pos);
    if (head == "errn") {
        pos = e;
        return err_name();
    }
    if (head == "bot") {
        pos = e;
        return bottom_name();
    }
    if (e >= s.size() || s[e] != '@') return fail("missing '@type' in '" + head + "'");
    // The type runs until a separator at parenthesis depth zero.
    std::size_t p = e + 1;
    int depth = 0;
    while (p < s.size()) {
        char ch = s[p];
        if (ch == '(') {
            ++depth;
        } else if (ch == ')') {
            if (depth == 0) break;
            --depth;
        } else if (depth == 0 && (ch == ',' || std::isspace(static_cast<unsigned char>(ch)))) {
            break;
        }
        ++p;
    }
    TypeP ty = parse_type(s.substr(e + 1, p - e - 1));
    Name n;
    if (head == "final") {
        n = final_name(ty);
    } else if (head.size() >= 2 && (head[0] == 'f' || head[0] == 'c') &&
               head.find_first_not_of("0123456789", 1) == std::string::npos) {
        int id = std::stoi(head.substr(1));
        if (head[0] == 'f') {
            if (ty->kind != TypeKind::Arrow) return fail("function name with non-arrow type");
            n = fun_name(id, ty);
        } else {
            n = cont_name(id, ty);
        }
    } else {
        return fail("unknown name '" + head + "'");
    }
    pos = p;
    return n;
}

Name parse_name(const std::string& text) {
    std::size_t pos = 0;
    Name n = read_name(text, pos);
    if (pos != text.size()) throw SyntaxError("trailing characters after name: " + text);
    return n;
}

namespace {

struct AValParser {
    const std::string& s;
    std::size_t pos = 0;

    void ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    void expect(char ch) {
        ws();
        if (pos >= s.size() || s[pos] != ch)
            throw SyntaxError(std::string("abstract value: expected '") + ch + "' at column " + std::to_string(pos + 1));
        ++pos;
    }
    AVal value() {
        ws();
        if (pos >= s.size()) throw SyntaxError("abstract value: unexpected end of input");
        char ch = s[pos];
        if (ch == '(') {
            ++pos;
            ws();
            if (pos < s.size() && s[pos] == ')') {
                ++pos;
                return mk_unit();
            }
            AVal a = value();
            expect(',');
            AVal b = value();
            expect(')');
            return mk_pair(a, b);
        }
        if (ch == '-' || std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t e = pos + 1;
            while (e < s.size() && std::isdigit(static_cast<unsigned char>(s[e]))) ++e;
            mpz_class n(s.substr(pos, e - pos));
            pos = e;
            return mk_int(n);
        }
        if (s.compare(pos, 2, "tt") == 0 && (pos + 2 == s.size() || !std::isalnum(static_cast<unsigned char>(s[pos + 2])))) {
            pos += 2;
            return mk_bool(true);
        }
        if (s.compare(pos, 2, "ff") == 0 && (pos + 2 == s.size() || !std::isalnum(static_cast<unsigned char>(s[pos + 2])))) {
            pos += 2;
            return mk_bool(false);
        }
        Name n = read_name(s, pos);
        if (!n.is_fun()) throw SyntaxError("abstract value: continuation name in value position");
        return mk_fname(n);
    }
};

}  // namespace

AVal parse_aval(const std::string& text) {
    AValParser p{text};
    AVal a = p.value();
    p.ws();
    if (p.pos != text.size()) throw SyntaxError("abstract value: trailing input '" + text.substr(p.pos) + "'");
    if (!aval_linear(a)) throw SyntaxError("abstract value: a name occurs twice");
    return a;
}

Assignment canonical_assignment(const VarEnv& gamma, const std::vector<mpz_class>& ints, NameAlloc& fresh) {
    Assignment rho;
    for (const auto& [x, t] : gamma) {
        auto all = enumerate_avals(t, ints, fresh);
        if (all.empty()) throw TypeError("no abstract value of type " + show_type(t) + " over the integer domain");
        rho.emplace_back(x, all.front());
    }
    return rho;
}

std::vector<Assignment> all_assignments(const VarEnv& gamma, const std::vector<mpz_class>& ints, NameAlloc& fresh) {
    std::vector<Assignment> out{Assignment{}};
    for (const auto& [x, t] : gamma) {
        auto vals = enumerate_avals(t, ints, fresh);
        std::vector<Assignment> next;
        for (const auto& rho : out)
            for (const auto& v : vals) {
                Assignment r = rho;
                r.emplace_back(x, v);
                next.push_back(std::move(r));
            }
        out = std::move(next);
    }
    return out;
}

std::vector<Name> assignment_names(const Assignment& rho) {
    std::vector<Name> out;
    for (const auto& [x, a] : rho) names_into(a, out);
    return out;
}

std::vector<mpz_class> int_range(long lo, long hi) {
    std::vector<mpz_class> out;
    for (long i = lo; i <= hi; ++i) out.emplace_back(i);
    return out;
}

}  // namespace hosc
