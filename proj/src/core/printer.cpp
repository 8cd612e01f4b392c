#include <sstream>

#include "lang.hpp"

namespace hosc {

namespace {

// Precedence levels: 0 expr, 1 stmt, 2 assign, 3 cmp, 4 add, 5 mul, 6 app, 7 prefix, 8 atom.
class Printer {
public:
    std::string out;

    void term(const TermP& m, int level) {
        int own = level_of(m);
        bool paren = own < level;
        if (paren) out += '(';
        body(m);
        if (paren) out += ')';
    }

private:
    static bool is_let(const TermP& m) { return m->tag == Tag::App && m->a->tag == Tag::Lam; }
    static bool is_not(const TermP& m) {
        return m->tag == Tag::If && m->b->tag == Tag::False && m->c->tag == Tag::True;
    }

    static int level_of(const TermP& m) {
        switch (m->tag) {
            case Tag::App: return is_let(m) ? 0 : 6;
            case Tag::Lam:
            case Tag::Fix: return 0;
            case Tag::If: return is_not(m) ? 7 : 1;
            case Tag::Assign: return 2;
            case Tag::Cmp: return 3;
            case Tag::Arith: return m->op == Op::Mul ? 5 : 4;
            case Tag::Fst:
            case Tag::Snd:
            case Tag::Ref:
            case Tag::Deref: return 7;
            default: return 8;
        }
    }

    void type_paren(TypeP t) {
        if (t->kind == TypeKind::Arrow) {
            out += '(' + show_type(t) + ')';
        } else {
            out += show_type(t);
        }
    }

    static const char* op_text(Op op) {
        switch (op) {
            case Op::Add: return " + ";
            case Op::Sub: return " - ";
            case Op::Mul: return " * ";
            case Op::Lt: return " < ";
            default: return " = ";
        }
    }

    void body(const TermP& m) {
        switch (m->tag) {
            case Tag::Unit: out += "()"; break;
            case Tag::True: out += "tt"; break;
            case Tag::False: out += "ff"; break;
            case Tag::Int:
                if (m->num < 0) out += '(';
                out += m->num.get_str();
                if (m->num < 0) out += ')';
                break;
            case Tag::Var: out += m->x; break;
            case Tag::Loc: out += show_loc(m->loc); break;
            case Tag::FName: out += show_name(m->name); break;
            case Tag::Hole: out += "[]"; break;
            case Tag::Pair:
                out += '<';
                term(m->a, 0);
                out += ", ";
                term(m->b, 0);
                out += '>';
                break;
            case Tag::Fst:
            case Tag::Snd:
                out += m->tag == Tag::Fst ? "fst " : "snd ";
                term(m->a, 7);
                break;
            case Tag::Lam:
                out += "fun(" + m->x + ":" + show_type(m->ty) + ") ";
                term(m->a, 0);
                break;
            case Tag::Fix:
                out += "fix " + m->f + "(" + m->x + ":" + show_type(m->ty) + "):";
                type_paren(m->ty2);
                out += ' ';
                term(m->a, 0);
                break;
            case Tag::App:
                if (is_let(m)) {
                    if (m->a->x == "_") {
                        term(m->b, 1);
                        out += "; ";
                    } else {
                        out += "let " + m->a->x + " = ";
                        term(m->b, 0);
                        out += " in ";
                    }
                    term(m->a->a, 0);
                } else {
                    term(m->a, 6);
                    out += ' ';
                    // Pairs in argument position need parentheses: '<' would read as a comparison.
                    if (m->b->tag == Tag::Pair) {
                        out += '(';
                        term(m->b, 0);
                        out += ')';
                    } else {
                        term(m->b, 7);
                    }
                }
                break;
            case Tag::Ref:
                out += "ref ";
                term(m->a, 7);
                break;
            case Tag::Deref:
                out += '!';
                term(m->a, 7);
                break;
            case Tag::Assign:
                term(m->a, 3);
                out += " := ";
                term(m->b, 3);
                break;
            case Tag::If:
                if (is_not(m)) {
                    out += "not ";
                    term(m->a, 7);
                } else {
                    out += "if ";
                    term(m->a, 0);
                    out += " then ";
                    term(m->b, 1);
                    out += " else ";
                    term(m->c, 1);
                }
                break;
            case Tag::Arith:
                term(m->a, level_of(m));
                out += op_text(m->op);
                term(m->b, level_of(m) + 1);
                break;
            case Tag::Cmp:
                term(m->a, 4);
                out += op_text(m->op);
                term(m->b, 4);
                break;
            case Tag::Callcc:
                out += "callcc(" + m->x + ":" + show_type(m->ty) + ". ";
                term(m->a, 0);
                out += ')';
                break;
            case Tag::Throw:
                // Ascribed so that the result type survives a round trip.
                out += "(throw ";
                term(m->a, 1);
                out += " to ";
                term(m->b, 1);
                out += " : " + show_type(m->ty) + ")";
                break;
            case Tag::Cont:
                out += "cont(" + show_type(m->ty) + ". ";
                out += show_context(*m->ctx);
                if (m->named) out += ", " + show_name(m->name);
                out += ')';
                break;
            case Tag::Omega: out += "omega"; break;
            case Tag::Ascribe:
                out += '(';
                term(m->a, 0);
                out += " : " + show_type(m->ty) + ")";
                break;
        }
    }
};

}  // namespace

std::string show_term(const TermP& m) {
    Printer p;
    p.term(m, 0);
    return p.out;
}

std::string show_context(const Context& k) { return show_term(plug(k, mk_hole())); }

}  // namespace hosc
