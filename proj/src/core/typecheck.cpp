#include <algorithm>
#include <cctype>

#include "lang.hpp"

namespace hosc {

std::string model_name(Model m) {
    switch (m) {
        case Model::HOSC: return "HOSC";
        case Model::GOSC: return "GOSC";
        case Model::HOS: return "HOS";
        case Model::GOS: return "GOS";
    }
    return "?";
}

bool parse_model(const std::string& s, Model& out) {
    std::string u = s;
    std::transform(u.begin(), u.end(), u.begin(), [](unsigned char ch) { return std::toupper(ch); });
    for (Model m : kAllModels)
        if (model_name(m) == u) {
            out = m;
            return true;
        }
    return false;
}

namespace {

class Checker {
public:
    Checker(const TypeEnv& env, std::vector<TypeP>* seen) : sigma_(env.sigma), vars_(env.gamma), seen_(seen) {}

    TypeP term(const TermP& m) {
        TypeP t = term_inner(m);
        note(t);
        return t;
    }

    TypeP context(const Context& k, TypeP hole) {
        TypeP t = hole;
        for (auto it = k.rbegin(); it != k.rend(); ++it) t = frame(*it, t);
        return t;
    }

private:
    const std::map<Loc, TypeP>& sigma_;
    VarEnv vars_;
    std::vector<TypeP>* seen_;

    void note(TypeP t) {
        if (seen_ && t) seen_->push_back(t);
    }

    [[noreturn]] static void fail(const char* rule, const std::string& msg, const TermP& m) {
        throw TypeError(std::string(rule) + ": " + msg + " in " + show_term(m));
    }

    static void need(bool ok, const char* rule, const std::string& msg, const TermP& m) {
        if (!ok) fail(rule, msg, m);
    }

    TypeP bind(const std::string& x, TypeP t, const TermP& body) {
        note(t);
        vars_.emplace_back(x, t);
        TypeP r = term(body);
        vars_.pop_back();
        return r;
    }

    TypeP frame(const Frame& fr, TypeP hole) {
        TermP dummy = plug_frame(fr, mk_hole());
        auto sub = [&](const TermP& t) { return t ? term(t) : nullptr; };
        TypeP r = nullptr;
        switch (fr.kind) {
            case FrameKind::PairL: r = t_prod(hole, sub(fr.t1)); break;
            case FrameKind::PairR: r = t_prod(sub(fr.t1), hole); break;
            case FrameKind::Fst:
            case FrameKind::Snd:
                need(hole->kind == TypeKind::Prod, "proj", "projection of non-product", dummy);
                r = fr.kind == FrameKind::Fst ? hole->a : hole->b;
                break;
            case FrameKind::AppL: {
                need(hole->kind == TypeKind::Arrow, "app", "hole is not a function", dummy);
                need(sub(fr.t1) == hole->a, "app", "argument type mismatch", dummy);
                r = hole->b;
                break;
            }
            case FrameKind::AppR: {
                TypeP f = sub(fr.t1);
                need(f->kind == TypeKind::Arrow && f->a == hole, "app", "argument type mismatch", dummy);
                r = f->b;
                break;
            }
            case FrameKind::Ref:
                need(!fr.ty || fr.ty == hole, "ref", "cell type mismatch", dummy);
                r = t_ref(hole);
                break;
            case FrameKind::Deref:
                need(hole->kind == TypeKind::Ref, "deref", "dereferencing non-reference", dummy);
                r = hole->a;
                break;
            case FrameKind::AssignL:
                need(hole->kind == TypeKind::Ref && sub(fr.t1) == hole->a, "assign", "type mismatch", dummy);
                r = t_unit();
                break;
            case FrameKind::AssignR: {
                TypeP l = sub(fr.t1);
                need(l->kind == TypeKind::Ref && l->a == hole, "assign", "type mismatch", dummy);
                r = t_unit();
                break;
            }
            case FrameKind::If: {
                need(hole == t_bool(), "if", "condition is not Bool", dummy);
                TypeP a = sub(fr.t1), b = sub(fr.t2);
                need(a == b, "if", "branch types differ", dummy);
                r = a;
                break;
            }
            case FrameKind::ArithL:
            case FrameKind::ArithR:
                need(hole == t_int() && sub(fr.t1) == t_int(), "arith", "operands must be Int", dummy);
                r = t_int();
                break;
            case FrameKind::CmpL:
            case FrameKind::CmpR: {
                TypeP o = sub(fr.t1);
                if (fr.op == Op::RefEq)
                    need(hole->kind == TypeKind::Ref && o == hole, "refeq", "operands must be equal references", dummy);
                else
                    need(hole == t_int() && o == t_int(), "cmp", "operands must be Int", dummy);
                r = t_bool();
                break;
            }
            case FrameKind::ThrowL: {
                TypeP k = sub(fr.t1);
                need(k->kind == TypeKind::Cont && k->a == hole, "throw", "continuation type mismatch", dummy);
                r = fr.ty;
                break;
            }
            case FrameKind::ThrowR: {
                TypeP v = sub(fr.t1);
                need(hole->kind == TypeKind::Cont && hole->a == v, "throw", "continuation type mismatch", dummy);
                r = fr.ty;
                break;
            }
        }
        need(r != nullptr, "context", "missing annotation", dummy);
        note(r);
        return r;
    }

    TypeP term_inner(const TermP& m) {
        switch (m->tag) {
            case Tag::Unit: return t_unit();
            case Tag::True:
            case Tag::False: return t_bool();
            case Tag::Int: return t_int();
            case Tag::Var:
                for (auto it = vars_.rbegin(); it != vars_.rend(); ++it)
                    if (it->first == m->x) return it->second;
                fail("var", "unbound variable " + m->x, m);
            case Tag::Loc: {
                auto it = sigma_.find(m->loc);
                need(it != sigma_.end(), "loc", "location not in the store typing", m);
                return t_ref(it->second);
            }
            case Tag::FName:
                need(m->name.is_fun(), "fname", "continuation name used as a term", m);
                return m->name.type;
            case Tag::Pair: return t_prod(term(m->a), term(m->b));
            case Tag::Fst:
            case Tag::Snd: {
                TypeP t = term(m->a);
                need(t->kind == TypeKind::Prod, "proj", "projection of non-product", m);
                return m->tag == Tag::Fst ? t->a : t->b;
            }
            case Tag::Lam: return t_arrow(m->ty, bind(m->x, m->ty, m->a));
            case Tag::Fix: {
                TypeP ft = t_arrow(m->ty, m->ty2);
                note(ft);
                vars_.emplace_back(m->f, ft);
                TypeP r = bind(m->x, m->ty, m->a);
                vars_.pop_back();
                need(r == m->ty2, "fix", "body type differs from the annotation", m);
                return ft;
            }
            case Tag::App: {
                TypeP f = term(m->a);
                need(f->kind == TypeKind::Arrow, "app", "applying a non-function", m);
                need(term(m->b) == f->a, "app", "argument type mismatch", m);
                return f->b;
            }
            case Tag::Ref: {
                TypeP t = term(m->a);
                need(!m->ty || m->ty == t, "ref", "cell type mismatch", m);
                return t_ref(t);
            }
            case Tag::Deref: {
                TypeP t = term(m->a);
                need(t->kind == TypeKind::Ref, "deref", "dereferencing non-reference", m);
                return t->a;
            }
            case Tag::Assign: {
                TypeP a = term(m->a);
                need(a->kind == TypeKind::Ref && term(m->b) == a->a, "assign", "type mismatch", m);
                return t_unit();
            }
            case Tag::If: {
                need(term(m->a) == t_bool(), "if", "condition is not Bool", m);
                TypeP a = term(m->b), b = term(m->c);
                need(a == b, "if", "branch types differ", m);
                return a;
            }
            case Tag::Arith:
                need(term(m->a) == t_int() && term(m->b) == t_int(), "arith", "operands must be Int", m);
                return t_int();
            case Tag::Cmp: {
                TypeP a = term(m->a), b = term(m->b);
                if (m->op == Op::RefEq)
                    need(a->kind == TypeKind::Ref && a == b, "refeq", "operands must be equal references", m);
                else
                    need(a == t_int() && b == t_int(), "cmp", "operands must be Int", m);
                return t_bool();
            }
            case Tag::Callcc: {
                TypeP r = bind(m->x, t_cont(m->ty), m->a);
                need(r == m->ty, "callcc", "body type differs from the annotation", m);
                return m->ty;
            }
            case Tag::Throw: {
                TypeP v = term(m->a), k = term(m->b);
                need(k->kind == TypeKind::Cont && k->a == v, "throw", "continuation type mismatch", m);
                need(m->ty != nullptr, "throw", "missing result type", m);
                return m->ty;
            }
            case Tag::Cont: {
                TypeP r = context(*m->ctx, m->ty);
                if (m->named) {
                    need(m->name.is_cont(), "cont", "expected a continuation name", m);
                    need(m->name.type == r, "cont", "continuation name type differs from the context result", m);
                }
                return t_cont(m->ty);
            }
            default: fail("term", "surface-only form", m);
        }
    }
};

bool type_in(TypeP t, Model frag) { return classify_type_fragment(t).count(frag) > 0; }

}  // namespace

TypeP infer_type(const TypeEnv& env, const TermP& m) { return Checker(env, nullptr).term(m); }

TypeP infer_context_type(const TypeEnv& env, const Context& k, TypeP hole) {
    return Checker(env, nullptr).context(k, hole);
}

std::set<Model> classify_type_fragment(TypeP t) {
    std::set<Model> out{Model::HOSC};
    bool ground_refs = true;
    std::vector<TypeP> stack{t};
    while (!stack.empty()) {
        TypeP u = stack.back();
        stack.pop_back();
        if (!u) continue;
        if (u->kind == TypeKind::Ref && !is_ground(u->a)) ground_refs = false;
        stack.push_back(u->a);
        stack.push_back(u->b);
    }
    bool cont_free = is_cont_free(t);
    if (ground_refs) out.insert(Model::GOSC);
    if (cont_free) out.insert(Model::HOS);
    if (ground_refs && cont_free) out.insert(Model::GOS);
    return out;
}

bool term_in_fragment(const TypeEnv& env, const TermP& m, Model frag) {
    std::vector<TypeP> seen;
    for (const auto& [l, t] : env.sigma) seen.push_back(t_ref(t));
    for (const auto& [x, t] : env.gamma) seen.push_back(t);
    Checker(env, &seen).term(m);
    return std::all_of(seen.begin(), seen.end(), [&](TypeP t) { return type_in(t, frag); });
}

bool context_in_fragment(const TypeEnv& env, const Context& k, TypeP hole, Model frag) {
    std::vector<TypeP> seen{hole};
    for (const auto& [l, t] : env.sigma) seen.push_back(t_ref(t));
    for (const auto& [x, t] : env.gamma) seen.push_back(t);
    Checker(env, &seen).context(k, hole);
    return std::all_of(seen.begin(), seen.end(), [&](TypeP t) { return type_in(t, frag); });
}

bool check_cr_free(const TypeEnv& env, const TermP& m, TypeP boundary) {
    if (has_runtime_forms(m)) return false;
    if (!is_boundary(boundary)) return false;
    for (const auto& [x, t] : env.gamma)
        if (!is_boundary(t)) return false;
    return true;
}

}  // namespace hosc
