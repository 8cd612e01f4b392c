#include "syntax.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace hosc {

// ---------------------------------------------------------------------------
// Type interning

namespace {

struct TypeTable {
    std::mutex mu;
    std::map<std::tuple<TypeKind, std::uint32_t, std::uint32_t>, const Type*> table;
    std::uint32_t next_uid = 1;

    TypeP get(TypeKind k, TypeP a, TypeP b) {
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_tuple(k, a ? a->uid : 0u, b ? b->uid : 0u);
        auto it = table.find(key);
        if (it != table.end()) return it->second;
        auto* t = new Type{k, a, b, next_uid++};
        table.emplace(key, t);
        return t;
    }
};

TypeTable& types() {
    static TypeTable* tt = new TypeTable;
    return *tt;
}

}  // namespace

TypeP t_unit() { static TypeP t = types().get(TypeKind::Unit, nullptr, nullptr); return t; }
TypeP t_int() { static TypeP t = types().get(TypeKind::Int, nullptr, nullptr); return t; }
TypeP t_bool() { static TypeP t = types().get(TypeKind::Bool, nullptr, nullptr); return t; }
TypeP t_ref(TypeP t) { return types().get(TypeKind::Ref, t, nullptr); }
TypeP t_cont(TypeP t) { return types().get(TypeKind::Cont, t, nullptr); }
TypeP t_prod(TypeP a, TypeP b) { return types().get(TypeKind::Prod, a, b); }
TypeP t_arrow(TypeP a, TypeP b) { return types().get(TypeKind::Arrow, a, b); }

namespace {

// Levels: 0 arrow, 1 product, 2 prefix/atom.
void show_type_at(std::string& out, TypeP t, int level, bool compact) {
    auto open = [&](int need) {
        if (level > need) out += '(';
    };
    auto close = [&](int need) {
        if (level > need) out += ')';
    };
    switch (t->kind) {
        case TypeKind::Unit: out += "Unit"; break;
        case TypeKind::Int: out += "Int"; break;
        case TypeKind::Bool: out += "Bool"; break;
        case TypeKind::Ref:
        case TypeKind::Cont:
            out += t->kind == TypeKind::Ref ? "ref" : "cont";
            if (compact) {
                out += '(';
                show_type_at(out, t->a, 0, compact);
                out += ')';
            } else {
                out += ' ';
                show_type_at(out, t->a, 2, compact);
            }
            break;
        case TypeKind::Prod:
            open(1);
            show_type_at(out, t->a, 1, compact);
            out += compact ? "*" : " * ";
            show_type_at(out, t->b, 2, compact);
            close(1);
            break;
        case TypeKind::Arrow:
            open(0);
            show_type_at(out, t->a, 1, compact);
            out += compact ? "->" : " -> ";
            show_type_at(out, t->b, 0, compact);
            close(0);
            break;
    }
}

}  // namespace

std::string show_type(TypeP t, bool compact) {
    std::string out;
    show_type_at(out, t, 0, compact);
    return out;
}

bool is_ground(TypeP t) {
    switch (t->kind) {
        case TypeKind::Unit:
        case TypeKind::Int:
        case TypeKind::Bool: return true;
        case TypeKind::Ref: return is_ground(t->a);
        default: return false;
    }
}

bool is_cont_free(TypeP t) {
    if (!t) return true;
    if (t->kind == TypeKind::Cont) return false;
    return is_cont_free(t->a) && is_cont_free(t->b);
}

bool is_ref_free(TypeP t) {
    if (!t) return true;
    if (t->kind == TypeKind::Ref) return false;
    return is_ref_free(t->a) && is_ref_free(t->b);
}

bool is_boundary(TypeP t) { return is_cont_free(t) && is_ref_free(t); }

// ---------------------------------------------------------------------------
// Names

Name fun_name(int id, TypeP arrow) { return Name{NameKind::Fun, NameRole::Plain, id, arrow}; }
Name cont_name(int id, TypeP answer) { return Name{NameKind::Cont, NameRole::Plain, id, answer}; }
Name err_name() { return Name{NameKind::Fun, NameRole::Err, -1, t_arrow(t_unit(), t_unit())}; }
Name final_name(TypeP answer) { return Name{NameKind::Cont, NameRole::Final, -1, answer}; }
Name bottom_name() { return Name{NameKind::Cont, NameRole::Bottom, -1, nullptr}; }

std::string show_name(const Name& n) {
    switch (n.role) {
        case NameRole::Err: return "errn";
        case NameRole::Final: return "final@" + show_type(n.type, true);
        case NameRole::Bottom: return "bot";
        case NameRole::Plain: break;
    }
    return (n.is_fun() ? "f" : "c") + std::to_string(n.id) + "@" + show_type(n.type, true);
}

void NameAlloc::reserve(const Name& n) {
    if (n.role != NameRole::Plain) return;
    if (n.is_fun())
        next_fun = std::max(next_fun, n.id + 1);
    else
        next_cont = std::max(next_cont, n.id + 1);
}

std::string show_loc(const Loc& l) { return (l.space == 0 ? "l" : "m") + std::to_string(l.index); }

// ---------------------------------------------------------------------------
// Terms

namespace {

bool compute_value(const Term& t) {
    switch (t.tag) {
        case Tag::Unit:
        case Tag::True:
        case Tag::False:
        case Tag::Int:
        case Tag::Var:
        case Tag::Loc:
        case Tag::FName:
        case Tag::Lam:
        case Tag::Fix:
        case Tag::Cont: return true;
        case Tag::Pair: return t.a->value && t.b->value;
        default: return false;
    }
}

TermP finish(Term&& t) {
    t.value = compute_value(t);
    return std::make_shared<const Term>(std::move(t));
}

TermP node(Tag tag, TermP a = nullptr, TermP b = nullptr, TermP c = nullptr) {
    Term t;
    t.tag = tag;
    t.a = std::move(a);
    t.b = std::move(b);
    t.c = std::move(c);
    return finish(std::move(t));
}

}  // namespace

TermP rebuild(const Term& t, TermP a, TermP b, TermP c, ContextP ctx) {
    Term n = t;
    n.a = std::move(a);
    n.b = std::move(b);
    n.c = std::move(c);
    n.ctx = std::move(ctx);
    return finish(std::move(n));
}

TermP mk_unit() {
    static TermP u = node(Tag::Unit);
    return u;
}
TermP mk_bool(bool v) {
    static TermP tt = node(Tag::True), ff = node(Tag::False);
    return v ? tt : ff;
}
TermP mk_int(const mpz_class& n) {
    Term t;
    t.tag = Tag::Int;
    t.num = n;
    return finish(std::move(t));
}
TermP mk_int(long n) { return mk_int(mpz_class(n)); }
TermP mk_var(const std::string& x) {
    Term t;
    t.tag = Tag::Var;
    t.x = x;
    return finish(std::move(t));
}
TermP mk_loc(const Loc& l) {
    Term t;
    t.tag = Tag::Loc;
    t.loc = l;
    return finish(std::move(t));
}
TermP mk_fname(const Name& n) {
    Term t;
    t.tag = Tag::FName;
    t.name = n;
    return finish(std::move(t));
}
TermP mk_pair(TermP a, TermP b) { return node(Tag::Pair, std::move(a), std::move(b)); }
TermP mk_fst(TermP a) { return node(Tag::Fst, std::move(a)); }
TermP mk_snd(TermP a) { return node(Tag::Snd, std::move(a)); }
TermP mk_lam(const std::string& x, TypeP ty, TermP body) {
    Term t;
    t.tag = Tag::Lam;
    t.x = x;
    t.ty = ty;
    t.a = std::move(body);
    return finish(std::move(t));
}
TermP mk_fix(const std::string& f, const std::string& x, TypeP ty, TypeP ret, TermP body) {
    Term t;
    t.tag = Tag::Fix;
    t.f = f;
    t.x = x;
    t.ty = ty;
    t.ty2 = ret;
    t.a = std::move(body);
    return finish(std::move(t));
}
TermP mk_app(TermP a, TermP b) { return node(Tag::App, std::move(a), std::move(b)); }
TermP mk_ref(TermP a, TypeP cell) {
    Term t;
    t.tag = Tag::Ref;
    t.ty = cell;
    t.a = std::move(a);
    return finish(std::move(t));
}
TermP mk_deref(TermP a) { return node(Tag::Deref, std::move(a)); }
TermP mk_assign(TermP a, TermP b) { return node(Tag::Assign, std::move(a), std::move(b)); }
TermP mk_if(TermP c, TermP t, TermP e) { return node(Tag::If, std::move(c), std::move(t), std::move(e)); }
TermP mk_arith(Op op, TermP a, TermP b) {
    Term t;
    t.tag = Tag::Arith;
    t.op = op;
    t.a = std::move(a);
    t.b = std::move(b);
    return finish(std::move(t));
}
TermP mk_cmp(Op op, TermP a, TermP b) {
    Term t;
    t.tag = Tag::Cmp;
    t.op = op;
    t.a = std::move(a);
    t.b = std::move(b);
    return finish(std::move(t));
}
TermP mk_callcc(const std::string& x, TypeP ty, TermP body) {
    Term t;
    t.tag = Tag::Callcc;
    t.x = x;
    t.ty = ty;
    t.a = std::move(body);
    return finish(std::move(t));
}
TermP mk_throw(TermP v, TermP k, TypeP result) {
    Term t;
    t.tag = Tag::Throw;
    t.ty = result;
    t.a = std::move(v);
    t.b = std::move(k);
    return finish(std::move(t));
}
TermP mk_cont(TypeP sigma, ContextP k) {
    Term t;
    t.tag = Tag::Cont;
    t.ty = sigma;
    t.ctx = std::move(k);
    return finish(std::move(t));
}
TermP mk_cont(TypeP sigma, ContextP k, const Name& c) {
    Term t;
    t.tag = Tag::Cont;
    t.ty = sigma;
    t.ctx = std::move(k);
    t.name = c;
    t.named = true;
    return finish(std::move(t));
}
TermP mk_omega(TypeP ty) {
    Term t;
    t.tag = Tag::Omega;
    t.ty = ty;
    return finish(std::move(t));
}
TermP mk_ascribe(TermP m, TypeP ty) {
    Term t;
    t.tag = Tag::Ascribe;
    t.ty = ty;
    t.a = std::move(m);
    return finish(std::move(t));
}
TermP mk_hole() { return node(Tag::Hole); }

TermP mk_let(const std::string& x, TypeP ty, TermP m, TermP n) {
    return mk_app(mk_lam(x, ty, std::move(n)), std::move(m));
}
TermP mk_seq(TermP m, TermP n, TypeP mt) { return mk_let("_", mt, std::move(m), std::move(n)); }
TermP mk_not(TermP b) { return mk_if(std::move(b), mk_bool(false), mk_bool(true)); }
TermP mk_omega_term(TypeP ty) {
    return mk_app(mk_fix("w", "v", t_unit(), ty, mk_app(mk_var("w"), mk_var("v"))), mk_unit());
}

// ---------------------------------------------------------------------------
// Contexts

TermP plug_frame(const Frame& fr, TermP m) {
    switch (fr.kind) {
        case FrameKind::PairL: return mk_pair(std::move(m), fr.t1);
        case FrameKind::PairR: return mk_pair(fr.t1, std::move(m));
        case FrameKind::Fst: return mk_fst(std::move(m));
        case FrameKind::Snd: return mk_snd(std::move(m));
        case FrameKind::AppL: return mk_app(std::move(m), fr.t1);
        case FrameKind::AppR: return mk_app(fr.t1, std::move(m));
        case FrameKind::Ref: return mk_ref(std::move(m), fr.ty);
        case FrameKind::Deref: return mk_deref(std::move(m));
        case FrameKind::AssignL: return mk_assign(std::move(m), fr.t1);
        case FrameKind::AssignR: return mk_assign(fr.t1, std::move(m));
        case FrameKind::If: return mk_if(std::move(m), fr.t1, fr.t2);
        case FrameKind::ArithL: return mk_arith(fr.op, std::move(m), fr.t1);
        case FrameKind::ArithR: return mk_arith(fr.op, fr.t1, std::move(m));
        case FrameKind::CmpL: return mk_cmp(fr.op, std::move(m), fr.t1);
        case FrameKind::CmpR: return mk_cmp(fr.op, fr.t1, std::move(m));
        case FrameKind::ThrowL: return mk_throw(std::move(m), fr.t1, fr.ty);
        case FrameKind::ThrowR: return mk_throw(fr.t1, std::move(m), fr.ty);
    }
    return m;
}

TermP plug(const Context& k, TermP m) {
    for (auto it = k.rbegin(); it != k.rend(); ++it) m = plug_frame(*it, std::move(m));
    return m;
}

ContextP empty_context() {
    static ContextP e = std::make_shared<const Context>();
    return e;
}

Context compose(const Context& outer, const Context& inner) {
    Context out;
    out.reserve(outer.size() + inner.size());
    out.insert(out.end(), outer.begin(), outer.end());
    out.insert(out.end(), inner.begin(), inner.end());
    return out;
}

// ---------------------------------------------------------------------------
// Equality

bool context_equal(const Context& x, const Context& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Frame &f = x[i], &g = y[i];
        if (f.kind != g.kind || f.op != g.op || f.ty != g.ty) return false;
        if (!term_equal(f.t1, g.t1) || !term_equal(f.t2, g.t2)) return false;
    }
    return true;
}

bool term_equal(const TermP& x, const TermP& y) {
    if (x == y) return true;
    if (!x || !y) return false;
    if (x->tag != y->tag || x->op != y->op || x->ty != y->ty || x->ty2 != y->ty2) return false;
    switch (x->tag) {
        case Tag::Int:
            if (x->num != y->num) return false;
            break;
        case Tag::Var:
            if (x->x != y->x) return false;
            break;
        case Tag::Loc:
            if (!(x->loc == y->loc)) return false;
            break;
        case Tag::FName:
            if (!(x->name == y->name)) return false;
            break;
        case Tag::Lam:
        case Tag::Callcc:
            if (x->x != y->x) return false;
            break;
        case Tag::Fix:
            if (x->x != y->x || x->f != y->f) return false;
            break;
        case Tag::Cont:
            if (x->named != y->named || (x->named && !(x->name == y->name))) return false;
            if (!context_equal(*x->ctx, *y->ctx)) return false;
            break;
        default: break;
    }
    return term_equal(x->a, y->a) && term_equal(x->b, y->b) && term_equal(x->c, y->c);
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

Context subst_var_context(const Context& k, const std::string& x, const TermP& v);

TermP subst_var_impl(const TermP& m, const std::string& x, const TermP& v) {
    if (!m) return m;
    switch (m->tag) {
        case Tag::Var: return m->x == x ? v : m;
        case Tag::Unit:
        case Tag::True:
        case Tag::False:
        case Tag::Int:
        case Tag::Loc:
        case Tag::FName:
        case Tag::Hole:
        case Tag::Omega: return m;
        case Tag::Lam:
        case Tag::Callcc:
            if (m->x == x) return m;
            break;
        case Tag::Fix:
            if (m->x == x || m->f == x) return m;
            break;
        case Tag::Cont: {
            Context k = subst_var_context(*m->ctx, x, v);
            if (context_equal(k, *m->ctx)) return m;
            return rebuild(*m, m->a, m->b, m->c, std::make_shared<const Context>(std::move(k)));
        }
        default: break;
    }
    TermP a = subst_var_impl(m->a, x, v);
    TermP b = subst_var_impl(m->b, x, v);
    TermP c = subst_var_impl(m->c, x, v);
    if (a == m->a && b == m->b && c == m->c) return m;
    return rebuild(*m, a, b, c, m->ctx);
}

Context subst_var_context(const Context& k, const std::string& x, const TermP& v) {
    Context out = k;
    for (Frame& fr : out) {
        fr.t1 = subst_var_impl(fr.t1, x, v);
        fr.t2 = subst_var_impl(fr.t2, x, v);
    }
    return out;
}

}  // namespace

TermP subst_var(const TermP& m, const std::string& x, const TermP& v) { return subst_var_impl(m, x, v); }

TermP subst_names(const TermP& m, const std::vector<std::pair<Name, TermP>>& s) {
    if (s.empty()) return m;
    return rewrite(m, [&](const TermP& t) -> TermP {
        if (t->tag != Tag::FName) return nullptr;
        for (const auto& [n, r] : s)
            if (n == t->name) return r;
        return nullptr;
    });
}

Context subst_names(const Context& k, const std::vector<std::pair<Name, TermP>>& s) {
    Context out = k;
    for (Frame& fr : out) {
        if (fr.t1) fr.t1 = subst_names(fr.t1, s);
        if (fr.t2) fr.t2 = subst_names(fr.t2, s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Name support

void collect_names(const Context& k, std::vector<Name>& out) {
    for (const Frame& fr : k) {
        if (fr.t1) collect_names(fr.t1, out);
        if (fr.t2) collect_names(fr.t2, out);
    }
}

void collect_names(const TermP& m, std::vector<Name>& out) {
    if (!m) return;
    if (m->tag == Tag::FName) out.push_back(m->name);
    if (m->tag == Tag::Cont) {
        if (m->named) out.push_back(m->name);
        collect_names(*m->ctx, out);
    }
    collect_names(m->a, out);
    collect_names(m->b, out);
    collect_names(m->c, out);
}

bool has_runtime_forms(const TermP& m) {
    if (!m) return false;
    if (m->tag == Tag::Loc || m->tag == Tag::Cont) return true;
    return has_runtime_forms(m->a) || has_runtime_forms(m->b) || has_runtime_forms(m->c);
}

}  // namespace hosc
