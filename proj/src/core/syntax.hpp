#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace hosc {

// ---------------------------------------------------------------------------
// Types. Interned: two TypeP are equal iff the types are structurally equal.

enum class TypeKind : std::uint8_t { Unit, Int, Bool, Ref, Cont, Prod, Arrow };

struct Type {
    TypeKind kind;
    const Type* a;
    const Type* b;
    std::uint32_t uid;
};
using TypeP = const Type*;

TypeP t_unit();
TypeP t_int();
TypeP t_bool();
TypeP t_ref(TypeP t);
TypeP t_cont(TypeP t);
TypeP t_prod(TypeP a, TypeP b);
TypeP t_arrow(TypeP a, TypeP b);

/// Surface form `ref Int -> Unit`. The compact form has no blanks and is used
/// inside name tokens (`f3@Unit->Unit`).
std::string show_type(TypeP t, bool compact = false);

bool is_ground(TypeP t);        // Unit | Int | Bool | ref ground
bool is_cont_free(TypeP t);
bool is_ref_free(TypeP t);
bool is_boundary(TypeP t);      // cont- and ref-free

// ---------------------------------------------------------------------------
// Names.

enum class NameKind : std::uint8_t { Fun, Cont };
enum class NameRole : std::uint8_t { Plain, Err, Final, Bottom };

/// Function names carry their arrow type; continuation names carry the
/// answer type σ of `c : σ`.
struct Name {
    NameKind kind = NameKind::Fun;
    NameRole role = NameRole::Plain;
    int id = -1;
    TypeP type = nullptr;

    bool is_fun() const { return kind == NameKind::Fun; }
    bool is_cont() const { return kind == NameKind::Cont; }
    bool is_final() const { return role == NameRole::Final; }
    bool is_err() const { return role == NameRole::Err; }
    bool is_bottom() const { return role == NameRole::Bottom; }
    bool valid() const { return type != nullptr || role == NameRole::Bottom; }

    friend bool operator==(const Name& x, const Name& y) {
        return x.kind == y.kind && x.role == y.role && x.id == y.id && x.type == y.type;
    }
    friend std::strong_ordering operator<=>(const Name& x, const Name& y) {
        if (auto o = x.kind <=> y.kind; o != 0) return o;
        if (auto o = x.role <=> y.role; o != 0) return o;
        if (auto o = x.id <=> y.id; o != 0) return o;
        std::uint32_t ux = x.type ? x.type->uid : 0, uy = y.type ? y.type->uid : 0;
        return ux <=> uy;
    }
};

Name fun_name(int id, TypeP arrow);
Name cont_name(int id, TypeP answer);
Name err_name();                 // errn : Unit -> Unit
Name final_name(TypeP answer);   // the ◦_σ family member at σ
Name bottom_name();              // the ⊥ marker stored in ξ

std::string show_name(const Name& n);

/// Deterministic allocator. One counter per kind; the indices never repeat
/// within a run, so (kind, id) already identifies a plain name.
struct NameAlloc {
    int next_fun = 0;
    int next_cont = 0;

    Name fresh_fun(TypeP arrow) { return fun_name(next_fun++, arrow); }
    Name fresh_cont(TypeP answer) { return cont_name(next_cont++, answer); }
    void reserve(const Name& n);  // bump counters past an externally chosen name
};

// ---------------------------------------------------------------------------
// Locations: space 0 belongs to term-side heaps, space 1 to context heaps.

struct Loc {
    std::uint32_t space = 0;
    std::uint32_t index = 0;
    friend auto operator<=>(const Loc&, const Loc&) = default;
    friend bool operator==(const Loc&, const Loc&) = default;
};

std::string show_loc(const Loc& l);

// ---------------------------------------------------------------------------
// Terms.

enum class Tag : std::uint8_t {
    Unit, True, False, Int, Var, Loc, FName,
    Pair, Fst, Snd, Lam, Fix, App,
    Ref, Deref, Assign, If, Arith, Cmp,
    Callcc, Throw, Cont,
    // Surface-only nodes, removed by elaboration.
    Omega, Ascribe, Hole,
};

enum class Op : std::uint8_t { Add, Sub, Mul, Eq, Lt, RefEq };

struct Frame;
using Context = std::vector<Frame>;  // outermost frame first
using ContextP = std::shared_ptr<const Context>;

struct Term;
using TermP = std::shared_ptr<const Term>;

struct Term {
    Tag tag = Tag::Unit;
    Op op = Op::Add;
    bool value = false;
    mpz_class num;
    std::string x;        // Lam/Callcc binder, Fix argument, Var name
    std::string f;        // Fix self name
    TypeP ty = nullptr;   // binder type, ref cell type, callcc answer type, throw result type, cont σ
    TypeP ty2 = nullptr;  // Fix result type
    Loc loc;
    Name name;            // FName, or the continuation name of cont(K,c)
    bool named = false;   // cont(K,c) vs cont(K)
    ContextP ctx;         // Cont
    TermP a, b, c;
};

// Constructors.
TermP mk_unit();
TermP mk_bool(bool v);
TermP mk_int(const mpz_class& n);
TermP mk_int(long n);
TermP mk_var(const std::string& x);
TermP mk_loc(const Loc& l);
TermP mk_fname(const Name& n);
TermP mk_pair(TermP a, TermP b);
TermP mk_fst(TermP a);
TermP mk_snd(TermP a);
TermP mk_lam(const std::string& x, TypeP t, TermP body);
TermP mk_fix(const std::string& f, const std::string& x, TypeP t, TypeP ret, TermP body);
TermP mk_app(TermP a, TermP b);
TermP mk_ref(TermP a, TypeP cell = nullptr);
TermP mk_deref(TermP a);
TermP mk_assign(TermP a, TermP b);
TermP mk_if(TermP c, TermP t, TermP e);
TermP mk_arith(Op op, TermP a, TermP b);
TermP mk_cmp(Op op, TermP a, TermP b);
TermP mk_callcc(const std::string& x, TypeP t, TermP body);
TermP mk_throw(TermP v, TermP k, TypeP result = nullptr);
TermP mk_cont(TypeP sigma, ContextP k);
TermP mk_cont(TypeP sigma, ContextP k, const Name& c);
TermP mk_omega(TypeP t = nullptr);
TermP mk_ascribe(TermP m, TypeP t);
TermP mk_hole();

// Sugar.
TermP mk_let(const std::string& x, TypeP t, TermP m, TermP n);  // (fun(x:t) n) m
TermP mk_seq(TermP m, TermP n, TypeP mt = nullptr);               // (fun(_:mt) n) m
TermP mk_not(TermP b);
TermP mk_omega_term(TypeP t);  // (fix w(v:Unit):t. w v) ()

// ---------------------------------------------------------------------------
// Evaluation contexts.

enum class FrameKind : std::uint8_t {
    PairL, PairR, Fst, Snd, AppL, AppR, Ref, Deref, AssignL, AssignR, If,
    ArithL, ArithR, CmpL, CmpR, ThrowL, ThrowR,
};

/// One layer of K. `t1`/`t2` hold the sibling subterms; for the *R kinds `t1`
/// is the value on the left.
struct Frame {
    FrameKind kind;
    Op op = Op::Add;
    TermP t1, t2;
    TypeP ty = nullptr;  // Ref cell type, Throw result type
};

TermP plug(const Context& k, TermP m);
TermP plug_frame(const Frame& fr, TermP m);
ContextP empty_context();
Context compose(const Context& outer, const Context& inner);

// ---------------------------------------------------------------------------
// Generic traversal.

/// Bottom-up rewrite. `f` is consulted first on each node; a non-null result
/// replaces the node without descending into it. Unchanged subtrees are shared.
/// Descends into the contexts of cont values.
template <class F>
TermP rewrite(const TermP& m, F&& f);

bool term_equal(const TermP& x, const TermP& y);
bool context_equal(const Context& x, const Context& y);

/// Substitute a closed term for a free variable.
TermP subst_var(const TermP& m, const std::string& x, const TermP& v);
TermP subst_names(const TermP& m, const std::vector<std::pair<Name, TermP>>& s);
Context subst_names(const Context& k, const std::vector<std::pair<Name, TermP>>& s);

/// Free names ν(M), including those inside cont values.
void collect_names(const TermP& m, std::vector<Name>& out);
void collect_names(const Context& k, std::vector<Name>& out);
bool has_runtime_forms(const TermP& m);  // locations or cont literals

struct SyntaxError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TypeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hosc

#include "syntax_rewrite.hpp"
