#include "generator.hpp"

#include <functional>
#include <stdexcept>

namespace hosc {

namespace {

struct Gen {
    std::mt19937_64& rng;
    const GenOptions& opt;
    VarEnv env;
    int fresh = 0;

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
    bool coin(int percent) { return pick(100) < percent; }

    std::string var(const char* stem) { return stem + std::to_string(fresh++); }

    /// Innermost binding of each variable with type t.
    std::vector<std::string> vars_of(TypeP t) const {
        std::vector<std::string> out;
        for (std::size_t i = env.size(); i-- > 0;) {
            bool shadowed = false;
            for (std::size_t j = i + 1; j < env.size(); ++j) shadowed = shadowed || env[j].first == env[i].first;
            if (!shadowed && env[i].second == t) out.push_back(env[i].first);
        }
        return out;
    }

    std::vector<std::pair<std::string, TypeP>> visible() const {
        std::vector<std::pair<std::string, TypeP>> out;
        for (std::size_t i = env.size(); i-- > 0;) {
            bool shadowed = false;
            for (std::size_t j = i + 1; j < env.size(); ++j) shadowed = shadowed || env[j].first == env[i].first;
            if (!shadowed) out.push_back(env[i]);
        }
        return out;
    }

    template <class F>
    TermP bind(const std::string& x, TypeP t, F&& body) {
        env.emplace_back(x, t);
        TermP m = body();
        env.pop_back();
        return m;
    }

    TermP constant(TypeP t) {
        switch (t->kind) {
            case TypeKind::Unit: return mk_unit();
            case TypeKind::Int: return mk_int(static_cast<long>(pick(3)));
            case TypeKind::Bool: return mk_bool(coin(50));
            case TypeKind::Prod: return mk_pair(leaf(t->a), leaf(t->b));
            case TypeKind::Arrow: {
                std::string x = var("v");
                return mk_lam(x, t->a, bind(x, t->a, [&] { return leaf(t->b); }));
            }
            default: throw std::logic_error("no constant of type " + show_type(t));
        }
    }

    TermP leaf(TypeP t) {
        auto vs = vars_of(t);
        if (!vs.empty() && coin(60)) return mk_var(vs[pick(static_cast<int>(vs.size()))]);
        return constant(t);
    }

    TypeP ground() {
        switch (pick(3)) {
            case 0: return t_unit();
            case 1: return t_int();
            default: return t_bool();
        }
    }

    TypeP cell_type() {
        if (opt.higher_order_store && coin(30)) return t_arrow(t_unit(), t_unit());
        return coin(70) ? t_int() : t_bool();
    }

    TermP gen(TypeP t, int depth) {
        if (depth <= 0 || coin(10)) return leaf(t);
        std::vector<std::function<TermP()>> moves;
        auto d = depth - 1;
        if (t->kind == TypeKind::Int) {
            moves.push_back([&] { return mk_arith(coin(50) ? Op::Add : Op::Sub, gen(t_int(), d), gen(t_int(), d)); });
        }
        if (t->kind == TypeKind::Bool) {
            moves.push_back([&] { return mk_cmp(coin(50) ? Op::Eq : Op::Lt, gen(t_int(), d), gen(t_int(), d)); });
        }
        if (t->kind == TypeKind::Unit) {
            for (const auto& [x, rt] : visible())
                if (rt->kind == TypeKind::Ref) {
                    std::string r = x;
                    TypeP ct = rt->a;
                    moves.push_back([&, r, ct] { return mk_assign(mk_var(r), gen(ct, d)); });
                }
        }
        if (t->kind == TypeKind::Arrow) {
            moves.push_back([&] {
                std::string x = var("v");
                return mk_lam(x, t->a, bind(x, t->a, [&] { return gen(t->b, d); }));
            });
        }
        if (t->kind == TypeKind::Prod) {
            moves.push_back([&] { return mk_pair(gen(t->a, d), gen(t->b, d)); });
        }
        moves.push_back([&] { return mk_if(gen(t_bool(), d), gen(t, d), gen(t, d)); });
        moves.push_back([&] { return mk_seq(gen(t_unit(), d), gen(t, d), t_unit()); });
        moves.push_back([&] {
            TypeP ct = cell_type();
            std::string r = var("r");
            TermP init = gen(ct, d);
            return mk_let(r, t_ref(ct), mk_ref(init, ct), bind(r, t_ref(ct), [&] { return gen(t, d); }));
        });
        for (const auto& [x, vt] : visible()) {
            std::string f = x;
            if (vt->kind == TypeKind::Ref && vt->a == t) moves.push_back([f] { return mk_deref(mk_var(f)); });
            if (vt->kind == TypeKind::Ref && vt->a->kind == TypeKind::Arrow && vt->a->b == t) {
                TypeP ft = vt->a;
                moves.push_back([&, f, ft] { return mk_app(mk_deref(mk_var(f)), gen(ft->a, d)); });
            }
            if (vt->kind == TypeKind::Arrow && vt->b == t) {
                TypeP ft = vt;
                for (int w = 0; w < 3; ++w) moves.push_back([&, f, ft] { return mk_app(mk_var(f), gen(ft->a, d)); });
            }
            if (vt->kind == TypeKind::Arrow && vt->b != t && t->kind != TypeKind::Unit) {
                TypeP ft = vt;
                moves.push_back([&, f, ft] { return mk_seq(mk_app(mk_var(f), gen(ft->a, d)), gen(t, d), ft->b); });
            }
            if (vt->kind == TypeKind::Prod && vt->a == t) moves.push_back([f] { return mk_fst(mk_var(f)); });
            if (vt->kind == TypeKind::Prod && vt->b == t) moves.push_back([f] { return mk_snd(mk_var(f)); });
            if (opt.control && vt->kind == TypeKind::Cont) {
                TypeP kt = vt->a;
                moves.push_back([&, f, kt] { return mk_throw(gen(kt, d), mk_var(f), t); });
            }
        }
        if (opt.control) {
            moves.push_back([&] {
                std::string k = var("k");
                return mk_callcc(k, t, bind(k, t_cont(t), [&] { return gen(t, d); }));
            });
        }
        return moves[static_cast<std::size_t>(pick(static_cast<int>(moves.size())))]();
    }
};

TypeP boundary_type(std::mt19937_64& rng, bool for_gamma) {
    static const std::vector<TypeP> gamma_pool = {
        t_arrow(t_unit(), t_unit()), t_arrow(t_int(), t_int()), t_arrow(t_arrow(t_unit(), t_unit()), t_unit()),
        t_arrow(t_unit(), t_int()), t_int(), t_bool()};
    static const std::vector<TypeP> result_pool = {
        t_unit(), t_int(), t_arrow(t_unit(), t_unit()), t_arrow(t_unit(), t_int()),
        t_arrow(t_int(), t_int()), t_prod(t_arrow(t_unit(), t_unit()), t_arrow(t_unit(), t_int())),
        t_arrow(t_arrow(t_unit(), t_unit()), t_unit())};
    const auto& pool = for_gamma ? gamma_pool : result_pool;
    return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
}

}  // namespace

TermFile generate_term(std::mt19937_64& rng, const GenOptions& opt) {
    for (;;) {
        Gen g{rng, opt, {}, 0};
        int n = 1 + g.pick(opt.max_gamma);
        for (int i = 0; i < n; ++i) g.env.emplace_back("g" + std::to_string(i), boundary_type(rng, true));
        VarEnv gamma = g.env;
        TypeP t = boundary_type(rng, false);
        TermP raw = g.gen(t, opt.depth);
        // Elaborate through the parser so the term carries every annotation.
        TermP m = parse_term(show_term(raw), gamma);
        TypeEnv env{{}, gamma};
        if (infer_type(env, m) != t || !check_cr_free(env, m, t)) continue;
        return TermFile{gamma, m, t};
    }
}

std::vector<TermFile> generate_corpus(std::uint64_t seed, std::size_t n, const GenOptions& opt) {
    std::mt19937_64 rng(seed);
    std::vector<TermFile> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(generate_term(rng, opt));
    return out;
}

}  // namespace hosc
