#include "synth.hpp"

#include <algorithm>
#include <functional>

namespace hosc {

namespace {

struct Leaf {
    std::vector<int> path;  // 1 = fst, 2 = snd, outermost projection first
    TermP node;
};

void collect_leaves(const AVal& a, std::vector<int>& path, std::vector<Leaf>& out) {
    if (a->tag == Tag::Pair) {
        path.push_back(1);
        collect_leaves(a->a, path, out);
        path.back() = 2;
        collect_leaves(a->b, path, out);
        path.pop_back();
        return;
    }
    out.push_back(Leaf{path, a});
}

std::vector<Leaf> leaves(const AVal& a) {
    std::vector<Leaf> out;
    std::vector<int> path;
    collect_leaves(a, path, out);
    return out;
}

TermP project(const std::string& x, const std::vector<int>& path) {
    TermP m = mk_var(x);
    for (auto it = path.rbegin(); it != path.rend(); ++it) m = *it == 1 ? mk_fst(m) : mk_snd(m);
    return m;
}

TermP seq(const std::vector<TermP>& stmts, TermP last) {
    for (auto it = stmts.rbegin(); it != stmts.rend(); ++it) last = mk_seq(*it, last, t_unit());
    return last;
}

TermP omega(TypeP t) { return mk_omega_term(t); }

/// assert_A(x): diverges unless the constants of x match those of A.
std::vector<TermP> assertion(const std::string& x, const AVal& a) {
    std::vector<TermP> out;
    for (const Leaf& l : leaves(a)) {
        TermP p = project(x, l.path);
        switch (l.node->tag) {
            case Tag::Int: out.push_back(mk_if(mk_cmp(Op::Eq, p, mk_int(l.node->num)), mk_unit(), omega(t_unit()))); break;
            case Tag::True: out.push_back(mk_if(p, mk_unit(), omega(t_unit()))); break;
            case Tag::False: out.push_back(mk_if(p, omega(t_unit()), mk_unit())); break;
            default: break;
        }
    }
    return out;
}

/// [π x / A]: each name of A becomes the projection of x that reaches it.
TermP substitute_projections(const TermP& m, const std::string& x, const AVal& a) {
    std::vector<std::pair<Name, TermP>> s;
    for (const Leaf& l : leaves(a))
        if (l.node->tag == Tag::FName) s.emplace_back(l.node->name, project(x, l.path));
    return s.empty() ? m : subst_names(m, s);
}

TermP final_cont(const Name& fin) { return mk_cont(fin.type, empty_context(), fin); }

Context app_frame(TermP fn) {
    Frame fr{};
    fr.kind = FrameKind::AppR;
    fr.t1 = std::move(fn);
    return Context{fr};
}

Trace prepare(const Trace& in, Model model, TypeP hint, TypeP& answer) {
    if (in.size() % 2 != 0) throw SynthError("the trace has odd length", static_cast<int>(in.size()) - 1);
    if (!in.acts.empty() && in.acts.front().pol != Pol::O) throw SynthError("the trace must start with an O-action", 0);
    Trace t = in;
    answer = nullptr;
    bool has_err = false;
    for (const Name& n : t.ambient_o) {
        if (n.is_final()) {
            if (answer && answer != n.type) throw SynthError("the trace fixes two final names", -1);
            answer = n.type;
        }
        has_err = has_err || n.is_err();
    }
    if (answer && hint && hint != answer)
        throw SynthError("the trace's final name has type " + show_type(answer) + ", not " + show_type(hint), -1);
    if (!answer) {
        answer = hint ? hint : t_unit();
        t.ambient_o.push_back(final_name(answer));
    }
    if (!has_err) t.ambient_o.push_back(err_name());
    std::size_t conts = 0;
    for (const Name& n : t.ambient_p) {
        if (!n.is_cont() && !n.is_fun()) throw SynthError("bad ambient name " + show_name(n), -1);
        if (n.role != NameRole::Plain) throw SynthError("reserved name " + show_name(n) + " on the O side", -1);
        if (n.is_cont()) ++conts;
    }
    if (conts != 1) throw SynthError("the O side must own exactly one ambient continuation name", -1);
    WellFormed wf = check_well_formed(t);
    if (!wf.ok) throw SynthError("ill-formed trace: " + wf.reason, wf.position);
    t = canonicalize(t, {});
    auto require = [&](Predicate p) {
        PredicateResult r = check_predicate(t, p, answer);
        if (!r.holds)
            throw SynthError("the trace is not " + predicate_name(p) + " (action " + std::to_string(r.violation) + ")",
                             r.violation);
    };
    if (has_visibility(model)) require(Predicate::PVisible);
    if (has_bracketing(model)) require(Predicate::PBracketed);
    return t;
}

Name ambient_cont(const Trace& t) {
    for (const Name& n : t.ambient_p)
        if (n.is_cont()) return n;
    throw std::logic_error("no ambient continuation");
}

/// ξ-type of a continuation introduced by P in pair i (or ambient, i = -1).
TypeP xi_type(const Trace& t, int i, TypeP answer) {
    if (i < 0) return answer;
    return compute_topp(t.prefix(2 * static_cast<std::size_t>(i) + 1), answer).type;
}

// ---------------------------------------------------------------------------
// Higher-order store: one reference per name, rewritten at every step.

struct TableBuilder {
    const Trace& t;
    bool control;
    TypeP answer;
    bool corrupt;

    std::vector<Name> fp, cp, fo, co;
    std::map<Name, std::size_t> fp_i, cp_i, fo_i, co_i;
    std::vector<TypeP> cp_ty;  // σ → ξ-type
    std::size_t base_fp = 0, base_cp = 0, base_fo = 0, base_co = 0;

    static void add(std::vector<Name>& v, std::map<Name, std::size_t>& m, const Name& n) {
        m[n] = v.size();
        v.push_back(n);
    }

    void index() {
        for (const Name& n : t.ambient_p) {
            if (n.is_fun()) add(fp, fp_i, n);
        }
        Name c = ambient_cont(t);
        add(cp, cp_i, c);
        cp_ty.push_back(t_arrow(c.type, answer));
        for (std::size_t k = 0; k < t.acts.size(); ++k) {
            const Action& a = t.acts[k];
            for (const Name& n : aval_names(a.payload)) {
                if (a.pol == Pol::P) add(fp, fp_i, n);
                else add(fo, fo_i, n);
            }
            if (!a.question) continue;
            if (a.pol == Pol::P) {
                add(cp, cp_i, a.cont);
                cp_ty.push_back(t_arrow(a.cont.type, xi_type(t, static_cast<int>(k / 2), answer)));
            } else if (control) {
                add(co, co_i, a.cont);
            }
        }
        base_cp = fp.size();
        base_fo = base_cp + cp.size();
        base_co = base_fo + fo.size();
    }

    Loc fpr(std::size_t j) const { return Loc{1, static_cast<std::uint32_t>(base_fp + j)}; }
    Loc cpr(std::size_t j) const { return Loc{1, static_cast<std::uint32_t>(base_cp + j)}; }
    Loc foor(std::size_t j) const { return Loc{1, static_cast<std::uint32_t>(base_fo + j)}; }
    Loc cor(std::size_t j) const { return Loc{1, static_cast<std::uint32_t>(base_co + j)}; }

    static TermP diverge(const Loc& l, TypeP arrow) {
        return mk_lam("x", arrow->a, mk_app(mk_deref(mk_loc(l)), mk_var("x")));
    }

    TermP value_of_payload(const AVal& a) const {
        return rewrite(a, [&](const TermP& n) -> TermP {
            if (n->tag != Tag::FName) return nullptr;
            return diverge(fpr(fp_i.at(n->name)), n->name.type);
        });
    }

    std::vector<TermP> savefun(const std::string& x, const AVal& a) const {
        std::vector<TermP> out;
        for (const Leaf& l : leaves(a))
            if (l.node->tag == Tag::FName) out.push_back(mk_assign(mk_loc(foor(fo_i.at(l.node->name))), project(x, l.path)));
        return out;
    }

    SynthResult build() {
        index();
        std::size_t n = t.size() / 2;
        std::vector<TermP> fpv(fp.size()), cpv(cp.size());
        auto reset = [&] {
            for (std::size_t j = 0; j < fp.size(); ++j) fpv[j] = diverge(fpr(j), fp[j].type);
            for (std::size_t j = 0; j < cp.size(); ++j) cpv[j] = diverge(cpr(j), cp_ty[j]);
        };
        reset();
        for (std::size_t i = n; i-- > 0;) {
            const Action& o = t.acts[2 * i];
            const Action& p = t.acts[2 * i + 1];
            TypeP top = compute_topp(t.prefix(2 * i + 1), answer).type;
            TermP v = value_of_payload(p.payload);
            TermP m2;
            if (!p.question) {
                if (!control) {
                    m2 = v;
                } else {
                    TermP k = p.subject.is_final() ? final_cont(p.subject) : mk_deref(mk_loc(cor(co_i.at(p.subject))));
                    m2 = mk_throw(v, k, top);
                }
            } else {
                std::size_t j2 = cp_i.at(p.cont);
                TermP callee = p.subject.is_err() ? mk_fname(err_name()) : mk_deref(mk_loc(foor(fo_i.at(p.subject))));
                m2 = mk_app(diverge(cpr(j2), cp_ty[j2]), mk_app(callee, v));
            }
            std::vector<TermP> setheap;
            for (std::size_t j = 0; j < fp.size(); ++j) setheap.push_back(mk_assign(mk_loc(fpr(j)), fpv[j]));
            for (std::size_t j = 0; j < cp.size(); ++j) setheap.push_back(mk_assign(mk_loc(cpr(j)), cpv[j]));
            reset();
            if (corrupt && i == 0) continue;
            std::vector<TermP> pre = assertion("x", o.payload);
            for (TermP& s : savefun("x", o.payload)) pre.push_back(std::move(s));
            if (!o.question) {
                std::size_t j = cp_i.at(o.subject);
                pre.insert(pre.end(), setheap.begin(), setheap.end());
                cpv[j] = mk_lam("x", o.subject.type, seq(pre, m2));
            } else {
                std::size_t j = fp_i.at(o.subject);
                TypeP res = o.subject.type->b;
                TermP body;
                if (control) {
                    std::vector<TermP> inner{mk_assign(mk_loc(cor(co_i.at(o.cont))), mk_var("y"))};
                    inner.insert(inner.end(), setheap.begin(), setheap.end());
                    body = seq(pre, mk_callcc("y", res, seq(inner, m2)));
                } else {
                    pre.insert(pre.end(), setheap.begin(), setheap.end());
                    body = seq(pre, m2);
                }
                fpv[j] = mk_lam("x", o.subject.type->a, body);
            }
        }

        SynthResult r;
        r.answer = answer;
        r.c = ambient_cont(t);
        r.trace = t;
        auto put = [&](const Loc& l, TermP v, TypeP ty, std::string name) {
            r.heap.cells[l] = std::move(v);
            r.heap.sigma[l] = ty;
            if (r.cell_names.size() <= l.index) r.cell_names.resize(l.index + 1);
            r.cell_names[l.index] = std::move(name);
        };
        for (std::size_t j = 0; j < fp.size(); ++j) put(fpr(j), fpv[j], fp[j].type, "fpr" + std::to_string(j));
        for (std::size_t j = 0; j < cp.size(); ++j) put(cpr(j), cpv[j], cp_ty[j], "cpr" + std::to_string(j));
        for (std::size_t j = 0; j < fo.size(); ++j)
            put(foor(j), diverge(foor(j), fo[j].type), fo[j].type, "foor" + std::to_string(j));
        for (std::size_t j = 0; j < co.size(); ++j) {
            TypeP s = co[j].type;
            Context k = app_frame(mk_lam("x", s, omega(answer)));
            put(cor(j), mk_cont(s, std::make_shared<const Context>(std::move(k)), final_name(answer)), t_cont(s),
                "cor" + std::to_string(j));
        }
        for (const Name& f : t.ambient_p)
            if (f.is_fun()) r.gamma.emplace_back(f, diverge(fpr(fp_i.at(f)), f.type));
        r.k = app_frame(diverge(cpr(0), cp_ty[0]));
        return r;
    }
};

// ---------------------------------------------------------------------------
// Ground store: a clock cell and lexically nested dispatch.

struct ClockBuilder {
    const Trace& t;
    bool control;
    TypeP answer;
    bool corrupt;
    Loc tick{1, 0};
    std::map<Name, int> intro;  // pair index where P introduced the name, -1 for ambient
    int fresh = 0;

    void index() {
        for (const Name& n : t.ambient_p) intro[n] = -1;
        for (std::size_t k = 1; k < t.acts.size(); k += 2)
            for (const Name& n : t.acts[k].introduced()) intro[n] = static_cast<int>(k / 2);
    }

    TermP payload_value(const AVal& a) {
        return rewrite(a, [&](const TermP& n) -> TermP {
            if (n->tag != Tag::FName) return nullptr;
            return value_f(n->name);
        });
    }

    /// M_u for the pair u, run with the O payload bound to x and result type res.
    TermP response(std::size_t u, const std::string& x, TypeP res) {
        const Action& o = t.acts[2 * u];
        const Action& p = t.acts[2 * u + 1];
        TermP v = payload_value(p.payload);
        TermP m;
        if (!p.question) {
            m = control ? mk_throw(v, final_or_named(p.subject), res) : v;
        } else {
            m = plug(value_c(p.cont), mk_app(mk_fname(p.subject), v));
        }
        if (control && o.question) {
            std::string y = "y" + std::to_string(fresh++);
            const Name target = o.cont;
            m = rewrite(m, [&](const TermP& n) -> TermP {
                if (n->tag == Tag::Cont && n->named && n->name == target && n->ctx->empty()) return mk_var(y);
                return nullptr;
            });
            m = mk_callcc(y, res, m);
        }
        return substitute_projections(m, x, o.payload);
    }

    static TermP final_or_named(const Name& c) { return mk_cont(c.type, empty_context(), c); }

    TermP dispatch(const Name& subject, TypeP arg, TypeP res, std::string& x) {
        x = "x" + std::to_string(fresh++);
        int from = intro.at(subject);
        TermP chain = omega(res);
        std::vector<std::size_t> uses;
        for (std::size_t u = static_cast<std::size_t>(from + 1); u < t.size() / 2; ++u)
            if (t.acts[2 * u].subject == subject) uses.push_back(u);
        for (auto it = uses.rbegin(); it != uses.rend(); ++it) {
            std::size_t u = *it;
            long when = static_cast<long>(u) + 1 + ((corrupt && u == 0) ? 1 : 0);
            TermP branch = seq(assertion(x, t.acts[2 * u].payload), response(u, x, res));
            chain = mk_if(mk_cmp(Op::Eq, mk_deref(mk_loc(tick)), mk_int(when)), branch, chain);
        }
        (void)arg;
        TermP bump = mk_assign(mk_loc(tick), mk_arith(Op::Add, mk_deref(mk_loc(tick)), mk_int(1)));
        return mk_seq(bump, chain, t_unit());
    }

    TermP value_f(const Name& f) {
        std::string x;
        TermP body = dispatch(f, f.type->a, f.type->b, x);
        return mk_lam(x, f.type->a, body);
    }

    Context value_c(const Name& d) {
        std::string x;
        TermP body = dispatch(d, d.type, xi_type(t, intro.at(d), answer), x);
        return app_frame(mk_lam(x, d.type, body));
    }

    SynthResult build() {
        index();
        SynthResult r;
        r.answer = answer;
        r.c = ambient_cont(t);
        r.trace = t;
        r.heap.cells[tick] = mk_int(0);
        r.heap.sigma[tick] = t_int();
        r.cell_names = {"tick"};
        for (const Name& f : t.ambient_p)
            if (f.is_fun()) r.gamma.emplace_back(f, value_f(f));
        r.k = value_c(r.c);
        auto check = [&](const std::vector<Name>& ns) {
            for (const Name& n : ns)
                if (!n.is_err() && !n.is_final())
                    throw SynthError("name " + show_name(n) + " escapes its lexical scope", -1);
        };
        for (const auto& [f, v] : r.gamma) {
            std::vector<Name> ns;
            collect_names(v, ns);
            check(ns);
        }
        std::vector<Name> ns;
        collect_names(r.k, ns);
        check(ns);
        return r;
    }
};

TermP downgrade(const TermP& m) {
    std::function<TermP(const TermP&)> go = [&](const TermP& t) -> TermP {
        return rewrite(t, [&](const TermP& n) -> TermP {
            if (n->tag == Tag::FName) {
                if (!n->name.is_err()) throw std::logic_error("unexpected name " + show_name(n->name));
                return mk_var("err");
            }
            if (n->tag == Tag::Cont && n->named) {
                if (!n->name.is_final()) throw std::logic_error("unexpected name " + show_name(n->name));
                Context k = *n->ctx;
                for (Frame& fr : k) {
                    if (fr.t1) fr.t1 = go(fr.t1);
                    if (fr.t2) fr.t2 = go(fr.t2);
                }
                return mk_cont(n->ty, std::make_shared<const Context>(std::move(k)));
            }
            return nullptr;
        });
    };
    return go(m);
}

Context downgrade(const Context& k) {
    Context out = k;
    for (Frame& fr : out) {
        if (fr.t1) fr.t1 = downgrade(fr.t1);
        if (fr.t2) fr.t2 = downgrade(fr.t2);
    }
    return out;
}

}  // namespace

std::vector<mpz_class> trace_ints(const Trace& t) {
    std::vector<mpz_class> out{0, 1};
    for (const Action& a : t.acts)
        for (const Leaf& l : leaves(a.payload))
            if (l.node->tag == Tag::Int) out.push_back(l.node->num);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SynthResult synthesize_context(const Trace& in, Model model, const SynthOptions& opt) {
    TypeP answer;
    Trace t = prepare(in, model, opt.answer, answer);
    bool control = !has_bracketing(model);
    SynthResult r;
    if (has_visibility(model)) {
        ClockBuilder cb{t, control, answer, opt.corrupt, Loc{1, 0}, {}, 0};
        r = cb.build();
    } else {
        TableBuilder tb{t, control, answer, opt.corrupt, {}, {}, {}, {}, {}, {}, {}, {}, {}, 0, 0, 0, 0};
        r = tb.build();
    }
    r.model = model;
    return r;
}

ContextInput to_context_input(const SynthResult& r) {
    ContextInput in;
    for (const auto& [l, v] : r.heap.cells) in.heap.cells[l] = downgrade(v);
    in.heap.sigma = r.heap.sigma;
    in.k = downgrade(r.k);
    in.hole = r.c.type;
    in.result = r.answer;
    for (std::size_t i = 0; i < r.gamma.size(); ++i) {
        std::string x = "g" + std::to_string(i);
        in.gamma.emplace_back(x, downgrade(r.gamma[i].second));
        in.gamma_types.emplace_back(x, r.gamma[i].first.type);
    }
    return in;
}

Config synthesized_config(const SynthResult& r) { return init_context_config(to_context_input(r), r.c); }

SynthReport verify_synthesis(const Trace& t, Model model, const SynthResult& r, std::size_t fuel) {
    SynthReport rep;
    Config cfg = synthesized_config(r);
    std::set<Name> fixed(cfg.amb_o.begin(), cfg.amb_o.end());
    fixed.insert(cfg.amb_p.begin(), cfg.amb_p.end());
    auto key = [&](const Trace& x) { return trace_key(canonicalize(x, fixed)); };

    Trace target = r.trace;
    if (t.size() != target.size()) rep.notes.push_back("the result was synthesized from a different trace");
    std::map<std::string, Trace> expected;
    for (std::size_t n = 0; n <= target.size(); n += 2) expected.emplace(key(target.prefix(n)), target.prefix(n));
    rep.expected = expected.size();

    Bounds b;
    b.depth = target.size();
    b.fuel = fuel;
    b.ints = trace_ints(target);
    TraceSet ts = enumerate_traces(cfg, b);
    std::set<std::string> found;
    for (const auto& e : ts.entries) {
        if (e.trace.size() % 2 != 0) continue;
        std::string k = key(e.trace);
        found.insert(k);
        if (!expected.count(k)) rep.extra.push_back(e.trace);
    }
    rep.found = found.size();
    for (const auto& [k, tr] : expected)
        if (!found.count(k)) rep.missing.push_back(tr);
    rep.exact = rep.missing.empty() && rep.extra.empty();

    ContextInput in = to_context_input(r);
    TypeEnv env{in.heap.sigma, {{"err", t_arrow(t_unit(), t_unit())}}};
    try {
        for (const auto& [l, ty] : in.heap.sigma) {
            if (!classify_type_fragment(t_ref(ty)).count(model)) {
                rep.fragment_ok = false;
                rep.notes.push_back("cell type " + show_type(t_ref(ty)) + " is outside " + model_name(model));
            }
            if (!term_in_fragment(env, in.heap.cells.at(l), model)) {
                rep.fragment_ok = false;
                rep.notes.push_back("cell " + show_loc(l) + " leaves " + model_name(model));
            }
        }
        for (const auto& [x, v] : in.gamma)
            if (!term_in_fragment(env, v, model)) {
                rep.fragment_ok = false;
                rep.notes.push_back("substitution entry " + x + " leaves " + model_name(model));
            }
        if (!context_in_fragment(env, in.k, in.hole, model)) {
            rep.fragment_ok = false;
            rep.notes.push_back("the evaluation context leaves " + model_name(model));
        }
    } catch (const TypeError& e) {
        rep.fragment_ok = false;
        rep.notes.push_back(std::string("ill-typed result: ") + e.what());
    }

    // Walk the script, probing every other O-move at each passive point.
    Config cur = cfg;
    for (std::size_t i = 0; i + 1 < target.size() + 1 && rep.determinate; i += 2) {
        Trace here = target.prefix(i);
        std::string scripted = i < target.size() ? key(target.prefix(i + 1)) : std::string();
        for (const OMove& mv : enumerate_o_moves(cur, b.ints)) {
            Trace probe = here;
            probe.acts.push_back(mv.action);
            if (key(probe) == scripted) continue;
            PResult pr = p_transition(mv.next, fuel);
            if (pr.kind != PKind::Diverged) {
                rep.determinate = false;
                rep.notes.push_back("off-script move " + show_action(mv.action) + " after " + std::to_string(i) +
                                    " actions does not diverge");
                break;
            }
        }
        if (i >= target.size()) break;
        if (o_move_refusal(cur, target.acts[i])) break;
        PResult pr = p_transition(apply_o_move(cur, target.acts[i]), fuel);
        if (pr.kind != PKind::Answer && pr.kind != PKind::Question) break;
        cur = pr.next;
    }
    rep.ok = rep.exact && rep.fragment_ok && rep.determinate;
    return rep;
}

}  // namespace hosc
