#include "composite.hpp"

#include <functional>
#include <stdexcept>

namespace hosc {

namespace {

bool is_final_or_err(const Name& n) { return n.is_final() || n.is_err(); }

Heap merged_heap(const CompositeConfig& d) { return d.hp.merged(d.ho); }

std::vector<Name> names_of(const TermP& m) {
    std::vector<Name> out;
    collect_names(m, out);
    return out;
}

std::vector<Name> names_of(const Context& k) {
    std::vector<Name> out;
    collect_names(k, out);
    return out;
}

// Depth-first search for a cycle in the dependency graph "x mentions y".
bool has_cycle(const std::map<Name, std::vector<Name>>& deps) {
    std::map<Name, int> state;  // 1 = on stack, 2 = done
    std::function<bool(const Name&)> dfs = [&](const Name& n) {
        int& s = state[n];
        if (s == 1) return true;
        if (s == 2) return false;
        s = 1;
        auto it = deps.find(n);
        if (it != deps.end())
            for (const Name& m : it->second)
                if (dfs(m)) return true;
        state[n] = 2;
        return false;
    };
    for (const auto& [n, _] : deps)
        if (dfs(n)) return true;
    return false;
}

}  // namespace

bool p_running(const CompositeConfig& d) { return d.go_c.count(d.cont) > 0; }

Validity check_valid(const CompositeConfig& d) {
    auto bad = [](std::string why) { return Validity{false, std::move(why)}; };
    std::set<Name> dom_p, dom_o;
    for (const auto& [n, _] : d.gp_f) dom_p.insert(n);
    for (const auto& [n, _] : d.gp_c) dom_p.insert(n);
    for (const auto& [n, _] : d.go_f) dom_o.insert(n);
    for (const auto& [n, _] : d.go_c) dom_o.insert(n);
    for (const Name& n : dom_p) {
        if (dom_o.count(n)) return bad(show_name(n) + " is in both environments");
        if (is_final_or_err(n)) return bad("reserved name " + show_name(n) + " in an environment");
    }
    for (const Name& n : dom_o)
        if (is_final_or_err(n)) return bad("reserved name " + show_name(n) + " in an environment");
    std::set<Name> expected = dom_p;
    expected.insert(dom_o.begin(), dom_o.end());
    std::set<Name> plain_phi;
    for (const Name& n : d.phi)
        if (!is_final_or_err(n)) plain_phi.insert(n);
    if (plain_phi != expected) return bad("phi differs from the union of the environment domains");
    if (!d.phi.count(err_name())) return bad("errn missing from phi");

    std::set<Name> conts;
    for (const auto& [n, _] : d.gp_c) conts.insert(n);
    for (const auto& [n, _] : d.go_c) conts.insert(n);
    std::set<Name> dom_xi;
    for (const auto& [n, _] : d.xi) dom_xi.insert(n);
    if (dom_xi != conts) return bad("dom(xi) differs from the continuation names of the environments");
    for (const auto& [c, c2] : d.xi) {
        bool ok = d.gp_c.count(c) ? d.go_c.count(c2) > 0 : (d.gp_c.count(c2) > 0 || c2.is_final());
        if (!ok) return bad("xi(" + show_name(c) + ") does not alternate ownership");
    }
    // Every ξ-chain must end in the same final name.
    std::optional<Name> top;
    for (const auto& [c, _] : d.xi) {
        Name cur = c;
        std::size_t hops = 0;
        while (d.xi.count(cur)) {
            cur = d.xi.at(cur);
            if (++hops > d.xi.size()) return bad("xi has a cycle through " + show_name(c));
        }
        if (!cur.is_final()) return bad("xi-chain from " + show_name(c) + " ends in " + show_name(cur));
        if (top && !(*top == cur)) return bad("xi has two maximal elements");
        top = cur;
    }

    Heap h = merged_heap(d);
    TypeEnv env{h.sigma, {}};
    try {
        for (const auto* g : {&d.gp_f, &d.go_f})
            for (const auto& [f, v] : *g)
                if (infer_type(env, v) != f.type) return bad("gamma(" + show_name(f) + ") has the wrong type");
        for (const auto* g : {&d.gp_c, &d.go_c})
            for (const auto& [c, k] : *g) {
                TypeP r = infer_context_type(env, k, c.type);
                if (r != d.xi.at(c).type) return bad("gamma(" + show_name(c) + ") has the wrong result type");
            }
        if (!d.phi.count(d.cont)) return bad("current continuation not in phi");
        if (infer_type(env, d.term) != d.cont.type) return bad("term does not have the continuation's type");
    } catch (const TypeError& e) {
        return bad(std::string("ill-typed component: ") + e.what());
    }
    if (!d.hp.disjoint(d.ho)) return bad("heaps overlap");
    return {};
}

CompositeConfig merge(const Config& term_side, const Config& context_side) {
    if (term_side.active == context_side.active)
        throw std::invalid_argument(term_side.active ? "both configurations are active"
                                                     : "both configurations are passive");
    std::set<Name> expect = term_side.phi;
    for (const Name& n : term_side.phi)
        if (is_final_or_err(n)) throw std::invalid_argument("term-side phi contains a reserved name");
    std::set<Name> plain_o;
    bool has_final = false, has_err = false;
    for (const Name& n : context_side.phi) {
        if (n.is_final()) has_final = true;
        else if (n.is_err()) has_err = true;
        else plain_o.insert(n);
    }
    if (!has_final || !has_err || plain_o != expect)
        throw std::invalid_argument("phi_O is not phi_P plus the final and error names");

    CompositeConfig d;
    const Config& act = term_side.active ? term_side : context_side;
    d.term = act.term;
    d.cont = act.cont;
    d.gp_f = term_side.gamma_f;
    d.gp_c = term_side.gamma_c;
    d.go_f = context_side.gamma_f;
    d.go_c = context_side.gamma_c;
    for (const auto* side : {&term_side, &context_side})
        for (const auto& [c, c2] : side->xi)
            if (side->gamma_c.count(c)) d.xi[c] = c2;
    d.phi = context_side.phi;
    d.hp = term_side.heap;
    d.ho = context_side.heap;
    d.alloc.next_fun = std::max(term_side.alloc.next_fun, context_side.alloc.next_fun);
    d.alloc.next_cont = std::max(term_side.alloc.next_cont, context_side.alloc.next_cont);
    Validity v = check_valid(d);
    if (!v.ok) throw std::invalid_argument("merged configuration is not valid: " + v.reason);
    return d;
}

CStep composite_step(const CompositeConfig& d) {
    CStep out;
    bool p_side = p_running(d);
    const Heap& h = p_side ? d.hp : d.ho;
    std::uint32_t space = p_side ? 0 : 1;
    MachineState s{d.term, d.cont, h, space};
    if (auto n = step(s, Mode::Extended)) {
        out.kind = CStepKind::Tau;
        out.next = d;
        out.next.term = n->term;
        out.next.cont = n->cont;
        (p_side ? out.next.hp : out.next.ho) = n->heap;
        return out;
    }
    auto& other_f = p_side ? d.go_f : d.gp_f;
    auto& other_c = p_side ? d.go_c : d.gp_c;
    if (d.term->value) {
        if (d.cont.is_final()) {
            out.kind = CStepKind::Final;
            return out;
        }
        auto it = other_c.find(d.cont);
        if (it == other_c.end()) return out;
        CompositeConfig n = d;
        AValSplit sp = aval_decompose(d.term, d.cont.type, n.alloc);
        auto& own_f = p_side ? n.gp_f : n.go_f;
        for (const auto& [f, v] : sp.gamma) {
            own_f[f] = v;
            n.phi.insert(f);
        }
        n.term = plug(it->second, sp.pattern);
        n.cont = d.xi.at(d.cont);
        out.kind = CStepKind::Visible;
        out.label = p_side ? p_answer(d.cont, sp.pattern) : o_answer(d.cont, sp.pattern);
        out.next = std::move(n);
        return out;
    }
    auto dec = decompose(d.term);
    if (!dec || dec->redex->tag != Tag::App || dec->redex->a->tag != Tag::FName) return out;
    const Name f = dec->redex->a->name;
    if (f.is_err()) {
        out.kind = CStepKind::ErrStuck;
        return out;
    }
    auto it = other_f.find(f);
    if (it == other_f.end()) return out;
    CompositeConfig n = d;
    AValSplit sp = aval_decompose(dec->redex->b, f.type->a, n.alloc);
    Name c2 = n.alloc.fresh_cont(f.type->b);
    auto& own_f = p_side ? n.gp_f : n.go_f;
    auto& own_c = p_side ? n.gp_c : n.go_c;
    for (const auto& [g, v] : sp.gamma) {
        own_f[g] = v;
        n.phi.insert(g);
    }
    own_c[c2] = dec->k;
    n.xi[c2] = d.cont;
    n.phi.insert(c2);
    n.term = mk_app(it->second, sp.pattern);
    n.cont = c2;
    out.kind = CStepKind::Visible;
    out.label = p_side ? p_question(f, sp.pattern, c2) : o_question(f, sp.pattern, c2);
    out.next = std::move(n);
    return out;
}

std::pair<TermP, Heap> theta(const CompositeConfig& d) {
    std::map<Name, TermP> df;
    std::map<Name, Context> dc;
    for (const auto* g : {&d.gp_f, &d.go_f}) df.insert(g->begin(), g->end());
    for (const auto* g : {&d.gp_c, &d.go_c}) dc.insert(g->begin(), g->end());

    std::map<Name, std::vector<Name>> deps;
    for (const auto& [f, v] : df) deps[f] = names_of(v);
    for (const auto& [c, k] : dc) {
        auto ns = names_of(k);
        auto it = d.xi.find(c);
        if (it != d.xi.end()) ns.push_back(it->second);
        deps[c] = std::move(ns);
    }
    if (has_cycle(deps)) throw std::logic_error("theta: the name graph is cyclic");

    // K_{c} for the current δ-stage, outermost frame first.
    auto chain = [&](const std::map<Name, Context>& stage, Name c) {
        Context k;
        std::size_t hops = 0;
        while (!c.is_final()) {
            auto it = stage.find(c);
            if (it == stage.end()) throw std::logic_error("theta: no context for " + show_name(c));
            k = compose(it->second, k);
            c = d.xi.at(c);
            if (++hops > stage.size() + 1) throw std::logic_error("theta: xi does not reach a final name");
        }
        return k;
    };
    auto apply = [&](const std::map<Name, TermP>& sf, const std::map<Name, Context>& sc, const TermP& m) {
        std::function<TermP(const TermP&)> go = [&](const TermP& t) -> TermP {
            return rewrite(t, [&](const TermP& n) -> TermP {
                if (n->tag == Tag::FName) {
                    auto it = sf.find(n->name);
                    return it == sf.end() ? nullptr : it->second;
                }
                if (n->tag == Tag::Cont && n->named) {
                    Context inner = *n->ctx;
                    for (Frame& fr : inner) {
                        if (fr.t1) fr.t1 = go(fr.t1);
                        if (fr.t2) fr.t2 = go(fr.t2);
                    }
                    Context full = n->name.is_final() ? inner : compose(chain(sc, n->name), inner);
                    return mk_cont(n->ty, std::make_shared<const Context>(std::move(full)));
                }
                return nullptr;
            });
        };
        return go(m);
    };
    auto apply_ctx = [&](const std::map<Name, TermP>& sf, const std::map<Name, Context>& sc, const Context& k) {
        Context out = k;
        for (Frame& fr : out) {
            if (fr.t1) fr.t1 = apply(sf, sc, fr.t1);
            if (fr.t2) fr.t2 = apply(sf, sc, fr.t2);
        }
        return out;
    };

    std::size_t cap = df.size() + dc.size() + 2;
    for (std::size_t i = 0;; ++i) {
        if (i > cap) throw std::logic_error("theta: delta does not stabilise");
        std::map<Name, TermP> nf;
        std::map<Name, Context> nc;
        bool same = true;
        for (const auto& [f, v] : df) {
            nf[f] = apply(df, dc, v);
            same = same && term_equal(nf[f], v);
        }
        for (const auto& [c, k] : dc) {
            nc[c] = apply_ctx(df, dc, k);
            same = same && context_equal(nc[c], k);
        }
        if (same) break;
        df = std::move(nf);
        dc = std::move(nc);
    }

    TermP m = d.cont.is_final() ? d.term : plug(chain(dc, d.cont), d.term);
    m = apply(df, dc, m);
    Heap h = merged_heap(d);
    for (auto& [l, v] : h.cells) v = apply(df, dc, v);
    return {m, h};
}

std::string composite_end_name(CompositeEnd e) {
    switch (e) {
        case CompositeEnd::Final: return "final";
        case CompositeEnd::Err: return "err";
        case CompositeEnd::FuelExhausted: return "fuel-exhausted";
        case CompositeEnd::Stuck: return "stuck";
    }
    return "?";
}

CompositeRun composite_run(const CompositeConfig& d0, const Trace& ambient, std::size_t fuel, bool check_theta,
                           bool keep_audit) {
    CompositeRun run;
    run.trace = Trace{ambient.ambient_o, ambient.ambient_p, {}};
    CompositeConfig d = d0;
    std::optional<std::pair<TermP, Heap>> th;
    auto note = [&](const std::string& why) {
        if (run.bisimulation_ok) {
            run.bisimulation_ok = false;
            run.discrepancy = "step " + std::to_string(run.steps) + ": " + why;
        }
    };
    auto image = [&](const CompositeConfig& c) -> std::optional<std::pair<TermP, Heap>> {
        try {
            return theta(c);
        } catch (const std::logic_error& e) {
            note(e.what());
            return std::nullopt;
        }
    };
    if (check_theta || keep_audit) th = image(d);
    for (;;) {
        if (keep_audit && th) run.audit.push_back(show_term(th->first) + " | " + show_heap(th->second));
        if (check_theta && run.validity_ok) {
            Validity v = check_valid(d);
            if (!v.ok) {
                run.validity_ok = false;
                note("invalid configuration: " + v.reason);
            }
        }
        if (run.steps >= fuel) {
            run.end = CompositeEnd::FuelExhausted;
            break;
        }
        CStep st = composite_step(d);
        if (st.kind == CStepKind::Final || st.kind == CStepKind::ErrStuck || st.kind == CStepKind::Stuck) {
            run.end = st.kind == CStepKind::Final ? CompositeEnd::Final
                      : st.kind == CStepKind::ErrStuck ? CompositeEnd::Err
                                                        : CompositeEnd::Stuck;
            if (check_theta && th && step_base(th->first, th->second, p_running(d) ? 0 : 1))
                note("the plain image can still step after the composite run stopped");
            break;
        }
        ++run.steps;
        if (st.label) run.trace.acts.push_back(*st.label);
        if (check_theta || keep_audit) {
            auto next_th = image(st.next);
            if (check_theta && th && next_th) {
                if (st.kind == CStepKind::Tau) {
                    auto exp = step_base(th->first, th->second, p_running(d) ? 0 : 1);
                    if (!exp) {
                        note("the plain image is stuck");
                    } else if (!term_equal(exp->first, next_th->first) || !heap_equal(exp->second, next_th->second)) {
                        note("tau step maps to " + show_term(exp->first) + " but the image is " +
                             show_term(next_th->first));
                    }
                } else if (!term_equal(th->first, next_th->first) || !heap_equal(th->second, next_th->second)) {
                    note("visible step changes the image");
                }
            }
            th = std::move(next_th);
        }
        if (st.kind == CStepKind::Tau) ++run.tau_steps;
        d = std::move(st.next);
    }
    run.last = std::move(d);
    return run;
}

CompositeObservation composite_observes(const Config& term_side, const Config& context_side, Observation kind,
                                        std::size_t fuel) {
    CompositeObservation out;
    CompositeConfig d = merge(term_side, context_side);
    Trace amb = empty_trace_of(term_side);
    out.run = composite_run(d, amb, fuel, false);
    out.trace = out.run.trace;
    out.yes = kind == Observation::Ter ? out.run.end == CompositeEnd::Final : out.run.end == CompositeEnd::Err;
    return out;
}

}  // namespace hosc
