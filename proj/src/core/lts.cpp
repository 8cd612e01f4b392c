#include "lts.hpp"

#include <functional>
#include <stdexcept>

namespace hosc {

namespace {

Context map_context(const Context& k, const std::function<TermP(const TermP&)>& f) {
    Context out = k;
    for (Frame& fr : out) {
        if (fr.t1) fr.t1 = f(fr.t1);
        if (fr.t2) fr.t2 = f(fr.t2);
    }
    return out;
}

TermP apply_assignment(const TermP& m, const Assignment& rho) {
    TermP out = m;
    for (const auto& [x, a] : rho) out = subst_var(out, x, a);
    return out;
}

void add_names(std::set<Name>& s, const std::vector<Name>& ns) { s.insert(ns.begin(), ns.end()); }

}  // namespace

TermP upgrade_term(const TermP& m, const std::map<Loc, TypeP>& sigma) {
    TermP e = subst_var(m, "err", mk_fname(err_name()));
    std::function<TermP(const TermP&)> go;
    go = [&](const TermP& t) -> TermP {
        return rewrite(t, [&](const TermP& n) -> TermP {
            if (n->tag != Tag::Cont || n->named) return nullptr;
            Context k = map_context(*n->ctx, go);
            TypeP res = infer_context_type(TypeEnv{sigma, {}}, k, n->ty);
            return mk_cont(n->ty, std::make_shared<const Context>(std::move(k)), final_name(res));
        });
    };
    return go(e);
}

Context upgrade_context(const Context& k, const std::map<Loc, TypeP>& sigma) {
    return map_context(k, [&](const TermP& t) { return upgrade_term(t, sigma); });
}

Config init_term_config(const TermP& m, const Assignment& rho, const Name& c, Model model) {
    Config cfg;
    cfg.model = model;
    cfg.active = true;
    cfg.term = apply_assignment(m, rho);
    cfg.cont = c;
    for (const Name& n : assignment_names(rho)) {
        cfg.phi.insert(n);
        cfg.alloc.reserve(n);
        cfg.amb_o.push_back(n);
    }
    cfg.phi.insert(c);
    cfg.alloc.reserve(c);
    cfg.amb_o.push_back(c);
    if (has_bracketing(model)) cfg.xi[c] = bottom_name();
    cfg.topc = bottom_name();
    cfg.space = 0;
    return cfg;
}

Config init_term_config(const TermP& m, const VarEnv& gamma, TypeP type, Model model,
                        const std::vector<mpz_class>& ints) {
    NameAlloc al;
    Assignment rho = canonical_assignment(gamma, ints, al);
    Name c = al.fresh_cont(type);
    return init_term_config(m, rho, c, model);
}

Config init_context_config(const ContextInput& in, const Name& c) {
    Config cfg;
    cfg.model = Model::HOSC;
    cfg.active = false;
    cfg.space = 1;
    for (const auto& [l, v] : in.heap.cells) {
        cfg.heap.cells[l] = upgrade_term(v, in.heap.sigma);
        cfg.heap.sigma[l] = in.heap.sigma.at(l);
    }
    std::vector<Name> ambient;
    for (std::size_t i = 0; i < in.gamma.size(); ++i) {
        TypeP t = in.gamma_types.at(i).second;
        TermP v = upgrade_term(in.gamma[i].second, in.heap.sigma);
        AValSplit sp = aval_decompose(v, t, cfg.alloc);
        for (const auto& [f, fv] : sp.gamma) {
            cfg.gamma_f[f] = fv;
            ambient.push_back(f);
        }
    }
    cfg.alloc.reserve(c);
    cfg.gamma_c[c] = upgrade_context(in.k, in.heap.sigma);
    Name fin = final_name(in.result);
    cfg.xi[c] = fin;
    ambient.push_back(c);
    for (const Name& n : ambient) cfg.phi.insert(n);
    cfg.phi.insert(fin);
    cfg.phi.insert(err_name());
    cfg.amb_p = ambient;
    cfg.amb_o = {fin, err_name()};
    cfg.topc = bottom_name();
    return cfg;
}

Trace empty_trace_of(const Config& c) { return Trace{c.amb_o, c.amb_p, {}}; }

PResult p_transition(const Config& cfg, std::size_t fuel) {
    if (!cfg.active) throw std::invalid_argument("p_transition on a passive configuration");
    PResult out;
    RunResult r = run(MachineState{cfg.term, cfg.cont, cfg.heap, cfg.space}, fuel, Mode::Extended);
    out.steps = r.steps;
    out.normal_form = r.state;
    if (r.kind == Outcome::FuelExhausted) {
        out.kind = PKind::Diverged;
        return out;
    }
    if (r.kind == Outcome::Stuck) return out;

    Config n = cfg;
    n.active = false;
    n.term = nullptr;
    n.heap = r.state.heap;
    const Name c = r.state.cont;
    if (r.kind == Outcome::Value) {
        if (!c.is_cont() || c.is_bottom() || cfg.gamma_c.count(c)) return out;
        AValSplit sp = aval_decompose(r.state.term, c.type, n.alloc);
        for (const auto& [f, v] : sp.gamma) n.gamma_f[f] = v;
        auto names = aval_names(sp.pattern);
        add_names(n.phi, names);
        if (has_visibility(n.model)) {
            auto it = cfg.F.find(c);
            n.visible = it == cfg.F.end() ? std::set<Name>{} : it->second;
            add_names(n.visible, names);
        }
        if (has_bracketing(n.model)) {
            auto it = cfg.xi.find(c);
            if (it == cfg.xi.end()) throw std::logic_error("bracketing: no top recorded for " + show_name(c));
            n.topc = it->second;
        }
        out.kind = PKind::Answer;
        out.action = p_answer(c, sp.pattern);
    } else {
        const Name f = r.head;
        if (cfg.gamma_f.count(f)) return out;
        AValSplit sp = aval_decompose(r.arg, f.type->a, n.alloc);
        Name c2 = n.alloc.fresh_cont(f.type->b);
        for (const auto& [g, v] : sp.gamma) n.gamma_f[g] = v;
        n.gamma_c[c2] = r.k;
        n.xi[c2] = c;
        auto names = aval_names(sp.pattern);
        add_names(n.phi, names);
        n.phi.insert(c2);
        if (has_visibility(n.model)) {
            auto it = cfg.F.find(f);
            n.visible = it == cfg.F.end() ? std::set<Name>{} : it->second;
            add_names(n.visible, names);
            n.visible.insert(c2);
        }
        if (has_bracketing(n.model)) n.topc = c2;
        out.kind = PKind::Question;
        out.action = p_question(f, sp.pattern, c2);
    }
    n.cont = Name{};
    out.next = std::move(n);
    return out;
}

std::optional<std::string> o_move_refusal(const Config& cfg, const Action& a) {
    if (cfg.active) return "the configuration is active";
    if (a.pol != Pol::O) return "not an O-action";
    const Name& s = a.subject;
    if (a.question) {
        if (!cfg.gamma_f.count(s)) return show_name(s) + " is not a function name of P";
        if (aval_type(a.payload) != s.type->a) return "payload does not have type " + show_type(s.type->a);
        if (!a.cont.is_cont() || a.cont.role != NameRole::Plain || a.cont.type != s.type->b)
            return "continuation " + show_name(a.cont) + " does not have answer type " + show_type(s.type->b);
    } else {
        if (!cfg.gamma_c.count(s)) return show_name(s) + " is not a continuation name of P";
        if (aval_type(a.payload) != s.type) return "payload does not have type " + show_type(s.type);
    }
    if (!aval_linear(a.payload)) return "a name occurs twice in the payload";
    for (const Name& n : a.introduced())
        if (n.role != NameRole::Plain || cfg.phi.count(n)) return show_name(n) + " is not fresh";
    if (has_visibility(cfg.model) && !cfg.visible.count(s)) return show_name(s) + " not O-available";
    if (has_bracketing(cfg.model) && !a.question && !(s == cfg.topc))
        return "top continuation is " + show_name(cfg.topc);
    return std::nullopt;
}

namespace {

Config o_successor(const Config& cfg, const Action& a) {
    Config n = cfg;
    n.active = true;
    auto names = a.introduced();
    for (const Name& x : names) n.alloc.reserve(x);
    add_names(n.phi, names);
    if (has_visibility(cfg.model))
        for (const Name& x : names) n.F[x] = cfg.visible;
    if (a.question) {
        n.term = mk_app(cfg.gamma_f.at(a.subject), a.payload);
        n.cont = a.cont;
        if (has_bracketing(cfg.model)) n.xi[a.cont] = cfg.topc;
    } else {
        n.term = plug(cfg.gamma_c.at(a.subject), a.payload);
        n.cont = cfg.xi.at(a.subject);
    }
    n.visible.clear();
    n.topc = bottom_name();
    return n;
}

}  // namespace

Config apply_o_move(const Config& cfg, const Action& a) {
    if (auto why = o_move_refusal(cfg, a)) throw std::invalid_argument(*why);
    return o_successor(cfg, a);
}

std::vector<OMove> enumerate_o_moves(const Config& cfg, const std::vector<mpz_class>& ints) {
    std::vector<OMove> out;
    if (cfg.active) return out;
    bool vis = has_visibility(cfg.model), bra = has_bracketing(cfg.model);
    for (const auto& [c, k] : cfg.gamma_c) {
        if (vis && !cfg.visible.count(c)) continue;
        if (bra && !(c == cfg.topc)) continue;
        NameAlloc al = cfg.alloc;
        for (AVal& a : enumerate_avals(c.type, ints, al)) {
            Action act = o_answer(c, std::move(a));
            out.push_back(OMove{act, o_successor(cfg, act)});
        }
    }
    for (const auto& [f, v] : cfg.gamma_f) {
        if (vis && !cfg.visible.count(f)) continue;
        NameAlloc al = cfg.alloc;
        auto avals = enumerate_avals(f.type->a, ints, al);
        Name c = al.fresh_cont(f.type->b);
        for (AVal& a : avals) {
            Action act = o_question(f, std::move(a), c);
            out.push_back(OMove{act, o_successor(cfg, act)});
        }
    }
    return out;
}

std::optional<std::string> trace_refusal(const Trace& t, const Action& a, Model model) {
    if (t.acts.empty() || t.acts.size() % 2 == 0 || t.acts.front().pol != Pol::P) return std::nullopt;
    if (has_visibility(model) && !compute_oav(t).contains(a.subject))
        return show_name(a.subject) + " not O-available";
    if (has_bracketing(model) && !a.question) {
        Name top = compute_topo(t);
        if (!(top == a.subject)) return "top continuation is " + show_name(top);
    }
    return std::nullopt;
}

std::string show_config(const Config& c) {
    std::string out = "<";
    if (c.active) out += show_term(c.term) + ", " + show_name(c.cont) + ", ";
    out += "{";
    bool first = true;
    auto sep = [&] {
        if (!first) out += ", ";
        first = false;
    };
    for (const auto& [f, v] : c.gamma_f) {
        sep();
        out += show_name(f) + " -> " + show_term(v);
    }
    for (const auto& [k, ctx] : c.gamma_c) {
        sep();
        out += show_name(k) + " -> " + show_context(ctx);
    }
    out += "}, {";
    first = true;
    for (const auto& [k, v] : c.xi) {
        sep();
        out += show_name(k) + " -> " + show_name(v);
    }
    out += "}, {";
    first = true;
    for (const auto& n : c.phi) {
        sep();
        out += show_name(n);
    }
    out += "}, " + show_heap(c.heap);
    if (!c.active && has_visibility(c.model)) {
        out += ", V={";
        first = true;
        for (const auto& n : c.visible) {
            sep();
            out += show_name(n);
        }
        out += "}";
    }
    if (!c.active && has_bracketing(c.model)) out += ", top=" + show_name(c.topc);
    return out + ">";
}

}  // namespace hosc
