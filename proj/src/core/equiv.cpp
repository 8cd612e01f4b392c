#include "equiv.hpp"

#include <algorithm>

namespace hosc {

std::string terminal_name(Terminal t) {
    switch (t) {
        case Terminal::Open: return "open";
        case Terminal::Passive: return "passive";
        case Terminal::Diverged: return "diverged";
        case Terminal::Stuck: return "stuck";
        case Terminal::DepthLimit: return "depth-limit";
    }
    return "?";
}

std::string verdict_name(Verdict v) { return v == Verdict::Distinct ? "DISTINCT" : "EQUIVALENT-UP-TO-DEPTH"; }

std::vector<Trace> TraceSet::traces() const {
    std::vector<Trace> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.trace);
    return out;
}

namespace {

struct Explorer {
    const Bounds& b;
    std::vector<TraceEntry> found;

    void visit(const Config& cfg, Trace& t) {
        std::size_t slot = found.size();
        found.push_back(TraceEntry{t, Terminal::Open});
        if (t.acts.size() >= b.depth) {
            found[slot].status = Terminal::DepthLimit;
            return;
        }
        if (cfg.active) {
            PResult p = p_transition(cfg, b.fuel);
            if (p.kind == PKind::Diverged || p.kind == PKind::Stuck) {
                found[slot].status = p.kind == PKind::Diverged ? Terminal::Diverged : Terminal::Stuck;
                return;
            }
            t.acts.push_back(p.action);
            visit(p.next, t);
            t.acts.pop_back();
            return;
        }
        auto moves = enumerate_o_moves(cfg, b.ints);
        if (moves.empty()) {
            found[slot].status = Terminal::Passive;
            return;
        }
        for (auto& mv : moves) {
            t.acts.push_back(mv.action);
            visit(mv.next, t);
            t.acts.pop_back();
        }
    }
};

bool shorter_first(const TraceEntry& x, const TraceEntry& y, const std::string& kx, const std::string& ky) {
    if (x.trace.size() != y.trace.size()) return x.trace.size() < y.trace.size();
    return kx < ky;
}

}  // namespace

TraceSet enumerate_traces(const Config& cfg, const Bounds& b) {
    Explorer ex{b, {}};
    Trace t = empty_trace_of(cfg);
    ex.visit(cfg, t);
    std::set<Name> fixed(cfg.amb_o.begin(), cfg.amb_o.end());
    fixed.insert(cfg.amb_p.begin(), cfg.amb_p.end());
    std::vector<std::pair<std::string, TraceEntry>> keyed;
    for (auto& e : ex.found) {
        e.trace = canonicalize(e.trace, fixed);
        keyed.emplace_back(trace_key(e.trace), std::move(e));
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
        return shorter_first(x.second, y.second, x.first, y.first);
    });
    TraceSet ts;
    ts.model = cfg.model;
    ts.depth = b.depth;
    for (auto& [k, e] : keyed) {
        if (ts.index.count(k)) continue;
        ts.index[k] = ts.entries.size();
        ts.entries.push_back(std::move(e));
    }
    return ts;
}

TermTraces term_traces(const TermP& m, const VarEnv& gamma, TypeP type, Model model, const Bounds& b) {
    TermTraces out;
    NameAlloc al;
    if (b.exhaustive) {
        out.rhos = all_assignments(gamma, b.ints, al);
    } else {
        out.rhos = {canonical_assignment(gamma, b.ints, al)};
    }
    Name c = al.fresh_cont(type);
    for (const auto& rho : out.rhos) out.sets.push_back(enumerate_traces(init_term_config(m, rho, c, model), b));
    return out;
}

Inclusion set_included(const TraceSet& left, const TraceSet& right, bool complete_only) {
    Inclusion inc;
    for (const auto& e : left.entries) {
        if (complete_only) {
            if (e.trace.size() % 2 == 0) continue;
            if (!check_predicate(e.trace, Predicate::Complete).holds) continue;
        }
        if (!right.contains(e.trace)) {
            inc.included = false;
            inc.witness = e.trace;
            return inc;
        }
    }
    return inc;
}

Inclusion trace_included(const TermP& m1, const TermP& m2, const VarEnv& gamma, TypeP type, Model model,
                         const Bounds& b, bool complete_only) {
    TermTraces l = term_traces(m1, gamma, type, model, b);
    TermTraces r = term_traces(m2, gamma, type, model, b);
    for (std::size_t i = 0; i < l.sets.size(); ++i) {
        Inclusion inc = set_included(l.sets[i], r.sets[i], complete_only);
        if (!inc.included) {
            inc.rho = i;
            return inc;
        }
    }
    return {};
}

EquivResult compare_terms(const TermP& m1, const TermP& m2, const VarEnv& gamma, TypeP type, Model model,
                          const Bounds& b, bool complete_only) {
    EquivResult res;
    res.model = model;
    res.depth = b.depth;
    res.complete_only = complete_only;
    TermTraces l = term_traces(m1, gamma, type, model, b);
    TermTraces r = term_traces(m2, gamma, type, model, b);
    for (std::size_t i = 0; i < l.sets.size(); ++i) {
        if (res.left_in_right.included) {
            res.left_in_right = set_included(l.sets[i], r.sets[i], complete_only);
            res.left_in_right.rho = i;
        }
        if (res.right_in_left.included) {
            res.right_in_left = set_included(r.sets[i], l.sets[i], complete_only);
            res.right_in_left.rho = i;
        }
    }
    bool same = res.left_in_right.included && res.right_in_left.included;
    res.verdict = same ? Verdict::EquivalentUpToDepth : Verdict::Distinct;
    return res;
}

std::optional<Distinguishing> find_distinguishing_trace(const TermP& m1, const TermP& m2, const VarEnv& gamma,
                                                        TypeP type, Model model, const Bounds& b) {
    EquivResult r = compare_terms(m1, m2, gamma, type, model, b);
    const auto& a = r.left_in_right.witness;
    const auto& c = r.right_in_left.witness;
    if (!a && !c) return std::nullopt;
    auto before = [](const Trace& x, const Trace& y) {
        if (x.size() != y.size()) return x.size() < y.size();
        return trace_key(x) <= trace_key(y);
    };
    if (a && (!c || before(*a, *c))) return Distinguishing{*a, 1};
    return Distinguishing{*c, 2};
}

Replay replay(const Config& start, const Trace& t, std::size_t fuel) {
    Replay out;
    Config cur = start;
    out.rows.push_back(DerivationRow{"", cur});
    for (std::size_t i = 0; i < t.acts.size(); ++i) {
        const Action& want = t.acts[i];
        auto fail = [&](std::string why) {
            out.ok = false;
            out.failed_at = static_cast<int>(i);
            out.reason = std::move(why);
            out.last = cur;
            return out;
        };
        if (cur.active) {
            if (want.pol != Pol::P) return fail("P is to move");
            PResult p = p_transition(cur, fuel);
            if (p.steps > 0) {
                Config shown = cur;
                shown.term = p.normal_form.term;
                shown.cont = p.normal_form.cont;
                shown.heap = p.normal_form.heap;
                out.rows.push_back(DerivationRow{"tau*", shown});
            }
            if (p.kind == PKind::Diverged) return fail("P diverges");
            if (p.kind == PKind::Stuck) return fail("P is stuck");
            if (!action_equal(p.action, want)) return fail("P plays " + show_action(p.action));
            cur = p.next;
        } else {
            if (want.pol != Pol::O) return fail("O is to move");
            if (auto why = o_move_refusal(cur, want)) return fail(*why);
            cur = apply_o_move(cur, want);
        }
        out.rows.push_back(DerivationRow{show_action(want), cur});
    }
    out.last = cur;
    return out;
}

}  // namespace hosc
