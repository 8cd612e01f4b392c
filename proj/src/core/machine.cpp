#include "machine.hpp"

#include <functional>

namespace hosc {

Loc Heap::alloc(std::uint32_t space, TermP v, TypeP t) {
    std::uint32_t idx = 0;
    for (const auto& [l, _] : cells)
        if (l.space == space) idx = std::max(idx, l.index + 1);
    Loc l{space, idx};
    cells[l] = std::move(v);
    sigma[l] = t;
    return l;
}

bool Heap::disjoint(const Heap& other) const {
    for (const auto& [l, _] : cells)
        if (other.cells.count(l)) return false;
    return true;
}

Heap Heap::merged(const Heap& other) const {
    Heap h = *this;
    for (const auto& [l, v] : other.cells) h.cells[l] = v;
    for (const auto& [l, t] : other.sigma) h.sigma[l] = t;
    return h;
}

std::string show_heap(const Heap& h) {
    std::string out = "[";
    bool first = true;
    for (const auto& [l, v] : h.cells) {
        if (!first) out += ", ";
        first = false;
        out += show_loc(l) + " -> " + show_term(v);
    }
    return out + "]";
}

bool heap_equal(const Heap& a, const Heap& b) {
    if (a.cells.size() != b.cells.size()) return false;
    for (auto ia = a.cells.begin(), ib = b.cells.begin(); ia != a.cells.end(); ++ia, ++ib)
        if (!(ia->first == ib->first) || !term_equal(ia->second, ib->second)) return false;
    return true;
}

std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Value: return "value";
        case Outcome::Callback: return "callback";
        case Outcome::ErrStuck: return "err-stuck";
        case Outcome::FuelExhausted: return "fuel-exhausted";
        case Outcome::Stuck: return "stuck";
    }
    return "?";
}

std::optional<Decomposition> decompose(const TermP& m) {
    if (m->value) return std::nullopt;
    Decomposition d;
    TermP cur = m;
    for (;;) {
        Frame fr{FrameKind::Fst};
        TermP nextp;
        auto two = [&](FrameKind lk, FrameKind rk) {
            if (!cur->a->value) {
                fr.kind = lk;
                fr.t1 = cur->b;
                nextp = cur->a;
            } else if (!cur->b->value) {
                fr.kind = rk;
                fr.t1 = cur->a;
                nextp = cur->b;
            }
        };
        switch (cur->tag) {
            case Tag::Pair: two(FrameKind::PairL, FrameKind::PairR); break;
            case Tag::App: two(FrameKind::AppL, FrameKind::AppR); break;
            case Tag::Assign: two(FrameKind::AssignL, FrameKind::AssignR); break;
            case Tag::Arith:
                two(FrameKind::ArithL, FrameKind::ArithR);
                fr.op = cur->op;
                break;
            case Tag::Cmp:
                two(FrameKind::CmpL, FrameKind::CmpR);
                fr.op = cur->op;
                break;
            case Tag::Throw:
                two(FrameKind::ThrowL, FrameKind::ThrowR);
                fr.ty = cur->ty;
                break;
            case Tag::Fst:
            case Tag::Snd:
            case Tag::Deref:
            case Tag::Ref:
                if (!cur->a->value) {
                    fr.kind = cur->tag == Tag::Fst ? FrameKind::Fst
                              : cur->tag == Tag::Snd ? FrameKind::Snd
                              : cur->tag == Tag::Deref ? FrameKind::Deref
                                                       : FrameKind::Ref;
                    fr.ty = cur->ty;
                    nextp = cur->a;
                }
                break;
            case Tag::If:
                if (!cur->a->value) {
                    fr.kind = FrameKind::If;
                    fr.t1 = cur->b;
                    fr.t2 = cur->c;
                    nextp = cur->a;
                }
                break;
            default: break;
        }
        if (!nextp) {
            d.redex = cur;
            return d;
        }
        d.k.push_back(std::move(fr));
        cur = nextp;
    }
}

namespace {

enum class Contract { Stepped, Callback, Stuck };

struct Contracted {
    Contract kind = Contract::Stuck;
    MachineState next;
};

Contracted contract(const MachineState& s, const Decomposition& d, Mode mode) {
    Contracted out;
    const TermP& r = d.redex;
    const Context& k = d.k;
    auto done = [&](TermP t) {
        out.kind = Contract::Stepped;
        out.next = MachineState{plug(k, std::move(t)), s.cont, s.heap, s.space};
        return out;
    };
    switch (r->tag) {
        case Tag::App: {
            const TermP& f = r->a;
            const TermP& v = r->b;
            if (f->tag == Tag::Lam) return done(subst_var(f->a, f->x, v));
            if (f->tag == Tag::Fix) {
                TermP body = subst_var(f->a, f->x, v);
                if (f->f != f->x) body = subst_var(body, f->f, f);
                return done(body);
            }
            if (f->tag == Tag::FName) {
                out.kind = Contract::Callback;
                return out;
            }
            return out;
        }
        case Tag::Fst:
        case Tag::Snd:
            if (r->a->tag != Tag::Pair) return out;
            return done(r->tag == Tag::Fst ? r->a->a : r->a->b);
        case Tag::If:
            if (r->a->tag == Tag::True) return done(r->b);
            if (r->a->tag == Tag::False) return done(r->c);
            return out;
        case Tag::Arith: {
            if (r->a->tag != Tag::Int || r->b->tag != Tag::Int) return out;
            mpz_class n;
            switch (r->op) {
                case Op::Add: n = r->a->num + r->b->num; break;
                case Op::Sub: n = r->a->num - r->b->num; break;
                default: n = r->a->num * r->b->num; break;
            }
            return done(mk_int(n));
        }
        case Tag::Cmp:
            if (r->op == Op::RefEq) {
                if (r->a->tag != Tag::Loc || r->b->tag != Tag::Loc) return out;
                return done(mk_bool(r->a->loc == r->b->loc));
            }
            if (r->a->tag != Tag::Int || r->b->tag != Tag::Int) return out;
            return done(mk_bool(r->op == Op::Eq ? r->a->num == r->b->num : r->a->num < r->b->num));
        case Tag::Deref: {
            if (r->a->tag != Tag::Loc) return out;
            auto it = s.heap.cells.find(r->a->loc);
            if (it == s.heap.cells.end()) return out;
            return done(it->second);
        }
        case Tag::Ref: {
            MachineState n{nullptr, s.cont, s.heap, s.space};
            Loc l = n.heap.alloc(s.space, r->a, r->ty);
            n.term = plug(k, mk_loc(l));
            out.kind = Contract::Stepped;
            out.next = std::move(n);
            return out;
        }
        case Tag::Assign: {
            if (r->a->tag != Tag::Loc || !s.heap.cells.count(r->a->loc)) return out;
            MachineState n{plug(k, mk_unit()), s.cont, s.heap, s.space};
            n.heap.cells[r->a->loc] = r->b;
            out.kind = Contract::Stepped;
            out.next = std::move(n);
            return out;
        }
        case Tag::Callcc: {
            auto kp = std::make_shared<const Context>(k);
            TermP kv = mode == Mode::Extended ? mk_cont(r->ty, kp, s.cont) : mk_cont(r->ty, kp);
            return done(subst_var(r->a, r->x, kv));
        }
        case Tag::Throw: {
            const TermP& kv = r->b;
            if (kv->tag != Tag::Cont) return out;
            out.kind = Contract::Stepped;
            if (kv->named) {
                if (mode == Mode::Plain) return Contracted{};
                out.next = MachineState{plug(*kv->ctx, r->a), kv->name, s.heap, s.space};
            } else {
                out.next = MachineState{plug(*kv->ctx, r->a), s.cont, s.heap, s.space};
            }
            return out;
        }
        default: return out;
    }
}

void hash_mix(std::size_t& h, std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); }

void hash_context(std::size_t& h, const Context& k);

void hash_term(std::size_t& h, const TermP& m) {
    if (!m) {
        hash_mix(h, 7);
        return;
    }
    hash_mix(h, static_cast<std::size_t>(m->tag) * 31 + static_cast<std::size_t>(m->op));
    switch (m->tag) {
        case Tag::Int: hash_mix(h, std::hash<std::string>()(m->num.get_str())); break;
        case Tag::Var:
        case Tag::Lam:
        case Tag::Callcc:
        case Tag::Fix: hash_mix(h, std::hash<std::string>()(m->x)); break;
        case Tag::Loc: hash_mix(h, m->loc.space * 1000003u + m->loc.index); break;
        case Tag::FName: hash_mix(h, static_cast<std::size_t>(m->name.id) * 131 + m->name.type->uid); break;
        case Tag::Cont:
            if (m->named) hash_mix(h, static_cast<std::size_t>(m->name.id) + 17);
            hash_context(h, *m->ctx);
            break;
        default: break;
    }
    hash_term(h, m->a);
    hash_term(h, m->b);
    hash_term(h, m->c);
}

void hash_context(std::size_t& h, const Context& k) {
    for (const Frame& f : k) {
        hash_mix(h, static_cast<std::size_t>(f.kind) + 101);
        hash_term(h, f.t1);
        hash_term(h, f.t2);
    }
}

struct Snapshot {
    std::size_t hash;
    MachineState s;
};

Snapshot snapshot(const MachineState& s) {
    std::size_t h = 0;
    hash_term(h, s.term);
    hash_mix(h, static_cast<std::size_t>(s.cont.id) * 7 + static_cast<std::size_t>(s.cont.role));
    for (const auto& [l, v] : s.heap.cells) {
        hash_mix(h, l.space * 1000003u + l.index);
        hash_term(h, v);
    }
    return {h, s};
}

bool same_state(const Snapshot& a, const Snapshot& b) {
    return a.hash == b.hash && a.s.cont == b.s.cont && term_equal(a.s.term, b.s.term) &&
           heap_equal(a.s.heap, b.s.heap);
}

}  // namespace

std::size_t term_hash(const TermP& m) {
    std::size_t h = 0;
    hash_term(h, m);
    return h;
}

std::optional<MachineState> step(const MachineState& s, Mode mode) {
    auto d = decompose(s.term);
    if (!d) return std::nullopt;
    Contracted c = contract(s, *d, mode);
    if (c.kind != Contract::Stepped) return std::nullopt;
    return std::move(c.next);
}

std::optional<std::pair<TermP, Heap>> step_base(const TermP& m, const Heap& h, std::uint32_t space) {
    auto n = step(MachineState{m, bottom_name(), h, space}, Mode::Plain);
    if (!n) return std::nullopt;
    return std::make_pair(n->term, n->heap);
}

std::optional<MachineState> step_ext(const MachineState& s) { return step(s, Mode::Extended); }

RunResult run(const MachineState& s0, std::size_t fuel, Mode mode) {
    RunResult res;
    MachineState cur = s0;
    // Brent's cycle detection on whole machine states.
    Snapshot tortoise = snapshot(cur);
    std::size_t power = 1, lam = 0;
    for (;;) {
        auto d = decompose(cur.term);
        if (!d) {
            res.kind = Outcome::Value;
            res.state = std::move(cur);
            return res;
        }
        Contracted c = contract(cur, *d, mode);
        if (c.kind == Contract::Callback) {
            const TermP& r = d->redex;
            res.kind = r->a->name.is_err() ? Outcome::ErrStuck : Outcome::Callback;
            res.k = std::move(d->k);
            res.head = r->a->name;
            res.arg = r->b;
            res.state = std::move(cur);
            return res;
        }
        if (c.kind == Contract::Stuck) {
            res.kind = Outcome::Stuck;
            res.state = std::move(cur);
            return res;
        }
        if (res.steps >= fuel) {
            res.kind = Outcome::FuelExhausted;
            res.state = std::move(cur);
            return res;
        }
        cur = std::move(c.next);
        ++res.steps;
        Snapshot now = snapshot(cur);
        if (same_state(now, tortoise)) {
            res.kind = Outcome::FuelExhausted;
            res.cycle = true;
            res.state = std::move(cur);
            return res;
        }
        if (++lam == power) {
            tortoise = std::move(now);
            power *= 2;
            lam = 0;
        }
    }
}

bool observes(const TermP& m, const Heap& h, Observation kind, std::size_t fuel) {
    RunResult r = run(MachineState{m, bottom_name(), h, 0}, fuel, Mode::Plain);
    return kind == Observation::Ter ? r.kind == Outcome::Value : r.kind == Outcome::ErrStuck;
}

}  // namespace hosc
