#pragma once

// Template part of syntax.hpp.

namespace hosc {

TermP rebuild(const Term& t, TermP a, TermP b, TermP c, ContextP ctx);

namespace detail {

template <class F>
ContextP rewrite_context(const ContextP& k, F& f);

template <class F>
TermP rewrite_impl(const TermP& m, F& f) {
    if (!m) return m;
    if (TermP r = f(m)) return r;
    TermP a = rewrite_impl(m->a, f);
    TermP b = rewrite_impl(m->b, f);
    TermP c = rewrite_impl(m->c, f);
    ContextP k = m->ctx ? rewrite_context(m->ctx, f) : m->ctx;
    if (a == m->a && b == m->b && c == m->c && k == m->ctx) return m;
    return rebuild(*m, a, b, c, k);
}

template <class F>
ContextP rewrite_context(const ContextP& k, F& f) {
    bool changed = false;
    Context out;
    out.reserve(k->size());
    for (const Frame& fr : *k) {
        Frame g = fr;
        g.t1 = rewrite_impl(fr.t1, f);
        g.t2 = rewrite_impl(fr.t2, f);
        changed = changed || g.t1 != fr.t1 || g.t2 != fr.t2;
        out.push_back(std::move(g));
    }
    if (!changed) return k;
    return std::make_shared<const Context>(std::move(out));
}

}  // namespace detail

template <class F>
TermP rewrite(const TermP& m, F&& f) {
    return detail::rewrite_impl(m, f);
}

}  // namespace hosc
