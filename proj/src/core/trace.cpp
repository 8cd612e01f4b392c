#include "trace.hpp"

#include <map>
#include <sstream>

namespace hosc {

std::vector<Name> Action::introduced() const {
    std::vector<Name> out = aval_names(payload);
    if (question) out.push_back(cont);
    return out;
}

Action p_answer(const Name& c, AVal a) { return Action{Pol::P, false, c, std::move(a), {}}; }
Action o_answer(const Name& c, AVal a) { return Action{Pol::O, false, c, std::move(a), {}}; }
Action p_question(const Name& f, AVal a, const Name& c) { return Action{Pol::P, true, f, std::move(a), c}; }
Action o_question(const Name& f, AVal a, const Name& c) { return Action{Pol::O, true, f, std::move(a), c}; }

bool action_equal(const Action& x, const Action& y) {
    return x.pol == y.pol && x.question == y.question && x.subject == y.subject &&
           term_equal(x.payload, y.payload) && (!x.question || x.cont == y.cont);
}

Trace Trace::prefix(std::size_t n) const {
    Trace t{ambient_o, ambient_p, {}};
    t.acts.assign(acts.begin(), acts.begin() + static_cast<std::ptrdiff_t>(std::min(n, acts.size())));
    return t;
}

bool trace_equal(const Trace& x, const Trace& y) {
    if (x.acts.size() != y.acts.size()) return false;
    for (std::size_t i = 0; i < x.acts.size(); ++i)
        if (!action_equal(x.acts[i], y.acts[i])) return false;
    return true;
}

std::string show_action(const Action& a) {
    std::string out = a.pol == Pol::P ? "P-" : "O-";
    out += a.question ? "QUE " : "ANS ";
    out += show_name(a.subject) + " " + show_aval(a.payload);
    if (a.question) out += " " + show_name(a.cont);
    return out;
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Action parse_action(const std::string& line) {
    auto words = split_ws(line);
    if (words.empty()) throw SyntaxError("empty action");
    const std::string& head = words[0];
    Action a;
    if (head == "P-ANS" || head == "O-ANS") {
        a.question = false;
    } else if (head == "P-QUE" || head == "O-QUE") {
        a.question = true;
    } else {
        throw SyntaxError("unknown action kind '" + head + "'");
    }
    a.pol = head[0] == 'P' ? Pol::P : Pol::O;
    std::size_t need = a.question ? 4 : 3;
    if (words.size() < need) throw SyntaxError("action '" + line + "' has too few fields");
    a.subject = parse_name(words[1]);
    std::string payload;
    std::size_t last = a.question ? words.size() - 1 : words.size();
    for (std::size_t i = 2; i < last; ++i) payload += words[i];
    a.payload = parse_aval(payload);
    if (a.question) a.cont = parse_name(words.back());
    if (a.question ? !(a.subject.is_fun() && a.cont.is_cont()) : !a.subject.is_cont())
        throw SyntaxError("action '" + line + "' uses a name of the wrong kind");
    return a;
}

std::string show_trace(const Trace& t) {
    std::string out;
    for (const auto& n : t.ambient_o) out += "ambient O " + show_name(n) + "\n";
    for (const auto& n : t.ambient_p) out += "ambient P " + show_name(n) + "\n";
    for (const auto& a : t.acts) out += show_action(a) + "\n";
    return out;
}

Trace parse_trace(const std::string& text) {
    Trace t;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        std::string line = strip(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        try {
            auto words = split_ws(line);
            if (words[0] == "ambient") {
                if (words.size() != 3 || (words[1] != "O" && words[1] != "P"))
                    throw SyntaxError("expected 'ambient O|P <name>'");
                (words[1] == "O" ? t.ambient_o : t.ambient_p).push_back(parse_name(words[2]));
            } else {
                std::size_t from = 0;
                for (;;) {
                    auto dot = line.find(" . ", from);
                    t.acts.push_back(parse_action(strip(line.substr(from, dot - from))));
                    if (dot == std::string::npos) break;
                    from = dot + 3;
                }
            }
        } catch (const std::exception& e) {
            throw SyntaxError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return t;
}

std::string trace_key(const Trace& t) {
    std::string out;
    for (std::size_t i = 0; i < t.acts.size(); ++i) {
        if (i) out += " . ";
        out += show_action(t.acts[i]);
    }
    return out;
}

WellFormed check_well_formed(const Trace& t) {
    std::map<Name, std::pair<int, Pol>> intro;  // name -> (position, polarity)
    std::set<Name> amb_o(t.ambient_o.begin(), t.ambient_o.end());
    std::set<Name> amb_p(t.ambient_p.begin(), t.ambient_p.end());
    auto bad = [](int i, std::string why) { return WellFormed{false, i, std::move(why)}; };
    for (std::size_t k = 0; k < t.acts.size(); ++k) {
        const Action& a = t.acts[k];
        int i = static_cast<int>(k);
        if (k > 0 && t.acts[k - 1].pol == a.pol) return bad(i, "polarities do not alternate");
        const auto& amb = a.pol == Pol::P ? amb_o : amb_p;
        if (!amb.count(a.subject)) {
            auto it = intro.find(a.subject);
            if (it == intro.end()) return bad(i, show_name(a.subject) + " was never introduced");
            if (it->second.second == a.pol) return bad(i, show_name(a.subject) + " was introduced by the same player");
        }
        if (!aval_linear(a.payload)) return bad(i, "a name occurs twice in the payload");
        TypeP pt = aval_type(a.payload);
        if (a.question) {
            if (!a.subject.is_fun() || !a.cont.is_cont()) return bad(i, "question with names of the wrong kind");
            if (a.subject.type->a != pt) return bad(i, "payload type does not match the argument type");
            if (a.cont.type != a.subject.type->b) return bad(i, "continuation type does not match the result type");
        } else {
            if (!a.subject.is_cont() || a.subject.is_bottom()) return bad(i, "answer on a non-continuation name");
            if (a.subject.type != pt) return bad(i, "payload type does not match the continuation type");
        }
        for (const Name& n : a.introduced()) {
            if (n.role != NameRole::Plain) return bad(i, "reserved name " + show_name(n) + " introduced");
            if (amb_o.count(n) || amb_p.count(n) || intro.count(n))
                return bad(i, show_name(n) + " is introduced twice");
            intro[n] = {i, a.pol};
        }
    }
    return {};
}

int justifier(const Trace& t, std::size_t i) {
    const Name& s = t.acts.at(i).subject;
    for (std::size_t j = 0; j < i; ++j)
        for (const Name& n : t.acts[j].introduced())
            if (n == s) return static_cast<int>(j);
    return -1;
}

namespace {

void add_intro(NameView& v, const Action& a) {
    for (const Name& n : a.introduced()) v.names.insert(n);
}

// Both views share one recursion; only the base differs.
NameView view_of(const Trace& t, std::size_t n, const NameView& base) {
    if (n == 0) throw std::invalid_argument("view of an empty trace");
    const Action& last = t.acts[n - 1];
    int j = justifier(t, n - 1);
    NameView v = j < 0 ? base : view_of(t, static_cast<std::size_t>(j), base);
    add_intro(v, last);
    return v;
}

Name top_of(const Trace& t, std::size_t n, const Name& base) {
    if (n == 0) throw std::invalid_argument("top of an empty trace");
    const Action& last = t.acts[n - 1];
    if (last.question) return last.cont;
    int j = justifier(t, n - 1);
    if (j < 0) return base;
    return top_of(t, static_cast<std::size_t>(j), base);
}

NameView pav_base(const Trace& t) {
    NameView v;
    v.all_final = true;
    v.names.insert(err_name());
    for (const Name& n : t.ambient_o)
        if (n.is_final() || n.is_err()) v.names.insert(n);
    return v;
}

Name topp_base(const Trace& t, TypeP tau) {
    if (tau) return final_name(tau);
    for (const Name& n : t.ambient_o)
        if (n.is_final()) return n;
    return final_name(t_unit());
}

void require_odd(const Trace& t, Pol first, const char* what) {
    if (t.acts.size() % 2 == 0) throw std::invalid_argument(std::string(what) + " needs an odd-length trace");
    if (t.acts.front().pol != first)
        throw std::invalid_argument(std::string(what) + " needs a trace starting with an " +
                                    (first == Pol::P ? "P" : "O") + "-action");
}

}  // namespace

NameView compute_oav(const Trace& t) {
    require_odd(t, Pol::P, "oav");
    return view_of(t, t.size(), NameView{});
}

NameView compute_pav(const Trace& t) {
    require_odd(t, Pol::O, "pav");
    return view_of(t, t.size(), pav_base(t));
}

Name compute_topo(const Trace& t) {
    require_odd(t, Pol::P, "Top_O");
    return top_of(t, t.size(), bottom_name());
}

Name compute_topp(const Trace& t, TypeP tau) {
    require_odd(t, Pol::O, "Top_P");
    return top_of(t, t.size(), topp_base(t, tau));
}

std::string predicate_name(Predicate p) {
    switch (p) {
        case Predicate::OVisible: return "o-visible";
        case Predicate::PVisible: return "p-visible";
        case Predicate::OBracketed: return "o-bracketed";
        case Predicate::PBracketed: return "p-bracketed";
        case Predicate::Complete: return "complete";
    }
    return "?";
}

bool parse_predicate(const std::string& s, Predicate& out) {
    for (Predicate p : {Predicate::OVisible, Predicate::PVisible, Predicate::OBracketed, Predicate::PBracketed,
                        Predicate::Complete})
        if (predicate_name(p) == s) {
            out = p;
            return true;
        }
    return false;
}

PredicateResult check_predicate(const Trace& t, Predicate p, TypeP tau) {
    PredicateResult r;
    auto fail = [&](std::size_t i) {
        r.holds = false;
        r.violation = static_cast<int>(i);
        return r;
    };
    // Player whose moves are constrained, and the polarity the trace starts with.
    Pol mover = (p == Predicate::PVisible || p == Predicate::PBracketed) ? Pol::P : Pol::O;
    Pol start = opposite(mover);
    if (!t.acts.empty() && t.acts.front().pol != start)
        throw std::invalid_argument(predicate_name(p) + " needs a trace starting with an " +
                                    (start == Pol::P ? "P" : "O") + "-action");
    bool visibility = p == Predicate::OVisible || p == Predicate::PVisible;
    NameView pbase = pav_base(t);
    Name obase = mover == Pol::O ? bottom_name() : topp_base(t, tau);
    for (std::size_t i = 1; i < t.acts.size(); ++i) {
        const Action& a = t.acts[i];
        if (a.pol != mover) continue;
        if (visibility) {
            NameView v = view_of(t, i, mover == Pol::O ? NameView{} : pbase);
            if (!v.contains(a.subject)) return fail(i);
        } else if (!a.question) {
            if (!(top_of(t, i, obase) == a.subject)) return fail(i);
        }
    }
    if (p == Predicate::Complete) {
        if (t.acts.size() % 2 == 0) return fail(t.acts.empty() ? 0 : t.acts.size() - 1);
        if (!compute_topo(t).is_bottom()) return fail(t.acts.size() - 1);
    }
    return r;
}

Trace dualize(const Trace& t) {
    Trace d{t.ambient_p, t.ambient_o, t.acts};
    for (auto& a : d.acts) a.pol = opposite(a.pol);
    return d;
}

NameAlloc alloc_after(const Trace& t) {
    NameAlloc al;
    for (const auto& n : t.ambient_o) al.reserve(n);
    for (const auto& n : t.ambient_p) al.reserve(n);
    for (const auto& a : t.acts) {
        al.reserve(a.subject);
        for (const auto& n : a.introduced()) al.reserve(n);
    }
    return al;
}

Trace dual_with_err(const Trace& t) {
    Trace d = dualize(t);
    NameAlloc al = alloc_after(t);
    bool has_err = false;
    for (const auto& n : d.ambient_o) has_err = has_err || n.is_err();
    if (!has_err) d.ambient_o.push_back(err_name());
    d.acts.push_back(p_question(err_name(), mk_unit(), al.fresh_cont(t_unit())));
    return d;
}

Trace canonicalize(const Trace& t, const std::set<Name>& fixed) {
    NameAlloc al;
    for (const auto& n : fixed) al.reserve(n);
    std::map<Name, Name> ren;
    auto rename = [&](const Name& n) {
        if (n.role != NameRole::Plain || fixed.count(n) || ren.count(n)) return;
        ren[n] = n.is_fun() ? al.fresh_fun(n.type) : al.fresh_cont(n.type);
    };
    for (const auto& n : t.ambient_o) rename(n);
    for (const auto& n : t.ambient_p) rename(n);
    for (const auto& a : t.acts)
        for (const auto& n : a.introduced()) rename(n);
    auto map_name = [&](const Name& n) {
        auto it = ren.find(n);
        return it == ren.end() ? n : it->second;
    };
    Trace out;
    for (const auto& n : t.ambient_o) out.ambient_o.push_back(map_name(n));
    for (const auto& n : t.ambient_p) out.ambient_p.push_back(map_name(n));
    for (const auto& a : t.acts) {
        Action b = a;
        b.subject = map_name(a.subject);
        if (a.question) b.cont = map_name(a.cont);
        b.payload = rewrite(a.payload, [&](const TermP& m) -> TermP {
            if (m->tag != Tag::FName) return nullptr;
            return mk_fname(map_name(m->name));
        });
        out.acts.push_back(std::move(b));
    }
    return out;
}

}  // namespace hosc
