#include "bundle.hpp"

#include <sstream>

namespace hosc {

namespace {

struct Decl {
    std::string text;
    int line;
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<Decl> split_decls(const std::string& text) {
    std::vector<Decl> out;
    std::istringstream in(text);
    std::string raw;
    int ln = 0;
    while (std::getline(in, raw)) {
        ++ln;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        if ((raw[0] == ' ' || raw[0] == '\t') && !out.empty()) {
            out.back().text += " " + s;
        } else {
            out.push_back(Decl{s, ln});
        }
    }
    return out;
}

/// Splits "name : T = rest" into its three parts.
bool split_binding(const std::string& s, std::string& name, std::string& type, std::string& rest) {
    auto colon = s.find(':');
    auto eq = s.find('=', colon == std::string::npos ? 0 : colon);
    if (colon == std::string::npos || eq == std::string::npos) return false;
    name = trim(s.substr(0, colon));
    type = trim(s.substr(colon + 1, eq - colon - 1));
    rest = trim(s.substr(eq + 1));
    return !name.empty() && !type.empty() && !rest.empty();
}

TermP locate_cells(const TermP& m, const std::vector<std::string>& cells) {
    TermP out = m;
    for (std::size_t i = 0; i < cells.size(); ++i)
        out = subst_var(out, cells[i], mk_loc(Loc{1, static_cast<std::uint32_t>(i)}));
    return out;
}

Context locate_cells(const Context& k, const std::vector<std::string>& cells) {
    Context out = k;
    for (Frame& fr : out) {
        if (fr.t1) fr.t1 = locate_cells(fr.t1, cells);
        if (fr.t2) fr.t2 = locate_cells(fr.t2, cells);
    }
    return out;
}

}  // namespace

TermP name_cells(const TermP& m, const std::vector<std::string>& cell_names) {
    return rewrite(m, [&](const TermP& n) -> TermP {
        if (n->tag != Tag::Loc) return nullptr;
        if (n->loc.index < cell_names.size() && !cell_names[n->loc.index].empty())
            return mk_var(cell_names[n->loc.index]);
        return mk_var(show_loc(n->loc));
    });
}

Bundle parse_bundle(const std::string& text) {
    Bundle b;
    std::vector<Decl> decls = split_decls(text);
    VarEnv env{{"err", t_arrow(t_unit(), t_unit())}};
    std::vector<std::pair<Decl, std::string>> cell_values;
    std::vector<std::pair<Decl, std::string>> gamma_values;
    std::optional<Decl> context;

    auto fail = [](const Decl& d, const std::string& why) -> BundleError { return BundleError(why, d.line); };
    auto type_of = [&](const Decl& d, const std::string& s) {
        try {
            return parse_type(s);
        } catch (const std::exception& e) {
            throw fail(d, std::string("bad type: ") + e.what());
        }
    };

    for (const Decl& d : decls) {
        auto sp = d.text.find(' ');
        std::string kw = d.text.substr(0, sp);
        std::string rest = sp == std::string::npos ? "" : trim(d.text.substr(sp + 1));
        if (kw == "hole") {
            b.input.hole = type_of(d, rest);
        } else if (kw == "result") {
            b.input.result = type_of(d, rest);
        } else if (kw == "cell" || kw == "gamma") {
            std::string name, type, value;
            if (!split_binding(rest, name, type, value)) throw fail(d, "expected `" + kw + " name : T = term`");
            TypeP t = type_of(d, type);
            if (kw == "cell") {
                Loc l{1, static_cast<std::uint32_t>(b.cell_names.size())};
                b.cell_names.push_back(name);
                b.input.heap.sigma[l] = t;
                env.emplace_back(name, t_ref(t));
                cell_values.emplace_back(d, value);
            } else {
                b.input.gamma_types.emplace_back(name, t);
                gamma_values.emplace_back(d, value);
            }
        } else if (kw == "context") {
            if (context) throw fail(d, "more than one context line");
            context = Decl{rest, d.line};
        } else {
            throw fail(d, "unknown declaration `" + kw + "`");
        }
    }
    if (!b.input.hole) throw BundleError("missing `hole` declaration", 0);
    if (!b.input.result) throw BundleError("missing `result` declaration", 0);
    if (!context) throw BundleError("missing `context` declaration", 0);

    auto parse_at = [&](const Decl& d, const std::string& src, TypeP want) {
        TermP m;
        try {
            m = parse_term(src, env);
        } catch (const std::exception& e) {
            throw fail(d, e.what());
        }
        TypeEnv te{{}, env};
        TypeP got = infer_type(te, m);
        if (got != want) throw fail(d, "has type " + show_type(got) + ", declared " + show_type(want));
        return locate_cells(m, b.cell_names);
    };
    for (std::size_t i = 0; i < cell_values.size(); ++i) {
        const auto& [d, src] = cell_values[i];
        Loc l{1, static_cast<std::uint32_t>(i)};
        b.input.heap.cells[l] = parse_at(d, src, b.input.heap.sigma[l]);
    }
    for (std::size_t i = 0; i < gamma_values.size(); ++i) {
        const auto& [d, src] = gamma_values[i];
        b.input.gamma.emplace_back(b.input.gamma_types[i].first, parse_at(d, src, b.input.gamma_types[i].second));
    }
    try {
        Context k = parse_context(context->text, b.input.hole, env);
        TypeEnv te{{}, env};
        TypeP got = infer_context_type(te, k, b.input.hole);
        if (got != b.input.result)
            throw fail(*context, "context has type " + show_type(got) + ", declared " + show_type(b.input.result));
        b.input.k = locate_cells(k, b.cell_names);
    } catch (const BundleError&) {
        throw;
    } catch (const std::exception& e) {
        throw fail(*context, e.what());
    }
    return b;
}

std::string show_bundle(const Bundle& b) {
    std::ostringstream out;
    out << "hole " << show_type(b.input.hole) << "\n";
    out << "result " << show_type(b.input.result) << "\n";
    for (const auto& [l, v] : b.input.heap.cells) {
        std::string name = l.index < b.cell_names.size() ? b.cell_names[l.index] : show_loc(l);
        out << "cell " << name << " : " << show_type(b.input.heap.sigma.at(l)) << " = "
            << show_term(name_cells(v, b.cell_names)) << "\n";
    }
    for (std::size_t i = 0; i < b.input.gamma.size(); ++i)
        out << "gamma " << b.input.gamma[i].first << " : " << show_type(b.input.gamma_types[i].second) << " = "
            << show_term(name_cells(b.input.gamma[i].second, b.cell_names)) << "\n";
    Context k = b.input.k;
    for (Frame& fr : k) {
        if (fr.t1) fr.t1 = name_cells(fr.t1, b.cell_names);
        if (fr.t2) fr.t2 = name_cells(fr.t2, b.cell_names);
    }
    out << "context " << show_context(k) << "\n";
    return out.str();
}

}  // namespace hosc
