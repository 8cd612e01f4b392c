#include <hosc/hosc.h>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Owned {
    char* p = nullptr;
    ~Owned() { hosc_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void check(hosc_status st, const std::string& what) {
    if (st != HOSC_OK) throw InputError(what + ": " + hosc_last_error());
}

using TermPtr = std::unique_ptr<hosc_term, decltype(&hosc_term_free)>;

TermPtr load_term(const std::string& path) {
    hosc_term* t = nullptr;
    check(hosc_term_parse(read_file(path).c_str(), &t), path);
    return TermPtr(t, &hosc_term_free);
}

struct Common {
    std::string model = "hosc";
    std::size_t depth = 8;
    std::size_t fuel = 10000;
    std::string ints = "0..1";
    bool complete = false;
    std::string format = "text";
    bool exhaustive = false;
};

hosc_model model_of(const Common& c) {
    hosc_model m;
    check(hosc_parse_model(c.model.c_str(), &m), "--model");
    return m;
}

hosc_format format_of(const Common& c) { return c.format == "record" ? HOSC_FORMAT_RECORD : HOSC_FORMAT_TEXT; }

hosc_bounds bounds_of(const Common& c) {
    hosc_bounds b;
    hosc_bounds_default(&b);
    b.depth = c.depth;
    b.fuel = c.fuel;
    b.exhaustive = c.exhaustive ? 1 : 0;
    auto dots = c.ints.find("..");
    try {
        if (dots == std::string::npos) throw std::invalid_argument("");
        b.int_lo = std::stol(c.ints.substr(0, dots));
        b.int_hi = std::stol(c.ints.substr(dots + 2));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--ints", "expected a range a..b, got '" + c.ints + "'");
    }
    if (b.int_lo > b.int_hi) throw CLI::ValidationError("--ints", "empty range " + c.ints);
    return b;
}

void add_model(CLI::App* sub, Common& c) {
    sub->add_option("--model", c.model, "hosc, gosc, hos or gos")
        ->check(CLI::IsMember({"hosc", "gosc", "hos", "gos"}, CLI::ignore_case))
        ->capture_default_str();
}

void add_bounds(CLI::App* sub, Common& c) {
    sub->add_option("--depth", c.depth, "maximum trace length")->capture_default_str();
    sub->add_option("--fuel", c.fuel, "reduction steps allowed per P-move")->capture_default_str();
    sub->add_option("--ints", c.ints, "integer range offered to O, as a..b")->capture_default_str();
    sub->add_flag("--exhaustive-assignments", c.exhaustive, "try every assignment of the free variables");
}

void add_format(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "text or record")
        ->check(CLI::IsMember({"text", "record"}))
        ->capture_default_str();
}

int cmd_check(const std::string& path, const Common& c) {
    TermPtr t = load_term(path);
    Owned out;
    check(hosc_term_check_report(t.get(), format_of(c), &out.p), path);
    std::cout << out.str();
    return kExitOk;
}

int cmd_traces(const std::string& path, const std::string& replay, const Common& c) {
    TermPtr t = load_term(path);
    if (!replay.empty()) {
        Owned out;
        int ok = 0;
        check(hosc_derivation(t.get(), model_of(c), read_file(replay).c_str(), c.fuel, format_of(c), &out.p, &ok),
              replay);
        std::cout << out.str();
        return kExitOk;
    }
    hosc_bounds b = bounds_of(c);
    hosc_traceset* s = nullptr;
    check(hosc_traces(t.get(), model_of(c), &b, &s), path);
    std::unique_ptr<hosc_traceset, decltype(&hosc_traceset_free)> guard(s, &hosc_traceset_free);
    Owned out;
    check(hosc_traceset_report(s, format_of(c), &out.p), path);
    std::cout << out.str();
    return kExitOk;
}

int cmd_equiv(const std::string& a, const std::string& b, const Common& c) {
    TermPtr ta = load_term(a);
    TermPtr tb = load_term(b);
    hosc_bounds bd = bounds_of(c);
    Owned out;
    hosc_verdict v;
    check(hosc_equiv_report(ta.get(), tb.get(), model_of(c), &bd, c.complete ? 1 : 0, format_of(c), &out.p, &v),
          "equiv");
    std::cout << out.str();
    return kExitOk;
}

int cmd_compose(const std::string& term, const std::string& bundle, const std::string& observe, bool audit,
                const Common& c) {
    TermPtr t = load_term(term);
    Owned out;
    int yes = 0;
    hosc_observation kind = observe == "err" ? HOSC_OBSERVE_ERR : HOSC_OBSERVE_TER;
    check(hosc_compose(t.get(), read_file(bundle).c_str(), kind, c.fuel, audit ? 1 : 0, format_of(c), &out.p, &yes),
          bundle);
    std::cout << out.str();
    return kExitOk;
}

int cmd_synth(const std::string& path, const std::string& answer, const std::string& out_path, const Common& c) {
    Owned bundle, report;
    int ok = 0;
    check(hosc_synthesize(read_file(path).c_str(), model_of(c), answer.empty() ? nullptr : answer.c_str(), c.fuel,
                          format_of(c), &bundle.p, &report.p, &ok),
          path);
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw InputError("cannot write " + out_path);
        f << bundle.str();
        std::cout << report.str();
        return kExitOk;
    }
    if (format_of(c) == HOSC_FORMAT_RECORD) {
        std::cout << nlohmann::json{{"bundle", bundle.str()}}.dump() << "\n" << report.str();
        return kExitOk;
    }
    // Report lines become comments so that the whole output loads as a bundle.
    std::cout << bundle.str();
    std::istringstream rep(report.str());
    for (std::string line; std::getline(rep, line);) std::cout << (line.rfind("#", 0) == 0 ? "" : "# ") << line << "\n";
    return kExitOk;
}

void play_help() {
    std::cout << "  <n>        play the n-th listed move\n"
                 "  <action>   play an O-action written out, e.g. O-ANS c2@Unit ()\n"
                 "  state      show the configuration\n"
                 "  trace      show the trace so far\n"
                 "  quit       stop (the transcript is saved with --save)\n";
}

int cmd_play(const std::string& path, const std::string& save, const Common& c) {
    TermPtr t = load_term(path);
    hosc_bounds b = bounds_of(c);
    hosc_session* raw = nullptr;
    check(hosc_session_new(t.get(), model_of(c), &b, &raw), path);
    std::unique_ptr<hosc_session, decltype(&hosc_session_free)> s(raw, &hosc_session_free);
    auto transcript = [&] {
        Owned tr;
        check(hosc_session_transcript(s.get(), &tr.p), "transcript");
        return tr.str();
    };
    std::cout << "# playing O against " << path << " under " << hosc_model_name(model_of(c)) << "; 'help' lists commands\n";
    std::string line;
    for (;;) {
        while (hosc_session_active(s.get())) {
            Owned act;
            check(hosc_session_advance(s.get(), &act.p), "P");
            std::cout << "P: " << act.str() << "\n";
        }
        if (hosc_session_finished(s.get())) {
            Owned st;
            check(hosc_session_state(s.get(), &st.p), "state");
            std::cout << st.str() << "\n";
            break;
        }
        std::size_t n = hosc_session_move_count(s.get());
        for (std::size_t i = 0; i < n; ++i) {
            Owned a, note;
            check(hosc_session_move(s.get(), i, &a.p, &note.p), "moves");
            std::cout << "  [" << i << "] " << a.str() << "   # " << note.str() << "\n";
        }
        std::cout << "O> " << std::flush;
        if (!std::getline(std::cin, line)) break;
        auto b0 = line.find_first_not_of(" \t");
        if (b0 == std::string::npos) continue;
        line = line.substr(b0, line.find_last_not_of(" \t\r") - b0 + 1);
        if (line == "quit" || line == "q") break;
        if (line == "help") {
            play_help();
            continue;
        }
        if (line == "state") {
            Owned st;
            check(hosc_session_state(s.get(), &st.p), "state");
            std::cout << st.str() << "\n";
            continue;
        }
        if (line == "trace") {
            std::cout << transcript();
            continue;
        }
        hosc_status st;
        if (line.find_first_not_of("0123456789") == std::string::npos) {
            st = hosc_session_play_index(s.get(), std::stoul(line));
        } else {
            st = hosc_session_play(s.get(), line.c_str());
        }
        if (st != HOSC_OK) std::cout << "refused: " << hosc_last_error() << "\n";
    }
    std::string tr = transcript();
    if (!save.empty()) {
        std::ofstream f(save);
        if (!f) throw InputError("cannot write " + save);
        f << tr;
        std::cout << "# transcript saved to " << save << "\n";
    } else {
        std::cout << tr;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trace semantics, equivalence checking and context synthesis for a higher-order language with "
                 "state and control"};
    app.require_subcommand(1);
    Common c;
    std::string file1, file2, replay, observe = "ter", answer, out_path, save;
    bool audit = false;

    auto* chk = app.add_subcommand("check", "parse and typecheck a term file");
    chk->add_option("file", file1, "term file")->required();
    add_format(chk, c);

    auto* trc = app.add_subcommand("traces", "list the traces of a term");
    trc->add_option("file", file1, "term file")->required();
    trc->add_option("--replay", replay, "instead, derive this trace step by step");
    add_model(trc, c);
    add_bounds(trc, c);
    add_format(trc, c);

    auto* eqv = app.add_subcommand("equiv", "compare the trace sets of two terms");
    eqv->add_option("first", file1, "term file")->required();
    eqv->add_option("second", file2, "term file")->required();
    eqv->add_flag("--complete", c.complete, "compare complete traces only");
    add_model(eqv, c);
    add_bounds(eqv, c);
    add_format(eqv, c);

    auto* cmp = app.add_subcommand("compose", "run a term against a context bundle");
    cmp->add_option("term", file1, "term file")->required();
    cmp->add_option("context", file2, "context bundle")->required();
    cmp->add_option("--observe", observe, "ter or err")->check(CLI::IsMember({"ter", "err"}))->capture_default_str();
    cmp->add_flag("--audit", audit, "print the closed program image of every step");
    cmp->add_option("--fuel", c.fuel, "composite steps allowed")->capture_default_str();
    add_format(cmp, c);

    auto* syn = app.add_subcommand("synth", "build a context realizing a trace");
    syn->add_option("trace", file1, "trace file")->required();
    syn->add_option("--answer", answer, "result type of the context when the trace does not fix it");
    syn->add_option("--out", out_path, "write the bundle here and only the report to stdout");
    syn->add_option("--fuel", c.fuel, "reduction steps allowed per move during verification")->capture_default_str();
    add_model(syn, c);
    add_format(syn, c);

    auto* ply = app.add_subcommand("play", "play Opponent against a term");
    ply->add_option("file", file1, "term file")->required();
    ply->add_option("--save", save, "write the transcript here on exit");
    add_model(ply, c);
    add_bounds(ply, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*chk) return cmd_check(file1, c);
        if (*trc) return cmd_traces(file1, replay, c);
        if (*eqv) return cmd_equiv(file1, file2, c);
        if (*cmp) return cmd_compose(file1, file2, observe, audit, c);
        if (*syn) return cmd_synth(file1, answer, out_path, c);
        if (*ply) return cmd_play(file1, save, c);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitUsage;
}
