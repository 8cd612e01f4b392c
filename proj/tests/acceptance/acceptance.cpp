// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bundle.hpp"
#include "composite.hpp"
#include "equiv.hpp"
#include "generator.hpp"
#include "hosc/hosc.h"
#include "synth.hpp"

using namespace hosc;

namespace {

// Wall-clock limits, in seconds.
constexpr double kGoldenLimit = 1.0;
constexpr double kSeparationLimit = 30.0;  // per equivalence check
constexpr double kViewLimit = 5.0;
constexpr double kCompleteLimit = 30.0;
constexpr double kLatticeLimit = 300.0;
constexpr double kOracleLimit = 300.0;
constexpr double kDefinabilityLimit = 600.0;

constexpr std::size_t kLatticeTerms = 60;
constexpr std::size_t kLatticeDepth = 6;
constexpr std::size_t kMinOraclePairs = 30;
constexpr std::size_t kOracleTraceDepth = 4;
constexpr std::size_t kDefinabilityDepth = 4;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const std::string& rel) {
    std::ifstream in(std::string(HOSC_SOURCE_DIR) + "/" + rel);
    if (!in) throw std::runtime_error("cannot read " + rel);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TermFile corpus(const std::string& name) { return parse_term_file(slurp("corpus/" + name + ".hosc")); }
Trace fixture(const std::string& name) { return parse_trace(slurp("tests/data/" + name + ".trace")); }

// Collects failure messages for one criterion.
struct Check {
    std::vector<std::string> problems;
    std::vector<std::string> facts;

    void expect(bool ok, const std::string& what) {
        if (!ok) problems.push_back(what);
    }
    void note(const std::string& s) { facts.push_back(s); }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit, const std::function<void(Check&)>& body) {
    Check c;
    auto t0 = Clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.problems.push_back(std::string("exception: ") + e.what());
    }
    double secs = seconds_since(t0);
    if (secs > limit) {
        std::ostringstream os;
        os << "took " << secs << " s, limit " << limit << " s";
        c.problems.push_back(os.str());
    }
    bool ok = c.problems.empty();
    if (!ok) ++failures;
    std::printf("%s %d %s (%.2f s, limit %.0f s)", ok ? "PASS" : "FAIL", id, title.c_str(), secs, limit);
    for (const auto& f : c.facts) std::printf("; %s", f.c_str());
    std::printf("\n");
    for (const auto& p : c.problems) std::printf("    %s\n", p.c_str());
    std::fflush(stdout);
}

Bounds depth_bounds(std::size_t depth) {
    Bounds b;
    b.depth = depth;
    return b;
}

TraceSet traces_of(const TermFile& f, Model m, std::size_t depth) {
    return term_traces(f.term, f.gamma, f.type, m, depth_bounds(depth)).sets.at(0);
}

std::set<std::string> keys(const TraceSet& s) {
    std::set<std::string> out;
    for (const auto& e : s.entries) out.insert(trace_key(e.trace));
    return out;
}

std::set<std::string> view_names(const NameView& v) {
    std::set<std::string> out;
    for (const auto& n : v.names) out.insert(show_name(n));
    return out;
}

// ---------------------------------------------------------------------------

void golden_derivation(Check& c) {
    std::string expected = slurp("tests/golden/expected/cwl_derivation.txt");
    std::string term_text = slurp("corpus/cwl1.hosc");
    std::string t1 = slurp("tests/data/cwl_reads_two.trace");
    hosc_term* t = nullptr;
    if (hosc_term_parse(term_text.c_str(), &t) != HOSC_OK) throw std::runtime_error(hosc_last_error());
    char* out = nullptr;
    int ok = 0;
    hosc_status st = hosc_derivation(t, HOSC_MODEL_HOSC, t1.c_str(), kDefaultFuel, HOSC_FORMAT_TEXT, &out, &ok);
    hosc_term_free(t);
    if (st != HOSC_OK) throw std::runtime_error(hosc_last_error());
    std::string got = out;
    hosc_string_free(out);
    c.expect(ok == 1, "derivation did not complete");
    c.expect(got == expected, "derivation differs from the golden file");

    auto r = replay(init_term_config(corpus("cwl1").term, {}, corpus("cwl1").type, Model::HOSC), fixture("cwl_reads_two"));
    c.expect(r.ok, "replay failed: " + r.reason);
    c.expect(r.rows.size() == 15, "expected 15 rows, got " + std::to_string(r.rows.size()));
    if (r.rows.size() >= 2) {
        c.expect(show_heap(r.rows[1].config.heap) == "[l0 -> 0, l1 -> ff]", "first heap snapshot");
        c.expect(show_heap(r.rows.back().config.heap) == "[l0 -> 2, l1 -> ff]", "last heap snapshot");
    }
    c.note(std::to_string(r.rows.size()) + " rows");
}

void separations(Check& c) {
    struct Case {
        const char* a;
        const char* b;
        std::size_t depth;
        std::vector<Model> distinct;
        std::vector<Model> equivalent;
    };
    const Case cases[] = {
        {"cwl1", "cwl2", 9, {Model::HOSC}, {Model::GOSC, Model::HOS, Model::GOS}},
        {"wbsc1", "wbsc2", 9, {Model::HOSC, Model::GOSC}, {Model::HOS, Model::GOS}},
        {"assign1", "assign2", 9, {Model::HOS}, {Model::GOSC, Model::GOS}},
        {"escape1", "escape2", 8, {Model::HOSC}, {Model::HOS}},
    };
    int checks = 0;
    for (const auto& k : cases) {
        auto fa = corpus(k.a), fb = corpus(k.b);
        auto verdict = [&](Model m) {
            auto t0 = Clock::now();
            auto r = compare_terms(fa.term, fb.term, fa.gamma, fa.type, m, depth_bounds(k.depth));
            double secs = seconds_since(t0);
            c.expect(secs <= kSeparationLimit, std::string(k.a) + " under " + model_name(m) + " exceeded the limit");
            ++checks;
            return r;
        };
        for (Model m : k.equivalent)
            c.expect(verdict(m).verdict == Verdict::EquivalentUpToDepth,
                     std::string(k.a) + "/" + k.b + " should be equivalent under " + model_name(m));
        for (Model m : k.distinct) {
            auto r = verdict(m);
            std::string tag = std::string(k.a) + "/" + k.b + " under " + model_name(m);
            c.expect(r.verdict == Verdict::Distinct, tag + " should be distinct");
            const auto& wl = r.left_in_right.witness;
            const auto& wr = r.right_in_left.witness;
            std::string name(k.a);
            if (name == "cwl1") {
                c.expect(wl && trace_equal(*wl, fixture("cwl_reads_two")), tag + ": left witness is not t1");
                c.expect(wr && trace_equal(*wr, fixture("cwl_reads_one")), tag + ": right witness is not t2");
            } else if (name == "wbsc1") {
                c.expect(wl && trace_equal(*wl, fixture("wbsc_returns_zero")), tag + ": left witness is not t3");
                c.expect(wr && trace_equal(*wr, fixture("wbsc_returns_one")), tag + ": right witness is not t4");
                if (wl && wr) {
                    c.expect(check_predicate(*wl, Predicate::OVisible).holds, tag + ": t3 not O-visible");
                    c.expect(check_predicate(*wr, Predicate::OVisible).holds, tag + ": t4 not O-visible");
                    c.expect(!check_predicate(*wl, Predicate::OBracketed).holds, tag + ": t3 O-bracketed");
                }
            } else if (name == "assign1" && m == Model::HOS) {
                c.expect(wl && trace_equal(*wl, fixture("assign_answers")), tag + ": left witness is not t5");
                c.expect(wr && trace_equal(*wr, fixture("assign_calls_back")), tag + ": right witness is not t6");
                if (wl && wr) {
                    c.expect(!check_predicate(*wl, Predicate::OVisible).holds, tag + ": t5 O-visible");
                    c.expect(!check_predicate(*wr, Predicate::OVisible).holds, tag + ": t6 O-visible");
                }
            } else if (name == "escape1") {
                c.expect(wl && trace_equal(*wl, fixture("escape_unbracketed")), tag + ": unexpected witness");
                c.expect(wl && !check_predicate(*wl, Predicate::OBracketed).holds, tag + ": witness O-bracketed");
            }
        }
    }
    c.note(std::to_string(checks) + " equivalence checks");
}

void views(Check& c) {
    Trace t1 = fixture("cwl_reads_two");
    c.expect(view_names(compute_oav(t1.prefix(3))) ==
                 std::set<std::string>{"f0@(Unit->Unit)->Unit", "f1@Unit->Int", "c2@Unit"},
             "oav of the 3-action prefix");
    c.expect(view_names(compute_oav(t1.prefix(5))) == std::set<std::string>{"f0@(Unit->Unit)->Unit", "f1@Unit->Int"},
             "oav of the 5-action prefix");
    Trace t3 = fixture("wbsc_returns_zero");
    c.expect(view_names(compute_oav(t3.prefix(7))) ==
                 std::set<std::string>{"f0@(Unit->Unit)->Int", "c3@Unit", "c5@Unit"},
             "oav of the 7-action prefix of t3");
    Trace cb = fixture("callback_then_diverge");
    c.expect(show_name(compute_topo(cb)) == "c2@Unit", "Top_O of the callback prefix");
}

void complete_traces(Check& c) {
    auto m1 = corpus("callomega"), m2 = corpus("omega");
    Bounds b = depth_bounds(5);
    auto plain = trace_included(m1.term, m2.term, m1.gamma, m1.type, Model::HOS, b, false);
    c.expect(!plain.included, "plain inclusion should fail");
    c.expect(plain.witness && trace_equal(*plain.witness, fixture("callback_then_diverge")),
             "plain inclusion witness");
    auto complete = trace_included(m1.term, m2.term, m1.gamma, m1.type, Model::HOS, b, true);
    c.expect(complete.included, "complete-only inclusion should hold");
    for (const TermFile* f : {&m1, &m2}) {
        std::vector<std::string> found;
        for (const auto& e : traces_of(*f, Model::HOS, 3).entries)
            if (e.trace.size() > 0 && check_predicate(e.trace, Predicate::Complete).holds)
                found.push_back(trace_key(e.trace));
        c.expect(found == std::vector<std::string>{"P-ANS c0@(Unit->Unit)->Unit f0@(Unit->Unit)->Unit"},
                 "complete traces at depth 3");
    }
}

void lattice(Check& c) {
    auto terms = generate_corpus(1, kLatticeTerms);
    std::size_t discrepancies = 0, separating = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& f = terms[i];
        auto hosc = traces_of(f, Model::HOSC, kLatticeDepth);
        auto gosc = keys(traces_of(f, Model::GOSC, kLatticeDepth));
        auto hos = keys(traces_of(f, Model::HOS, kLatticeDepth));
        auto gos = keys(traces_of(f, Model::GOS, kLatticeDepth));
        std::set<std::string> visible, bracketed, meet;
        for (const auto& e : hosc.entries) {
            if (check_predicate(e.trace, Predicate::OVisible).holds) visible.insert(trace_key(e.trace));
            if (check_predicate(e.trace, Predicate::OBracketed).holds) bracketed.insert(trace_key(e.trace));
        }
        for (const auto& k : gosc)
            if (hos.count(k)) meet.insert(k);
        auto fail = [&](const char* what) {
            ++discrepancies;
            c.expect(false, "term " + std::to_string(i) + ": " + what + "  [" + show_term(f.term) + "]");
        };
        if (gos != meet) fail("GOS differs from GOSC meet HOS");
        if (gosc != visible) fail("GOSC differs from the O-visible part of HOSC");
        if (hos != bracketed) fail("HOS differs from the O-bracketed part of HOSC");
        if (gosc.size() != keys(hosc).size() || hos.size() != keys(hosc).size()) ++separating;
    }
    c.expect(terms.size() >= 50, "fewer than 50 terms");
    c.note(std::to_string(terms.size()) + " terms, " + std::to_string(separating) + " with model-dependent sets, " +
           std::to_string(discrepancies) + " discrepancies");
}

struct Pair {
    std::string label;
    Config term;
    Config context;
};

// Saves the callback's continuation, resumes it once, then errs when the
// counter reads 2.
const char* kTwiceThenRead = R"(hole ((Unit -> Unit) -> Unit) * (Unit -> Int)
result Unit
cell s : Unit -> Unit = fun(v:Unit) ()
cell n : Int = 0
context let p = [] in
  (fst p) (fun(u:Unit) callcc(k:Unit. s := (fun(v:Unit) throw () to k)));
  n := !n + 1;
  if !n = 1 then (!s) () else (if (snd p) () = 2 then err () else ())
)";

void oracle(Check& c) {
    std::vector<Pair> pairs;
    auto with_context = [&](const std::string& label, const TermFile& f, const ContextInput& in) {
        Config term = init_term_config(f.term, f.gamma, f.type, Model::HOSC);
        pairs.push_back({label, term, init_context_config(in, term.cont)});
    };

    const std::vector<std::pair<std::string, std::string>> families = {
        {"cwl1", "cwl2"}, {"wbsc1", "wbsc2"}, {"assign1", "assign2"}, {"escape1", "escape2"}, {"counter1", "counter2"}};
    for (const auto& [a, b] : families) {
        auto fa = corpus(a), fb = corpus(b);
        auto set = traces_of(fa, Model::HOSC, kOracleTraceDepth);
        for (const auto& e : set.entries) {
            if (e.trace.size() == 0) continue;
            Trace ctx = e.trace.size() % 2 ? dual_with_err(e.trace) : dualize(e.trace);
            for (Model m : kAllModels) {
                SynthResult r;
                try {
                    r = synthesize_context(ctx, m);
                } catch (const SynthError&) {
                    continue;
                }
                std::string label = model_name(m) + " context for " + a + " [" + trace_key(e.trace) + "]";
                with_context(label + " vs " + a, fa, to_context_input(r));
                with_context(label + " vs " + b, fb, to_context_input(r));
            }
        }
    }
    with_context("hand-written context vs cwl1", corpus("cwl1"), parse_bundle(kTwiceThenRead).input);
    with_context("hand-written context vs cwl2", corpus("cwl2"), parse_bundle(kTwiceThenRead).input);
    for (const char* name : {"unit", "omega", "callomega", "cwl1", "wbsc1"}) {
        auto f = corpus(name);
        ContextInput in;
        in.hole = f.type;
        in.result = f.type;
        with_context(std::string("empty context vs ") + name, f, in);
    }

    std::size_t steps = 0, discrepancies = 0, err = 0, ter = 0;
    for (const auto& p : pairs) {
        CompositeConfig d = merge(p.term, p.context);
        auto run = composite_run(d, empty_trace_of(p.term), kDefaultFuel, true);
        steps += run.steps;
        auto [m, h] = theta(d);
        bool plain_err = observes(m, h, Observation::Err, kDefaultFuel);
        bool plain_ter = observes(m, h, Observation::Ter, kDefaultFuel);
        bool comp_err = run.end == CompositeEnd::Err;
        bool comp_ter = run.end == CompositeEnd::Final;
        auto agrees = composite_observes(p.term, p.context, Observation::Err).yes == comp_err &&
                      composite_observes(p.term, p.context, Observation::Ter).yes == comp_ter;
        std::string problem;
        if (!run.bisimulation_ok) problem = "bisimulation: " + run.discrepancy;
        else if (!run.validity_ok) problem = "invalid composite configuration";
        else if (comp_err != plain_err || comp_ter != plain_ter) problem = "closed program disagrees";
        else if (!agrees) problem = "composite_observes disagrees with the run";
        if (!problem.empty()) {
            ++discrepancies;
            c.expect(false, p.label + ": " + problem);
        }
        err += comp_err;
        ter += comp_ter;
    }
    c.expect(pairs.size() >= kMinOraclePairs, "fewer than 30 pairs");
    c.note(std::to_string(pairs.size()) + " pairs, " + std::to_string(steps) + " composite steps, " +
           std::to_string(err) + " err, " + std::to_string(ter) + " ter, " + std::to_string(discrepancies) +
           " discrepancies");
}

void definability(Check& c) {
    std::size_t round_trips = 0;
    for (const char* name : {"cwl1", "cwl2", "wbsc1", "wbsc2", "assign1", "assign2", "escape1", "escape2", "counter1",
                             "counter2", "callomega", "omega", "unit"}) {
        auto f = corpus(name);
        for (Model m : kAllModels) {
            for (const auto& e : traces_of(f, m, kDefinabilityDepth).entries) {
                if (e.trace.size() == 0 || e.trace.size() % 2) continue;
                Trace ctx = dualize(e.trace);
                std::string tag = std::string(name) + " " + model_name(m) + " [" + trace_key(e.trace) + "]";
                try {
                    auto r = synthesize_context(ctx, m);
                    auto rep = verify_synthesis(ctx, m, r);
                    c.expect(rep.exact, tag + ": even traces differ");
                    c.expect(rep.fragment_ok, tag + ": outside the fragment");
                    c.expect(rep.determinate, tag + ": not determinate");
                } catch (const SynthError& err) {
                    c.expect(false, tag + ": rejected: " + err.what());
                }
                ++round_trips;
            }
        }
    }
    auto c1 = corpus("counter1"), c2 = corpus("counter2");
    for (Model m : kAllModels)
        c.expect(keys(traces_of(c1, m, 6)) == keys(traces_of(c2, m, 6)),
                 std::string("counter pair differs under ") + model_name(m));
    c.note(std::to_string(round_trips) + " round trips");
}

}  // namespace

int main() {
    criterion(1, "golden derivation of the callback-with-lock trace", kGoldenLimit, golden_derivation);
    criterion(2, "model separations", kSeparationLimit * 12, separations);
    criterion(3, "view computations", kViewLimit, views);
    criterion(4, "complete-trace semantics", kCompleteLimit, complete_traces);
    criterion(5, "filter lattice on generated terms", kLatticeLimit, lattice);
    criterion(6, "composite oracle", kOracleLimit, oracle);
    criterion(7, "definability round trip", kDefinabilityLimit, definability);
    return failures == 0 ? 0 : 1;
}
