#include "doctest.h"
#include "helpers.hpp"

using namespace hosc;
using testing::corpus;
using testing::fixture;
using testing::names_of;

namespace {

const char* kCallbackPrefix =
    "ambient O c0@(Unit->Unit)->Unit\n"
    "P-ANS c0@(Unit->Unit)->Unit f0@(Unit->Unit)->Unit . O-QUE f0@(Unit->Unit)->Unit f1@Unit->Unit c1@Unit . "
    "P-QUE f1@Unit->Unit () c2@Unit\n";

std::vector<Trace> corpus_traces(std::size_t depth) {
    std::vector<Trace> out;
    for (const char* name : {"cwl1", "wbsc1", "assign1", "escape1", "counter1", "callomega"}) {
        auto f = corpus(name);
        for (const auto& e : testing::traces_of(f, Model::HOSC, depth).entries) out.push_back(e.trace);
    }
    return out;
}

}  // namespace

TEST_CASE("wire format round trip") {
    Trace t1 = fixture("cwl_reads_two");
    CHECK(t1.size() == 9);
    CHECK(trace_equal(parse_trace(show_trace(t1)), t1));
    CHECK(show_trace(parse_trace(show_trace(t1))) == show_trace(t1));

    Trace one_line = parse_trace(kCallbackPrefix);
    CHECK(one_line.size() == 3);
    CHECK(trace_key(one_line) ==
          "P-ANS c0@(Unit->Unit)->Unit f0@(Unit->Unit)->Unit . O-QUE f0@(Unit->Unit)->Unit f1@Unit->Unit c1@Unit . "
          "P-QUE f1@Unit->Unit () c2@Unit");

    CHECK_THROWS(parse_action("X-ANS c0@Unit ()"));
    CHECK_THROWS(parse_action("P-QUE f0@Unit->Unit ()"));
}

TEST_CASE("well-formedness") {
    CHECK(check_well_formed(fixture("cwl_reads_two")).ok);
    Trace repeated = parse_trace(
        "ambient O c0@Unit->Unit\n"
        "P-ANS c0@Unit->Unit f0@Unit->Unit\n"
        "O-QUE f0@Unit->Unit () c1@Unit\n"
        "P-ANS c1@Unit ()\n"
        "O-QUE f0@Unit->Unit () c1@Unit\n");
    auto wf = check_well_formed(repeated);
    CHECK_FALSE(wf.ok);
    CHECK(wf.position == 3);

    Trace unknown = parse_trace("ambient O c0@Unit\nP-ANS c5@Unit ()\n");
    CHECK_FALSE(check_well_formed(unknown).ok);

    Trace same_pol = parse_trace(
        "ambient O c0@Unit->Unit\nP-ANS c0@Unit->Unit f0@Unit->Unit\nP-ANS c0@Unit->Unit f1@Unit->Unit\n");
    CHECK_FALSE(check_well_formed(same_pol).ok);
}

TEST_CASE("justifiers") {
    Trace t1 = fixture("cwl_reads_two");
    CHECK(justifier(t1, 0) == -1);
    CHECK(justifier(t1, 1) == 0);
    CHECK(justifier(t1, 3) == 2);
    CHECK(justifier(t1, 5) == 2);
    CHECK(justifier(t1, 7) == 0);
}

TEST_CASE("O-views") {
    Trace t1 = fixture("cwl_reads_two");
    auto v3 = compute_oav(t1.prefix(3));
    CHECK(names_of(v3) == std::set<std::string>{"f0@(Unit->Unit)->Unit", "f1@Unit->Int", "c2@Unit"});
    auto v5 = compute_oav(t1.prefix(5));
    CHECK(names_of(v5) == std::set<std::string>{"f0@(Unit->Unit)->Unit", "f1@Unit->Int"});

    Trace t3 = fixture("wbsc_returns_zero");
    auto w7 = compute_oav(t3.prefix(7));
    CHECK(names_of(w7) == std::set<std::string>{"f0@(Unit->Unit)->Int", "c3@Unit", "c5@Unit"});
}

TEST_CASE("P-views") {
    Trace answer = dualize(parse_trace("ambient O c0@Int\nP-ANS c0@Int 1\n"));
    auto pv = compute_pav(answer);
    CHECK(pv.all_final);
    CHECK(pv.contains(err_name()));
    CHECK(names_of(pv) == std::set<std::string>{"errn"});

    Trace fn = dualize(parse_trace("ambient O c0@Unit->Unit\nP-ANS c0@Unit->Unit f0@Unit->Unit\n"));
    CHECK(names_of(compute_pav(fn)) == std::set<std::string>{"errn", "f0@Unit->Unit"});

    Trace t3 = fixture("wbsc_returns_zero");
    auto dual7 = compute_pav(dualize(t3.prefix(7)));
    for (const char* n : {"f0@(Unit->Unit)->Int", "c3@Unit", "c5@Unit"}) CHECK(dual7.contains(parse_name(n)));
}

TEST_CASE("top continuations") {
    Trace t = parse_trace(kCallbackPrefix);
    CHECK(show_name(compute_topo(t)) == "c2@Unit");
    CHECK(compute_topo(t.prefix(1)).is_bottom());
    CHECK(show_name(compute_topo(fixture("wbsc_returns_zero").prefix(7))) == "c5@Unit");

    Trace ans = dualize(parse_trace("ambient O c0@Unit\nP-ANS c0@Unit ()\n"));
    CHECK(compute_topp(ans, t_unit()) == final_name(t_unit()));
    CHECK(show_name(compute_topp(dualize(t))) == "c2@Unit");
}

TEST_CASE("top continuations are dual to each other") {
    for (const auto& t : corpus_traces(5)) {
        if (t.size() % 2 == 0) continue;
        CAPTURE(trace_key(t));
        Name o = compute_topo(t);
        Name p = compute_topp(dualize(t), t_unit());
        if (o.is_bottom())
            CHECK(p.is_final());
        else
            CHECK(o == p);
    }
}

TEST_CASE("predicates on the witness traces") {
    Trace t1 = fixture("cwl_reads_two");
    auto vis = check_predicate(t1, Predicate::OVisible);
    CHECK_FALSE(vis.holds);
    CHECK(vis.violation == 5);
    CHECK(check_predicate(t1.prefix(5), Predicate::OVisible).holds);

    Trace t3 = fixture("wbsc_returns_zero");
    CHECK(check_predicate(t3, Predicate::OVisible).holds);
    CHECK(check_predicate(fixture("wbsc_returns_one"), Predicate::OVisible).holds);
    CHECK_FALSE(check_predicate(t3, Predicate::OBracketed).holds);

    CHECK_FALSE(check_predicate(fixture("assign_answers"), Predicate::OVisible).holds);
    CHECK_FALSE(check_predicate(fixture("assign_calls_back"), Predicate::OVisible).holds);
    CHECK_FALSE(check_predicate(fixture("escape_unbracketed"), Predicate::OBracketed).holds);

    Trace cb = parse_trace(kCallbackPrefix);
    CHECK_FALSE(check_predicate(cb, Predicate::Complete).holds);
    CHECK(check_predicate(cb.prefix(1), Predicate::Complete).holds);

    Predicate p;
    CHECK(parse_predicate("o-visible", p));
    CHECK(p == Predicate::OVisible);
    CHECK(parse_predicate("complete", p));
    CHECK(p == Predicate::Complete);
    CHECK_FALSE(parse_predicate("visible", p));
}

TEST_CASE("duality") {
    Trace t1 = fixture("cwl_reads_two");
    CHECK(trace_equal(dualize(dualize(t1)), t1));
    Trace ans = parse_trace("ambient O c0@Int\nP-ANS c0@Int 1\n");
    Trace d = dualize(ans);
    REQUIRE(d.size() == 1);
    CHECK(d.acts[0].pol == Pol::O);
    CHECK(show_action(d.acts[0]) == "O-ANS c0@Int 1");
    CHECK(d.ambient_p == ans.ambient_o);

    Trace e = dual_with_err(t1);
    CHECK(e.size() == t1.size() + 1);
    CHECK(e.acts.back().subject.is_err());
    CHECK(e.acts.back().pol == Pol::P);
}

TEST_CASE("O-visibility corresponds to P-visibility of the error-extended dual") {
    for (const auto& t : corpus_traces(6)) {
        if (t.size() % 2 == 0) continue;
        CAPTURE(trace_key(t));
        CHECK(check_predicate(t, Predicate::OVisible).holds ==
              check_predicate(dual_with_err(t), Predicate::PVisible).holds);
    }
}

TEST_CASE("canonicalization") {
    Trace t1 = fixture("cwl_reads_two");
    CHECK(trace_equal(canonicalize(t1, {}), t1));

    Trace t3 = fixture("wbsc_returns_zero");
    std::string text = show_trace(t3);
    auto swap = [&](const std::string& a, const std::string& b) {
        std::string out, tmp = "@@";
        for (std::size_t i = 0; i < text.size();) {
            if (text.compare(i, a.size(), a) == 0) {
                out += tmp;
                i += a.size();
            } else {
                out += text[i++];
            }
        }
        text = out;
        for (std::size_t i; (i = text.find(b)) != std::string::npos;) text.replace(i, b.size(), a);
        for (std::size_t i; (i = text.find(tmp)) != std::string::npos;) text.replace(i, tmp.size(), b);
    };
    swap("f1@Unit->Unit", "f2@Unit->Unit");
    swap("c3@Unit", "c5@Unit");
    Trace renamed = parse_trace(text);
    CHECK_FALSE(trace_equal(renamed, t3));
    CHECK(trace_equal(canonicalize(renamed, {}), t3));

    Trace mixed = parse_trace(
        "ambient O c0@Unit->Int\n"
        "P-ANS c0@Unit->Int f0@Unit->Int\n"
        "O-QUE f0@Unit->Int () c7@Int\n"
        "P-ANS c7@Int 1\n"
        "O-QUE f0@Unit->Int () c2@Int\n");
    Trace canon = canonicalize(mixed, {});
    CHECK(show_name(canon.acts[1].cont) == "c1@Int");
    CHECK(show_name(canon.acts[3].cont) == "c2@Int");
}
