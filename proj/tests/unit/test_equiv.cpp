#include "doctest.h"
#include "helpers.hpp"

using namespace hosc;
using testing::corpus;
using testing::fixture;

namespace {

EquivResult compare(const char* a, const char* b, Model m, std::size_t depth, bool complete = false) {
    auto fa = corpus(a), fb = corpus(b);
    Bounds bounds;
    bounds.depth = depth;
    return compare_terms(fa.term, fb.term, fa.gamma, fa.type, m, bounds, complete);
}

}  // namespace

TEST_CASE("trace sets: membership of the callback-with-lock witnesses") {
    Trace t1 = fixture("cwl_reads_two"), t2 = fixture("cwl_reads_one");
    auto s1 = testing::traces_of(corpus("cwl1"), Model::HOSC, 9);
    auto s2 = testing::traces_of(corpus("cwl2"), Model::HOSC, 9);
    CHECK(s1.contains(t1));
    CHECK_FALSE(s1.contains(t2));
    CHECK(s2.contains(t2));
    CHECK_FALSE(s2.contains(t1));
    for (std::size_t n = 0; n <= t1.size(); ++n) CHECK(s1.contains(t1.prefix(n)));

    auto gos = testing::traces_of(corpus("cwl1"), Model::GOS, 9);
    CHECK_FALSE(gos.contains(t1));
    CHECK(gos.contains(t1.prefix(5)));
}

TEST_CASE("trace sets: divergence and the unit value") {
    TermFile om;
    om.term = mk_omega_term(t_unit());
    om.type = t_unit();
    for (Model m : kAllModels) {
        auto s = testing::traces_of(om, m, 8);
        REQUIRE(s.entries.size() == 1);
        CHECK(s.entries[0].trace.size() == 0);
        CHECK(s.entries[0].status == Terminal::Diverged);
    }
    auto u = testing::traces_of(corpus("unit"), Model::HOSC, 8);
    REQUIRE(u.entries.size() == 2);
    CHECK(trace_key(u.entries[1].trace) == "P-ANS c0@Unit ()");
    CHECK(u.entries[1].status == Terminal::Passive);
}

TEST_CASE("trace sets are ordered and prefix closed") {
    auto s = testing::traces_of(corpus("wbsc1"), Model::HOSC, 6);
    for (std::size_t i = 1; i < s.entries.size(); ++i)
        CHECK(s.entries[i - 1].trace.size() <= s.entries[i].trace.size());
    for (const auto& e : s.entries)
        if (e.trace.size() > 0) CHECK(s.contains(e.trace.prefix(e.trace.size() - 1)));
}

TEST_CASE("inclusion: callback with lock") {
    auto r = compare("cwl1", "cwl2", Model::HOSC, 9);
    CHECK(r.verdict == Verdict::Distinct);
    REQUIRE(r.left_in_right.witness);
    REQUIRE(r.right_in_left.witness);
    CHECK(trace_equal(*r.left_in_right.witness, fixture("cwl_reads_two")));
    CHECK(trace_equal(*r.right_in_left.witness, fixture("cwl_reads_one")));
    for (Model m : {Model::GOSC, Model::HOS, Model::GOS})
        CHECK(compare("cwl1", "cwl2", m, 9).verdict == Verdict::EquivalentUpToDepth);
}

TEST_CASE("inclusion: complete traces") {
    auto cb = corpus("callomega"), om = corpus("omega");
    Bounds b;
    b.depth = 5;
    auto plain = trace_included(cb.term, om.term, cb.gamma, cb.type, Model::HOS, b, false);
    CHECK_FALSE(plain.included);
    REQUIRE(plain.witness);
    CHECK(trace_equal(*plain.witness, fixture("callback_then_diverge")));
    CHECK(trace_included(cb.term, om.term, cb.gamma, cb.type, Model::HOS, b, true).included);

    Bounds b3;
    b3.depth = 3;
    for (const auto* f : {&cb, &om}) {
        auto s = testing::traces_of(*f, Model::HOS, 3);
        std::vector<std::string> complete;
        for (const auto& e : s.entries)
            if (e.trace.size() > 0 && check_predicate(e.trace, Predicate::Complete).holds)
                complete.push_back(trace_key(e.trace));
        CHECK(complete == std::vector<std::string>{"P-ANS c0@(Unit->Unit)->Unit f0@(Unit->Unit)->Unit"});
    }
}

TEST_CASE("distinguishing traces") {
    auto a = corpus("wbsc1"), b = corpus("wbsc2");
    Bounds bounds;
    bounds.depth = 9;
    auto d = find_distinguishing_trace(a.term, b.term, a.gamma, a.type, Model::GOSC, bounds);
    REQUIRE(d);
    CHECK(d->trace.size() == 9);
    Trace expected = d->direction == 1 ? fixture("wbsc_returns_zero") : fixture("wbsc_returns_one");
    CHECK(trace_equal(d->trace, expected));
    for (Model m : {Model::HOS, Model::GOS})
        CHECK_FALSE(find_distinguishing_trace(a.term, b.term, a.gamma, a.type, m, bounds));

    auto c1 = corpus("counter1"), c2 = corpus("counter2");
    Bounds six;
    six.depth = 6;
    CHECK_FALSE(find_distinguishing_trace(c1.term, c2.term, c1.gamma, c1.type, Model::HOSC, six));
}

TEST_CASE("exhaustive assignments cover base-typed free variables") {
    TermFile f = parse_term_file("#gamma x : Int\nx + 1\n");
    Bounds b;
    b.depth = 2;
    b.exhaustive = true;
    auto tt = term_traces(f.term, f.gamma, f.type, Model::HOSC, b);
    REQUIRE(tt.sets.size() == 2);
    CHECK(trace_key(tt.sets[0].entries.back().trace) == "P-ANS c0@Int 1");
    CHECK(trace_key(tt.sets[1].entries.back().trace) == "P-ANS c0@Int 2");
}

TEST_CASE("replaying a trace records each step") {
    auto cwl = corpus("cwl1");
    Trace t1 = fixture("cwl_reads_two");
    auto r = replay(testing::term_config(cwl), t1);
    REQUIRE(r.ok);
    CHECK(r.rows.size() == 15);
    CHECK(r.rows.front().label.empty());
    CHECK(r.rows[1].label == "tau*");
    CHECK_FALSE(r.last.active);
    CHECK(show_heap(r.last.heap) == "[l0 -> 2, l1 -> ff]");

    auto bad = replay(testing::term_config(corpus("cwl2")), t1);
    CHECK_FALSE(bad.ok);
    CHECK(bad.failed_at == 8);
}
