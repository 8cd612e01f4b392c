#include "doctest.h"
#include "helpers.hpp"

using namespace hosc;
using testing::corpus;
using testing::fixture;

namespace {

Config empty_context(const Config& term) {
    ContextInput in;
    in.k = {};
    in.hole = term.cont.type;
    in.result = term.cont.type;
    return init_context_config(in, term.cont);
}

Config bundle_context(const std::string& text, const Config& term) {
    return init_context_config(parse_bundle(text).input, term.cont);
}

// Saves the continuation of the callback, resumes it once, then reads the
// counter and fails when it is 2.
const char* kTwiceThenRead = R"(hole ((Unit -> Unit) -> Unit) * (Unit -> Int)
result Unit
cell s : Unit -> Unit = fun(v:Unit) ()
cell n : Int = 0
context let p = [] in
  (fst p) (fun(u:Unit) callcc(k:Unit. s := (fun(v:Unit) throw () to k)));
  n := !n + 1;
  if !n = 1 then (!s) () else (if (snd p) () = 2 then err () else ())
)";

}  // namespace

TEST_CASE("merging a term with the empty context") {
    auto cwl = corpus("cwl1");
    Config term = testing::term_config(cwl);
    CompositeConfig d = merge(term, empty_context(term));
    CHECK(check_valid(d).ok);
    CHECK(term_equal(d.term, cwl.term));
    CHECK(d.cont == term.cont);

    auto [m, h] = theta(d);
    CHECK(term_equal(m, cwl.term));
    CHECK(h.cells.empty());
}

TEST_CASE("merge rejects incompatible configurations") {
    auto cwl = corpus("cwl1");
    Config term = testing::term_config(cwl);
    Config ctx = empty_context(term);

    Config other = ctx;
    Name stray = cont_name(42, t_unit());
    other.phi.insert(stray);
    CHECK_THROWS_AS(merge(term, other), std::invalid_argument);

    Config passive = p_transition(term).next;
    CHECK_THROWS_AS(merge(passive, ctx), std::invalid_argument);
}

TEST_CASE("composite steps: answer then final") {
    auto u = corpus("unit");
    Config term = testing::term_config(u);
    CompositeConfig d = merge(term, empty_context(term));
    CStep s = composite_step(d);
    REQUIRE(s.kind == CStepKind::Visible);
    REQUIRE(s.label);
    CHECK(show_action(*s.label) == "P-ANS c0@Unit ()");
    CHECK(s.next.cont.is_final());
    CHECK(composite_step(s.next).kind == CStepKind::Final);

    auto [m, h] = theta(s.next);
    CHECK(term_equal(m, mk_unit()));
    CHECK(h.cells.empty());
}

TEST_CASE("observations through the composite machine") {
    auto u = corpus("unit");
    Config term = testing::term_config(u);
    auto ter = composite_observes(term, empty_context(term), Observation::Ter);
    CHECK(ter.yes);
    CHECK(trace_key(ter.trace) == "P-ANS c0@Unit ()");
    CHECK_FALSE(composite_observes(term, empty_context(term), Observation::Err).yes);

    TermFile om;
    om.term = mk_omega_term(t_unit());
    om.type = t_unit();
    Config diverging = testing::term_config(om);
    auto none = composite_observes(diverging, empty_context(diverging), Observation::Ter, 2000);
    CHECK_FALSE(none.yes);
    CHECK(none.run.end == CompositeEnd::FuelExhausted);
}

TEST_CASE("a hand-written context tells the callback-with-lock pair apart") {
    Trace t1 = fixture("cwl_reads_two");
    Config one = testing::term_config(corpus("cwl1"));
    auto first = composite_observes(one, bundle_context(kTwiceThenRead, one), Observation::Err);
    CHECK(first.yes);
    CHECK(first.run.bisimulation_ok);
    CHECK(first.run.validity_ok);
    REQUIRE(first.trace.size() >= t1.size());
    CHECK(trace_equal(first.trace.prefix(t1.size()), t1));

    Config two = testing::term_config(corpus("cwl2"));
    auto second = composite_observes(two, bundle_context(kTwiceThenRead, two), Observation::Err);
    CHECK_FALSE(second.yes);
    CHECK(second.run.end == CompositeEnd::Final);
    CHECK(composite_observes(two, bundle_context(kTwiceThenRead, two), Observation::Ter).yes);
}

TEST_CASE("every composite step is one plain step of its image") {
    Config one = testing::term_config(corpus("cwl1"));
    CompositeConfig d = merge(one, bundle_context(kTwiceThenRead, one));
    Trace ambient;
    auto run = composite_run(d, ambient, kDefaultFuel, true, true);
    CHECK(run.bisimulation_ok);
    CHECK(run.discrepancy.empty());
    CHECK(run.end == CompositeEnd::Err);
    CHECK(run.audit.size() == run.steps + 1);

    auto [m, h] = theta(d);
    CHECK(observes(m, h, Observation::Err));
}
