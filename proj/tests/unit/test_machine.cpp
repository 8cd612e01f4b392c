#include "doctest.h"
#include "helpers.hpp"

using namespace hosc;
using testing::corpus;

namespace {

MachineState state_of(TermP m, Name c = cont_name(0, t_unit()), Heap h = {}) {
    MachineState s;
    s.term = std::move(m);
    s.cont = c;
    s.heap = std::move(h);
    return s;
}

bool cell_is(const Heap& h, Loc l, const TermP& v) {
    auto it = h.cells.find(l);
    return it != h.cells.end() && term_equal(it->second, v);
}

}  // namespace

TEST_CASE("base step: assignment inside a context") {
    Heap h;
    Loc l = h.alloc(0, mk_int(0), t_int());
    TermP m = mk_app(mk_lam("u", t_unit(), mk_var("u")), mk_assign(mk_loc(l), mk_int(5)));
    auto r = step_base(m, h);
    REQUIRE(r);
    CHECK(term_equal(r->first, mk_app(mk_lam("u", t_unit(), mk_var("u")), mk_unit())));
    CHECK(cell_is(r->second, l, mk_int(5)));
}

TEST_CASE("base step: values are normal") {
    CHECK_FALSE(step_base(mk_int(3), Heap{}));
    CHECK_FALSE(step_base(parse_term("fun(x:Int) x"), Heap{}));
}

TEST_CASE("base step: allocation picks the first fresh location") {
    auto r = step_base(parse_term("ref 0"), Heap{});
    REQUIRE(r);
    CHECK(term_equal(r->first, mk_loc(Loc{0, 0})));
    CHECK(cell_is(r->second, Loc{0, 0}, mk_int(0)));
    auto r2 = step_base(parse_term("ref 1"), r->second);
    REQUIRE(r2);
    CHECK(term_equal(r2->first, mk_loc(Loc{0, 1})));
}

TEST_CASE("extended step: callcc captures the context and its name") {
    Name c = cont_name(4, t_int());
    auto s = step_ext(state_of(parse_term("1 + callcc(k:Int. throw 2 to k)"), c));
    REQUIRE(s);
    CHECK(s->cont == c);
    TermP t = s->term;
    REQUIRE(t->tag == Tag::Arith);
    REQUIRE(t->b->tag == Tag::Throw);
    TermP k = t->b->b;
    REQUIRE(k->tag == Tag::Cont);
    CHECK(k->named);
    CHECK(k->name == c);
    REQUIRE(k->ctx->size() == 1);
    CHECK(k->ctx->at(0).kind == FrameKind::ArithR);

    auto r = run(*s, 100);
    CHECK(r.kind == Outcome::Value);
    CHECK(term_equal(r.state.term, mk_int(3)));
}

TEST_CASE("extended step: control-free terms keep their continuation name") {
    Name c = cont_name(9, t_int());
    MachineState s = state_of(parse_term("let x = ref 0 in (x := !x + 1; x := !x + 1; !x)"), c);
    int steps = 0;
    while (auto n = step_ext(s)) {
        CHECK(n->cont == c);
        s = *n;
        ++steps;
    }
    CHECK(steps > 5);
    CHECK(term_equal(s.term, mk_int(2)));
}

TEST_CASE("callback-with-lock reduces to a pair over two cells") {
    auto f = corpus("cwl1");
    auto r = run(state_of(f.term), 1000);
    REQUIRE(r.kind == Outcome::Value);
    CHECK(r.state.term->tag == Tag::Pair);
    CHECK(r.state.heap.cells.size() == 2);
    CHECK(cell_is(r.state.heap, Loc{0, 0}, mk_int(0)));
    CHECK(cell_is(r.state.heap, Loc{0, 1}, mk_bool(false)));
}

TEST_CASE("run: divergence, values and callbacks") {
    CHECK(run(state_of(mk_omega_term(t_unit())), 1000).kind == Outcome::FuelExhausted);

    auto v = run(state_of(mk_unit()), 10);
    CHECK(v.kind == Outcome::Value);
    CHECK(v.steps == 0);
    CHECK(v.state.heap.cells.empty());

    auto f = corpus("cwl1");
    auto pair = run(state_of(f.term), 1000);
    REQUIRE(pair.kind == Outcome::Value);
    TermP inc = pair.state.term->a;
    Name f1 = fun_name(1, t_arrow(t_unit(), t_unit()));
    Name c1 = cont_name(1, t_unit());
    auto cb = run(state_of(mk_app(inc, mk_fname(f1)), c1, pair.state.heap), 1000);
    REQUIRE(cb.kind == Outcome::Callback);
    CHECK(cb.head == f1);
    CHECK(term_equal(cb.arg, mk_unit()));
    CHECK(cb.state.cont == c1);
    CHECK_FALSE(cb.k.empty());
    CHECK(cell_is(cb.state.heap, Loc{0, 0}, mk_int(0)));
    CHECK(cell_is(cb.state.heap, Loc{0, 1}, mk_bool(true)));

    auto after = run(state_of(plug(cb.k, mk_unit()), c1, cb.state.heap), 1000);
    REQUIRE(after.kind == Outcome::Value);
    CHECK(cell_is(after.state.heap, Loc{0, 0}, mk_int(1)));
    CHECK(cell_is(after.state.heap, Loc{0, 1}, mk_bool(false)));
}

TEST_CASE("run: calling the error name is an error stop") {
    auto r = run(state_of(mk_app(mk_fname(err_name()), mk_unit())), 10);
    CHECK(r.kind == Outcome::ErrStuck);
    CHECK(r.head == err_name());
}

TEST_CASE("observations") {
    CHECK(observes(mk_unit(), Heap{}, Observation::Ter));
    CHECK_FALSE(observes(mk_unit(), Heap{}, Observation::Err));
    TermP err = mk_app(mk_fname(err_name()), mk_unit());
    CHECK(observes(err, Heap{}, Observation::Err));
    CHECK_FALSE(observes(err, Heap{}, Observation::Ter));
    CHECK(observes(parse_term("let x = ref 0 in !x"), Heap{}, Observation::Ter));
    CHECK_FALSE(observes(mk_omega_term(t_unit()), Heap{}, Observation::Ter, 500));
}
