#include "doctest.h"
#include "helpers.hpp"

using namespace hosc;
using testing::corpus;

TEST_CASE("decomposition: mixed pair") {
    TypeP sigma = parse_type("(Int -> Bool) * (Int * (Unit -> Int))");
    TermP v = parse_term("<fun(x:Int) x <> 1, <2, fun(x:Unit) 3>>");
    NameAlloc fresh;
    auto split = aval_decompose(v, sigma, fresh);
    Name f = fun_name(0, t_arrow(t_int(), t_bool()));
    Name g = fun_name(1, t_arrow(t_unit(), t_int()));
    CHECK(term_equal(split.pattern, mk_pair(mk_fname(f), mk_pair(mk_int(2), mk_fname(g)))));
    REQUIRE(split.gamma.size() == 2);
    CHECK(split.gamma[0].first == f);
    CHECK(term_equal(split.gamma[0].second, v->a));
    CHECK(split.gamma[1].first == g);
    CHECK(term_equal(split.gamma[1].second, v->b->b));
    CHECK(show_aval(split.pattern) == "(f0@Int->Bool,(2,f1@Unit->Int))");
}

TEST_CASE("decomposition: base values and the cwl pair") {
    NameAlloc fresh;
    auto five = aval_decompose(mk_int(5), t_int(), fresh);
    CHECK(term_equal(five.pattern, mk_int(5)));
    CHECK(five.gamma.empty());

    auto f = corpus("cwl1");
    MachineState s;
    s.term = f.term;
    s.cont = cont_name(0, f.type);
    auto r = run(s, 1000);
    REQUIRE(r.kind == Outcome::Value);
    NameAlloc fresh2;
    auto split = aval_decompose(r.state.term, f.type, fresh2);
    CHECK(show_aval(split.pattern) == "(f0@(Unit->Unit)->Unit,f1@Unit->Int)");
    REQUIRE(split.gamma.size() == 2);
    CHECK(term_equal(split.gamma[0].second, r.state.term->a));
    CHECK(term_equal(split.gamma[1].second, r.state.term->b));
}

TEST_CASE("decomposition: rejects non-boundary types and mismatches") {
    NameAlloc fresh;
    CHECK_THROWS_AS(aval_decompose(mk_loc(Loc{0, 0}), t_ref(t_int()), fresh), TypeError);
    CHECK_THROWS_AS(aval_decompose(mk_unit(), t_int(), fresh), TypeError);
}

TEST_CASE("enumeration of abstract values") {
    NameAlloc fresh;
    auto ints = int_range(0, 1);
    auto unit = enumerate_avals(t_unit(), ints, fresh);
    REQUIRE(unit.size() == 1);
    CHECK(term_equal(unit[0], mk_unit()));

    auto bools = enumerate_avals(t_bool(), ints, fresh);
    REQUIRE(bools.size() == 2);
    CHECK(term_equal(bools[0], mk_bool(true)));
    CHECK(term_equal(bools[1], mk_bool(false)));

    NameAlloc at7;
    at7.next_fun = 7;
    auto arrows = enumerate_avals(t_arrow(t_unit(), t_unit()), ints, at7);
    REQUIRE(arrows.size() == 1);
    CHECK(show_aval(arrows[0]) == "f7@Unit->Unit");
    CHECK(at7.next_fun == 8);

    TypeP mixed = parse_type("Int * (Bool * (Unit -> Unit))");
    NameAlloc fresh3;
    auto all = enumerate_avals(mixed, int_range(0, 2), fresh3);
    CHECK(all.size() == 6);
    CHECK(count_avals(mixed, 3) == 6);
    for (const auto& a : all) {
        CHECK(is_aval(a));
        CHECK(aval_linear(a));
        CHECK(aval_type(a) == mixed);
    }
}

TEST_CASE("abstract values print and parse") {
    for (const char* text : {"()", "tt", "ff", "7", "-3", "f2@Unit->Int", "(f0@Unit->Unit,(1,tt))"}) {
        CAPTURE(text);
        AVal a = parse_aval(text);
        CHECK(term_equal(parse_aval(show_aval(a)), a));
    }
    Name n = parse_name("c3@Int");
    CHECK(n.is_cont());
    CHECK(n.id == 3);
    CHECK(n.type == t_int());
    CHECK(parse_name("errn").is_err());
}

TEST_CASE("Gamma-assignments") {
    NameAlloc fresh;
    auto ints = int_range(0, 1);
    auto rho = canonical_assignment({{"f", t_arrow(t_unit(), t_unit())}}, ints, fresh);
    REQUIRE(rho.size() == 1);
    CHECK(rho[0].first == "f");
    CHECK(show_aval(rho[0].second) == "f0@Unit->Unit");

    NameAlloc fresh2;
    CHECK(canonical_assignment({}, ints, fresh2).empty());
    auto empty_all = all_assignments({}, ints, fresh2);
    REQUIRE(empty_all.size() == 1);
    CHECK(empty_all[0].empty());

    NameAlloc fresh3;
    VarEnv gx{{"x", t_int()}};
    auto canon = canonical_assignment(gx, ints, fresh3);
    REQUIRE(canon.size() == 1);
    CHECK(term_equal(canon[0].second, mk_int(0)));
    NameAlloc fresh4;
    auto every = all_assignments(gx, ints, fresh4);
    REQUIRE(every.size() == 2);
    CHECK(term_equal(every[0][0].second, mk_int(0)));
    CHECK(term_equal(every[1][0].second, mk_int(1)));
}
