#include "doctest.h"
#include "helpers.hpp"

#include "generator.hpp"

using namespace hosc;
using testing::corpus;

TEST_CASE("parser: inequality sugar elaborates to a boolean lambda") {
    TermP m = parse_term("fun(x:Int) x <> 1");
    CHECK(m->tag == Tag::Lam);
    CHECK(infer_type({}, m) == t_arrow(t_int(), t_bool()));
}

TEST_CASE("parser: unit literal") {
    TermP m = parse_term("()");
    CHECK(m->tag == Tag::Unit);
    CHECK(infer_type({}, m) == t_unit());
}

TEST_CASE("parser: callback-with-lock term has two lets around a pair") {
    auto f = corpus("cwl1");
    auto let_body = [](const TermP& m) -> TermP {
        REQUIRE(m->tag == Tag::App);
        REQUIRE(m->a->tag == Tag::Lam);
        CHECK(m->b->tag == Tag::Ref);
        return m->a->a;
    };
    TermP inner = let_body(let_body(f.term));
    CHECK(inner->tag == Tag::Pair);
    CHECK(inner->a->tag == Tag::Lam);
    CHECK(inner->b->tag == Tag::Lam);
}

TEST_CASE("parser: syntax errors carry a position") {
    CHECK_THROWS_AS(parse_term("fun(x:Int"), SyntaxError);
    CHECK_THROWS_AS(parse_term("let x = in x"), SyntaxError);
    CHECK_THROWS_AS(parse_type("Unit ->"), SyntaxError);
}

TEST_CASE("typing: the callback-with-lock pair") {
    auto f = corpus("cwl1");
    CHECK(infer_type({}, f.term) == parse_type("((Unit -> Unit) -> Unit) * (Unit -> Int)"));
    CHECK(f.type == infer_type({}, f.term));
}

TEST_CASE("typing: callcc at a value body") {
    CHECK(infer_type({}, parse_term("callcc(x:Int. 5)")) == t_int());
}

TEST_CASE("typing: ill-typed terms are rejected") {
    CHECK_THROWS_AS(infer_type({}, parse_term("1 + tt")), TypeError);
    CHECK_THROWS_AS(infer_type({}, parse_term("if 1 then () else ()")), TypeError);
    CHECK_THROWS_AS(infer_type({}, parse_term("(fun(x:Int) x) ()")), TypeError);
}

TEST_CASE("typing: evaluation contexts") {
    CHECK(infer_context_type({}, parse_context("[]", t_int()), t_int()) == t_int());
    CHECK(infer_context_type({}, parse_context("if [] then 1 else 2", t_bool()), t_bool()) == t_int());
    VarEnv g{{"x", t_ref(t_int())}};
    TypeEnv env;
    env.gamma = g;
    CHECK(infer_context_type(env, parse_context("(fun(y:Unit) !x) []", t_unit(), g), t_unit()) == t_int());
}

TEST_CASE("fragments of types") {
    using S = std::set<Model>;
    CHECK(classify_type_fragment(t_ref(t_int())) == S{Model::HOSC, Model::GOSC, Model::HOS, Model::GOS});
    CHECK(classify_type_fragment(t_ref(t_arrow(t_unit(), t_unit()))) == S{Model::HOSC, Model::HOS});
    CHECK(classify_type_fragment(t_cont(t_int())) == S{Model::HOSC, Model::GOSC});
}

TEST_CASE("fragments of terms") {
    auto cwl = corpus("cwl1");
    auto esc = corpus("escape1");
    TypeEnv none;
    for (Model m : kAllModels) CHECK(term_in_fragment(none, cwl.term, m));
    TypeEnv env;
    env.gamma = esc.gamma;
    CHECK(term_in_fragment(env, esc.term, Model::HOSC));
    CHECK(term_in_fragment(env, esc.term, Model::GOSC));
    CHECK_FALSE(term_in_fragment(env, esc.term, Model::HOS));
    CHECK_FALSE(term_in_fragment(env, esc.term, Model::GOS));
}

TEST_CASE("cr-freeness") {
    auto cwl = corpus("cwl1");
    CHECK(check_cr_free({}, cwl.term, cwl.type));

    TermP with_loc = mk_deref(mk_loc(Loc{0, 0}));
    TypeEnv env;
    env.sigma[Loc{0, 0}] = t_int();
    CHECK_FALSE(check_cr_free(env, with_loc, t_int()));

    auto esc = corpus("escape1");
    TypeEnv genv;
    genv.gamma = esc.gamma;
    CHECK(check_cr_free(genv, esc.term, esc.type));

    CHECK_FALSE(check_cr_free({}, parse_term("ref 0"), t_ref(t_int())));
    TypeP uu = t_arrow(t_unit(), t_unit());
    CHECK(check_cr_free({}, parse_term("fun(x:Unit) callcc(k:Unit. throw () to k)"), uu));
}

TEST_CASE("printing round-trips through the parser") {
    for (const char* name : {"cwl1", "cwl2", "wbsc1", "wbsc2", "assign1", "assign2", "escape1", "escape2", "counter1",
                             "counter2", "callomega", "omega", "unit"}) {
        CAPTURE(name);
        auto f = corpus(name);
        std::string text = show_term(f.term);
        TermP again = parse_term(text, f.gamma);
        CHECK(show_term(again) == text);
        TypeEnv env;
        env.gamma = f.gamma;
        CHECK(infer_type(env, again) == f.type);
    }
    for (const auto& f : generate_corpus(7, 40)) {
        std::string text = show_term(f.term);
        CHECK(show_term(parse_term(text, f.gamma)) == text);
    }
}

TEST_CASE("term files declare their free identifiers") {
    auto f = corpus("assign1");
    REQUIRE(f.gamma.size() == 1);
    CHECK(f.gamma[0].first == "f");
    CHECK(f.gamma[0].second == t_arrow(t_unit(), t_unit()));
    CHECK(f.type == t_arrow(t_unit(), t_unit()));
}

TEST_CASE("model names") {
    Model m;
    CHECK(parse_model("gos", m));
    CHECK(m == Model::GOS);
    CHECK(parse_model("HoSc", m));
    CHECK(m == Model::HOSC);
    CHECK_FALSE(parse_model("ml", m));
    CHECK(model_name(Model::GOSC) == "GOSC");
}

TEST_CASE("generated terms are well-typed and cr-free") {
    for (const auto& f : generate_corpus(3, 60)) {
        TypeEnv env;
        env.gamma = f.gamma;
        CHECK(infer_type(env, f.term) == f.type);
        CHECK(check_cr_free(env, f.term, f.type));
    }
}
