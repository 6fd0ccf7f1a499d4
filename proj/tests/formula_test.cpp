#include <doctest.h>

#include "reasons/error.hpp"
#include "support.hpp"

using namespace testing;

TEST_CASE("formula parsing declares features in first-mention order") {
    FeatureSpace s;
    const Formula f = parse_formula(kDelta3, s);
    REQUIRE(s.size() == 4);
    CHECK(s.name(1) == "G");
    CHECK(s.name(2) == "E");
    CHECK(s.name(3) == "M");
    CHECK(s.name(4) == "R");
    CHECK(f.kind() == Formula::Kind::Or);
    CHECK(f.children().size() == 3);
}

TEST_CASE("delta1 parses to a conjunction with a ternary disjunction") {
    FeatureSpace s;
    const Formula f = parse_formula(kDelta1, s);
    REQUIRE(f.kind() == Formula::Kind::And);
    REQUIRE(f.children().size() == 2);
    CHECK(f.children()[0].kind() == Formula::Kind::Var);
    CHECK(f.children()[1].kind() == Formula::Kind::Or);
    CHECK(f.children()[1].children().size() == 3);
    CHECK(print_formula(f, s) == "E & (~F | G | W)");
}

TEST_CASE("constants and precedence") {
    FeatureSpace s;
    CHECK(parse_formula("1", s).kind() == Formula::Kind::True);
    CHECK(parse_formula("0", s).kind() == Formula::Kind::False);
    const Formula f = parse_formula("a | b & ~c", s);
    CHECK(f.kind() == Formula::Kind::Or);
    CHECK(f.children()[1].kind() == Formula::Kind::And);
    CHECK(parse_formula("~~a", s).kind() == Formula::Kind::Not);
}

TEST_CASE("syntax errors carry line and column") {
    FeatureSpace s;
    try {
        parse_formula("E &\n  (F | )", s);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 8);
    }
    CHECK_THROWS_AS(parse_formula("E & $", s), ParseError);
    CHECK_THROWS_AS(parse_formula("(E", s), ParseError);
    CHECK_THROWS_AS(parse_formula("E F", s), ParseError);
    CHECK_THROWS_AS(parse_formula("", s), ParseError);
    CHECK_THROWS_AS(parse_formula("2", s), ParseError);
}

TEST_CASE("instances") {
    const Model m = model(kDelta1);
    const Instance greg = m.instance("E,~F,~G,W");
    CHECK(to_string(greg, m.space) == "E,~F,~G,W");
    CHECK(m.instance(" W , ~G,~F,E ") == greg);

    try {
        m.instance("E,~F");
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("G, W") != std::string::npos);
    }
    CHECK_THROWS_AS(m.instance("E,E,F,G,W"), InputError);
    CHECK_THROWS_AS(m.instance("E,~E,F,G,W"), InputError);
    CHECK_THROWS_AS(m.instance("E,F,G,W,Z"), InputError);
    CHECK_THROWS_AS(m.instance("E,,F,G,W"), InputError);
}

TEST_CASE("evaluate") {
    const Model m = model(kDelta1);
    CHECK(evaluate(m.formula, m.instance("E,F,G,~W")));
    CHECK_FALSE(evaluate(m.formula, m.instance("~E,~F,~G,W")));
    CHECK(evaluate(Formula::constant(true), m.instance("~E,~F,~G,W")));
}

TEST_CASE("condition") {
    Model m = model(kDelta1);
    const Formula on_e = condition(m.formula, m.term("E"));
    const Formula expected = parse_formula("~F | G | W", m.space);
    for (std::uint64_t row = 0; row < 16; ++row) {
        const Instance a = Instance::from_bits(4, row);
        CHECK(evaluate(on_e, a) == evaluate(expected, a));
    }
    CHECK(condition(m.formula, m.term("~E")).kind() == Formula::Kind::False);
    CHECK(condition(m.formula, Term{}) == m.formula);
}

TEST_CASE("terms") {
    const Model m = model(kDelta1);
    const Term ef = m.term("E,~F");
    const Term efw = m.term("W,E,~F");
    CHECK(subsumes(ef, efw));
    CHECK_FALSE(subsumes(efw, ef));
    CHECK(subsumes(Term{}, ef));
    CHECK(to_string(negate_term(ef), m.space) == "~E,F");
    CHECK(negate_term(negate_term(ef)) == ef);
    CHECK_THROWS_AS(m.term("E,~E"), InputError);
    CHECK_FALSE(Term::conjoin(ef, m.term("F")).has_value());
    CHECK(Term::conjoin(ef, m.term("W")).value() == efw);

    std::vector<Term> ts{efw, m.term("E,W"), ef, m.term("G")};
    sort_canonical(ts);
    CHECK(names(ts, m.space) == std::vector<std::string>{"G", "E,~F", "E,W", "E,~F,W"});
}

TEST_CASE("feature space files") {
    const FeatureSpace s = parse_feature_space("# applicants\nG\nE\nM *\nR*\n\n");
    REQUIRE(s.size() == 4);
    CHECK(s.protected_vars() == std::vector<Var>{3, 4});
    CHECK(s.unprotected_vars() == std::vector<Var>{1, 2});
    CHECK(parse_feature_space(print_feature_space(s)).protected_vars() == s.protected_vars());
    CHECK_THROWS_AS(parse_feature_space("A\nA\n"), InputError);
    CHECK_THROWS_AS(parse_feature_space("1x\n"), InputError);
}

TEST_CASE("property: print/parse round trip and conditioning semantics") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        FeatureSpace s = numbered_space(6);
        const Formula f = random_formula(rng, 6, 4);
        const Formula g = parse_formula(print_formula(f, s), s);
        CHECK(g == f);
        CHECK(s.size() == 6);

        const Instance a = random_instance(rng, 6);
        std::vector<Literal> lits;
        for (Var v = 1; v <= 6; ++v) {
            if (rng() % 3 == 0) lits.emplace_back(v, rng() % 2 == 0);
        }
        const Term t = Term::from(lits);
        std::vector<bool> values(6);
        for (Var v = 1; v <= 6; ++v) values[v - 1] = a.value(v);
        for (Literal l : t) values[l.var() - 1] = l.positive();
        CHECK(evaluate(condition(f, t), a) == evaluate(f, Instance(values)));
    }
}
