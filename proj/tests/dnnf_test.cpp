#include <doctest.h>

#include "reasons/dnnf.hpp"
#include "reasons/error.hpp"
#include "support.hpp"

using namespace testing;

namespace {

std::size_t count_kind(const Nnf& c, GateKind k) {
    std::size_t n = 0;
    for (NodeId id = 0; id < c.size(); ++id) n += c.node(id).kind == k;
    return n;
}

}  // namespace

TEST_CASE("smallest circuit through a varmap") {
    FeatureSpace s;
    const VarMap vm = parse_varmap("2 G\n", s);
    const DecisionDnnf d = parse_nnf("nnf 1 0 1\nL 2\n", vm);
    REQUIRE(d.size() == 1);
    CHECK(d.circuit().node(0).kind == GateKind::Literal);
    CHECK(to_expression(d.circuit(), s) == "G");
}

TEST_CASE("single decision with constant branches") {
    FeatureSpace s;
    s.add("X");
    const char* text =
        "nnf 7 6 1\n"
        "L 1\n"
        "A 0\n"
        "A 2 0 1\n"
        "L -1\n"
        "O 0 0\n"
        "A 2 3 4\n"
        "O 1 2 2 5\n";
    const DecisionDnnf d = parse_nnf(text, VarMap{});
    CHECK(evaluate(d.circuit(), Instance({true})));
    CHECK_FALSE(evaluate(d.circuit(), Instance({false})));
}

TEST_CASE("bare literal and constant-0 branches are normalized") {
    // O 1 2 over the literal X and constant 0: X | 0 read as (X & 1) | (~X & 0).
    const DecisionDnnf d = parse_nnf("nnf 3 2 1\nL 1\nO 0 0\nO 1 2 0 1\n", VarMap{});
    CHECK_FALSE(validate(d.circuit()).has_value());
    CHECK(evaluate(d.circuit(), Instance({true})));
    CHECK_FALSE(evaluate(d.circuit(), Instance({false})));
}

TEST_CASE("decomposability violation") {
    const char* text =
        "nnf 3 2 2\n"
        "L 1\n"
        "L -1\n"
        "A 2 0 1\n";
    CHECK_THROWS_AS(parse_nnf(text, VarMap{}), InputError);
    const Nnf raw = parse_nnf_unvalidated(text, VarMap{});
    const auto v = validate(raw);
    REQUIRE(v.has_value());
    CHECK(v->kind == Violation::Kind::Decomposability);
    CHECK(v->node == 2);
}

TEST_CASE("ternary or-gate violates decision form") {
    const char* text =
        "nnf 4 3 3\n"
        "L 1\n"
        "L 2\n"
        "L 3\n"
        "O 1 3 0 1 2\n";
    const auto v = validate(parse_nnf_unvalidated(text, VarMap{}));
    REQUIRE(v.has_value());
    CHECK(v->kind == Violation::Kind::DecisionForm);
    CHECK(v->node == 3);
    CHECK_FALSE(describe(*v).empty());
}

TEST_CASE("malformed files") {
    CHECK_THROWS_AS(parse_nnf("", VarMap{}), InputError);
    CHECK_THROWS_AS(parse_nnf("nnf 2 1 1\nL 1\n", VarMap{}), InputError);       // too few nodes
    CHECK_THROWS_AS(parse_nnf("nnf 1 0 1\nL 2\n", VarMap{}), InputError);       // variable beyond n
    CHECK_THROWS_AS(parse_nnf("nnf 2 1 1\nA 1 1\nL 1\n", VarMap{}), InputError);  // forward reference
    CHECK_THROWS_AS(parse_nnf("nnf 1 0 1\nX 1\n", VarMap{}), InputError);
    CHECK_THROWS_AS(parse_nnf("nnf 2 5 1\nL 1\nA 1 0\n", VarMap{}), InputError);  // edge count
    FeatureSpace s;
    const VarMap vm = parse_varmap("2 G\n", s);
    CHECK_THROWS_AS(parse_nnf("nnf 1 0 1\nL 3\n", vm), InputError);  // unmapped variable
}

TEST_CASE("majority circuit: four decisions, consensus adds four and-gates") {
    const Model m = model("(A & B) | (A & C) | (B & C)");
    const Obdd d = Obdd::compile(m.formula, variable_order(m.space));
    CHECK(d.node_count() == 4);
    const DecisionDnnf c = d.to_decision_dnnf();
    CHECK_FALSE(validate(c.circuit()).has_value());
    const Nnf cons = consensus(c);
    CHECK(count_kind(cons, GateKind::And) == count_kind(c.circuit(), GateKind::And) + 4);
    CHECK(count_kind(cons, GateKind::Or) == 4);
    const Instance a = m.instance("~A,B,C");
    CHECK(evaluate(c.circuit(), a));
    const ReasonCircuit r = filter(cons, a);
    const auto pis = all_prime_implicants(TruthTable::of(r.circuit(), 3));
    CHECK(names(pis, m.space) == std::vector<std::string>{"B,C"});
}

TEST_CASE("property: print and parse round trip") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i) {
        const Formula f = random_formula(rng, 6, 4);
        const DecisionDnnf d = Obdd::compile(f, shuffled_order(rng, 6)).to_decision_dnnf();
        const std::string text = print_nnf(d);
        const DecisionDnnf back = parse_nnf(text, VarMap{});
        CHECK(back.circuit() == d.circuit());
        CHECK(print_nnf(back) == text);
    }
}

TEST_CASE("varmap round trip") {
    FeatureSpace s = parse_feature_space("E\nF\nG\n");
    const std::string text = print_varmap(s);
    FeatureSpace t;
    const VarMap vm = parse_varmap(text, t);
    CHECK(t.size() == 3);
    CHECK(vm.lookup(2) == t.find("F"));
    CHECK_THROWS_AS(parse_varmap("x G\n", t), InputError);
}
