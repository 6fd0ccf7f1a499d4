#include <doctest.h>

#include "reasons/dnnf.hpp"
#include "reasons/error.hpp"
#include "support.hpp"

using namespace testing;

namespace {

const char* const kDelta1Obdd =
    "obdd 4 4\n"
    "n 2 4 1 0\n"
    "n 3 3 1 2\n"
    "n 4 2 3 1\n"
    "n 5 1 4 0\n"
    "root 5\n";

bool same_function(const Obdd& d, const Formula& f, std::size_t n) {
    for (std::uint64_t row = 0; row < (std::uint64_t{1} << n); ++row) {
        const Instance a = Instance::from_bits(n, row);
        if (d.evaluate(a) != evaluate(f, a)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("delta1 compiles to the hand-written diagram") {
    const Model m = model(kDelta1);
    const Obdd d = Obdd::compile(m.formula, variable_order(m.space));
    CHECK(d.serialize() == kDelta1Obdd);
    CHECK(d.node(d.root()).var == m.space.require("E"));
    CHECK(Obdd::parse(kDelta1Obdd) == d);
    CHECK_FALSE(d.check_structure().has_value());
}

TEST_CASE("constant formulas give sink-only diagrams") {
    FeatureSpace s;
    const Formula one = parse_formula("1", s);
    const Obdd d = Obdd::compile(one, {});
    CHECK(d.node_count() == 0);
    CHECK(d.root() == Obdd::kTrue);
    CHECK(d.serialize() == "obdd 0 0\nroot 1\n");
    CHECK(d.negate().root() == Obdd::kFalse);
    CHECK(Obdd::parse(d.serialize()) == d);
}

TEST_CASE("negation is a complement") {
    const Model m = model(kStudy);
    const Obdd d = Obdd::compile(m.formula, variable_order(m.space));
    const Obdd n = d.negate();
    for (std::uint64_t row = 0; row < 32; ++row) {
        const Instance a = Instance::from_bits(5, row);
        CHECK(n.evaluate(a) != d.evaluate(a));
    }
    CHECK(n.negate() == d);
    CHECK_FALSE(n == d);
    CHECK(Obdd::parse(n.serialize()) == n);
}

TEST_CASE("order problems") {
    Model m = model(kDelta1);
    const std::vector<Var> partial{1, 2, 3};
    CHECK_THROWS_AS(Obdd::compile(m.formula, partial), InputError);
    CHECK_THROWS_AS(variable_order(m.space, "E,F,G"), InputError);
    CHECK_THROWS_AS(variable_order(m.space, "E,F,G,W,W"), InputError);
    CHECK_THROWS_AS(variable_order(m.space, "E,F,G,Q"), InputError);
    CHECK(variable_order(m.space, "W,G,F,E") == std::vector<Var>{4, 3, 2, 1});
}

TEST_CASE("malformed diagrams are rejected") {
    CHECK_THROWS_AS(Obdd::parse("obdd 1 1\nn 2 1 1 1\nroot 2\n"), InputError);            // redundant test
    CHECK_THROWS_AS(Obdd::parse("obdd 2 2\nn 2 1 1 0\nn 3 2 2 0\nroot 3\n", std::vector<Var>{1, 2}), InputError);
    CHECK_THROWS_AS(Obdd::parse("obdd 1 2\nn 2 1 1 0\nn 3 1 2 0\nroot 3\n"), InputError);  // variable repeated on a path
    CHECK_THROWS_AS(Obdd::parse("obdd 1 2\nn 2 1 1 0\nn 3 1 1 0\nroot 3\n"), InputError);
    CHECK_THROWS_AS(Obdd::parse("obdd 1 1\nn 2 1 1 5\nroot 2\n"), InputError);
    CHECK_THROWS_AS(Obdd::parse("obdd 1 1\nn 2 1 1 0\n"), InputError);
    CHECK_THROWS_AS(Obdd::parse("bdd 1 1\nn 2 1 1 0\nroot 2\n"), InputError);
    CHECK_THROWS_AS(Obdd::parse("obdd 1 2\nn 2 1 1 0\nroot 2\n"), InputError);
}

TEST_CASE("property: canonical under equal orders") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const Formula f = random_formula(rng, 6, 4);
        const auto order = shuffled_order(rng, 6);
        const Obdd d = Obdd::compile(f, order);
        CHECK(same_function(d, f, 6));
        CHECK_FALSE(d.check_structure().has_value());
        // Double negation through the formula gives the same function and so
        // the same diagram.
        const Obdd e = Obdd::compile(Formula::negation(Formula::negation(f)), order);
        CHECK(e == d);
        CHECK(Obdd::compile(Formula::negation(f), order) == d.negate());
        CHECK(Obdd::parse(d.serialize(), order) == d);
    }
}

TEST_CASE("property: exported Decision-DNNF agrees with the diagram") {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 200; ++i) {
        const Formula f = random_formula(rng, 7, 4);
        const Obdd d = Obdd::compile(f, shuffled_order(rng, 7));
        for (const Obdd& g : {d, d.negate()}) {
            const DecisionDnnf c = g.to_decision_dnnf();
            CHECK_FALSE(validate(c.circuit()).has_value());
            for (std::uint64_t row = 0; row < 128; ++row) {
                const Instance a = Instance::from_bits(7, row);
                CHECK(evaluate(c.circuit(), a) == g.evaluate(a));
            }
        }
    }
}
