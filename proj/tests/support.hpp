#pragma once

#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "reasons/formula.hpp"
#include "reasons/obdd.hpp"
#include "reasons/oracle.hpp"
#include "reasons/queries.hpp"
#include "reasons/reason.hpp"

namespace testing {

using namespace reasons;

inline const char* const kDelta1 = "E & (~F | G | W)";
inline const char* const kDelta2 = "E & (~F | G | W | R)";
inline const char* const kDelta3 = "(G & E) | (G & M) | (G & R)";
inline const char* const kStudy = "(E & ((F & (G | W)) | (~F & R))) | (G & R & W)";

// A DSL classifier compiled with the declaration order of its space.
struct Model {
    FeatureSpace space;
    Formula formula = Formula::constant(false);
    Classifier classifier;

    Term term(std::string_view text) const { return parse_term(text, space); }
    Instance instance(std::string_view text) const { return parse_instance(text, space); }
    TruthTable table() const { return TruthTable::of(formula, space.size()); }
};

// `features` pre-declares names (and protected markers) before parsing.
inline Model model(std::string_view dsl, std::string_view features = {}, std::string_view order = {}) {
    Model m;
    m.space = parse_feature_space(features);
    m.formula = parse_formula(dsl, m.space);
    m.classifier = Classifier::from_obdd(Obdd::compile(m.formula, variable_order(m.space, order)));
    return m;
}

inline FeatureSpace numbered_space(std::size_t n) {
    FeatureSpace s;
    for (std::size_t i = 1; i <= n; ++i) s.add("x" + std::to_string(i));
    return s;
}

inline std::vector<std::string> names(std::span<const Term> terms, const FeatureSpace& space) {
    std::vector<std::string> out;
    for (const auto& t : terms) out.push_back(to_string(t, space));
    return out;
}

inline std::vector<std::string> names(const SufficientReasonSet& r, const FeatureSpace& space) {
    return names(r.terms(), space);
}

// Random formula over variables 1..n with literals at the leaves and
// and/or gates of arity 2 or 3.
inline Formula random_formula(std::mt19937_64& rng, std::size_t n, int depth) {
    std::uniform_int_distribution<int> coin(0, 99);
    if (depth == 0 || coin(rng) < 15) {
        if (coin(rng) < 2) return Formula::constant(coin(rng) < 50);
        const Var v = static_cast<Var>(std::uniform_int_distribution<std::size_t>(1, n)(rng));
        return Formula::literal(Literal(v, coin(rng) < 50));
    }
    const std::size_t arity = coin(rng) < 70 ? 2 : 3;
    std::vector<Formula> kids;
    for (std::size_t i = 0; i < arity; ++i) kids.push_back(random_formula(rng, n, depth - 1));
    Formula g = coin(rng) < 50 ? Formula::conjunction(std::move(kids)) : Formula::disjunction(std::move(kids));
    return coin(rng) < 10 ? Formula::negation(g) : g;
}

inline std::vector<Var> shuffled_order(std::mt19937_64& rng, std::size_t n) {
    std::vector<Var> order;
    for (Var v = 1; v <= n; ++v) order.push_back(v);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

inline Instance random_instance(std::mt19937_64& rng, std::size_t n) {
    return Instance::from_bits(n, rng());
}

}  // namespace testing
