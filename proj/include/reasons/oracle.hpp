#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "reasons/formula.hpp"
#include "reasons/literal.hpp"
#include "reasons/nnf.hpp"

namespace reasons {

// Exhaustive table of a Boolean function over variables 1..n. Row index bit
// (v-1) holds the value of variable v, matching Instance::from_bits.
class TruthTable {
public:
    static constexpr std::size_t kMaxVars = 16;

    // Throws InputError when n exceeds kMaxVars.
    TruthTable(std::size_t num_vars, const std::function<bool(const Instance&)>& f);
    // `num_vars` must cover every variable of `f`.
    static TruthTable of(const Formula& f, std::size_t num_vars);
    static TruthTable of(const Nnf& c, std::size_t num_vars);

    std::size_t num_vars() const { return num_vars_; }
    std::uint64_t rows() const { return std::uint64_t{1} << num_vars_; }
    bool at(std::uint64_t row) const { return bits_[row]; }
    bool value(const Instance& a) const { return bits_[a.bits()]; }
    TruthTable negated() const;
    bool operator==(const TruthTable&) const = default;

private:
    TruthTable() = default;
    std::size_t num_vars_ = 0;
    std::vector<bool> bits_;
};

// Every prime implicant, canonical order. Ternary-cube table: a cube is an
// implicant iff both of its halves on some free variable are.
std::vector<Term> all_prime_implicants(const TruthTable& f);
// Independent method: merge adjacent cubes starting from the minterms until
// no merge applies; cubes never merged are prime.
std::vector<Term> prime_implicants_by_consensus(const TruthTable& f);

// Prime implicants of the decided function that hold in `a`.
std::vector<Term> oracle_sufficient_reasons(const TruthTable& f, const Instance& a);
Formula oracle_complete_reason(const TruthTable& f, const Instance& a);
// Intersection of the sufficient reasons.
Term oracle_necessary_property(const TruthTable& f, const Instance& a);

// Some instance that differs from `a` only on protected features gets a
// different decision.
bool oracle_decision_bias(const TruthTable& f, const Instance& a, const FeatureSpace& space);
bool oracle_classifier_bias(const TruthTable& f, const FeatureSpace& space);

}  // namespace reasons
