#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "reasons/literal.hpp"
#include "reasons/nnf.hpp"
#include "reasons/reason.hpp"

namespace reasons {

// Optional instrumentation: number of nodes processed by a query.
struct QueryStats {
    std::size_t visited = 0;
};

// Queries on monotone circuits (no variable in both polarities). Each is a
// single bottom-up pass and throws PreconditionError on a non-monotone input.
bool is_satisfiable(const Nnf& r, QueryStats* stats = nullptr);
// Satisfiability of r conditioned on `assumption`, without building r|assumption.
bool is_satisfiable(const Nnf& r, const Term& assumption, QueryStats* stats = nullptr);
bool is_valid(const Nnf& r, QueryStats* stats = nullptr);
Nnf mnegate(const Nnf& r, QueryStats* stats = nullptr);
Nnf mcondition(const Nnf& r, const Term& t, QueryStats* stats = nullptr);
Nnf mexists(const Nnf& r, std::span<const Var> vars, QueryStats* stats = nullptr);

// Prime implicants of the decided function that are properties of the
// instance, as an antichain in canonical order.
class SufficientReasonSet {
public:
    SufficientReasonSet() = default;
    explicit SufficientReasonSet(std::vector<Term> terms);

    std::span<const Term> terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }
    bool contains(const Term& t) const;

    bool operator==(const SufficientReasonSet&) const = default;

private:
    std::vector<Term> terms_;
};

// Enumerates the prime implicants of the reason circuit directly on the
// Decision-DNNF, memoized per node.
SufficientReasonSet sufficient_reasons(const DecisionCase& c, QueryStats* stats = nullptr);

// Drops every term subsumed by another one (and duplicates).
std::vector<Term> remove_subsumed(std::vector<Term> terms);

// Literals l of the instance with r|~l unsatisfiable.
Term necessary_property(const ReasonCircuit& r);
// The necessary property when r is equivalent to it, otherwise nullopt.
std::optional<Term> necessary_reason(const DecisionCase& c, const ReasonCircuit& r);

// True iff `t` is equivalent to r. Throws PreconditionError when t is not a
// property of r's instance.
bool holds_because(const ReasonCircuit& r, const Term& t);

// Flips `rho` in `a`, rebuilds the reason for the new instance and checks
// holds_because(·, tau). Throws PreconditionError unless rho and tau are
// disjoint properties of `a`.
bool sticks_even_if_because(const Classifier& classifier, const Instance& a, const Term& rho, const Term& tau);

// True iff every sufficient reason mentions a protected feature. Throws
// PreconditionError when no feature is protected.
bool decision_is_biased(const ReasonCircuit& r, const FeatureSpace& space);

struct Biased {
    Term witness;
    bool operator==(const Biased&) const = default;
};
struct Inconclusive {
    bool operator==(const Inconclusive&) const = default;
};
using ClassifierVerdict = std::variant<Biased, Inconclusive>;

struct BiasVerdict {
    bool decision_biased = false;
    ClassifierVerdict classifier_verdict = Inconclusive{};
};

// Biased(first reason in canonical order with a protected feature), else
// Inconclusive: a classifier can be biased without it showing in one decision.
ClassifierVerdict classifier_bias_witness(const SufficientReasonSet& reasons, const FeatureSpace& space);

BiasVerdict assess_bias(const ReasonCircuit& r, const SufficientReasonSet& reasons, const FeatureSpace& space);

// Searches instances beta |= t and gamma differing from beta only on the
// protected variables of t with different decisions. `budget` bounds the
// number of classifier evaluations. Throws PreconditionError when t has no
// protected variable.
std::optional<std::pair<Instance, Instance>> bias_witness_pair(const Classifier& classifier, const Term& t,
                                                               const FeatureSpace& space, std::size_t budget);

}  // namespace reasons
