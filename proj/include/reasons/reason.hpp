#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "reasons/dnnf.hpp"
#include "reasons/nnf.hpp"
#include "reasons/obdd.hpp"

namespace reasons {

// A Boolean classifier held as Decision-DNNF circuits for its positive
// decisions and, when available, its negative decisions.
class Classifier {
public:
    // Both circuits are derived from the OBDD (negation is free there).
    static Classifier from_obdd(const Obdd& d);
    // `negative` must represent the negation of `positive`; it is required to
    // explain negative decisions since Decision-DNNF is not closed under
    // negation.
    static Classifier from_circuits(DecisionDnnf positive, std::optional<DecisionDnnf> negative = std::nullopt);

    bool decide(const Instance& a) const;
    bool has_circuit_for(bool decision) const { return decision ? true : negative_ != nullptr; }
    // Throws PreconditionError when the negative circuit is absent.
    const DecisionDnnf& circuit_for(bool decision) const;
    const std::optional<Obdd>& obdd() const { return obdd_; }

private:
    std::shared_ptr<const DecisionDnnf> positive_;
    std::shared_ptr<const DecisionDnnf> negative_;
    std::optional<Obdd> obdd_;
};

// A decision together with the circuit for the decided function, i.e. the
// classifier itself on positive decisions and its negation otherwise. The
// circuit is guaranteed to evaluate to 1 on the instance.
struct DecisionCase {
    const Classifier* classifier = nullptr;
    Instance instance;
    bool decision = false;
    const DecisionDnnf* circuit = nullptr;
};

// Throws PreconditionError when the required circuit is missing or does not
// accept the instance, InputError when the instance is too small.
DecisionCase make_case(const Classifier& classifier, Instance instance);

// Monotone NNF circuit whose prime implicants are the sufficient reasons of
// a decision on `instance`. Every literal agrees with the instance and the
// instance satisfies the circuit.
class ReasonCircuit {
public:
    // Verifies the invariants above; throws PreconditionError if violated.
    ReasonCircuit(Nnf circuit, Instance instance);

    const Nnf& circuit() const { return circuit_; }
    const Instance& instance() const { return instance_; }
    std::size_t size() const { return circuit_.size(); }

private:
    Nnf circuit_;
    Instance instance_;
};

// Adds the input mu & nu to every decision or-gate (X & mu) | (~X & nu).
// Preserves the models; the result is not decomposable.
Nnf consensus(const DecisionDnnf& c);

// Replaces every literal that disagrees with `instance` by constant 0.
// Throws PreconditionError unless the circuit accepts the instance.
ReasonCircuit filter(const Nnf& consensus_circuit, const Instance& instance);

// Constant propagation plus removal of repeated inputs; model-preserving.
// The result has no constant leaves unless it is a constant.
Nnf simplify(const Nnf& c);
ReasonCircuit simplify(const ReasonCircuit& r);

struct ReasonBuildStats {
    std::size_t input_size = 0;       // Decision-DNNF nodes
    std::size_t raw_size = 0;         // after consensus + filtering
    std::size_t simplified_size = 0;
};

// Consensus and filtering in a single pass over the Decision-DNNF (the
// consensus circuit is never materialized), followed by simplify().
ReasonCircuit build_reason(const DecisionCase& c, ReasonBuildStats* stats = nullptr);

// Same circuit without the final simplification.
ReasonCircuit build_raw_reason(const DecisionCase& c);

// Every intermediate stage, for inspection and debugging.
struct ReasonStages {
    Nnf consensus;
    ReasonCircuit filtered;
    ReasonCircuit simplified;
};
ReasonStages build_reason_stages(const DecisionCase& c);

// "rnnf" variant of the .nnf format with a "c instance <lits>" line.
std::string print_reason(const ReasonCircuit& r);
ReasonCircuit parse_reason(std::string_view text);

}  // namespace reasons
