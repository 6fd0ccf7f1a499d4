#include "reasons/reason.hpp"

#include <algorithm>
#include <sstream>

#include "reasons/error.hpp"
#include "rewrite.hpp"

namespace reasons {

Classifier Classifier::from_obdd(const Obdd& d) {
    Classifier c;
    c.positive_ = std::make_shared<const DecisionDnnf>(d.to_decision_dnnf());
    c.negative_ = std::make_shared<const DecisionDnnf>(d.negate().to_decision_dnnf());
    c.obdd_ = d;
    return c;
}

Classifier Classifier::from_circuits(DecisionDnnf positive, std::optional<DecisionDnnf> negative) {
    Classifier c;
    c.positive_ = std::make_shared<const DecisionDnnf>(std::move(positive));
    if (negative) c.negative_ = std::make_shared<const DecisionDnnf>(std::move(*negative));
    return c;
}

bool Classifier::decide(const Instance& a) const {
    if (obdd_) return obdd_->evaluate(a);
    return evaluate(positive_->circuit(), a);
}

const DecisionDnnf& Classifier::circuit_for(bool decision) const {
    if (decision) return *positive_;
    if (!negative_) {
        throw PreconditionError(
            "negative decision: a circuit for the negated classifier is required "
            "(supply one with --negated-classifier)");
    }
    return *negative_;
}

DecisionCase make_case(const Classifier& classifier, Instance instance) {
    if (classifier.circuit_for(true).circuit().max_var() > instance.size()) {
        throw InputError("instance does not assign every feature of the classifier");
    }
    DecisionCase c;
    c.classifier = &classifier;
    c.decision = classifier.decide(instance);
    c.circuit = &classifier.circuit_for(c.decision);
    if (c.circuit->circuit().max_var() > instance.size()) {
        throw InputError("instance does not assign every feature of the classifier");
    }
    if (!evaluate(c.circuit->circuit(), instance)) {
        throw PreconditionError("the circuit for the decided function does not accept the instance");
    }
    c.instance = std::move(instance);
    return c;
}

ReasonCircuit::ReasonCircuit(Nnf circuit, Instance instance)
    : circuit_(std::move(circuit)), instance_(std::move(instance)) {
    for (NodeId id = 0; id < circuit_.size(); ++id) {
        const auto& n = circuit_.node(id);
        if (n.kind == GateKind::Literal && !instance_.satisfies(n.literal)) {
            throw PreconditionError("reason circuit literal " + std::to_string(n.literal.dimacs()) +
                                    " disagrees with the instance");
        }
    }
    if (!evaluate(circuit_, instance_)) {
        throw PreconditionError("reason circuit is not satisfied by its instance");
    }
}

namespace {

// Copies the Decision-DNNF, adding the agreement input mu & nu to every
// decision gate. `leaf` maps each literal leaf to a node of the new circuit.
template <class LeafMap>
Nnf with_consensus(const DecisionDnnf& d, NnfBuilder& b, LeafMap leaf) {
    const Nnf& c = d.circuit();
    std::vector<NodeId> map(c.size());
    std::vector<NodeId> kids;
    for (NodeId id = 0; id < c.size(); ++id) {
        const auto& n = c.node(id);
        switch (n.kind) {
            case GateKind::False:
            case GateKind::True: map[id] = b.constant(n.kind == GateKind::True); break;
            case GateKind::Literal: map[id] = leaf(n.literal); break;
            case GateKind::And:
                kids.clear();
                for (auto k : c.children(id)) kids.push_back(map[k]);
                map[id] = b.conjunction(kids);
                break;
            case GateKind::Or: {
                const auto br = d.branches(id);
                kids.clear();
                for (NodeId branch : {br.high, br.low}) {
                    for (auto k : c.children(branch)) {
                        const auto& m = c.node(k);
                        if (m.kind == GateKind::Literal && m.literal.var() == n.decision) continue;
                        kids.push_back(map[k]);
                    }
                }
                const NodeId agreement = b.conjunction(kids);
                map[id] = b.disjunction({map[br.high], map[br.low], agreement});
                break;
            }
        }
    }
    return std::move(b).build(map[c.root()]);
}

}  // namespace

Nnf consensus(const DecisionDnnf& d) {
    NnfBuilder b;
    return with_consensus(d, b, [&](Literal l) { return b.literal(l); });
}

ReasonCircuit filter(const Nnf& c, const Instance& instance) {
    if (c.max_var() > instance.size()) throw InputError("instance does not cover the circuit's variables");
    if (!evaluate(c, instance)) {
        throw PreconditionError("filtering requires an instance that satisfies the circuit");
    }
    NnfBuilder b;
    std::vector<NodeId> map(c.size());
    std::vector<NodeId> kids;
    for (NodeId id = 0; id < c.size(); ++id) {
        const auto& n = c.node(id);
        switch (n.kind) {
            case GateKind::False:
            case GateKind::True: map[id] = b.constant(n.kind == GateKind::True); break;
            case GateKind::Literal:
                map[id] = instance.satisfies(n.literal) ? b.literal(n.literal) : b.constant(false);
                break;
            case GateKind::And:
            case GateKind::Or:
                kids.clear();
                for (auto k : c.children(id)) kids.push_back(map[k]);
                map[id] = n.kind == GateKind::And ? b.conjunction(kids) : b.disjunction(kids);
                break;
        }
    }
    return ReasonCircuit(std::move(b).build(map[c.root()]), instance);
}

Nnf simplify(const Nnf& c) {
    return detail::propagate(
        c, [](Literal) { return detail::LeafAction::Keep; }, [](NodeId) {});
}

ReasonCircuit simplify(const ReasonCircuit& r) { return ReasonCircuit(simplify(r.circuit()), r.instance()); }

namespace {

Nnf consensus_filter(const DecisionCase& dc) {
    NnfBuilder b;
    const Instance& a = dc.instance;
    return with_consensus(*dc.circuit, b, [&](Literal l) {
        return a.satisfies(l) ? b.literal(l) : b.constant(false);
    });
}

}  // namespace

ReasonCircuit build_raw_reason(const DecisionCase& dc) {
    return ReasonCircuit(consensus_filter(dc), dc.instance);
}

ReasonCircuit build_reason(const DecisionCase& dc, ReasonBuildStats* stats) {
    Nnf raw = consensus_filter(dc);
    Nnf simple = simplify(raw);
    if (stats) {
        stats->input_size = dc.circuit->size();
        stats->raw_size = raw.size();
        stats->simplified_size = simple.size();
    }
    return ReasonCircuit(std::move(simple), dc.instance);
}

ReasonStages build_reason_stages(const DecisionCase& dc) {
    Nnf cons = consensus(*dc.circuit);
    ReasonCircuit filtered = filter(cons, dc.instance);
    ReasonCircuit simplified = simplify(filtered);
    return ReasonStages{std::move(cons), std::move(filtered), std::move(simplified)};
}

std::string print_reason(const ReasonCircuit& r) {
    std::string body = print_nnf(r.circuit(), "rnnf");
    const auto nl = body.find('\n');
    std::string instance_line = "c instance";
    for (Var v = 1; v <= r.instance().size(); ++v) {
        instance_line += ' ' + std::to_string(r.instance().literal(v).dimacs());
    }
    return body.substr(0, nl + 1) + instance_line + '\n' + body.substr(nl + 1);
}

ReasonCircuit parse_reason(std::string_view text) {
    std::optional<Instance> instance;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        std::istringstream in{std::string(line)};
        std::string c, tag;
        if (!(in >> c >> tag) || c != "c" || tag != "instance") continue;
        std::vector<Literal> lits;
        for (std::int64_t lit; in >> lit;) lits.push_back(Literal::from_dimacs(lit));
        if (!in.eof()) throw InputError("malformed instance line in reason circuit");
        const Term t = Term::from(std::move(lits));
        instance = Instance::from_term(t.size(), t);
        break;
    }
    if (!instance) throw InputError("reason circuit has no 'c instance' line");
    Nnf c = parse_nnf_unvalidated(text, VarMap{}, "rnnf");
    if (c.max_var() > instance->size()) throw InputError("reason circuit mentions a variable outside its instance");
    return ReasonCircuit(std::move(c), *instance);
}

}  // namespace reasons
