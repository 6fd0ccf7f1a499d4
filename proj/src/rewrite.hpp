#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "reasons/error.hpp"
#include "reasons/nnf.hpp"

namespace reasons::detail {

// Records the polarity of every literal seen; throws on the first variable
// seen in both polarities.
class PolarityTracker {
public:
    void see(Literal l) {
        const Var v = l.var();
        if (v >= polarity_.size()) polarity_.resize(v + 1, 0);
        const std::int8_t p = l.positive() ? 1 : -1;
        if (polarity_[v] == -p) {
            throw PreconditionError("circuit is not monotone: variable " + std::to_string(v) +
                                    " occurs in both polarities");
        }
        polarity_[v] = p;
    }

private:
    std::vector<std::int8_t> polarity_;
};

// Leaf substitution result: keep the literal, or replace it by a constant.
enum class LeafAction { Keep, True, False };

// One bottom-up pass that substitutes literal leaves according to `leaf` and
// propagates constants (absorbing constants collapse a gate, neutral ones are
// dropped, single-input gates are bypassed, repeated inputs removed).
// `on_visit` is called once per input node.
template <class LeafFn, class VisitFn>
Nnf propagate(const Nnf& c, LeafFn leaf, VisitFn on_visit) {
    NnfBuilder b;
    std::vector<NodeId> map(c.size());
    std::vector<NodeId> kids;
    for (NodeId id = 0; id < c.size(); ++id) {
        on_visit(id);
        const auto& n = c.node(id);
        switch (n.kind) {
            case GateKind::False:
            case GateKind::True: map[id] = b.constant(n.kind == GateKind::True); break;
            case GateKind::Literal:
                switch (leaf(n.literal)) {
                    case LeafAction::Keep: map[id] = b.literal(n.literal); break;
                    case LeafAction::True: map[id] = b.constant(true); break;
                    case LeafAction::False: map[id] = b.constant(false); break;
                }
                break;
            case GateKind::And:
            case GateKind::Or: {
                const bool is_and = n.kind == GateKind::And;
                const GateKind absorbing = is_and ? GateKind::False : GateKind::True;
                const GateKind neutral = is_and ? GateKind::True : GateKind::False;
                kids.clear();
                bool absorbed = false;
                for (auto k : c.children(id)) {
                    const GateKind kind = b.node(map[k]).kind;
                    if (kind == absorbing) {
                        absorbed = true;
                        break;
                    }
                    if (kind != neutral) kids.push_back(map[k]);
                }
                if (absorbed) {
                    map[id] = b.constant(!is_and);
                    break;
                }
                std::sort(kids.begin(), kids.end());
                kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
                if (kids.empty()) {
                    map[id] = b.constant(is_and);
                } else if (kids.size() == 1) {
                    map[id] = kids.front();
                } else {
                    map[id] = is_and ? b.conjunction(kids) : b.disjunction(kids);
                }
                break;
            }
        }
    }
    const NodeId root = c.size() == 0 ? b.constant(false) : map[c.root()];
    return std::move(b).build(root);
}

}  // namespace reasons::detail
