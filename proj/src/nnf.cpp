#include "reasons/nnf.hpp"

#include <algorithm>
#include <functional>

#include "reasons/error.hpp"

namespace reasons {

Var Nnf::max_var() const {
    Var out = 0;
    for (const auto& n : nodes_) {
        if (n.kind == GateKind::Literal) out = std::max(out, n.literal.var());
        out = std::max(out, n.decision);
    }
    return out;
}

bool Nnf::operator==(const Nnf& other) const {
    if (root_ != other.root_ || nodes_.size() != other.nodes_.size() || edges_ != other.edges_) {
        return false;
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& a = nodes_[i];
        const auto& b = other.nodes_[i];
        if (a.kind != b.kind || a.literal != b.literal || a.decision != b.decision ||
            a.child_begin != b.child_begin || a.child_count != b.child_count) {
            return false;
        }
    }
    return true;
}

NodeId NnfBuilder::add(NnfNode node, std::span<const NodeId> children) {
    const auto id = static_cast<NodeId>(nodes_.size());
    for (auto c : children) {
        if (c >= id) throw InputError("gate input refers to a node that is not yet defined");
    }
    node.child_begin = static_cast<std::uint32_t>(edges_.size());
    node.child_count = static_cast<std::uint32_t>(children.size());
    edges_.insert(edges_.end(), children.begin(), children.end());
    nodes_.push_back(node);
    return id;
}

NodeId NnfBuilder::constant(bool value) {
    auto& slot = constants_[value ? 1 : 0];
    if (slot == UINT32_MAX) {
        slot = add(NnfNode{value ? GateKind::True : GateKind::False}, {});
    }
    return slot;
}

NodeId NnfBuilder::literal(Literal l) {
    if (auto it = literals_.find(l.code()); it != literals_.end()) return it->second;
    NnfNode n{GateKind::Literal};
    n.literal = l;
    const NodeId id = add(n, {});
    literals_.emplace(l.code(), id);
    return id;
}

NodeId NnfBuilder::conjunction(std::span<const NodeId> children) {
    return add(NnfNode{GateKind::And}, children);
}

NodeId NnfBuilder::disjunction(std::span<const NodeId> children, Var decision) {
    NnfNode n{GateKind::Or};
    n.decision = decision;
    return add(n, children);
}

Nnf NnfBuilder::build(NodeId root) && {
    if (root >= nodes_.size()) throw InputError("circuit root is undefined");
    std::vector<char> live(root + 1, 0);
    live[root] = 1;
    for (NodeId id = root + 1; id-- > 0;) {
        if (!live[id]) continue;
        for (auto c : children(id)) live[c] = 1;
    }
    std::vector<NodeId> renumber(root + 1, UINT32_MAX);
    Nnf out;
    for (NodeId id = 0; id <= root; ++id) {
        if (!live[id]) continue;
        NnfNode n = nodes_[id];
        const auto kids = children(id);
        n.child_begin = static_cast<std::uint32_t>(out.edges_.size());
        for (auto c : kids) out.edges_.push_back(renumber[c]);
        renumber[id] = static_cast<NodeId>(out.nodes_.size());
        out.nodes_.push_back(n);
    }
    out.root_ = renumber[root];
    return out;
}

Nnf NnfBuilder::build_unpruned(NodeId root) && {
    if (root >= nodes_.size()) throw InputError("circuit root is undefined");
    Nnf out;
    out.nodes_ = std::move(nodes_);
    out.edges_ = std::move(edges_);
    out.root_ = root;
    return out;
}

bool evaluate(const Nnf& c, const Instance& a) {
    std::vector<char> value(c.size());
    for (NodeId id = 0; id < c.size(); ++id) {
        const auto& n = c.node(id);
        switch (n.kind) {
            case GateKind::False: value[id] = 0; break;
            case GateKind::True: value[id] = 1; break;
            case GateKind::Literal: value[id] = a.satisfies(n.literal); break;
            case GateKind::And: {
                char v = 1;
                for (auto k : c.children(id)) v &= value[k];
                value[id] = v;
                break;
            }
            case GateKind::Or: {
                char v = 0;
                for (auto k : c.children(id)) v |= value[k];
                value[id] = v;
                break;
            }
        }
    }
    return c.size() > 0 && value[c.root()];
}

std::vector<Var> circuit_vars(const Nnf& c) {
    std::vector<Var> out;
    for (NodeId id = 0; id < c.size(); ++id) {
        if (c.node(id).kind == GateKind::Literal) out.push_back(c.node(id).literal.var());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string to_expression(const Nnf& c, const FeatureSpace& space) {
    std::function<std::string(NodeId)> show = [&](NodeId id) -> std::string {
        const auto& n = c.node(id);
        switch (n.kind) {
            case GateKind::False: return "0";
            case GateKind::True: return "1";
            case GateKind::Literal: return to_string(n.literal, space);
            case GateKind::And:
            case GateKind::Or: {
                std::string s = n.kind == GateKind::And ? "and(" : "or(";
                bool first = true;
                for (auto k : c.children(id)) {
                    if (!first) s += ", ";
                    first = false;
                    s += show(k);
                }
                return s + ")";
            }
        }
        return {};
    };
    return c.size() == 0 ? std::string("0") : show(c.root());
}

}  // namespace reasons
