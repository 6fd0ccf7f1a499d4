#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "reasons/literal.hpp"

namespace reasons {

using NodeId = std::uint32_t;

enum class GateKind : std::uint8_t { False, True, Literal, And, Or };

struct NnfNode {
    GateKind kind = GateKind::False;
    Literal literal{};       // GateKind::Literal only
    Var decision = 0;        // GateKind::Or only; 0 when the gate is not a decision
    std::uint32_t child_begin = 0;
    std::uint32_t child_count = 0;
};

// Flat DAG of NNF gates. Node ids are topologically ordered: every child id is
// smaller than its parent's id. Instances produced by NnfBuilder::build only
// hold nodes reachable from the root.
class Nnf {
public:
    Nnf() = default;

    std::size_t size() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    NodeId root() const { return root_; }
    const NnfNode& node(NodeId id) const { return nodes_[id]; }
    std::span<const NodeId> children(NodeId id) const {
        const auto& n = nodes_[id];
        return {edges_.data() + n.child_begin, n.child_count};
    }
    // Largest variable index mentioned by a literal or decision, 0 if none.
    Var max_var() const;

    bool operator==(const Nnf&) const;

private:
    friend class NnfBuilder;
    std::vector<NnfNode> nodes_;
    std::vector<NodeId> edges_;
    NodeId root_ = 0;
};

// Appends gates bottom-up. Constants and literal leaves are hash-consed; gates
// are not, so distinct gates with equal inputs stay distinct.
class NnfBuilder {
public:
    NodeId constant(bool value);
    NodeId literal(Literal l);
    NodeId conjunction(std::span<const NodeId> children);
    NodeId disjunction(std::span<const NodeId> children, Var decision = 0);
    NodeId conjunction(std::initializer_list<NodeId> children) {
        return conjunction(std::span<const NodeId>(children.begin(), children.size()));
    }
    NodeId disjunction(std::initializer_list<NodeId> children, Var decision = 0) {
        return disjunction(std::span<const NodeId>(children.begin(), children.size()), decision);
    }

    std::size_t size() const { return nodes_.size(); }
    const NnfNode& node(NodeId id) const { return nodes_[id]; }
    std::span<const NodeId> children(NodeId id) const {
        const auto& n = nodes_[id];
        return {edges_.data() + n.child_begin, n.child_count};
    }

    // Drops nodes unreachable from `root` and renumbers, preserving order.
    Nnf build(NodeId root) &&;
    // Keeps every node as appended (used by the .nnf reader to report
    // positions that match the input file).
    Nnf build_unpruned(NodeId root) &&;

private:
    NodeId add(NnfNode node, std::span<const NodeId> children);

    std::vector<NnfNode> nodes_;
    std::vector<NodeId> edges_;
    NodeId constants_[2] = {UINT32_MAX, UINT32_MAX};
    std::unordered_map<std::uint32_t, NodeId> literals_;
};

// One bottom-up pass with standard gate semantics.
bool evaluate(const Nnf& c, const Instance& a);

// Sorted, unique variables mentioned by literal leaves.
std::vector<Var> circuit_vars(const Nnf& c);

// Human-readable dump, e.g. "or(and(E, ~F), W)"; shared nodes are repeated.
std::string to_expression(const Nnf& c, const FeatureSpace& space);

}  // namespace reasons
