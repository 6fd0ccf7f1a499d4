#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reasons/dnnf.hpp"
#include "reasons/formula.hpp"

namespace reasons {

// Reduced ordered BDD. Ids 0 and 1 are the sinks; decision nodes start at 2
// and are numbered in depth-first post-order from the root (high edge first),
// which makes equal functions under equal orders produce equal stores.
//
// Negation flips a flag and shares the node store, so it is O(1). Every
// accessor reports the effective function (sinks swapped when negated).
class Obdd {
public:
    static constexpr NodeId kFalse = 0;
    static constexpr NodeId kTrue = 1;

    struct Node {
        Var var = 0;
        NodeId high = 0;
        NodeId low = 0;
    };

    // `order` lists variables from root to sinks and must cover every
    // variable of `f`. Throws InputError otherwise.
    static Obdd compile(const Formula& f, std::span<const Var> order);

    // Text form: "obdd <numvars> <numnodes>", node lines "n <id> <var> <hi> <lo>",
    // final "root <id>". Children must be sinks or previously listed nodes.
    // Without an explicit order one is derived from the edges (ties broken
    // by variable index). Throws InputError on unordered or unreduced input.
    static Obdd parse(std::string_view text, std::span<const Var> order = {});
    std::string serialize() const;

    Obdd negate() const;
    bool evaluate(const Instance& a) const;
    DecisionDnnf to_decision_dnnf() const;

    NodeId root() const;
    // Decision node with effective sink ids; `id` must be >= 2.
    Node node(NodeId id) const;
    std::size_t node_count() const { return store_->size() - 2; }
    std::span<const Var> order() const { return order_; }
    std::size_t num_vars() const { return num_vars_; }

    // Ordering and reduction check; returns a description of the first
    // problem found.
    std::optional<std::string> check_structure() const;

    bool operator==(const Obdd& other) const;

private:
    NodeId effective(NodeId id) const { return id < 2 && complemented_ ? id ^ 1u : id; }

    std::shared_ptr<const std::vector<Node>> store_;
    NodeId root_ = kFalse;
    bool complemented_ = false;
    std::vector<Var> order_;
    std::size_t num_vars_ = 0;
};

// Declaration order 1..n of the space, optionally overridden by a
// comma-separated list of names that must be a permutation of the features.
std::vector<Var> variable_order(const FeatureSpace& space, std::string_view names = {});

}  // namespace reasons
