#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reasons/literal.hpp"

namespace reasons {

// Immutable propositional formula. Children are shared, so copies are cheap.
class Formula {
public:
    enum class Kind { False, True, Var, Not, And, Or };

    static Formula constant(bool value);
    static Formula variable(Var v);
    static Formula literal(Literal l);
    static Formula negation(Formula f);
    // N-ary gates are stored as given; no flattening or simplification.
    static Formula conjunction(std::vector<Formula> children);
    static Formula disjunction(std::vector<Formula> children);
    // Disjunction of terms; the empty set gives constant 0.
    static Formula dnf(const std::vector<Term>& terms);

    Kind kind() const;
    Var var() const;
    std::span<const Formula> children() const;
    bool is_constant() const { return kind() == Kind::False || kind() == Kind::True; }

    // Structural (AST) identity.
    bool operator==(const Formula& other) const;

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

// Grammar: expr := and ('|' and)* ; and := unary ('&' unary)* ;
// unary := '~' unary | '0' | '1' | ident | '(' expr ')'.
// Features not yet in `space` are appended in first-mention order.
Formula parse_formula(std::string_view text, FeatureSpace& space);

// Prints in the same DSL; parse_formula(print_formula(f)) reproduces f.
std::string print_formula(const Formula& f, const FeatureSpace& space);

bool evaluate(const Formula& f, const Instance& a);

// Replaces literals fixed by `t` with constants, then propagates constants.
Formula condition(const Formula& f, const Term& t);

// Sorted, unique variables mentioned by `f`.
std::vector<Var> variables(const Formula& f);

std::size_t node_count(const Formula& f);

}  // namespace reasons
