#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace reasons {

// 1-based feature index within a FeatureSpace. 0 is never a valid variable.
using Var = std::uint32_t;

// A variable or its negation. Encoded as 2*var + (negative ? 1 : 0), so the
// natural order sorts by variable index first, positive before negative.
class Literal {
public:
    constexpr Literal() = default;
    constexpr Literal(Var var, bool positive) : code_((var << 1) | (positive ? 0u : 1u)) {}

    static constexpr Literal from_code(std::uint32_t code) {
        Literal l;
        l.code_ = code;
        return l;
    }
    // Signed DIMACS form: +v or -v.
    static Literal from_dimacs(std::int64_t lit);

    constexpr Var var() const { return code_ >> 1; }
    constexpr bool positive() const { return (code_ & 1u) == 0; }
    constexpr std::uint32_t code() const { return code_; }
    constexpr Literal negated() const { return from_code(code_ ^ 1u); }
    std::int64_t dimacs() const {
        return positive() ? static_cast<std::int64_t>(var()) : -static_cast<std::int64_t>(var());
    }

    constexpr auto operator<=>(const Literal&) const = default;

private:
    std::uint32_t code_ = 0;
};

// A consistent set of literals, stored sorted by variable index.
class Term {
public:
    Term() = default;

    // Sorts and deduplicates; throws InputError when both polarities of a
    // variable are present.
    static Term from(std::vector<Literal> literals);
    // Caller guarantees literals are sorted, unique and consistent.
    static Term from_sorted(std::vector<Literal> literals);

    std::span<const Literal> literals() const { return literals_; }
    std::size_t size() const { return literals_.size(); }
    bool empty() const { return literals_.empty(); }
    auto begin() const { return literals_.begin(); }
    auto end() const { return literals_.end(); }

    bool contains(Literal l) const;
    bool mentions(Var v) const;
    // True iff every literal of *this is in `other` (this subsumes other).
    bool subsumes(const Term& other) const;
    Term negated() const;
    // Conjunction of two terms, or nullopt when they clash.
    static std::optional<Term> conjoin(const Term& a, const Term& b);
    bool disjoint(const Term& other) const;

    bool operator==(const Term&) const = default;

private:
    std::vector<Literal> literals_;
};

// Free-function spelling of Term::subsumes / Term::negated.
inline bool subsumes(const Term& t1, const Term& t2) { return t1.subsumes(t2); }
inline Term negate_term(const Term& t) { return t.negated(); }

// Report order: shorter terms first, then lexicographic by literal.
bool canonical_less(const Term& a, const Term& b);
void sort_canonical(std::vector<Term>& terms);

// A complete assignment over variables 1..size().
class Instance {
public:
    Instance() = default;
    explicit Instance(std::vector<bool> values) : values_(std::move(values)) {}
    // Bit (v-1) of `bits` holds the value of variable v; variables past 64 are false.
    static Instance from_bits(std::size_t num_vars, std::uint64_t bits);
    // Every variable in 1..num_vars must be assigned by `term`.
    static Instance from_term(std::size_t num_vars, const Term& term);

    std::size_t size() const { return values_.size(); }
    bool value(Var v) const { return values_[v - 1]; }
    Literal literal(Var v) const { return Literal(v, value(v)); }
    bool satisfies(Literal l) const { return l.var() >= 1 && l.var() <= size() && value(l.var()) == l.positive(); }
    bool satisfies(const Term& t) const;
    Term as_term() const;
    std::uint64_t bits() const;
    // Flips every variable mentioned by `property`.
    Instance flipped(const Term& property) const;

    bool operator==(const Instance&) const = default;

private:
    std::vector<bool> values_;
};

// Named features of a classifier plus the protected subset.
class FeatureSpace {
public:
    FeatureSpace() = default;

    // Returns the existing index when `name` is already declared.
    Var add(std::string_view name, bool is_protected = false);
    std::optional<Var> find(std::string_view name) const;
    Var require(std::string_view name) const;  // throws InputError if unknown

    std::size_t size() const { return names_.size(); }
    const std::string& name(Var v) const { return names_.at(v - 1); }

    bool is_protected(Var v) const { return protected_.at(v - 1); }
    void set_protected(Var v, bool value) { protected_.at(v - 1) = value; }
    void clear_protected();
    std::vector<Var> protected_vars() const;
    std::vector<Var> unprotected_vars() const;
    std::vector<Var> vars() const;

private:
    std::vector<std::string> names_;
    std::vector<bool> protected_;
    std::unordered_map<std::string, Var> index_;
};

bool is_identifier(std::string_view s);

// One feature per line; a trailing " *" marks the feature protected. Blank
// lines and lines starting with '#' are ignored.
FeatureSpace parse_feature_space(std::string_view text);
std::string print_feature_space(const FeatureSpace& space);

// Comma-separated literals with optional '~'; whitespace ignored. parse_term
// accepts any consistent subset, parse_instance requires totality.
Term parse_term(std::string_view text, const FeatureSpace& space);
Instance parse_instance(std::string_view text, const FeatureSpace& space);

std::string to_string(Literal l, const FeatureSpace& space);
std::string to_string(const Term& t, const FeatureSpace& space);
std::string to_string(const Instance& a, const FeatureSpace& space);

}  // namespace reasons
