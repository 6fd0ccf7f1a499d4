#include "reasons/literal.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "reasons/error.hpp"

namespace reasons {

Literal Literal::from_dimacs(std::int64_t lit) {
    if (lit == 0) throw InputError("literal 0 is not a variable");
    const auto var = static_cast<Var>(lit > 0 ? lit : -lit);
    return Literal(var, lit > 0);
}

Term Term::from(std::vector<Literal> literals) {
    std::sort(literals.begin(), literals.end());
    literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
    for (std::size_t i = 1; i < literals.size(); ++i) {
        if (literals[i].var() == literals[i - 1].var()) {
            throw InputError("inconsistent term: variable " + std::to_string(literals[i].var()) +
                             " appears with both polarities");
        }
    }
    return from_sorted(std::move(literals));
}

Term Term::from_sorted(std::vector<Literal> literals) {
    Term t;
    t.literals_ = std::move(literals);
    return t;
}

bool Term::contains(Literal l) const {
    return std::binary_search(literals_.begin(), literals_.end(), l);
}

bool Term::mentions(Var v) const {
    return contains(Literal(v, true)) || contains(Literal(v, false));
}

bool Term::subsumes(const Term& other) const {
    return std::includes(other.literals_.begin(), other.literals_.end(), literals_.begin(),
                         literals_.end());
}

Term Term::negated() const {
    std::vector<Literal> out;
    out.reserve(literals_.size());
    for (auto l : literals_) out.push_back(l.negated());
    std::sort(out.begin(), out.end());
    return from_sorted(std::move(out));
}

std::optional<Term> Term::conjoin(const Term& a, const Term& b) {
    std::vector<Literal> merged;
    merged.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
    for (std::size_t i = 1; i < merged.size(); ++i) {
        if (merged[i].var() == merged[i - 1].var()) return std::nullopt;
    }
    return from_sorted(std::move(merged));
}

bool Term::disjoint(const Term& other) const {
    for (auto l : literals_) {
        if (other.mentions(l.var())) return false;
    }
    return true;
}

bool canonical_less(const Term& a, const Term& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void sort_canonical(std::vector<Term>& terms) {
    std::sort(terms.begin(), terms.end(), canonical_less);
}

Instance Instance::from_bits(std::size_t num_vars, std::uint64_t bits) {
    std::vector<bool> values(num_vars);
    for (std::size_t i = 0; i < num_vars && i < 64; ++i) values[i] = (bits >> i) & 1u;
    return Instance(std::move(values));
}

Instance Instance::from_term(std::size_t num_vars, const Term& term) {
    if (term.size() != num_vars) throw InputError("term does not assign every variable");
    std::vector<bool> values(num_vars);
    for (auto l : term) {
        if (l.var() < 1 || l.var() > num_vars) throw InputError("literal outside feature space");
        values[l.var() - 1] = l.positive();
    }
    return Instance(std::move(values));
}

bool Instance::satisfies(const Term& t) const {
    return std::all_of(t.begin(), t.end(), [&](Literal l) { return satisfies(l); });
}

Term Instance::as_term() const {
    std::vector<Literal> lits;
    lits.reserve(size());
    for (Var v = 1; v <= size(); ++v) lits.push_back(literal(v));
    return Term::from_sorted(std::move(lits));
}

std::uint64_t Instance::bits() const {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < values_.size() && i < 64; ++i) {
        if (values_[i]) out |= std::uint64_t{1} << i;
    }
    return out;
}

Instance Instance::flipped(const Term& property) const {
    Instance out = *this;
    for (auto l : property) out.values_[l.var() - 1] = !out.values_[l.var() - 1];
    return out;
}

Var FeatureSpace::add(std::string_view name, bool is_protected) {
    if (!is_identifier(name)) throw InputError("invalid feature name '" + std::string(name) + "'");
    if (auto it = index_.find(std::string(name)); it != index_.end()) {
        if (is_protected) protected_[it->second - 1] = true;
        return it->second;
    }
    names_.emplace_back(name);
    protected_.push_back(is_protected);
    const auto v = static_cast<Var>(names_.size());
    index_.emplace(names_.back(), v);
    return v;
}

std::optional<Var> FeatureSpace::find(std::string_view name) const {
    if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
    return std::nullopt;
}

Var FeatureSpace::require(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw InputError("unknown feature '" + std::string(name) + "'");
}

void FeatureSpace::clear_protected() { std::fill(protected_.begin(), protected_.end(), false); }

std::vector<Var> FeatureSpace::protected_vars() const {
    std::vector<Var> out;
    for (Var v = 1; v <= size(); ++v)
        if (is_protected(v)) out.push_back(v);
    return out;
}

std::vector<Var> FeatureSpace::unprotected_vars() const {
    std::vector<Var> out;
    for (Var v = 1; v <= size(); ++v)
        if (!is_protected(v)) out.push_back(v);
    return out;
}

std::vector<Var> FeatureSpace::vars() const {
    std::vector<Var> out(size());
    for (Var v = 1; v <= size(); ++v) out[v - 1] = v;
    return out;
}

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    const auto head = static_cast<unsigned char>(s.front());
    if (!std::isalpha(head) && head != '_') return false;
    return std::all_of(s.begin() + 1, s.end(), [](char c) {
        const auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || u == '_';
    });
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string strip_spaces(std::string_view s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

}  // namespace

FeatureSpace parse_feature_space(std::string_view text) {
    FeatureSpace space;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        bool is_protected = false;
        if (line.back() == '*') {
            is_protected = true;
            line = trim(line.substr(0, line.size() - 1));
        }
        if (!is_identifier(line)) {
            throw ParseError(line_no, 1, "invalid feature name '" + std::string(line) + "'");
        }
        if (space.find(line)) throw ParseError(line_no, 1, "duplicate feature '" + std::string(line) + "'");
        space.add(line, is_protected);
    }
    return space;
}

std::string print_feature_space(const FeatureSpace& space) {
    std::string out;
    for (Var v = 1; v <= space.size(); ++v) {
        out += space.name(v);
        if (space.is_protected(v)) out += " *";
        out += '\n';
    }
    return out;
}

Term parse_term(std::string_view text, const FeatureSpace& space) {
    const std::string compact = strip_spaces(text);
    std::vector<Literal> lits;
    std::vector<int> seen(space.size() + 1, 0);  // 0 unseen, 1 positive, -1 negative
    std::string_view rest = compact;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (item.empty()) throw InputError("empty literal in list '" + std::string(text) + "'");
        bool positive = true;
        while (!item.empty() && item.front() == '~') {
            positive = !positive;
            item.remove_prefix(1);
        }
        const Var v = space.require(item);
        const int sign = positive ? 1 : -1;
        if (seen[v] == sign) throw InputError("duplicate feature '" + std::string(item) + "'");
        if (seen[v] == -sign) {
            throw InputError("contradictory literals for feature '" + std::string(item) + "'");
        }
        seen[v] = sign;
        lits.emplace_back(v, positive);
    }
    return Term::from(std::move(lits));
}

Instance parse_instance(std::string_view text, const FeatureSpace& space) {
    const Term t = parse_term(text, space);
    if (t.size() != space.size()) {
        std::string missing;
        for (Var v = 1; v <= space.size(); ++v) {
            if (!t.mentions(v)) {
                if (!missing.empty()) missing += ", ";
                missing += space.name(v);
            }
        }
        throw InputError("instance is missing features: " + missing);
    }
    return Instance::from_term(space.size(), t);
}

std::string to_string(Literal l, const FeatureSpace& space) {
    std::string name = l.var() >= 1 && l.var() <= space.size() ? space.name(l.var())
                                                              : "x" + std::to_string(l.var());
    return l.positive() ? name : "~" + name;
}

std::string to_string(const Term& t, const FeatureSpace& space) {
    std::string out;
    for (auto l : t) {
        if (!out.empty()) out += ',';
        out += to_string(l, space);
    }
    return out;
}

std::string to_string(const Instance& a, const FeatureSpace& space) {
    return to_string(a.as_term(), space);
}

}  // namespace reasons
