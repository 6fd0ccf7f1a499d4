#include "reasons/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "reasons/error.hpp"

namespace reasons {

struct Formula::Node {
    Kind kind;
    Var var = 0;
    std::vector<Formula> children;
};

Formula Formula::constant(bool value) {
    static const Formula zero(std::make_shared<const Node>(Node{Kind::False, 0, {}}));
    static const Formula one(std::make_shared<const Node>(Node{Kind::True, 0, {}}));
    return value ? one : zero;
}

Formula Formula::variable(Var v) {
    return Formula(std::make_shared<const Node>(Node{Kind::Var, v, {}}));
}

Formula Formula::literal(Literal l) {
    return l.positive() ? variable(l.var()) : negation(variable(l.var()));
}

Formula Formula::negation(Formula f) {
    return Formula(std::make_shared<const Node>(Node{Kind::Not, 0, {std::move(f)}}));
}

Formula Formula::conjunction(std::vector<Formula> children) {
    return Formula(std::make_shared<const Node>(Node{Kind::And, 0, std::move(children)}));
}

Formula Formula::disjunction(std::vector<Formula> children) {
    return Formula(std::make_shared<const Node>(Node{Kind::Or, 0, std::move(children)}));
}

Formula Formula::dnf(const std::vector<Term>& terms) {
    std::vector<Formula> disjuncts;
    for (const auto& t : terms) {
        if (t.empty()) return constant(true);
        std::vector<Formula> lits;
        for (auto l : t) lits.push_back(literal(l));
        disjuncts.push_back(lits.size() == 1 ? lits.front() : conjunction(std::move(lits)));
    }
    if (disjuncts.empty()) return constant(false);
    if (disjuncts.size() == 1) return disjuncts.front();
    return disjunction(std::move(disjuncts));
}

Formula::Kind Formula::kind() const { return node_->kind; }
Var Formula::var() const { return node_->var; }
std::span<const Formula> Formula::children() const { return node_->children; }

bool Formula::operator==(const Formula& other) const {
    if (node_ == other.node_) return true;
    if (kind() != other.kind() || var() != other.var()) return false;
    const auto a = children();
    const auto b = other.children();
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

class Parser {
public:
    Parser(std::string_view text, FeatureSpace& space) : text_(text), space_(space) {}

    Formula parse() {
        skip_space();
        if (at_end()) error("empty formula");
        Formula f = parse_or();
        skip_space();
        if (!at_end()) error(std::string("unexpected '") + peek() + "'");
        return f;
    }

private:
    Formula parse_or() {
        std::vector<Formula> operands{parse_and()};
        while (accept('|')) operands.push_back(parse_and());
        return operands.size() == 1 ? operands.front() : Formula::disjunction(std::move(operands));
    }

    Formula parse_and() {
        std::vector<Formula> operands{parse_unary()};
        while (accept('&')) operands.push_back(parse_unary());
        return operands.size() == 1 ? operands.front() : Formula::conjunction(std::move(operands));
    }

    Formula parse_unary() {
        if (accept('~')) return Formula::negation(parse_unary());
        skip_space();
        if (at_end()) error("unexpected end of input");
        const char c = peek();
        if (c == '(') {
            advance();
            Formula inner = parse_or();
            if (!accept(')')) error("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const auto line = line_, col = column_;
            std::string digits;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
            if (digits != "0" && digits != "1") {
                throw ParseError(line, col, "unknown token '" + digits + "' (constants are 0 and 1)");
            }
            return Formula::constant(digits == "1");
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
                name += advance();
            }
            return Formula::variable(space_.add(name));
        }
        error(std::string("unknown token '") + c + "'");
    }

    bool accept(char c) {
        skip_space();
        if (!at_end() && peek() == c) {
            advance();
            return true;
        }
        return false;
    }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    char advance() {
        const char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    [[noreturn]] void error(const std::string& message) const {
        throw ParseError(line_, column_, message);
    }

    std::string_view text_;
    FeatureSpace& space_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

void print_into(const Formula& f, const FeatureSpace& space, std::string& out) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::False: out += '0'; return;
        case K::True: out += '1'; return;
        case K::Var: out += space.name(f.var()); return;
        case K::Not: {
            out += '~';
            const auto& c = f.children().front();
            const bool wrap = c.kind() == K::And || c.kind() == K::Or;
            if (wrap) out += '(';
            print_into(c, space, out);
            if (wrap) out += ')';
            return;
        }
        case K::And:
        case K::Or: {
            const char* sep = f.kind() == K::And ? " & " : " | ";
            bool first = true;
            for (const auto& c : f.children()) {
                if (!first) out += sep;
                first = false;
                // Nested n-ary gates are always bracketed so they stay separate nodes.
                const bool wrap = c.kind() == K::And || c.kind() == K::Or;
                if (wrap) out += '(';
                print_into(c, space, out);
                if (wrap) out += ')';
            }
            return;
        }
    }
}

}  // namespace

Formula parse_formula(std::string_view text, FeatureSpace& space) {
    return Parser(text, space).parse();
}

std::string print_formula(const Formula& f, const FeatureSpace& space) {
    std::string out;
    print_into(f, space, out);
    return out;
}

bool evaluate(const Formula& f, const Instance& a) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::False: return false;
        case K::True: return true;
        case K::Var: return a.value(f.var());
        case K::Not: return !evaluate(f.children().front(), a);
        case K::And:
            return std::all_of(f.children().begin(), f.children().end(),
                               [&](const Formula& c) { return evaluate(c, a); });
        case K::Or:
            return std::any_of(f.children().begin(), f.children().end(),
                               [&](const Formula& c) { return evaluate(c, a); });
    }
    return false;
}

Formula condition(const Formula& f, const Term& t) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::False:
        case K::True: return f;
        case K::Var:
            if (t.contains(Literal(f.var(), true))) return Formula::constant(true);
            if (t.contains(Literal(f.var(), false))) return Formula::constant(false);
            return f;
        case K::Not: {
            Formula c = condition(f.children().front(), t);
            if (c.is_constant()) return Formula::constant(c.kind() == K::False);
            return Formula::negation(std::move(c));
        }
        case K::And:
        case K::Or: {
            const bool is_and = f.kind() == K::And;
            const K absorbing = is_and ? K::False : K::True;
            const K neutral = is_and ? K::True : K::False;
            std::vector<Formula> kept;
            for (const auto& child : f.children()) {
                Formula c = condition(child, t);
                if (c.kind() == absorbing) return c;
                if (c.kind() == neutral) continue;
                kept.push_back(std::move(c));
            }
            if (kept.empty()) return Formula::constant(is_and);
            if (kept.size() == 1) return kept.front();
            return is_and ? Formula::conjunction(std::move(kept)) : Formula::disjunction(std::move(kept));
        }
    }
    return f;
}

std::vector<Var> variables(const Formula& f) {
    std::vector<Var> out;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (g.kind() == Formula::Kind::Var) out.push_back(g.var());
        for (const auto& c : g.children()) walk(c);
    };
    walk(f);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t node_count(const Formula& f) {
    std::size_t n = 1;
    for (const auto& c : f.children()) n += node_count(c);
    return n;
}

}  // namespace reasons
