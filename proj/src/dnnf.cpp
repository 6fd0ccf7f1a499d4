#include "reasons/dnnf.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "reasons/error.hpp"

namespace reasons {

std::string describe(const Violation& v) {
    const char* kind = v.kind == Violation::Kind::Decomposability ? "decomposability"
                       : v.kind == Violation::Kind::DecisionForm  ? "decision form"
                                                                  : "structure";
    return std::string(kind) + " violation at node " + std::to_string(v.node) + ": " + v.message;
}

namespace {

// Returns the child of `and_gate` that is a literal on `var`, if any.
std::optional<Literal> decision_literal(const Nnf& c, NodeId and_gate, Var var) {
    if (c.node(and_gate).kind != GateKind::And) return std::nullopt;
    for (auto k : c.children(and_gate)) {
        const auto& n = c.node(k);
        if (n.kind == GateKind::Literal && n.literal.var() == var) return n.literal;
    }
    return std::nullopt;
}

struct Analysis {
    std::vector<std::uint32_t> offsets;
    std::vector<Var> data;
    std::vector<DecisionDnnf::Branches> branches;
    std::optional<Violation> violation;
};

Analysis analyse(const Nnf& c) {
    Analysis a;
    a.offsets.reserve(c.size() + 1);
    a.offsets.push_back(0);
    a.branches.resize(c.size(), {0, 0});
    if (c.size() == 0) {
        a.violation = Violation{Violation::Kind::Structure, 0, "empty circuit"};
        return a;
    }
    std::vector<Var> merged;
    std::vector<Var> scratch;
    for (NodeId id = 0; id < c.size(); ++id) {
        const auto& n = c.node(id);
        merged.clear();
        std::size_t total = 0;
        if (n.kind == GateKind::Literal) {
            merged.push_back(n.literal.var());
        } else {
            for (auto k : c.children(id)) {
                const auto begin = a.data.begin() + a.offsets[k];
                const auto end = a.data.begin() + a.offsets[k + 1];
                total += static_cast<std::size_t>(end - begin);
                scratch.clear();
                std::set_union(merged.begin(), merged.end(), begin, end, std::back_inserter(scratch));
                merged.swap(scratch);
            }
        }
        if (n.kind == GateKind::And && merged.size() != total) {
            a.violation = Violation{Violation::Kind::Decomposability, id,
                                    "inputs of and-gate share variables"};
            return a;
        }
        if (n.kind == GateKind::Or) {
            const auto kids = c.children(id);
            if (n.decision == 0) {
                a.violation = Violation{Violation::Kind::DecisionForm, id, "or-gate has no decision variable"};
                return a;
            }
            if (kids.size() != 2) {
                a.violation = Violation{Violation::Kind::DecisionForm, id,
                                        "or-gate has " + std::to_string(kids.size()) + " inputs, expected 2"};
                return a;
            }
            const auto l0 = decision_literal(c, kids[0], n.decision);
            const auto l1 = decision_literal(c, kids[1], n.decision);
            if (!l0 || !l1 || l0->positive() == l1->positive()) {
                a.violation = Violation{Violation::Kind::DecisionForm, id,
                                        "inputs are not of the form X & mu, ~X & nu for X = " +
                                            std::to_string(n.decision)};
                return a;
            }
            a.branches[id] = l0->positive() ? DecisionDnnf::Branches{kids[0], kids[1]}
                                            : DecisionDnnf::Branches{kids[1], kids[0]};
        }
        a.data.insert(a.data.end(), merged.begin(), merged.end());
        a.offsets.push_back(static_cast<std::uint32_t>(a.data.size()));
    }
    return a;
}

}  // namespace

std::optional<Violation> validate(const Nnf& c) { return analyse(c).violation; }

DecisionDnnf DecisionDnnf::from_nnf(Nnf circuit) {
    Analysis a = analyse(circuit);
    if (a.violation) throw InputError(describe(*a.violation));
    DecisionDnnf d;
    d.circuit_ = std::move(circuit);
    d.var_offsets_ = std::move(a.offsets);
    d.var_data_ = std::move(a.data);
    d.branches_ = std::move(a.branches);
    return d;
}

VarMap VarMap::identity(std::size_t num_vars, FeatureSpace& space) {
    VarMap m;
    for (std::size_t i = 1; i <= num_vars; ++i) {
        if (i > space.size()) space.add("x" + std::to_string(i));
        m.set(i, static_cast<Var>(i));
    }
    return m;
}

std::optional<Var> VarMap::lookup(std::uint64_t file_var) const {
    if (auto it = map_.find(file_var); it != map_.end()) return it->second;
    return std::nullopt;
}

namespace {

class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    // Next line that is neither blank nor a comment; false at end of input.
    bool next(std::vector<std::string_view>& tokens) {
        while (pos_ < text_.size()) {
            const auto nl = text_.find('\n', pos_);
            std::string_view line = text_.substr(pos_, nl == std::string_view::npos ? std::string_view::npos : nl - pos_);
            pos_ = nl == std::string_view::npos ? text_.size() : nl + 1;
            ++line_;
            tokens.clear();
            std::size_t i = 0;
            while (i < line.size()) {
                while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
                const std::size_t start = i;
                while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
                if (i > start) tokens.push_back(line.substr(start, i - start));
            }
            if (tokens.empty() || tokens.front() == "c") continue;
            return true;
        }
        return false;
    }

    std::size_t line() const { return line_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 0;
};

std::int64_t to_int(std::string_view tok, std::size_t line) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(line, 1, "expected an integer, got '" + std::string(tok) + "'");
    }
    return v;
}

}  // namespace

VarMap parse_varmap(std::string_view text, FeatureSpace& space) {
    VarMap m;
    LineReader reader(text);
    std::vector<std::string_view> tok;
    while (reader.next(tok)) {
        if (tok.size() != 2) throw ParseError(reader.line(), 1, "expected 'index name'");
        const auto idx = to_int(tok[0], reader.line());
        if (idx <= 0) throw ParseError(reader.line(), 1, "variable index must be positive");
        if (m.lookup(static_cast<std::uint64_t>(idx))) {
            throw ParseError(reader.line(), 1, "variable " + std::to_string(idx) + " mapped twice");
        }
        m.set(static_cast<std::uint64_t>(idx), space.add(tok[1]));
    }
    return m;
}

std::string print_varmap(const FeatureSpace& space) {
    std::string out;
    for (Var v = 1; v <= space.size(); ++v) out += std::to_string(v) + " " + space.name(v) + "\n";
    return out;
}

Nnf parse_nnf_unvalidated(std::string_view text, const VarMap& varmap, std::string_view header) {
    LineReader reader(text);
    std::vector<std::string_view> tok;
    if (!reader.next(tok) || tok.size() != 4 || tok[0] != header) {
        throw ParseError(reader.line(), 1, "expected header '" + std::string(header) + " <nodes> <edges> <vars>'");
    }
    const auto num_nodes = to_int(tok[1], reader.line());
    const auto num_edges = to_int(tok[2], reader.line());
    const auto num_vars = to_int(tok[3], reader.line());
    if (num_nodes <= 0 || num_edges < 0 || num_vars < 0) {
        throw ParseError(reader.line(), 1, "header counts out of range");
    }

    auto map_var = [&](std::int64_t file_var, std::size_t line) -> Var {
        const auto key = static_cast<std::uint64_t>(file_var < 0 ? -file_var : file_var);
        if (key == 0) throw ParseError(line, 1, "variable 0 is not allowed here");
        if (!varmap.empty()) {
            if (auto v = varmap.lookup(key)) return *v;
            throw ParseError(line, 1, "variable " + std::to_string(key) + " is not in the variable map");
        }
        if (key > static_cast<std::uint64_t>(num_vars)) {
            throw ParseError(line, 1, "variable " + std::to_string(key) + " exceeds header count");
        }
        return static_cast<Var>(key);
    };

    NnfBuilder b;
    std::vector<NodeId> file_to_node;
    file_to_node.reserve(static_cast<std::size_t>(num_nodes));
    std::int64_t edges = 0;
    std::vector<NodeId> kids;
    while (reader.next(tok)) {
        const auto line = reader.line();
        const auto own = static_cast<std::int64_t>(file_to_node.size());
        if (own >= num_nodes) throw ParseError(line, 1, "more node lines than the header declares");
        auto child = [&](std::string_view t) -> NodeId {
            const auto idx = to_int(t, line);
            if (idx < 0 || idx >= own) {
                throw ParseError(line, 1, "child index " + std::to_string(idx) +
                                              " must refer to an earlier node");
            }
            return file_to_node[static_cast<std::size_t>(idx)];
        };
        const auto& kind = tok[0];
        if (kind == "L") {
            if (tok.size() != 2) throw ParseError(line, 1, "expected 'L <literal>'");
            const auto lit = to_int(tok[1], line);
            file_to_node.push_back(b.literal(Literal(map_var(lit, line), lit > 0)));
        } else if (kind == "A") {
            if (tok.size() < 2) throw ParseError(line, 1, "expected 'A <count> <children...>'");
            const auto count = to_int(tok[1], line);
            if (count < 0 || static_cast<std::size_t>(count) + 2 != tok.size()) {
                throw ParseError(line, 1, "and-node child count does not match");
            }
            edges += count;
            if (count == 0) {
                file_to_node.push_back(b.constant(true));
                continue;
            }
            kids.clear();
            for (std::size_t i = 2; i < tok.size(); ++i) kids.push_back(child(tok[i]));
            file_to_node.push_back(b.conjunction(kids));
        } else if (kind == "O") {
            if (tok.size() < 3) throw ParseError(line, 1, "expected 'O <var> <count> <children...>'");
            const auto decision = to_int(tok[1], line);
            const auto count = to_int(tok[2], line);
            if (count < 0 || static_cast<std::size_t>(count) + 3 != tok.size()) {
                throw ParseError(line, 1, "or-node child count does not match");
            }
            edges += count;
            if (count == 0) {
                file_to_node.push_back(b.constant(false));
                continue;
            }
            if (decision < 0) throw ParseError(line, 1, "decision variable must be positive");
            kids.clear();
            for (std::size_t i = 3; i < tok.size(); ++i) kids.push_back(child(tok[i]));
            const Var d = decision == 0 ? 0 : map_var(decision, line);
            if (d != 0 && kids.size() == 2) {
                // Polarity of each input with respect to d, when recognisable.
                auto polarity = [&](NodeId k) -> std::optional<bool> {
                    const auto& n = b.node(k);
                    if (n.kind == GateKind::Literal && n.literal.var() == d) return n.literal.positive();
                    if (n.kind == GateKind::And) {
                        for (auto g : b.children(k)) {
                            const auto& m = b.node(g);
                            if (m.kind == GateKind::Literal && m.literal.var() == d) return m.literal.positive();
                        }
                    }
                    return std::nullopt;
                };
                const std::optional<bool> pol[2] = {polarity(kids[0]), polarity(kids[1])};
                for (int i = 0; i < 2; ++i) {
                    const auto& n = b.node(kids[i]);
                    if (n.kind == GateKind::Literal && pol[i]) {
                        kids[i] = b.conjunction({kids[i], b.constant(true)});
                    } else if (n.kind == GateKind::False && pol[1 - i]) {
                        const NodeId lit = b.literal(Literal(d, !*pol[1 - i]));
                        kids[i] = b.conjunction({lit, b.constant(false)});
                    }
                }
            }
            file_to_node.push_back(b.disjunction(kids, d));
        } else {
            throw ParseError(line, 1, "unknown node type '" + std::string(kind) + "'");
        }
    }
    if (static_cast<std::int64_t>(file_to_node.size()) != num_nodes) {
        throw ParseError(reader.line(), 1, "header declares " + std::to_string(num_nodes) +
                                               " nodes, found " + std::to_string(file_to_node.size()));
    }
    if (edges != num_edges) {
        throw ParseError(reader.line(), 1, "header declares " + std::to_string(num_edges) +
                                               " edges, found " + std::to_string(edges));
    }
    return std::move(b).build(file_to_node.back());
}

DecisionDnnf parse_nnf(std::string_view text, const VarMap& varmap) {
    return DecisionDnnf::from_nnf(parse_nnf_unvalidated(text, varmap));
}

std::string print_nnf(const Nnf& c, std::string_view header) {
    std::ostringstream out;
    out << header << ' ' << c.size() << ' ' << c.edge_count() << ' ' << c.max_var() << '\n';
    for (NodeId id = 0; id < c.size(); ++id) {
        const auto& n = c.node(id);
        switch (n.kind) {
            case GateKind::False: out << "O 0 0\n"; break;
            case GateKind::True: out << "A 0\n"; break;
            case GateKind::Literal: out << "L " << n.literal.dimacs() << '\n'; break;
            case GateKind::And:
            case GateKind::Or: {
                if (n.kind == GateKind::And) {
                    out << "A " << n.child_count;
                } else {
                    out << "O " << n.decision << ' ' << n.child_count;
                }
                for (auto k : c.children(id)) out << ' ' << k;
                out << '\n';
                break;
            }
        }
    }
    return out.str();
}

}  // namespace reasons
