#include "reasons/obdd.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "reasons/error.hpp"

namespace reasons {

namespace {

struct TripleHash {
    std::size_t operator()(const std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>& t) const {
        std::uint64_t h = std::get<0>(t);
        h = h * 0x9E3779B97F4A7C15ull + std::get<1>(t);
        h = h * 0x9E3779B97F4A7C15ull + std::get<2>(t);
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

using Triple = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;

enum class Op : std::uint32_t { And, Or, Not };

// Construction-local unique table and apply cache.
class Builder {
public:
    explicit Builder(std::span<const Var> order) {
        Var max_var = 0;
        for (auto v : order) max_var = std::max(max_var, v);
        level_.assign(max_var + 1, UINT32_MAX);
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (order[i] == 0 || level_[order[i]] != UINT32_MAX) {
                throw InputError("variable order must list distinct features");
            }
            level_[order[i]] = static_cast<std::uint32_t>(i);
        }
        nodes_.resize(2);
    }

    NodeId build(const Formula& f) {
        using K = Formula::Kind;
        switch (f.kind()) {
            case K::False: return Obdd::kFalse;
            case K::True: return Obdd::kTrue;
            case K::Var:
                if (f.var() >= level_.size() || level_[f.var()] == UINT32_MAX) {
                    throw InputError("variable order is missing feature " + std::to_string(f.var()));
                }
                return make(f.var(), Obdd::kTrue, Obdd::kFalse);
            case K::Not: return negate(build(f.children().front()));
            case K::And:
            case K::Or: {
                const Op op = f.kind() == K::And ? Op::And : Op::Or;
                // Balanced pairing keeps intermediate diagrams small on long
                // chains of gates.
                std::vector<NodeId> parts;
                for (const auto& c : f.children()) parts.push_back(build(c));
                if (parts.empty()) return op == Op::And ? Obdd::kTrue : Obdd::kFalse;
                while (parts.size() > 1) {
                    std::size_t out = 0;
                    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) parts[out++] = apply(op, parts[i], parts[i + 1]);
                    if (parts.size() % 2) parts[out++] = parts.back();
                    parts.resize(out);
                }
                return parts.front();
            }
        }
        return Obdd::kFalse;
    }

    const std::vector<Obdd::Node>& nodes() const { return nodes_; }

private:
    std::uint32_t level(NodeId id) const {
        return id < 2 ? UINT32_MAX : level_[nodes_[id].var];
    }

    NodeId make(Var var, NodeId high, NodeId low) {
        if (high == low) return high;
        const Triple key{var, high, low};
        if (auto it = unique_.find(key); it != unique_.end()) return it->second;
        const auto id = static_cast<NodeId>(nodes_.size());
        nodes_.push_back({var, high, low});
        unique_.emplace(key, id);
        return id;
    }

    NodeId negate(NodeId a) {
        if (a < 2) return a ^ 1u;
        const Triple key{static_cast<std::uint32_t>(Op::Not), a, 0};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        const auto n = nodes_[a];
        const NodeId r = make(n.var, negate(n.high), negate(n.low));
        memo_.emplace(key, r);
        return r;
    }

    NodeId apply(Op op, NodeId a, NodeId b) {
        if (op == Op::And) {
            if (a == Obdd::kFalse || b == Obdd::kFalse) return Obdd::kFalse;
            if (a == Obdd::kTrue) return b;
            if (b == Obdd::kTrue || a == b) return a;
        } else {
            if (a == Obdd::kTrue || b == Obdd::kTrue) return Obdd::kTrue;
            if (a == Obdd::kFalse) return b;
            if (b == Obdd::kFalse || a == b) return a;
        }
        if (a > b) std::swap(a, b);
        const Triple key{static_cast<std::uint32_t>(op), a, b};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        const auto la = level(a), lb = level(b);
        const auto top = std::min(la, lb);
        const auto na = nodes_[a], nb = nodes_[b];
        const Var var = la == top ? na.var : nb.var;
        const NodeId a_hi = la == top ? na.high : a, a_lo = la == top ? na.low : a;
        const NodeId b_hi = lb == top ? nb.high : b, b_lo = lb == top ? nb.low : b;
        const NodeId high = apply(op, a_hi, b_hi);
        const NodeId low = apply(op, a_lo, b_lo);
        const NodeId r = make(var, high, low);
        memo_.emplace(key, r);
        return r;
    }

    std::vector<std::uint32_t> level_;
    std::vector<Obdd::Node> nodes_;
    std::unordered_map<Triple, NodeId, TripleHash> unique_;
    std::unordered_map<Triple, NodeId, TripleHash> memo_;
};

// Copies the nodes reachable from `root` into post-order (high first).
std::vector<Obdd::Node> canonical_store(const std::vector<Obdd::Node>& nodes, NodeId root, NodeId& new_root) {
    std::vector<Obdd::Node> out(2);
    if (root < 2) {
        new_root = root;
        return out;
    }
    std::unordered_map<NodeId, NodeId> renumber;
    // Iterative post-order: frame = (node, stage).
    std::vector<std::pair<NodeId, int>> stack{{root, 0}};
    while (!stack.empty()) {
        auto& [id, stage] = stack.back();
        if (id < 2 || renumber.count(id)) {
            stack.pop_back();
            continue;
        }
        const auto& n = nodes[id];
        if (stage == 0) {
            stage = 1;
            stack.push_back({n.high, 0});
        } else if (stage == 1) {
            stage = 2;
            stack.push_back({n.low, 0});
        } else {
            auto map = [&](NodeId c) { return c < 2 ? c : renumber.at(c); };
            const auto new_id = static_cast<NodeId>(out.size());
            out.push_back({n.var, map(n.high), map(n.low)});
            renumber.emplace(id, new_id);
            stack.pop_back();
        }
    }
    new_root = renumber.at(root);
    return out;
}

}  // namespace

Obdd Obdd::compile(const Formula& f, std::span<const Var> order) {
    Builder builder(order);
    const NodeId raw_root = builder.build(f);
    Obdd d;
    NodeId root = 0;
    d.store_ = std::make_shared<const std::vector<Node>>(canonical_store(builder.nodes(), raw_root, root));
    d.root_ = root;
    d.order_.assign(order.begin(), order.end());
    d.num_vars_ = order.empty() ? 0 : *std::max_element(order.begin(), order.end());
    return d;
}

Obdd Obdd::negate() const {
    Obdd d = *this;
    d.complemented_ = !complemented_;
    return d;
}

NodeId Obdd::root() const { return effective(root_); }

Obdd::Node Obdd::node(NodeId id) const {
    Node n = (*store_)[id];
    n.high = effective(n.high);
    n.low = effective(n.low);
    return n;
}

bool Obdd::evaluate(const Instance& a) const {
    NodeId id = root_;
    while (id >= 2) {
        const auto& n = (*store_)[id];
        id = a.value(n.var) ? n.high : n.low;
    }
    return effective(id) == kTrue;
}

DecisionDnnf Obdd::to_decision_dnnf() const {
    NnfBuilder b;
    std::vector<NodeId> map(store_->size(), UINT32_MAX);
    auto mapped = [&](NodeId id) {
        if (id < 2) return b.constant(effective(id) == kTrue);
        return map[id];
    };
    for (NodeId id = 2; id < store_->size(); ++id) {
        const auto& n = (*store_)[id];
        const NodeId pos = b.literal(Literal(n.var, true));
        const NodeId high = b.conjunction({pos, mapped(n.high)});
        const NodeId neg = b.literal(Literal(n.var, false));
        const NodeId low = b.conjunction({neg, mapped(n.low)});
        map[id] = b.disjunction({high, low}, n.var);
    }
    return DecisionDnnf::from_nnf(std::move(b).build(mapped(root_)));
}

std::optional<std::string> Obdd::check_structure() const {
    std::vector<std::uint32_t> level(num_vars_ + 1, UINT32_MAX);
    for (std::size_t i = 0; i < order_.size(); ++i) level[order_[i]] = static_cast<std::uint32_t>(i);
    std::unordered_set<Triple, TripleHash> seen;
    for (NodeId id = 2; id < store_->size(); ++id) {
        const auto& n = (*store_)[id];
        const std::string where = "node " + std::to_string(id) + ": ";
        if (n.var == 0 || n.var > num_vars_ || level[n.var] == UINT32_MAX) {
            return where + "variable " + std::to_string(n.var) + " is not in the order";
        }
        if (n.high == n.low) return where + "redundant test (high == low)";
        for (NodeId c : {n.high, n.low}) {
            if (c >= id) return where + "child is not defined before its parent";
            if (c >= 2 && level[(*store_)[c].var] <= level[n.var]) {
                return where + "variables do not follow the order along an edge";
            }
        }
        if (!seen.insert({n.var, n.high, n.low}).second) return where + "duplicate of an earlier node";
    }
    return std::nullopt;
}

std::string Obdd::serialize() const {
    std::ostringstream out;
    out << "obdd " << num_vars_ << ' ' << node_count() << '\n';
    for (NodeId id = 2; id < store_->size(); ++id) {
        const auto n = node(id);
        out << "n " << id << ' ' << n.var << ' ' << n.high << ' ' << n.low << '\n';
    }
    out << "root " << root() << '\n';
    return out.str();
}

Obdd Obdd::parse(std::string_view text, std::span<const Var> order) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    auto next = [&](std::vector<std::string>& tok) {
        while (std::getline(in, line)) {
            ++line_no;
            std::istringstream ls(line);
            tok.clear();
            for (std::string t; ls >> t;) tok.push_back(t);
            if (tok.empty() || tok.front() == "c" || tok.front().front() == '#') continue;
            return true;
        }
        return false;
    };
    auto number = [&](const std::string& t) -> std::uint64_t {
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size()) {
            throw ParseError(line_no, 1, "expected a non-negative integer, got '" + t + "'");
        }
        return v;
    };

    std::vector<std::string> tok;
    if (!next(tok) || tok.size() != 3 || tok[0] != "obdd") {
        throw ParseError(line_no, 1, "expected header 'obdd <numvars> <numnodes>'");
    }
    const auto num_vars = number(tok[1]);
    const auto num_nodes = number(tok[2]);

    std::vector<Node> nodes(2);
    std::unordered_map<std::uint64_t, NodeId> ids;
    auto lookup = [&](std::uint64_t file_id) -> NodeId {
        if (file_id < 2) return static_cast<NodeId>(file_id);
        auto it = ids.find(file_id);
        if (it == ids.end()) {
            throw ParseError(line_no, 1, "node " + std::to_string(file_id) + " is not defined before use");
        }
        return it->second;
    };
    std::optional<NodeId> root;
    while (next(tok)) {
        if (root) throw ParseError(line_no, 1, "content after 'root' line");
        if (tok[0] == "n") {
            if (tok.size() != 5) throw ParseError(line_no, 1, "expected 'n <id> <var> <hi> <lo>'");
            const auto id = number(tok[1]);
            const auto var = number(tok[2]);
            if (id < 2) throw ParseError(line_no, 1, "ids 0 and 1 are reserved for the sinks");
            if (ids.count(id)) throw ParseError(line_no, 1, "node " + std::to_string(id) + " defined twice");
            if (var == 0 || var > num_vars) throw ParseError(line_no, 1, "variable index out of range");
            const NodeId high = lookup(number(tok[3]));
            const NodeId low = lookup(number(tok[4]));
            ids.emplace(id, static_cast<NodeId>(nodes.size()));
            nodes.push_back({static_cast<Var>(var), high, low});
        } else if (tok[0] == "root") {
            if (tok.size() != 2) throw ParseError(line_no, 1, "expected 'root <id>'");
            root = lookup(number(tok[1]));
        } else {
            throw ParseError(line_no, 1, "unknown line type '" + tok[0] + "'");
        }
    }
    if (!root) throw ParseError(line_no, 1, "missing 'root' line");
    if (nodes.size() - 2 != num_nodes) {
        throw ParseError(line_no, 1, "header declares " + std::to_string(num_nodes) + " nodes, found " +
                                         std::to_string(nodes.size() - 2));
    }

    std::vector<Var> resolved(order.begin(), order.end());
    for (auto v : resolved) {
        if (v == 0 || v > num_vars) throw InputError("variable order refers to a feature outside the OBDD");
    }
    if (resolved.empty()) {
        // Kahn's algorithm over "parent variable precedes child variable".
        std::vector<std::vector<Var>> after(num_vars + 1);
        std::vector<std::size_t> indegree(num_vars + 1, 0);
        std::unordered_set<std::uint64_t> edges;
        for (NodeId id = 2; id < nodes.size(); ++id) {
            for (NodeId c : {nodes[id].high, nodes[id].low}) {
                if (c < 2) continue;
                const Var from = nodes[id].var, to = nodes[c].var;
                if (edges.insert((std::uint64_t{from} << 32) | to).second) {
                    after[from].push_back(to);
                    ++indegree[to];
                }
            }
        }
        std::priority_queue<Var, std::vector<Var>, std::greater<>> ready;
        for (Var v = 1; v <= num_vars; ++v)
            if (indegree[v] == 0) ready.push(v);
        while (!ready.empty()) {
            const Var v = ready.top();
            ready.pop();
            resolved.push_back(v);
            for (Var w : after[v])
                if (--indegree[w] == 0) ready.push(w);
        }
        if (resolved.size() != num_vars) throw InputError("OBDD is not ordered: variable order has a cycle");
    }

    Obdd d;
    d.order_ = std::move(resolved);
    d.num_vars_ = num_vars;
    d.store_ = std::make_shared<const std::vector<Node>>(nodes);
    d.root_ = *root;
    if (auto problem = d.check_structure()) throw InputError("invalid OBDD: " + *problem);

    NodeId new_root = 0;
    d.store_ = std::make_shared<const std::vector<Node>>(canonical_store(nodes, *root, new_root));
    d.root_ = new_root;
    return d;
}

bool Obdd::operator==(const Obdd& other) const {
    if (store_->size() != other.store_->size() || root() != other.root()) return false;
    for (NodeId id = 2; id < store_->size(); ++id) {
        const auto a = node(id);
        const auto b = other.node(id);
        if (a.var != b.var || a.high != b.high || a.low != b.low) return false;
    }
    return true;
}

std::vector<Var> variable_order(const FeatureSpace& space, std::string_view names) {
    if (names.empty()) return space.vars();
    const Term listed = parse_term(names, space);
    std::vector<Var> order;
    std::string_view rest = names;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        std::string item;
        for (char c : rest.substr(0, comma))
            if (!std::isspace(static_cast<unsigned char>(c))) item += c;
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (!item.empty() && item.front() == '~') throw InputError("variable order lists features, not literals");
        order.push_back(space.require(item));
    }
    if (listed.size() != space.size()) throw InputError("variable order must list every feature exactly once");
    return order;
}

}  // namespace reasons
