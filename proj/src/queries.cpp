#include "reasons/queries.hpp"

#include <algorithm>

#include "reasons/error.hpp"
#include "rewrite.hpp"

namespace reasons {

namespace {

void count(QueryStats* stats) {
    if (stats) ++stats->visited;
}

// Shared pass for satisfiability and validity: `leaf` gives the value of a
// literal leaf.
template <class LeafFn>
bool monotone_pass(const Nnf& r, LeafFn leaf, QueryStats* stats) {
    if (r.size() == 0) return false;
    detail::PolarityTracker polarity;
    std::vector<char> value(r.size());
    for (NodeId id = 0; id < r.size(); ++id) {
        count(stats);
        const auto& n = r.node(id);
        switch (n.kind) {
            case GateKind::False: value[id] = 0; break;
            case GateKind::True: value[id] = 1; break;
            case GateKind::Literal:
                polarity.see(n.literal);
                value[id] = leaf(n.literal);
                break;
            case GateKind::And: {
                char v = 1;
                for (auto k : r.children(id)) v &= value[k];
                value[id] = v;
                break;
            }
            case GateKind::Or: {
                char v = 0;
                for (auto k : r.children(id)) v |= value[k];
                value[id] = v;
                break;
            }
        }
    }
    return value[r.root()] != 0;
}

}  // namespace

bool is_satisfiable(const Nnf& r, QueryStats* stats) {
    return monotone_pass(r, [](Literal) { return char{1}; }, stats);
}

bool is_satisfiable(const Nnf& r, const Term& assumption, QueryStats* stats) {
    return monotone_pass(
        r, [&](Literal l) { return static_cast<char>(!assumption.contains(l.negated())); }, stats);
}

bool is_valid(const Nnf& r, QueryStats* stats) {
    return monotone_pass(r, [](Literal) { return char{0}; }, stats);
}

Nnf mnegate(const Nnf& r, QueryStats* stats) {
    detail::PolarityTracker polarity;
    NnfBuilder b;
    std::vector<NodeId> map(r.size());
    std::vector<NodeId> kids;
    for (NodeId id = 0; id < r.size(); ++id) {
        count(stats);
        const auto& n = r.node(id);
        switch (n.kind) {
            case GateKind::False: map[id] = b.constant(true); break;
            case GateKind::True: map[id] = b.constant(false); break;
            case GateKind::Literal:
                polarity.see(n.literal);
                map[id] = b.literal(n.literal.negated());
                break;
            case GateKind::And:
            case GateKind::Or:
                kids.clear();
                for (auto k : r.children(id)) kids.push_back(map[k]);
                map[id] = n.kind == GateKind::And ? b.disjunction(kids) : b.conjunction(kids);
                break;
        }
    }
    const NodeId root = r.size() == 0 ? b.constant(true) : map[r.root()];
    return std::move(b).build(root);
}

Nnf mcondition(const Nnf& r, const Term& t, QueryStats* stats) {
    detail::PolarityTracker polarity;
    return detail::propagate(
        r,
        [&](Literal l) {
            polarity.see(l);
            if (t.contains(l)) return detail::LeafAction::True;
            if (t.contains(l.negated())) return detail::LeafAction::False;
            return detail::LeafAction::Keep;
        },
        [&](NodeId) { count(stats); });
}

Nnf mexists(const Nnf& r, std::span<const Var> vars, QueryStats* stats) {
    detail::PolarityTracker polarity;
    std::vector<bool> quantified;
    for (Var v : vars) {
        if (v >= quantified.size()) quantified.resize(v + 1, false);
        quantified[v] = true;
    }
    return detail::propagate(
        r,
        [&](Literal l) {
            polarity.see(l);
            const Var v = l.var();
            return v < quantified.size() && quantified[v] ? detail::LeafAction::True : detail::LeafAction::Keep;
        },
        [&](NodeId) { count(stats); });
}

SufficientReasonSet::SufficientReasonSet(std::vector<Term> terms) : terms_(std::move(terms)) {
    sort_canonical(terms_);
}

bool SufficientReasonSet::contains(const Term& t) const {
    return std::find(terms_.begin(), terms_.end(), t) != terms_.end();
}

namespace {

// Trie over sorted terms answering "is some stored term a subset of t".
class SubsetTrie {
public:
    SubsetTrie() : nodes_(1) {}

    void insert(const Term& t) {
        std::size_t at = 0;
        for (Literal l : t) {
            auto& kids = nodes_[at].kids;
            auto it = std::find_if(kids.begin(), kids.end(), [&](const auto& e) { return e.first == l; });
            if (it != kids.end()) {
                at = it->second;
            } else {
                const std::size_t next = nodes_.size();
                kids.emplace_back(l, next);
                nodes_.emplace_back();
                at = next;
            }
        }
        nodes_[at].terminal = true;
    }

    bool has_subset_of(const Term& t) const { return search(0, t.literals(), 0); }

private:
    struct Node {
        std::vector<std::pair<Literal, std::size_t>> kids;
        bool terminal = false;
    };

    bool search(std::size_t at, std::span<const Literal> t, std::size_t from) const {
        const Node& n = nodes_[at];
        if (n.terminal) return true;
        for (const auto& [l, child] : n.kids) {
            const auto it = std::lower_bound(t.begin() + from, t.end(), l);
            if (it != t.end() && *it == l && search(child, t, static_cast<std::size_t>(it - t.begin()) + 1)) {
                return true;
            }
        }
        return false;
    }

    std::vector<Node> nodes_;
};

using TermSet = std::vector<Term>;

Term merge(const Term& a, const Term& b) {
    std::vector<Literal> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return Term::from_sorted(std::move(out));
}

TermSet product(const TermSet& a, const TermSet& b) {
    TermSet out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a) {
        for (const auto& y : b) out.push_back(merge(x, y));
    }
    return remove_subsumed(std::move(out));
}

}  // namespace

std::vector<Term> remove_subsumed(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), canonical_less);
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    SubsetTrie trie;
    std::vector<Term> out;
    for (auto& t : terms) {
        if (trie.has_subset_of(t)) continue;
        trie.insert(t);
        out.push_back(std::move(t));
    }
    return out;
}

SufficientReasonSet sufficient_reasons(const DecisionCase& dc, QueryStats* stats) {
    if (!dc.circuit) throw PreconditionError("decision case has no circuit");
    const DecisionDnnf& d = *dc.circuit;
    const Nnf& c = d.circuit();
    const Instance& a = dc.instance;
    if (c.size() == 0) return SufficientReasonSet{};

    // Inputs of a branch and-gate other than its decision literal.
    auto rest = [&](NodeId branch, Var decision) {
        std::vector<NodeId> out;
        for (auto k : c.children(branch)) {
            const auto& m = c.node(k);
            if (m.kind == GateKind::Literal && m.literal.var() == decision) continue;
            out.push_back(k);
        }
        return out;
    };

    // Only nodes reached through and-gates and branch remainders are needed.
    std::vector<char> needed(c.size(), 0);
    needed[c.root()] = 1;
    for (NodeId id = c.root() + 1; id-- > 0;) {
        if (!needed[id]) continue;
        const auto& n = c.node(id);
        if (n.kind == GateKind::And) {
            for (auto k : c.children(id)) needed[k] = 1;
        } else if (n.kind == GateKind::Or) {
            const auto br = d.branches(id);
            for (NodeId branch : {br.high, br.low}) {
                for (auto k : rest(branch, n.decision)) needed[k] = 1;
            }
        }
    }

    std::vector<TermSet> memo(c.size());
    auto conjoin_all = [&](const std::vector<NodeId>& kids) {
        TermSet acc{Term{}};
        for (auto k : kids) {
            acc = product(acc, memo[k]);
            if (acc.empty()) break;
        }
        return acc;
    };

    for (NodeId id = 0; id <= c.root(); ++id) {
        if (!needed[id]) continue;
        count(stats);
        const auto& n = c.node(id);
        switch (n.kind) {
            case GateKind::False: break;
            case GateKind::True: memo[id] = {Term{}}; break;
            case GateKind::Literal:
                if (a.satisfies(n.literal)) memo[id] = {Term::from_sorted({n.literal})};
                break;
            case GateKind::And: {
                const auto kids = c.children(id);
                memo[id] = conjoin_all(std::vector<NodeId>(kids.begin(), kids.end()));
                break;
            }
            case GateKind::Or: {
                const auto br = d.branches(id);
                const TermSet mu = conjoin_all(rest(br.high, n.decision));
                const TermSet nu = conjoin_all(rest(br.low, n.decision));
                const Literal ell = a.literal(n.decision);
                TermSet out = product(mu, nu);
                const TermSet& gamma = ell.positive() ? mu : nu;
                for (const auto& t : gamma) out.push_back(merge(Term::from_sorted({ell}), t));
                memo[id] = remove_subsumed(std::move(out));
                break;
            }
        }
    }
    return SufficientReasonSet(std::move(memo[c.root()]));
}

Term necessary_property(const ReasonCircuit& r) {
    std::vector<Literal> out;
    for (Var v : circuit_vars(r.circuit())) {
        const Literal l = r.instance().literal(v);
        if (!is_satisfiable(r.circuit(), Term::from_sorted({l.negated()}))) out.push_back(l);
    }
    return Term::from_sorted(std::move(out));
}

std::optional<Term> necessary_reason(const DecisionCase& c, const ReasonCircuit& r) {
    if (!(c.instance == r.instance())) {
        throw PreconditionError("reason circuit was built for a different instance");
    }
    Term np = necessary_property(r);
    if (is_satisfiable(mnegate(r.circuit()), np)) return std::nullopt;
    return np;
}

bool holds_because(const ReasonCircuit& r, const Term& t) {
    if (!r.instance().satisfies(t)) throw PreconditionError("the term is not a property of the instance");
    if (is_satisfiable(mnegate(r.circuit()), t)) return false;
    for (Literal l : t) {
        if (is_satisfiable(r.circuit(), Term::from_sorted({l.negated()}))) return false;
    }
    return true;
}

bool sticks_even_if_because(const Classifier& classifier, const Instance& a, const Term& rho, const Term& tau) {
    if (!a.satisfies(rho)) throw PreconditionError("rho is not a property of the instance");
    if (!a.satisfies(tau)) throw PreconditionError("tau is not a property of the instance");
    for (Literal l : rho) {
        if (tau.mentions(l.var())) throw PreconditionError("rho and tau must be disjoint");
    }
    const DecisionCase flipped = make_case(classifier, a.flipped(rho));
    return holds_because(build_reason(flipped), tau);
}

bool decision_is_biased(const ReasonCircuit& r, const FeatureSpace& space) {
    if (space.protected_vars().empty()) throw PreconditionError("no protected features declared");
    const auto unprotected = space.unprotected_vars();
    return !is_valid(mexists(r.circuit(), unprotected));
}

ClassifierVerdict classifier_bias_witness(const SufficientReasonSet& reasons, const FeatureSpace& space) {
    for (const auto& t : reasons) {
        for (Literal l : t) {
            if (l.var() <= space.size() && space.is_protected(l.var())) return Biased{t};
        }
    }
    return Inconclusive{};
}

BiasVerdict assess_bias(const ReasonCircuit& r, const SufficientReasonSet& reasons, const FeatureSpace& space) {
    BiasVerdict v;
    v.decision_biased = decision_is_biased(r, space);
    v.classifier_verdict = classifier_bias_witness(reasons, space);
    return v;
}

std::optional<std::pair<Instance, Instance>> bias_witness_pair(const Classifier& classifier, const Term& t,
                                                               const FeatureSpace& space, std::size_t budget) {
    std::vector<Var> protected_in_t;
    for (Literal l : t) {
        if (l.var() > space.size()) throw InputError("term mentions an unknown feature");
        if (space.is_protected(l.var())) protected_in_t.push_back(l.var());
    }
    if (protected_in_t.empty()) throw PreconditionError("the term has no protected feature");
    if (protected_in_t.size() >= 63) throw InputError("too many protected features in the term");

    std::vector<Var> free;
    for (Var v : space.vars()) {
        if (!t.mentions(v)) free.push_back(v);
    }
    std::vector<bool> values(space.size(), false);
    for (Literal l : t) values[l.var() - 1] = l.positive();

    const std::uint64_t masks = std::uint64_t{1} << protected_in_t.size();
    std::size_t spent = 0;
    while (true) {
        const Instance beta(values);
        if (spent++ >= budget) return std::nullopt;
        const bool d = classifier.decide(beta);
        for (std::uint64_t mask = 1; mask < masks; ++mask) {
            std::vector<bool> g = values;
            for (std::size_t i = 0; i < protected_in_t.size(); ++i) {
                if (mask >> i & 1u) g[protected_in_t[i] - 1] = !g[protected_in_t[i] - 1];
            }
            const Instance gamma(std::move(g));
            if (spent++ >= budget) return std::nullopt;
            if (classifier.decide(gamma) != d) return std::pair{beta, gamma};
        }
        // Next assignment of the free variables, binary counter from all-false.
        std::size_t i = 0;
        while (i < free.size() && values[free[i] - 1]) values[free[i++] - 1] = false;
        if (i == free.size()) return std::nullopt;
        values[free[i] - 1] = true;
    }
}

}  // namespace reasons
