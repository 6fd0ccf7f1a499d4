#include "reasons/oracle.hpp"

#include <algorithm>
#include <unordered_set>

#include "reasons/error.hpp"

namespace reasons {

TruthTable::TruthTable(std::size_t num_vars, const std::function<bool(const Instance&)>& f) {
    if (num_vars > kMaxVars) {
        throw InputError("truth table limited to " + std::to_string(kMaxVars) + " variables");
    }
    num_vars_ = num_vars;
    bits_.resize(rows());
    for (std::uint64_t row = 0; row < rows(); ++row) bits_[row] = f(Instance::from_bits(num_vars, row));
}

TruthTable TruthTable::of(const Formula& f, std::size_t num_vars) {
    const auto vars = variables(f);
    if (!vars.empty() && vars.back() > num_vars) throw InputError("formula mentions variables beyond the table");
    return TruthTable(num_vars, [&](const Instance& a) { return evaluate(f, a); });
}

TruthTable TruthTable::of(const Nnf& c, std::size_t num_vars) {
    if (c.max_var() > num_vars) throw InputError("circuit mentions variables beyond the table");
    return TruthTable(num_vars, [&](const Instance& a) { return evaluate(c, a); });
}

TruthTable TruthTable::negated() const {
    TruthTable t = *this;
    t.bits_.flip();
    return t;
}

std::vector<Term> all_prime_implicants(const TruthTable& f) {
    const std::size_t n = f.num_vars();
    std::vector<std::uint64_t> pow3(n + 1, 1);
    for (std::size_t i = 1; i <= n; ++i) pow3[i] = pow3[i - 1] * 3;

    // Digit i of a cube (base 3) describes variable i+1: 0 false, 1 true, 2 free.
    std::vector<char> implicant(pow3[n]);
    for (std::uint64_t cube = 0; cube < pow3[n]; ++cube) {
        std::uint64_t rest = cube;
        std::uint64_t row = 0;
        std::size_t free_digit = n;
        for (std::size_t i = 0; i < n; ++i, rest /= 3) {
            const auto d = rest % 3;
            if (d == 2) {
                free_digit = i;
                break;
            }
            row |= static_cast<std::uint64_t>(d) << i;
        }
        if (free_digit == n) {
            implicant[cube] = f.at(row);
        } else {
            const std::uint64_t low = cube - 2 * pow3[free_digit];
            implicant[cube] = implicant[low] && implicant[low + pow3[free_digit]];
        }
    }

    std::vector<Term> out;
    for (std::uint64_t cube = 0; cube < pow3[n]; ++cube) {
        if (!implicant[cube]) continue;
        bool prime = true;
        std::vector<Literal> lits;
        std::uint64_t rest = cube;
        for (std::size_t i = 0; i < n && prime; ++i, rest /= 3) {
            const auto d = rest % 3;
            if (d == 2) continue;
            if (implicant[cube + (2 - d) * pow3[i]]) prime = false;
            lits.emplace_back(static_cast<Var>(i + 1), d == 1);
        }
        if (prime) out.push_back(Term::from_sorted(std::move(lits)));
    }
    sort_canonical(out);
    return out;
}

std::vector<Term> prime_implicants_by_consensus(const TruthTable& f) {
    const std::size_t n = f.num_vars();
    // A cube is (mask of fixed variables, their values), packed in 64 bits.
    auto pack = [](std::uint32_t mask, std::uint32_t value) { return std::uint64_t{mask} << 32 | value; };
    const std::uint32_t full = n == 0 ? 0 : static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1);

    std::vector<std::uint64_t> level;
    for (std::uint64_t row = 0; row < f.rows(); ++row) {
        if (f.at(row)) level.push_back(pack(full, static_cast<std::uint32_t>(row)));
    }
    std::vector<Term> out;
    while (!level.empty()) {
        const std::unordered_set<std::uint64_t> present(level.begin(), level.end());
        std::unordered_set<std::uint64_t> merged;
        std::unordered_set<std::uint64_t> next;
        for (std::uint64_t c : level) {
            const auto mask = static_cast<std::uint32_t>(c >> 32);
            const auto value = static_cast<std::uint32_t>(c);
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint32_t bit = 1u << i;
                if (!(mask & bit)) continue;
                if (present.count(pack(mask, value ^ bit))) {
                    merged.insert(c);
                    next.insert(pack(mask & ~bit, value & ~bit));
                }
            }
        }
        for (std::uint64_t c : level) {
            if (merged.count(c)) continue;
            const auto mask = static_cast<std::uint32_t>(c >> 32);
            const auto value = static_cast<std::uint32_t>(c);
            std::vector<Literal> lits;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask >> i & 1u) lits.emplace_back(static_cast<Var>(i + 1), (value >> i & 1u) != 0);
            }
            out.push_back(Term::from_sorted(std::move(lits)));
        }
        level.assign(next.begin(), next.end());
    }
    sort_canonical(out);
    return out;
}

std::vector<Term> oracle_sufficient_reasons(const TruthTable& f, const Instance& a) {
    if (a.size() != f.num_vars()) throw InputError("instance size does not match the truth table");
    const TruthTable decided = f.value(a) ? f : f.negated();
    std::vector<Term> out;
    for (auto& t : all_prime_implicants(decided)) {
        if (a.satisfies(t)) out.push_back(std::move(t));
    }
    return out;
}

Formula oracle_complete_reason(const TruthTable& f, const Instance& a) {
    return Formula::dnf(oracle_sufficient_reasons(f, a));
}

Term oracle_necessary_property(const TruthTable& f, const Instance& a) {
    const auto reasons = oracle_sufficient_reasons(f, a);
    std::vector<Literal> out;
    for (Var v = 1; v <= a.size(); ++v) {
        const Literal l = a.literal(v);
        if (std::all_of(reasons.begin(), reasons.end(), [&](const Term& t) { return t.contains(l); })) {
            out.push_back(l);
        }
    }
    return Term::from_sorted(std::move(out));
}

bool oracle_decision_bias(const TruthTable& f, const Instance& a, const FeatureSpace& space) {
    if (a.size() != f.num_vars() || space.size() < f.num_vars()) {
        throw InputError("instance, feature space and truth table disagree in size");
    }
    std::vector<Var> prot;
    for (Var v = 1; v <= f.num_vars(); ++v) {
        if (space.is_protected(v)) prot.push_back(v);
    }
    const bool d = f.value(a);
    const std::uint64_t base = a.bits();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << prot.size()); ++mask) {
        std::uint64_t row = base;
        for (std::size_t i = 0; i < prot.size(); ++i) {
            if (mask >> i & 1u) row ^= std::uint64_t{1} << (prot[i] - 1);
        }
        if (f.at(row) != d) return true;
    }
    return false;
}

bool oracle_classifier_bias(const TruthTable& f, const FeatureSpace& space) {
    for (std::uint64_t row = 0; row < f.rows(); ++row) {
        if (oracle_decision_bias(f, Instance::from_bits(f.num_vars(), row), space)) return true;
    }
    return false;
}

}  // namespace reasons
