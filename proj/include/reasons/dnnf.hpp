#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reasons/nnf.hpp"

namespace reasons {

struct Violation {
    enum class Kind { Structure, Decomposability, DecisionForm };
    Kind kind;
    NodeId node;
    std::string message;
};

std::string describe(const Violation& v);

// Checks decomposability of every and-gate and decision form of every or-gate:
// exactly two inputs, each an and-gate holding the literal X (resp. ~X) of the
// gate's decision variable X. Returns the first offending gate in node order.
std::optional<Violation> validate(const Nnf& c);

// A validated Decision-DNNF circuit with per-node variable sets.
class DecisionDnnf {
public:
    struct Branches {
        NodeId high;  // and-gate X & mu
        NodeId low;   // and-gate ~X & nu
    };

    // Throws InputError when validate() reports a violation.
    static DecisionDnnf from_nnf(Nnf circuit);

    const Nnf& circuit() const { return circuit_; }
    std::size_t size() const { return circuit_.size(); }
    NodeId root() const { return circuit_.root(); }

    std::span<const Var> vars(NodeId id) const {
        return {var_data_.data() + var_offsets_[id], var_offsets_[id + 1] - var_offsets_[id]};
    }
    // Only meaningful for or-gates.
    Branches branches(NodeId or_gate) const { return branches_[or_gate]; }

private:
    Nnf circuit_;
    std::vector<std::uint32_t> var_offsets_;
    std::vector<Var> var_data_;
    std::vector<Branches> branches_;
};

// Maps variable numbers used in a .nnf file to features.
class VarMap {
public:
    VarMap() = default;
    // File variable i is feature i; missing features are named x<i>.
    static VarMap identity(std::size_t num_vars, FeatureSpace& space);

    void set(std::uint64_t file_var, Var feature) { map_[file_var] = feature; }
    std::optional<Var> lookup(std::uint64_t file_var) const;
    bool empty() const { return map_.empty(); }

private:
    std::unordered_map<std::uint64_t, Var> map_;
};

// Lines "index name"; names are appended to `space` when absent.
VarMap parse_varmap(std::string_view text, FeatureSpace& space);
std::string print_varmap(const FeatureSpace& space);

// Reads the c2d-family format: "nnf v e n", then v lines of "L l",
// "A c i1..ic" or "O j c i1..ic"; the last node is the root. "A 0" is
// constant 1 and "O 0 0" constant 0. Or-gate inputs that are a bare literal X
// become X & 1; a constant-0 input opposite a branch on X becomes ~X & 0.
// With an empty varmap, file variables must not exceed n and are used as
// feature indices directly.
DecisionDnnf parse_nnf(std::string_view text, const VarMap& varmap);

// Raw reader without validation; or-gate normalization is still applied.
// `header` names the expected first token ("nnf", or "rnnf" for reason circuits).
Nnf parse_nnf_unvalidated(std::string_view text, const VarMap& varmap, std::string_view header = "nnf");

// Writes variables as feature indices.
std::string print_nnf(const Nnf& c, std::string_view header = "nnf");
inline std::string print_nnf(const DecisionDnnf& c) { return print_nnf(c.circuit()); }

}  // namespace reasons
