#include "reasons/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "reasons/dnnf.hpp"
#include "reasons/error.hpp"
#include "reasons/formula.hpp"
#include "reasons/obdd.hpp"
#include "reasons/oracle.hpp"
#include "reasons/queries.hpp"
#include "reasons/reason.hpp"

namespace reasons::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct UsageError : Error {
    using Error::Error;
};

struct Options {
    std::string classifier;
    std::string negated;
    std::string features;
    std::string varmap;
    std::string instance;
    std::optional<std::string> protected_names;
    std::string order;
    std::string rho;
    std::string tau;
    std::string output;
    std::string format = "text";
    std::size_t budget = 1'000'000;
    bool all_instances = false;
    bool stages = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw InputError("cannot write " + path.string());
}

std::string extension(const std::string& path) { return fs::path(path).extension().string(); }

void cover(FeatureSpace& space, std::size_t n) {
    for (Var v = static_cast<Var>(space.size()) + 1; v <= n; ++v) space.add("x" + std::to_string(v));
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// A classifier with its feature space and a reference function for the oracle.
struct Loaded {
    FeatureSpace space;
    Classifier classifier;
    std::optional<Formula> formula;
    std::string hash;
};

DecisionDnnf load_nnf(const std::string& path, const VarMap& varmap, FeatureSpace& space) {
    const std::string text = read_file(path);
    DecisionDnnf d = parse_nnf(text, varmap);
    cover(space, d.circuit().max_var());
    return d;
}

Loaded load(const Options& o) {
    if (o.classifier.empty()) throw UsageError("--classifier is required");
    Loaded l;
    if (!o.features.empty()) l.space = parse_feature_space(read_file(o.features));
    const std::string ext = extension(o.classifier);

    if (ext == ".dsl") {
        if (!o.negated.empty()) throw UsageError("--negated-classifier only applies to .nnf classifiers");
        l.formula = parse_formula(read_file(o.classifier), l.space);
        const auto order = variable_order(l.space, o.order);
        l.classifier = Classifier::from_obdd(Obdd::compile(*l.formula, order));
    } else if (ext == ".obdd") {
        if (!o.negated.empty()) throw UsageError("--negated-classifier only applies to .nnf classifiers");
        const std::string text = read_file(o.classifier);
        std::istringstream header(text);
        std::string tag;
        std::size_t nv = 0;
        if (header >> tag >> nv && tag == "obdd") cover(l.space, nv);
        std::vector<Var> order;
        if (!o.order.empty()) order = variable_order(l.space, o.order);
        l.classifier = Classifier::from_obdd(Obdd::parse(text, order));
    } else if (ext == ".nnf") {
        if (!o.order.empty()) throw UsageError("--order does not apply to .nnf classifiers");
        VarMap varmap;
        fs::path map_path = o.varmap;
        if (map_path.empty()) {
            map_path = fs::path(o.classifier).replace_extension(".varmap");
            if (!fs::exists(map_path)) map_path.clear();
        }
        if (!map_path.empty()) varmap = parse_varmap(read_file(map_path.string()), l.space);
        DecisionDnnf pos = load_nnf(o.classifier, varmap, l.space);
        std::optional<DecisionDnnf> neg;
        if (!o.negated.empty()) neg = load_nnf(o.negated, varmap, l.space);
        l.classifier = Classifier::from_circuits(std::move(pos), std::move(neg));
    } else {
        throw UsageError("unknown classifier type '" + ext + "' (expected .dsl, .obdd or .nnf)");
    }

    if (o.protected_names) {
        l.space.clear_protected();
        if (!o.protected_names->empty()) {
            for (Literal lit : parse_term(*o.protected_names, l.space)) {
                if (!lit.positive()) throw InputError("protected features are listed without '~'");
                l.space.set_protected(lit.var(), true);
            }
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(print_nnf(l.classifier.circuit_for(true)))));
    l.hash = buf;
    return l;
}

Json term_json(const Term& t, const FeatureSpace& space) {
    Json j = Json::array();
    for (Literal l : t) j.push_back(to_string(l, space));
    return j;
}

Json instance_json(const Instance& a, const FeatureSpace& space) { return term_json(a.as_term(), space); }

Json terms_json(std::span<const Term> ts, const FeatureSpace& space) {
    Json j = Json::array();
    for (const auto& t : ts) j.push_back(term_json(t, space));
    return j;
}

Json header(const std::string& command, const Options& o, const Loaded& l) {
    Json j;
    j["command"] = command;
    j["classifier"] = {{"source", o.classifier}, {"hash", l.hash}};
    return j;
}

Instance require_instance(const Options& o, const Loaded& l) {
    if (o.instance.empty()) throw UsageError("--instance is required");
    return parse_instance(o.instance, l.space);
}

Json circuit_json(const Nnf& c, const FeatureSpace& space) {
    return Json{{"nodes", c.size()}, {"edges", c.edge_count()}, {"expression", to_expression(c, space)}};
}

Json cmd_explain(const Options& o) {
    const Loaded l = load(o);
    const Instance a = require_instance(o, l);
    const DecisionCase dc = make_case(l.classifier, a);
    ReasonBuildStats stats;
    const ReasonCircuit r = build_reason(dc, &stats);
    const auto reasons = sufficient_reasons(dc);
    const auto nr = necessary_reason(dc, r);

    Json j = header("explain", o, l);
    j["instance"] = instance_json(a, l.space);
    j["decision"] = dc.decision ? 1 : 0;
    j["sufficient_reasons"] = terms_json(reasons.terms(), l.space);
    j["necessary_property"] = term_json(necessary_property(r), l.space);
    j["necessary_reason"] = nr ? term_json(*nr, l.space) : Json(nullptr);
    j["reason_circuit"] = circuit_json(r.circuit(), l.space);
    j["reason_circuit"]["input_nodes"] = stats.input_size;
    if (o.stages) {
        const ReasonStages s = build_reason_stages(dc);
        j["stages"] = {{"decision_dnnf", circuit_json(dc.circuit->circuit(), l.space)},
                       {"consensus", circuit_json(s.consensus, l.space)},
                       {"filtered", circuit_json(s.filtered.circuit(), l.space)},
                       {"simplified", circuit_json(s.simplified.circuit(), l.space)}};
    }
    return j;
}

Json cmd_bias(const Options& o) {
    const Loaded l = load(o);
    if (l.space.protected_vars().empty()) {
        throw UsageError("no protected features: mark them in --features or pass --protected");
    }
    const Instance a = require_instance(o, l);
    const DecisionCase dc = make_case(l.classifier, a);
    const ReasonCircuit r = build_reason(dc);
    const auto reasons = sufficient_reasons(dc);
    const BiasVerdict v = assess_bias(r, reasons, l.space);

    Json j = header("bias", o, l);
    j["instance"] = instance_json(a, l.space);
    std::vector<Literal> prot;
    for (Var p : l.space.protected_vars()) prot.emplace_back(p, true);
    j["protected"] = term_json(Term::from_sorted(std::move(prot)), l.space);
    j["decision"] = dc.decision ? 1 : 0;
    j["decision_biased"] = v.decision_biased;
    if (const auto* b = std::get_if<Biased>(&v.classifier_verdict)) {
        Json c{{"verdict", "biased"}, {"witness", term_json(b->witness, l.space)}};
        const auto pair = bias_witness_pair(l.classifier, b->witness, l.space, o.budget);
        if (pair) {
            c["instance_pair"] = Json::array({instance_json(pair->first, l.space), instance_json(pair->second, l.space)});
            c["pair_decisions"] = Json::array({l.classifier.decide(pair->first) ? 1 : 0,
                                               l.classifier.decide(pair->second) ? 1 : 0});
        } else {
            c["instance_pair"] = nullptr;
        }
        j["classifier_verdict"] = std::move(c);
    } else {
        j["classifier_verdict"] = Json{{"verdict", "inconclusive"}};
    }
    return j;
}

Json cmd_counterfactual(const Options& o) {
    const Loaded l = load(o);
    const Instance a = require_instance(o, l);
    if (o.tau.empty()) throw UsageError("--tau is required");
    const Term tau = parse_term(o.tau, l.space);
    const Term rho = o.rho.empty() ? Term{} : parse_term(o.rho, l.space);

    Json j = header("counterfactual", o, l);
    j["instance"] = instance_json(a, l.space);
    j["statement"] = rho.empty() ? "because" : "even-if-because";
    j["rho"] = term_json(rho, l.space);
    j["tau"] = term_json(tau, l.space);
    bool holds = false;
    if (rho.empty()) {
        const DecisionCase dc = make_case(l.classifier, a);
        holds = holds_because(build_reason(dc), tau);
        j["decision"] = dc.decision ? 1 : 0;
    } else {
        holds = sticks_even_if_because(l.classifier, a, rho, tau);
        j["decision"] = l.classifier.decide(a) ? 1 : 0;
    }
    j["holds"] = holds;
    if (holds) {
        const Instance beta = a.flipped(rho);
        const DecisionCase dc = make_case(l.classifier, beta);
        const ReasonCircuit r = build_reason(dc);
        j["changed_instance"] = instance_json(beta, l.space);
        j["changed_decision"] = dc.decision ? 1 : 0;
        j["complete_reason"] = circuit_json(r.circuit(), l.space);
        j["complete_reason"]["sufficient_reasons"] = terms_json(sufficient_reasons(dc).terms(), l.space);
    }
    return j;
}

Json cmd_compile(const Options& o) {
    if (extension(o.classifier) != ".dsl") throw UsageError("compile needs a .dsl classifier");
    FeatureSpace space;
    if (!o.features.empty()) space = parse_feature_space(read_file(o.features));
    const Formula f = parse_formula(read_file(o.classifier), space);
    const Obdd d = Obdd::compile(f, variable_order(space, o.order));
    const DecisionDnnf pos = d.to_decision_dnnf();
    const DecisionDnnf neg = d.negate().to_decision_dnnf();

    fs::path base = o.output.empty() ? fs::path(o.classifier).replace_extension() : fs::path(o.output);
    const auto with = [&](const std::string& suffix) { return fs::path(base.string() + suffix); };
    write_file(with(".obdd"), d.serialize());
    write_file(with(".nnf"), print_nnf(pos));
    write_file(with(".neg.nnf"), print_nnf(neg));
    write_file(with(".varmap"), print_varmap(space));
    write_file(with(".features"), print_feature_space(space));

    Json j;
    j["command"] = "compile";
    j["classifier"] = {{"source", o.classifier}};
    j["features"] = space.size();
    j["obdd"] = {{"file", with(".obdd").string()}, {"nodes", d.node_count()}};
    j["decision_dnnf"] = {{"file", with(".nnf").string()}, {"nodes", pos.size()}};
    j["negated_decision_dnnf"] = {{"file", with(".neg.nnf").string()}, {"nodes", neg.size()}};
    j["varmap"] = with(".varmap").string();
    j["feature_file"] = with(".features").string();
    return j;
}

struct Mismatch {
    Instance instance;
    std::string query;
    std::string engine;
    std::string oracle;
};

std::string terms_text(std::span<const Term> ts, const FeatureSpace& space) {
    std::string s = "{";
    for (std::size_t i = 0; i < ts.size(); ++i) s += (i ? ", (" : "(") + to_string(ts[i], space) + ")";
    return s + "}";
}

class OracleCheck {
public:
    OracleCheck(const Loaded& l)
        : l_(l),
          table_(l.formula ? TruthTable::of(*l.formula, l.space.size())
                 : l.classifier.obdd()
                     ? TruthTable(l.space.size(), [&](const Instance& a) { return l.classifier.obdd()->evaluate(a); })
                     : TruthTable::of(l.classifier.circuit_for(true).circuit(), l.space.size())) {}

    std::size_t skipped() const { return skipped_; }

    std::optional<Mismatch> check(const Instance& a) {
        const FeatureSpace& s = l_.space;
        auto fail = [&](std::string query, std::string engine, std::string oracle) {
            return Mismatch{a, std::move(query), std::move(engine), std::move(oracle)};
        };
        const bool d = table_.value(a);
        if (l_.classifier.decide(a) != d) return fail("decision", std::to_string(!d), std::to_string(d));
        if (!l_.classifier.has_circuit_for(d)) {
            ++skipped_;
            return std::nullopt;
        }
        const TruthTable decided = d ? table_ : table_.negated();
        if (!circuit_ok_[d]) {
            if (!(TruthTable::of(l_.classifier.circuit_for(d).circuit(), s.size()) == decided)) {
                return fail(d ? "circuit" : "negated-circuit", "differs from the decided function",
                            "reference truth table");
            }
            circuit_ok_[d] = true;
        }
        const DecisionCase dc = make_case(l_.classifier, a);
        const ReasonCircuit r = build_reason(dc);

        const auto reasons = sufficient_reasons(dc);
        const auto expected = oracle_sufficient_reasons(table_, a);
        if (!std::equal(reasons.begin(), reasons.end(), expected.begin(), expected.end())) {
            return fail("sufficient-reasons", terms_text(reasons.terms(), s), terms_text(expected, s));
        }
        if (!(TruthTable::of(r.circuit(), s.size()) == TruthTable::of(oracle_complete_reason(table_, a), s.size()))) {
            return fail("complete-reason", to_expression(r.circuit(), s), "disjunction " + terms_text(expected, s));
        }
        const Term np = necessary_property(r);
        const Term np_expected = oracle_necessary_property(table_, a);
        if (!(np == np_expected)) {
            return fail("necessary-property", to_string(np, s), to_string(np_expected, s));
        }
        const auto nr = necessary_reason(dc, r);
        const bool nr_expected = expected.size() == 1;
        if (nr.has_value() != nr_expected || (nr && !(*nr == expected.front()))) {
            return fail("necessary-reason", nr ? to_string(*nr, s) : "none",
                        nr_expected ? to_string(expected.front(), s) : "none");
        }
        if (!s.protected_vars().empty()) {
            const bool biased = decision_is_biased(r, s);
            if (biased != oracle_decision_bias(table_, a, s)) {
                return fail("decision-bias", std::to_string(biased), std::to_string(!biased));
            }
            if (std::holds_alternative<Biased>(classifier_bias_witness(reasons, s))) {
                if (!classifier_biased_) classifier_biased_ = oracle_classifier_bias(table_, s);
                if (!*classifier_biased_) return fail("classifier-bias", "biased", "unbiased");
            }
        }
        return std::nullopt;
    }

private:
    const Loaded& l_;
    TruthTable table_;
    bool circuit_ok_[2] = {false, false};
    std::optional<bool> classifier_biased_;
    std::size_t skipped_ = 0;
};

struct CheckResult {
    Json report;
    bool passed;
};

CheckResult cmd_oracle_check(const Options& o) {
    const Loaded l = load(o);
    if (l.space.size() > TruthTable::kMaxVars) {
        throw InputError("oracle-check is limited to " + std::to_string(TruthTable::kMaxVars) + " features");
    }
    OracleCheck check(l);
    std::vector<Instance> instances;
    if (o.all_instances) {
        for (std::uint64_t row = 0; row < (std::uint64_t{1} << l.space.size()); ++row) {
            instances.push_back(Instance::from_bits(l.space.size(), row));
        }
    } else {
        instances.push_back(require_instance(o, l));
    }
    std::optional<Mismatch> mismatch;
    std::size_t checked = 0;
    for (const auto& a : instances) {
        ++checked;
        mismatch = check.check(a);
        if (mismatch) break;
    }
    Json j = header("oracle-check", o, l);
    j["instances_checked"] = checked;
    j["skipped_negative_decisions"] = check.skipped();
    j["status"] = mismatch ? "fail" : "pass";
    if (mismatch) {
        j["first_mismatch"] = {{"instance", instance_json(mismatch->instance, l.space)},
                               {"query", mismatch->query},
                               {"engine", mismatch->engine},
                               {"oracle", mismatch->oracle}};
    }
    return {std::move(j), !mismatch};
}

std::string scalar_text(const Json& v) {
    if (v.is_null()) return "none";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + scalar_text(v[i]);
        return s + ")";
    }
    return v.dump();
}

void render_text(const Json& j, std::ostream& out, int indent) {
    const std::string pad(indent, ' ');
    for (const auto& [key, v] : j.items()) {
        if (v.is_object()) {
            out << pad << key << ":\n";
            render_text(v, out, indent + 2);
        } else if (v.is_array() && !v.empty() && v.front().is_array()) {
            out << pad << key << ":\n";
            for (const auto& item : v) out << pad << "  " << scalar_text(item) << '\n';
        } else {
            out << pad << key << ": " << scalar_text(v) << '\n';
        }
    }
}

std::string render(const Json& j, const std::string& format) {
    if (format == "json" || format == "structured") return j.dump(2) + "\n";
    std::ostringstream s;
    render_text(j, s, 0);
    return s.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Explain, audit and cross-check decisions of Boolean classifiers", "reasons"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--classifier", o.classifier, "Classifier: .dsl formula, .obdd or .nnf Decision-DNNF")
            ->required();
        sub->add_option("--features", o.features, "Feature file, one name per line, ' *' marks protected");
        sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "json", "structured"}));
        sub->add_option("--output", o.output, "Write the report to this file");
    };
    auto loading = [&](CLI::App* sub) {
        sub->add_option("--order", o.order, "Comma-separated variable order for OBDD compilation");
        sub->add_option("--negated-classifier", o.negated, "Decision-DNNF of the negated classifier (.nnf)");
        sub->add_option("--varmap", o.varmap, "Variable map for .nnf input (default: sibling .varmap file)");
        sub->add_option("--protected", o.protected_names, "Comma-separated protected features (overrides --features)");
    };

    auto* explain = app.add_subcommand("explain", "Sufficient reasons, necessary property and reason circuit");
    common(explain);
    loading(explain);
    explain->add_option("--instance", o.instance, "Instance, e.g. E,~F,G")->required();
    explain->add_flag("--stages", o.stages, "Also report every stage of the reason-circuit construction");

    auto* bias = app.add_subcommand("bias", "Decision bias and classifier-bias witness");
    common(bias);
    loading(bias);
    bias->add_option("--instance", o.instance, "Instance")->required();
    bias->add_option("--budget", o.budget, "Classifier evaluations allowed when searching a witness pair");

    auto* counterfactual = app.add_subcommand("counterfactual", "'because' and 'even if ... because' statements");
    common(counterfactual);
    loading(counterfactual);
    counterfactual->add_option("--instance", o.instance, "Instance")->required();
    counterfactual->add_option("--rho", o.rho, "Property of the instance to change (empty for 'because')");
    counterfactual->add_option("--tau", o.tau, "Property claimed to be the complete reason")->required();

    auto* compile = app.add_subcommand("compile", "Compile a .dsl classifier to OBDD and Decision-DNNF files");
    common(compile);
    compile->add_option("--order", o.order, "Comma-separated variable order");

    auto* oracle = app.add_subcommand("oracle-check", "Compare every query against the truth-table oracle");
    common(oracle);
    loading(oracle);
    oracle->add_option("--instance", o.instance, "Instance to check");
    oracle->add_flag("--all-instances", o.all_instances, "Check every instance");

    std::vector<std::string> argv_store{"reasons"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInputError;
    }

    try {
        Json report;
        int code = kOk;
        if (explain->parsed()) {
            report = cmd_explain(o);
        } else if (bias->parsed()) {
            report = cmd_bias(o);
        } else if (counterfactual->parsed()) {
            report = cmd_counterfactual(o);
        } else if (compile->parsed()) {
            report = cmd_compile(o);
        } else {
            auto r = cmd_oracle_check(o);
            report = std::move(r.report);
            if (!r.passed) code = kMismatch;
        }
        const std::string text = render(report, o.format);
        if (!o.output.empty() && !compile->parsed()) {
            write_file(o.output, text);
        } else {
            out << text;
        }
        if (code == kMismatch) err << "error: oracle mismatch in query '" << report["first_mismatch"]["query"].get<std::string>() << "'\n";
        return code;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kInputError;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << '\n';
        return kPrecondition;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}

}  // namespace reasons::cli
