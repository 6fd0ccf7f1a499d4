#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "reasons/cli.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

std::string data(const std::string& name) { return std::string(REASONS_TEST_DATA) + "/" + name; }

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = reasons::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json run_json(std::vector<std::string> args) {
    args.push_back("--format");
    args.push_back("json");
    const Result r = run(std::move(args));
    REQUIRE(r.code == 0);
    return nlohmann::json::parse(r.out);
}

using Terms = std::vector<std::vector<std::string>>;

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / ("reasons_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("explain reports reasons and the necessary property") {
    const Result r = run({"explain", "--classifier", data("delta1.dsl"), "--instance", "E,~F,~G,W"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("sufficient_reasons:\n  (E, ~F)\n  (E, W)\n") != std::string::npos);
    CHECK(r.out.find("necessary_property: (E)\n") != std::string::npos);
    CHECK(r.out.find("necessary_reason: none\n") != std::string::npos);

    const auto j = run_json({"explain", "--classifier", data("study.dsl"), "--features", data("study.features"),
                             "--instance", "E,F,G,W,~R"});
    CHECK(j["decision"] == 1);
    CHECK(j["necessary_property"] == std::vector<std::string>{"E", "F"});
    CHECK(j["sufficient_reasons"] == Terms{{"E", "F", "G"}, {"E", "F", "W"}});
    CHECK(j["instance"] == std::vector<std::string>{"E", "F", "G", "W", "~R"});
    CHECK(j["classifier"]["hash"].get<std::string>().size() == 16);
}

TEST_CASE("explain with stages") {
    const auto j = run_json({"explain", "--classifier", data("delta1.dsl"), "--instance", "E,F,G,~W", "--stages"});
    CHECK(j["necessary_reason"] == std::vector<std::string>{"E", "G"});
    CHECK(j["stages"].contains("consensus"));
    CHECK(j["stages"]["simplified"]["nodes"] == j["reason_circuit"]["nodes"]);
}

TEST_CASE("input errors exit with status 2") {
    CHECK(run({"explain", "--classifier", data("delta1.dsl"), "--instance", "E,~F"}).code == 2);
    CHECK(run({"explain", "--classifier", data("missing.dsl"), "--instance", "E"}).code == 2);
    CHECK(run({"explain", "--classifier", data("delta1.dsl")}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"explain", "--classifier", data("delta1.dsl"), "--instance", "E,F,G,W", "--format", "xml"}).code == 2);
    const Result r = run({"bias", "--classifier", data("delta1.dsl"), "--instance", "E,F,G,W"});
    CHECK(r.code == 2);
    CHECK(r.err.find("protected") != std::string::npos);
}

TEST_CASE("bias reports") {
    auto j = run_json({"bias", "--classifier", data("study.dsl"), "--features", data("study.features"), "--instance",
                       "E,~F,G,W,R"});
    CHECK(j["decision_biased"] == true);
    CHECK(j["classifier_verdict"]["verdict"] == "biased");

    j = run_json({"bias", "--classifier", data("delta3.dsl"), "--features", data("delta3.features"), "--instance",
                  "G,E,~M,R"});
    CHECK(j["decision_biased"] == false);
    CHECK(j["classifier_verdict"]["witness"] == std::vector<std::string>{"G", "R"});
    const auto pair = j["classifier_verdict"]["instance_pair"];
    REQUIRE(pair.size() == 2);
    CHECK(pair[0] == std::vector<std::string>{"G", "~E", "~M", "R"});
    CHECK(pair[1] == std::vector<std::string>{"G", "~E", "~M", "~R"});

    j = run_json({"bias", "--classifier", data("study.dsl"), "--features", data("study.features"), "--instance",
                  "E,F,G,W,~R"});
    CHECK(j["decision_biased"] == false);

    // --protected overrides the markers of the feature file.
    j = run_json({"bias", "--classifier", data("delta3.dsl"), "--features", data("delta3.features"), "--protected",
                  "E", "--instance", "G,E,~M,R"});
    CHECK(j["protected"] == std::vector<std::string>{"E"});
}

TEST_CASE("counterfactual statements") {
    auto j = run_json({"counterfactual", "--classifier", data("delta2.dsl"), "--instance", "E,F,G,~W,R", "--rho", "G",
                       "--tau", "E,R"});
    CHECK(j["statement"] == "even-if-because");
    CHECK(j["holds"] == true);
    CHECK(j["complete_reason"]["sufficient_reasons"] == Terms{{"E", "R"}});

    j = run_json({"counterfactual", "--classifier", data("delta1.dsl"), "--instance", "E,F,G,~W", "--tau", "E,G"});
    CHECK(j["statement"] == "because");
    CHECK(j["holds"] == true);

    j = run_json({"counterfactual", "--classifier", data("delta1.dsl"), "--instance", "E,~F,~G,W", "--tau", "E,W"});
    CHECK(j["holds"] == false);
    CHECK_FALSE(j.contains("complete_reason"));

    const Result r = run({"counterfactual", "--classifier", data("delta1.dsl"), "--instance", "E,~F,~G,W", "--tau",
                          "E,F"});
    CHECK(r.code == 3);
}

TEST_CASE("compile writes circuit files that load back") {
    const fs::path dir = scratch_dir();
    const std::string base = (dir / "study").string();
    const auto j = run_json({"compile", "--classifier", data("study.dsl"), "--features", data("study.features"),
                             "--output", base});
    CHECK(j["obdd"]["nodes"].get<int>() > 0);
    for (const char* ext : {".obdd", ".nnf", ".neg.nnf", ".varmap", ".features"}) CHECK(fs::exists(base + ext));

    auto e = run_json({"explain", "--classifier", base + ".nnf", "--negated-classifier", base + ".neg.nnf",
                       "--instance", "E,~F,G,W,~R"});
    CHECK(e["decision"] == 0);
    CHECK(e["sufficient_reasons"] == Terms{{"~F", "~R"}});
    e = run_json({"explain", "--classifier", base + ".obdd", "--features", base + ".features", "--instance",
                  "E,~F,G,W,R"});
    CHECK(e["sufficient_reasons"].size() == 4);

    // A negative decision needs the negated circuit.
    const Result r = run({"explain", "--classifier", base + ".nnf", "--instance", "E,~F,G,W,~R"});
    CHECK(r.code == 3);
    CHECK(r.err.find("--negated-classifier") != std::string::npos);

    const auto c = run_json({"compile", "--classifier", data("const.dsl"), "--output", (dir / "const").string()});
    CHECK(c["obdd"]["nodes"] == 0);
    fs::remove_all(dir);
}

TEST_CASE("oracle-check passes on the worked classifiers") {
    auto j = run_json({"oracle-check", "--classifier", data("delta1.dsl"), "--all-instances"});
    CHECK(j["status"] == "pass");
    CHECK(j["instances_checked"] == 16);
    j = run_json({"oracle-check", "--classifier", data("delta3.dsl"), "--features", data("delta3.features"),
                  "--all-instances"});
    CHECK(j["status"] == "pass");
    j = run_json({"oracle-check", "--classifier", data("delta1.nnf"), "--negated-classifier", data("delta1.neg.nnf"),
                  "--all-instances"});
    CHECK(j["status"] == "pass");
    j = run_json({"oracle-check", "--classifier", data("study.dsl"), "--instance", "E,~F,G,W,R"});
    CHECK(j["instances_checked"] == 1);
}

TEST_CASE("oracle-check names the first mismatch on a corrupted circuit") {
    const Result r = run({"oracle-check", "--classifier", data("delta1.nnf"), "--negated-classifier",
                          data("delta1_corrupt.neg.nnf"), "--all-instances", "--format", "json"});
    CHECK(r.code == 4);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["status"] == "fail");
    CHECK(j["first_mismatch"]["query"] == "negated-circuit");
    CHECK(r.err.find("negated-circuit") != std::string::npos);
}

TEST_CASE("reports are byte-identical across runs and --output writes a file") {
    const std::vector<std::string> args{"explain", "--classifier", data("study.dsl"), "--instance", "E,F,G,W,R",
                                        "--format", "json"};
    const Result a = run(args);
    const Result b = run(args);
    CHECK(a.out == b.out);

    const fs::path dir = scratch_dir();
    auto with_output = args;
    with_output.push_back("--output");
    with_output.push_back((dir / "report.json").string());
    const Result c = run(with_output);
    CHECK(c.code == 0);
    CHECK(c.out.empty());
    std::ifstream in(dir / "report.json");
    std::stringstream s;
    s << in.rdbuf();
    CHECK(s.str() == a.out);
    fs::remove_all(dir);
}
