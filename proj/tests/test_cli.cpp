#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

// End-to-end checks of the command-line front door: exit codes are a total
// function of the outcome class, and --format json emits exactly one document
// on stdout.

namespace {

using nlohmann::json;

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(FLATFIX_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/flatfix_cli_") + name;
    std::ofstream f(path);
    f << content;
    return path;
}

const char* kFactExpr =
    R"(["if", ["=", ["input"], ["lit",0]], ["lit",1], ["*", ["input"], ["rec", ["-", ["input"], ["lit",1]]]]])";

}  // namespace

TEST_CASE("run: value, bottom, fault exit codes") {
    std::string fact = write_temp("factorial.imp",
                                  "acc := 1; while not (n = 0) do acc := acc * n; n := n - 1 done");
    RunResult ok = run_cli("run " + fact + " --state '{\"n\":5}' --fuel 100 --format json");
    CHECK(ok.exit_code == 0);
    CHECK(json::parse(ok.out) == json::parse(R"({"acc":120,"n":0})"));

    std::string loop = write_temp("loop.imp", "while true do skip done");
    RunResult bottom = run_cli("run " + loop + " --fuel 1000");
    CHECK(bottom.exit_code == 2);
    CHECK(bottom.out == "no result within fuel 1000\n");
    RunResult bottom_json = run_cli("run " + loop + " --fuel 50 --format json");
    CHECK(bottom_json.exit_code == 2);
    CHECK(json::parse(bottom_json.out).is_null());

    std::string bad = write_temp("bad.imp", "while true do");
    CHECK(run_cli("run " + bad).exit_code == 1);
    RunResult undef = run_cli("run " + fact + " --state '{}'");
    CHECK(undef.exit_code == 1);
    CHECK(run_cli("run /tmp/flatfix_no_such_file.imp").exit_code == 1);
}

TEST_CASE("run: inline program text") {
    RunResult r = run_cli("run 'x := 2 * 3' --inline --format json");
    CHECK(r.exit_code == 0);
    CHECK(json::parse(r.out) == json::parse(R"({"x":6})"));
}

TEST_CASE("trace: emits the iterate chain as JSON") {
    std::string expr = write_temp("fact.json", kFactExpr);
    RunResult r = run_cli("trace " + expr + " 2 --fuel 5 --format json");
    CHECK(r.exit_code == 0);
    CHECK(json::parse(r.out) ==
          json::parse(R"({"input":2,"samples":[null,null,null,2,2,2],"stabilized_at":3})"));

    RunResult neg = run_cli("trace --fuel 5 --format json -- " + expr + " -1");
    CHECK(neg.exit_code == 0);
    json doc = json::parse(neg.out);
    CHECK(doc["stabilized_at"].is_null());
    for (const json& s : doc["samples"]) CHECK(s.is_null());

    RunResult constant = run_cli("trace '[\"lit\",7]' --inline 0 --fuel 1 --format json");
    CHECK(constant.exit_code == 0);
    CHECK(json::parse(constant.out) ==
          json::parse(R"({"input":0,"samples":[null,7],"stabilized_at":1})"));

    CHECK(run_cli("trace '[\"lit\"]' --inline 0").exit_code == 1);
}

TEST_CASE("fix: witness plus realization cross-check") {
    std::string expr = write_temp("fact2.json", kFactExpr);
    RunResult r = run_cli("fix " + expr + " 5 --fuel 100 --guard 1000 --format json");
    CHECK(r.exit_code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["result"] == 120);
    CHECK(doc["witness"] == 6);
    CHECK(doc["realization"]["result"] == 120);
    CHECK(doc["realization"]["guard_exceeded"] == false);

    RunResult neg = run_cli("fix --fuel 50 --guard 1000 --format json -- " + expr + " -1");
    CHECK(neg.exit_code == 2);
    json negdoc = json::parse(neg.out);
    CHECK(negdoc["result"].is_null());
    CHECK(negdoc["witness"].is_null());
    CHECK(negdoc["realization"]["guard_exceeded"] == true);
}

TEST_CASE("check: expression functional passes, flip graph fails") {
    std::string expr = write_temp("fact3.json", kFactExpr);
    RunResult pass = run_cli("check --expr " + expr + " --domain 0,1,2 --clip 0..2 --format json");
    CHECK(pass.exit_code == 0);
    json doc = json::parse(pass.out);
    CHECK(doc["verdict"] == "pass");
    CHECK(doc["monotone"]["verdict"] == "pass");
    CHECK(doc["continuous"]["verdict"] == "pass");
    CHECK(doc["iterates_chain"]["verdict"] == "pass");
    CHECK(doc["tarski"]["verdict"] == "pass");
    CHECK(doc["least_fixpoint"]["status"] == "found");
    CHECK(doc["least_fixpoint"]["table"]["entries"] == json::parse(R"({"0":1,"1":1,"2":2})"));

    // flip on {0,1} -> {0}_bot: bottom |-> constant 0, everything else |-> bottom
    const char* flip_graph = R"({
      "domain": [0, 1], "codomain": [0],
      "graph": [
        {"from": {"domain":[0,1],"entries":{"0":null,"1":null}},
         "to":   {"domain":[0,1],"entries":{"0":0,"1":0}}},
        {"from": {"domain":[0,1],"entries":{"0":null,"1":0}},
         "to":   {"domain":[0,1],"entries":{"0":null,"1":null}}},
        {"from": {"domain":[0,1],"entries":{"0":0,"1":null}},
         "to":   {"domain":[0,1],"entries":{"0":null,"1":null}}},
        {"from": {"domain":[0,1],"entries":{"0":0,"1":0}},
         "to":   {"domain":[0,1],"entries":{"0":null,"1":null}}}
      ]})";
    std::string flip = write_temp("flip.json", flip_graph);
    RunResult fail = run_cli("check --graph " + flip + " --format json");
    CHECK(fail.exit_code == 3);
    json faildoc = json::parse(fail.out);
    CHECK(faildoc["verdict"] == "fail");
    CHECK(faildoc["monotone"]["verdict"] == "fail");
    CHECK(faildoc["monotone"]["counterexample"]["f"]["entries"]["0"].is_null());
    CHECK(faildoc["least_fixpoint"]["status"] == "no_fixpoint");

    // a graph missing one space element is a fault, not a check failure
    const char* incomplete_graph = R"({
      "domain": [0], "codomain": [0],
      "graph": [
        {"from": {"domain":[0],"entries":{"0":null}},
         "to":   {"domain":[0],"entries":{"0":0}}}
      ]})";
    std::string incomplete = write_temp("incomplete.json", incomplete_graph);
    CHECK(run_cli("check --graph " + incomplete).exit_code == 1);
}

TEST_CASE("json mode emits exactly one document") {
    std::string expr = write_temp("fact4.json", kFactExpr);
    for (const std::string& args :
         {std::string("trace ") + expr + " 2 --fuel 3 --format json",
          std::string("fix ") + expr + " 3 --fuel 20 --format json",
          std::string("check --expr ") + expr + " --domain 0,1 --clip 0..1 --format json"}) {
        RunResult r = run_cli(args);
        json doc = json::parse(r.out, nullptr, false);  // parse consumes the whole stream
        CHECK_FALSE(doc.is_discarded());
    }
}
