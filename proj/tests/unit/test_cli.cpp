#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "commands.hpp"

using nlohmann::json;

namespace {

const std::string kData = CDT_DATA_DIR;

struct Run {
    int code;
    std::string out;
    std::string err;
    json report() const { return json::parse(out); }
};

Run cdt_run(std::vector<std::string> args) {
    args.insert(args.begin(), "cdt");
    std::ostringstream out, err;
    int code = cdt::cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return kData + "/" + name; }

std::string temp_file(const std::string& name, const std::string& contents) {
    auto path = std::filesystem::temp_directory_path() / ("cdt_test_" + name);
    std::ofstream(path) << contents;
    return path.string();
}

}  // namespace

TEST_CASE("cli: worlds and compile") {
    Run r = cdt_run({"worlds", data("chain.json")});
    CHECK(r.code == 0);
    CHECK(r.report()["worlds"] == json::array({"0", "1"}));
    r = cdt_run({"compile", data("chain.json"), "tab"});
    CHECK(r.code == 0);
    r = cdt_run({"--limit-tests", "1", "worlds", data("single_utility.json")});
    CHECK(r.code == 0);
}

TEST_CASE("cli: equiv under the sophisticated theory") {
    CHECK(cdt_run({"equiv", data("framing_sophisticated.json"), "f1S", "f2S"}).code == 0);
    CHECK(cdt_run({"equiv", data("framing_naive.json"), "f1S", "f2S"}).code == 1);
}

TEST_CASE("cli: check exit codes") {
    Run r = cdt_run({"check", data("chain.json")});
    CHECK(r.code == 0);
    CHECK(r.report()["holds"] == true);

    r = cdt_run({"check", data("nine_acts.json"), "--brute-force", "1"});
    CHECK(r.code == 1);
    json j = r.report();
    CHECK(j["cancellation"]["holds"] == false);
    CHECK(j["cancellation"]["witness"]["pair"] == json::array({"a13", "a31"}));
    CHECK(j["brute_force"]["holds"] == false);

    r = cdt_run({"check", data("framing_sophisticated.json")});
    CHECK(r.code == 1);
    CHECK(r.report()["cancellation"]["witness"]["pair"] == json::array({"f1R", "f1S"}));
    CHECK(cdt_run({"check", data("framing_naive.json")}).code == 0);
}

TEST_CASE("cli: output is deterministic") {
    for (const char* file : {"chain.json", "incomparable.json", "google.json", "nine_acts.json"}) {
        Run a = cdt_run({"represent", data(file)});
        Run b = cdt_run({"represent", data(file)});
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("cli: represent then verify round trip") {
    for (const char* flag : {"--single-utility", "--multi-prob"}) {
        Run r = cdt_run({"represent", data("chain.json"), flag});
        REQUIRE(r.code == 0);
        std::string path = temp_file("rep.json", r.out);
        Run v = cdt_run({"verify", data("chain.json"), path});
        CHECK(v.code == 0);
        CHECK(v.report()["ok"] == true);
        std::filesystem::remove(path);
    }
    Run r = cdt_run({"represent", data("google.json"), "--objective"});
    REQUIRE(r.code == 0);
    std::string path = temp_file("obj.json", r.out);
    CHECK(cdt_run({"verify", data("google.json"), path}).code == 0);
    std::filesystem::remove(path);
}

TEST_CASE("cli: hand-written representations") {
    CHECK(cdt_run({"verify", data("chain.json"), data("representations/chain_rep_p3_5.json")}).code == 0);
    Run r = cdt_run({"verify", data("chain.json"), data("representations/chain_rep_p2_5.json")});
    CHECK(r.code == 1);
    CHECK(r.report()["discrepancy"] == json::array({"tab", "tba"}));
}

TEST_CASE("cli: synthesis failures exit 1 with a witness") {
    Run r = cdt_run({"represent", data("incomparable.json"), "--single-utility"});
    CHECK(r.code == 1);
    CHECK(r.report()["error"]["axiom"] == "A1");
    r = cdt_run({"represent", data("single_utility.json"), "--objective"});
    CHECK(r.code == 1);
    CHECK(r.report()["error"]["witness"]["outcome"] == "o");
}

TEST_CASE("cli: update") {
    Run r = cdt_run({"update", data("chain.json"), "--given-test", "t"});
    CHECK(r.code == 0);
    CHECK(r.report()["two_path"]["agree"] == true);
    r = cdt_run({"update", data("incomparable.json"), "--prefer", "a", "b"});
    CHECK(r.code == 0);
    CHECK(r.report()["refined"]["total_collapse"] == false);
    CHECK(cdt_run({"update", data("chain.json"), "--given-test", "t", "--prefer", "a", "b"}).code == 2);
}

TEST_CASE("cli: framing") {
    const std::string lives = "(S & L0_90) | (RT & L0_100)", deaths = "(S & D0_10) | (RT & D0_0)";
    auto value = [&](const char* file, const std::string& a, const std::string& b) {
        return cdt_run({"framing", data(file), a, b}).report()["measures"][0]["value"];
    };
    CHECK(value("framing_naive.json", "S", "S") == "0/1");
    CHECK(value("framing_naive.json", lives, deaths) == "11/32");
    CHECK(value("framing_sophisticated.json", lives, deaths) == "0/1");
    CHECK(value("framing_naive.json", "L0_90", "D0_10") == "1/2");
}

TEST_CASE("cli: input errors exit 2") {
    CHECK(cdt_run({"check", data("no_such_file.json")}).code == 2);
    CHECK(cdt_run({"--seed", "3", "check", data("chain.json")}).code == 2);
    CHECK(cdt_run({"check"}).code == 2);
    CHECK(cdt_run({"frobnicate"}).code == 2);

    std::string bad = temp_file("bad.json", "{\"tests\": [\"t\"], \"primitives\": [\"a\"],");
    CHECK(cdt_run({"check", bad}).code == 2);
    std::string undeclared =
        temp_file("undeclared.json", R"({"tests": [], "primitives": ["a"], "choices": {"x": "b"}, "weak_prefs": []})");
    Run r = cdt_run({"check", undeclared});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
    std::string rep = temp_file("rep_bad.json", R"({"states": []})");
    CHECK(cdt_run({"verify", data("chain.json"), rep}).code == 2);
    for (const auto& p : {bad, undeclared, rep}) std::filesystem::remove(p);
}

TEST_CASE("cli: unsatisfiable theory warns") {
    std::string path = temp_file(
        "unsat.json", R"({"tests": ["t"], "axioms": ["t & !t"], "primitives": ["a"], "choices": {"a": "a"}, "weak_prefs": []})");
    Run r = cdt_run({"worlds", path});
    CHECK(r.code == 0);
    CHECK(r.report()["count"] == 0);
    CHECK(r.err.find("warning") != std::string::npos);
    std::filesystem::remove(path);
}
