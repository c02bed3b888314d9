#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "eds/cli.hpp"

using nlohmann::json;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = eds::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      out.push_back(text.substr(pos));
      break;
    }
    out.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

}  // namespace

TEST_CASE("gen emits the identity sequence as JSON lines") {
  CliResult r = run_cli({"gen", "--std", "2", "3", "2", "--ring", "Z", "--upto", "10"});
  REQUIRE(r.code == 0);
  std::vector<std::string> ls = lines(r.out);
  REQUIRE(ls.size() == 11);
  json header = json::parse(ls[0]);
  CHECK(header["ring"] == "Z");
  for (int n = 1; n <= 10; ++n) {
    json line = json::parse(ls[n]);
    CHECK(line["n"] == n);
    CHECK(line["value"] == std::to_string(n));
  }
}

TEST_CASE("gen supports tsv output and rational rings") {
  CliResult r = run_cli({"gen", "--std", "2", "3", "3/2", "--ring", "Q", "--upto", "6",
                         "--format", "tsv"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "1\t1\n2\t2\n3\t3\n4\t3\n5\t-3\n6\t-63/2\n");
}

TEST_CASE("check reports a clean full window with exit zero") {
  CliResult r = run_cli({"check", "--std", "1", "-1", "1", "--ring", "Z", "--window", "14",
                         "--family", "full"});
  REQUIRE(r.code == 0);
  std::vector<std::string> ls = lines(r.out);
  REQUIRE(ls.size() == 1);
  json summary = json::parse(ls[0]);
  CHECK(summary["violations"] == 0);
  CHECK(summary["clean"] == true);
  CHECK(summary["checked"].get<long long>() > 200);
}

TEST_CASE("check lists violations with the three products and exits two") {
  CliResult r = run_cli({"check", "--list", "1,1,1,1,5", "--ring", "Q", "--window", "5",
                         "--family", "somos"});
  REQUIRE(r.code == 2);
  std::vector<std::string> ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  json violation = json::parse(ls[0]);
  CHECK(violation["relation"] == "E(3,2,1,0)");
  CHECK(violation["a2"] == 6);
  CHECK(violation["lhs"] == "5");
  CHECK(violation["rhs1"] == "1");
  CHECK(violation["rhs2"] == "1");
  CHECK(violation["defect"] == "5");
  json summary = json::parse(ls[1]);
  CHECK(summary["clean"] == false);
}

TEST_CASE("check subsampling is deterministic under a fixed seed") {
  std::vector<std::string> args = {"check", "--std", "1",  "1",      "1",  "--ring", "Fp:7",
                                   "--window", "16",  "--sample", "5", "--seed", "11"};
  CliResult a = run_cli(args);
  CliResult b = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  json summary = json::parse(lines(a.out).back());
  CHECK(summary["checked"] == 5);
}

TEST_CASE("derive prints the node table and replays symbolically") {
  CliResult r = run_cli({"derive", "5", "3", "2", "1", "--base", "somos", "--replay", "symbolic"});
  REQUIRE(r.code == 0);
  std::vector<std::string> ls = lines(r.out);
  REQUIRE(ls.size() >= 3);
  CHECK(ls.back() == "replay: ok");
  json header = json::parse(ls.front());
  CHECK(header["root"] == json({{"a2", 10}, {"b2", 6}, {"c2", 4}, {"d2", 2}}));
  CHECK(header["nodes"].get<std::size_t>() == ls.size() - 2);
  for (std::size_t i = 1; i + 1 < ls.size(); ++i) {
    json node = json::parse(ls[i]);
    CHECK(node.contains("goal"));
    CHECK(node.contains("step"));
  }
}

TEST_CASE("derive handles half-integer goals and numeric replay") {
  CliResult half = run_cli({"derive", "9/2", "7/2", "5/2", "3/2", "--base", "even-odd"});
  CHECK(half.code == 0);
  CHECK(lines(half.out).back() == "replay: ok");

  CliResult numeric = run_cli({"derive", "5", "3", "2", "1", "--base", "somos", "--replay",
                               "numeric", "--somos", "1", "2", "3", "5", "--ring", "Q"});
  CHECK(numeric.code == 0);
  CHECK(lines(numeric.out).back() == "replay: ok");
}

TEST_CASE("witness verifies quotients in the universal sequence") {
  CliResult r = run_cli({"witness", "2", "3"});
  REQUIRE(r.code == 0);
  json j = json::parse(lines(r.out)[0]);
  CHECK(j["m"] == 2);
  CHECK(j["n"] == 3);
  CHECK(j["checked"] == true);
  CHECK_FALSE(j["quotient"].get<std::string>().empty());

  CliResult triple = run_cli({"witness", "--triple", "7"});
  REQUIRE(triple.code == 0);
  CHECK(json::parse(lines(triple.out)[0])["checked"] == true);
}

TEST_CASE("invariant sweeps pass on the universal sequence") {
  CliResult swart = run_cli({"invariant", "swart", "--upto", "6"});
  REQUIRE(swart.code == 0);
  json summary = json::parse(lines(swart.out).back());
  CHECK(summary["checked"] == 5);
  CHECK(summary["failures"] == 0);

  CliResult translation = run_cli({"invariant", "translation", "--upto", "5"});
  REQUIRE(translation.code == 0);
  json tsummary = json::parse(lines(translation.out).back());
  CHECK(tsummary["checked"] == 10);
  CHECK(tsummary["failures"] == 0);
}

TEST_CASE("classify returns the constructing tag over the CLI") {
  CliResult r = run_cli({"classify", "--std", "2", "3", "2", "--ring", "Q", "--upto", "30"});
  REQUIRE(r.code == 0);
  json j = json::parse(lines(r.out)[0]);
  CHECK(j["tag"] == "type-I");
  CHECK(j["r"] == 1);
  CHECK(j["A"] == "1");
  CHECK(j["B"] == "2");
  CHECK(j["C"] == "3");
  CHECK(j["D"] == "2");

  CliResult bad = run_cli({"classify", "--list", "1,1,1,1,0,-1,-1,-1,1", "--ring", "Q",
                           "--upto", "9"});
  REQUIRE(bad.code == 2);
  json jb = json::parse(lines(bad.out)[0]);
  CHECK(jb["tag"] == "not-elliptic");
  CHECK(jb["witness"]["relation"] == "E(5,4,1,0)");
  CHECK(jb["witness"]["defect"] == "2");
}

TEST_CASE("automaton output covers edges, reachability, and loops") {
  CliResult r = run_cli({"automaton"});
  REQUIRE(r.code == 0);
  std::vector<std::string> ls = lines(r.out);
  REQUIRE(ls.size() == 20);  // initial + 17 edges + reachable + loops
  CHECK(json::parse(ls.front())["initial"] == json::array({"1100", "1101"}));
  CHECK(json::parse(ls[ls.size() - 2])["reachable"].size() == 11);
  CHECK(json::parse(ls.back())["loops"] ==
        json::array({"0", "00001", "000011", "001", "011"}));

  CliResult dot = run_cli({"automaton", "--dot"});
  REQUIRE(dot.code == 0);
  CHECK(dot.out.rfind("digraph", 0) == 0);

  CliResult twice = run_cli({"automaton"});
  CHECK(twice.out == r.out);
}

TEST_CASE("probe reports the observed power membership") {
  CliResult r = run_cli({"probe", "5", "3", "2", "1", "--bound", "8"});
  REQUIRE(r.code == 0);
  json j = json::parse(lines(r.out)[0]);
  CHECK(j["relation"] == "E(5,3,2,1)");
  CHECK(j["exponent"] == 3);

  CliResult shallow = run_cli({"probe", "5", "3", "2", "1", "--bound", "8",
                               "--max-exponent", "2"});
  REQUIRE(shallow.code == 0);
  CHECK(json::parse(lines(shallow.out)[0])["exponent"].is_null());
}

TEST_CASE("usage and ring errors exit with code one") {
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({"gen", "--std", "2", "3", "2", "--ring", "Z"}).code == 1);       // missing --upto
  CHECK(run_cli({"gen", "--std", "2", "3", "--ring", "Z", "--upto", "5"}).code == 1);
  CHECK(run_cli({"gen", "--std", "2", "3", "2", "--ring", "K3", "--upto", "5"}).code == 1);
  CHECK(run_cli({"gen", "--std", "2", "3", "2", "--upto", "5"}).code == 1);       // no ring
  CHECK(run_cli({"gen", "--ring", "Z", "--upto", "5"}).code == 1);                // no generator
  CHECK(run_cli({"check", "--std", "1", "1", "1", "--ring", "Z", "--window", "10",
                 "--family", "maximal"}).code == 1);
  CHECK(run_cli({"gen", "--std", "1", "1", "1", "--ring", "Z", "--upto", "4",
                 "--format", "xml"}).code == 1);
  CHECK(run_cli({"classify", "--std", "1", "1", "1", "--ring", "Z", "--upto", "10"}).code == 1);
  CHECK(run_cli({"derive", "4", "3", "2", "1", "--base", "fibonacci"}).code == 1);
  CHECK(run_cli({"witness", "2"}).code == 1);
  CHECK(run_cli({"probe", "5", "3", "2", "1", "--bound", "4"}).code == 1);  // bound below h_8
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("generation problems surface as errors, not silent truncation") {
  // The Somos step divides by h1^2 = 4, a zero divisor mod 6.
  CliResult r = run_cli({"gen", "--somos", "2", "1", "1", "1", "--ring", "Zmod:6", "--upto", "8"});
  CHECK(r.code == 1);
  CHECK_FALSE(r.err.empty());
}
