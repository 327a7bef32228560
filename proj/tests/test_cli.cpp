#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "gobsec/cli.hpp"
#include "support.hpp"

using namespace gobsec;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gobsec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("gobsec_cli_" + std::to_string(::getpid())) / name;
  fs::create_directories(d);
  return d;
}

std::string write(const fs::path& dir, const std::string& name, const std::string& text) {
  fs::path p = dir / name;
  std::ofstream(p) << text;
  return p.string();
}

nlohmann::json parse_json(const std::string& s) { return nlohmann::json::parse(s); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("check reports the type") {
    Result r = cli({"check", corpus_file("login.gobsec")});
    CHECK(r.code == exit_code::kOk);
    CHECK(r.out == "String!\n");
    Result s = cli({"check", "--simple", corpus_file("password_leak.gobsec")});
    CHECK(s.code == exit_code::kOk);
    CHECK(s.out == "String\n");
  }

  TEST_CASE("check exit codes") {
    fs::path d = scratch("check");
    CHECK(cli({"check", corpus_file("password_leak.gobsec")}).code == exit_code::kTypeError);
    CHECK(cli({"check", corpus_file("string_eq_bad.gobsec")}).code == exit_code::kInputError);
    Result p = cli({"check", write(d, "bad.gobsec", "var x : Int!\nx.(")});
    CHECK(p.code == exit_code::kInputError);
    CHECK(p.err.find("bad.gobsec:2:") != std::string::npos);
    CHECK(cli({"check", (d / "missing.gobsec").string()}).code == exit_code::kInputError);
    CHECK(cli({"nope"}).code == exit_code::kInputError);
  }

  TEST_CASE("check json") {
    Result r = cli({"check", "--json", corpus_file("password_leak.gobsec")});
    CHECK(r.code == exit_code::kTypeError);
    auto j = parse_json(r.out);
    CHECK(j["command"] == "check");
    CHECK(j["exit"] == 1);
    CHECK(j["status"] == "type-error");
    REQUIRE(j["diagnostics"].size() >= 1);
    CHECK(j["diagnostics"][0].contains("rule"));
    CHECK(j["diagnostics"][0]["span"].contains("offset"));
    auto ok = parse_json(cli({"check", "--json", corpus_file("login.gobsec")}).out);
    CHECK(ok["type"] == "String!");
  }

  TEST_CASE("run evaluates with inputs") {
    std::string login = corpus_file("login.gobsec");
    Result r = cli({"run", login, "--input", "guess=\"x\"", "--input", "password=\"secret\""});
    CHECK(r.code == exit_code::kOk);
    CHECK(r.out == "\"Login failed\"\n");
    CHECK(cli({"run", login, "--input", "guess=\"x\""}).code == exit_code::kInputError);
    CHECK(cli({"run", login, "--input", "guess=1", "--input", "password=\"s\""}).code ==
          exit_code::kInputError);
    Result t = cli({"run", corpus_file("omega.gobsec"), "--fuel", "50", "--json"});
    CHECK(t.code == exit_code::kTimeout);
    auto j = parse_json(t.out);
    CHECK(j["outcome"] == "timeout");
    CHECK(j["steps"] == 50);
    fs::path d = scratch("run");
    Result s = cli({"run", write(d, "stuck.gobsec", "1.concat(\"a\")")});
    CHECK(s.code == exit_code::kStuck);
    CHECK(s.out.rfind("stuck:", 0) == 0);
  }

  TEST_CASE("prni verdicts") {
    Result bad = cli({"prni", corpus_file("list_head_leak.gobsec"), "--pairs", "100", "--substs", "2"});
    CHECK(bad.code == exit_code::kCounterexample);
    CHECK(bad.out.rfind("counterexample at String!", 0) == 0);
    Result ok = cli({"prni", corpus_file("login.gobsec"), "--pairs", "50", "--substs", "1", "--json"});
    CHECK(ok.code == exit_code::kOk);
    auto j = parse_json(ok.out);
    CHECK(j["verdict"] == "no-counterexample");
    CHECK(j["trials"] == 50);
    CHECK(j["pairs"] == 50);
    Result cfg = cli({"prni", corpus_file("login.gobsec"), "--observe", "Int!"});
    CHECK(cfg.code == exit_code::kInputError);
  }

  TEST_CASE("prni output is byte-identical for a seed") {
    std::vector<std::string> args{"prni", corpus_file("bounded_first.gobsec"), "--seed", "9", "--json"};
    Result a = cli(args);
    Result b = cli(args);
    auto serial = args;
    serial.push_back("--serial");
    Result c = cli(serial);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    auto j = parse_json(a.out);
    CHECK(j["seed"] == 9);
    CHECK(j["witness"].contains("observation"));
  }

  TEST_CASE("seed from the environment") {
    ::setenv("GOBSEC_SEED", "1234", 1);
    CHECK(seed_from_env() == 1234);
    auto j = parse_json(cli({"prni", corpus_file("login.gobsec"), "--pairs", "5", "--substs", "1", "--json"}).out);
    CHECK(j["seed"] == 1234);
    ::setenv("GOBSEC_SEED", "junk", 1);
    CHECK(seed_from_env() == 0);
    ::unsetenv("GOBSEC_SEED");
    CHECK(seed_from_env() == 0);
  }

  TEST_CASE("corpus command") {
    fs::path empty = scratch("empty");
    Result e = cli({"corpus", empty.string()});
    CHECK(e.code == exit_code::kOk);
    CHECK(e.out == "0/0 passed\n");
    fs::path d = scratch("flip");
    write(d, "a_ok.gobsec", "expect secure\nvar x : Int!\nx.+(1)");
    write(d, "b_flipped.gobsec", "expect insecure\nvar x : Int!\nx.+(1)");
    Result r = cli({"corpus", d.string()});
    CHECK(r.code != exit_code::kOk);
    CHECK(r.out.find("FAIL  b_flipped.gobsec") != std::string::npos);
    CHECK(r.out.find("PASS  a_ok.gobsec") != std::string::npos);
    auto j = parse_json(cli({"corpus", "--json", d.string()}).out);
    CHECK(j["failed"] == 1);
    CHECK(j["files"][1]["actual"] == "secure");
    CHECK(cli({"corpus", (d / "nowhere").string()}).code == exit_code::kInputError);
  }

  TEST_CASE("the bundled corpus passes") {
    Result r = cli({"corpus", GOBSEC_CORPUS_DIR});
    CAPTURE(r.out);
    CHECK(r.code == exit_code::kOk);
  }
}
