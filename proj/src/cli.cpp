#include "gobsec/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "gobsec/eval.hpp"
#include "gobsec/json_io.hpp"
#include "gobsec/printer.hpp"
#include "gobsec/type_algebra.hpp"
#include "gobsec/typecheck.hpp"
#include "gobsec/wellformed.hpp"

namespace gobsec {

namespace fs = std::filesystem;

SecType default_observation(const SourceProgram& program) {
  ProgramCheck sec = check_program(program);
  if (sec.stage == CheckStage::Ok) return *sec.type;
  if (program.body->kind == Expr::Kind::Ascribe) return program.body->type;
  ProgramCheck simple = check_program(program, true);
  if (simple.stage != CheckStage::Ok) {
    throw GobsecError({Severity::Error, "Config", "program does not simple-typecheck", 0});
  }
  return public_of(simple.simple_type);
}

namespace {

std::string display_type(const TypePtr& t, const SourceProgram& program) {
  if (t->is_prim() || is_top(t)) return pretty_print(t);
  for (const auto& [name, named] : program.named_types) {
    if (type_equiv(t, named)) return name;
  }
  return pretty_print(t);
}

}  // namespace

std::string display(const SecType& s, const SourceProgram& program) {
  if (s.is_star()) return pretty_print(s);
  std::string safety = display_type(s.safety, program);
  if (type_equiv(s.safety, s.decl)) return safety + "!";
  if (is_top(s.decl)) return safety + "?";
  return safety + "<" + display_type(s.decl, program) + ">";
}

Expectation classify(const SourceProgram& program, const PrniConfig& config,
                     std::string* detail) {
  auto note = [&](std::string s) {
    if (detail) *detail = std::move(s);
  };
  ProgramCheck sec = check_program(program);
  if (sec.stage == CheckStage::Ok) {
    note(display(*sec.type, program));
    return Expectation::Secure;
  }
  std::string first = sec.diagnostics.empty() ? "" : sec.diagnostics.front().rule;
  if (sec.stage == CheckStage::Wf) {
    note("ill-formed: " + first);
    return Expectation::IllTyped;
  }
  ProgramCheck simple = check_program(program, true);
  if (simple.stage != CheckStage::Ok) {
    note("rejected by both type systems: " + first);
    return Expectation::IllTyped;
  }
  Verdict v = prni_test(program, default_observation(program), config);
  if (v.counterexample) {
    note("rejected (" + first + "), counterexample at " +
         (v.witness->observation.path.empty() ? "output" : v.witness->observation.path));
    return Expectation::Insecure;
  }
  note("rejected (" + first + "), no counterexample in " + std::to_string(v.trials) + " trials");
  return Expectation::IllTyped;
}

std::vector<CorpusEntry> run_corpus(const fs::path& dir, const PrniConfig& config,
                                    bool parallel) {
  std::vector<fs::path> files;
  for (const auto& de : fs::directory_iterator(dir)) {
    if (de.is_regular_file() && de.path().extension() == ".gobsec") files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<CorpusEntry> out(files.size());
  PrniConfig inner = config;
  inner.parallel = false;

#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (long long n = 0; n < static_cast<long long>(files.size()); ++n) {
    auto idx = static_cast<std::size_t>(n);
    CorpusEntry& e = out[idx];
    e.file = files[idx].filename().string();
    std::ifstream in(files[idx]);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      SourceProgram p = parse_program(ss.str());
      e.expected = p.expect;
      e.actual = classify(p, inner, &e.detail);
    } catch (const ParseError& err) {
      e.detail = "parse error at " + std::to_string(err.line()) + ":" +
                 std::to_string(err.column()) + ": " + err.diagnostic().message;
    } catch (const GobsecError& err) {
      e.detail = err.what();
    }
    e.pass = e.expected != Expectation::None && e.expected == e.actual;
  }
  return out;
}

std::uint64_t seed_from_env() {
  const char* s = std::getenv("GOBSEC_SEED");
  if (!s || !*s) return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    return 0;
  }
}

namespace {

struct LoadedProgram {
  std::string text;
  SourceProgram program;
};

std::string position(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

void report(std::ostream& err, const std::string& file, const std::string& text,
            const Diagnostic& d) {
  err << file << ":" << position(text, d.offset) << ": " << d.to_line() << "\n";
}

class Commands {
 public:
  Commands(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int check(const std::string& file, bool simple, bool json) {
    auto loaded = load(file, json, "check");
    if (!loaded) return exit_code::kInputError;
    ProgramCheck r = check_program(loaded->program, simple);
    int code = r.stage == CheckStage::Ok    ? exit_code::kOk
               : r.stage == CheckStage::Wf ? exit_code::kInputError
                                           : exit_code::kTypeError;
    std::string type;
    if (r.stage == CheckStage::Ok) {
      type = simple ? display(public_of(r.simple_type), loaded->program)
                    : display(*r.type, loaded->program);
      if (simple) type.pop_back();
    }
    if (json) {
      Json j = envelope("check", code);
      j["status"] = r.stage == CheckStage::Ok ? "ok" : r.stage == CheckStage::Wf ? "ill-formed" : "type-error";
      j["mode"] = simple ? "simple" : "security";
      if (code == exit_code::kOk) j["type"] = type;
      j["diagnostics"] = to_json(r.diagnostics);
      out_ << dump_line(j);
      return code;
    }
    for (const auto& d : r.diagnostics) report(err_, file, loaded->text, d);
    if (code == exit_code::kOk) out_ << type << "\n";
    return code;
  }

  int run(const std::string& file, const std::vector<std::string>& inputs, std::size_t fuel,
          bool json) {
    auto loaded = load(file, json, "run");
    if (!loaded) return exit_code::kInputError;
    const SourceProgram& p = loaded->program;
    ValueSubst gamma;
    for (const auto& spec : inputs) {
      auto eq = spec.find('=');
      if (eq == std::string::npos) return config_error(json, "run", "input must be name=value: " + spec);
      std::string name = spec.substr(0, eq);
      const SecType* s = p.vars.find(name);
      if (!s) return config_error(json, "run", "no variable named " + name);
      ExprPtr v;
      try {
        ExprPtr e = parse_expr(spec.substr(eq + 1), p);
        if (!simple_check({}, e, s->safety)) {
          return config_error(json, "run", "input " + name + " does not have type " + pretty_print(s->safety));
        }
        Outcome o = eval(erase(e), fuel);
        if (!o.is_value()) return config_error(json, "run", "input " + name + " does not evaluate to a value");
        v = o.value;
      } catch (const GobsecError& e) {
        return config_error(json, "run", "input " + name + ": " + e.what());
      }
      gamma.emplace_back(name, v);
    }
    for (const auto& [x, s] : p.vars.entries()) {
      bool bound = std::any_of(gamma.begin(), gamma.end(), [&](const auto& g) { return g.first == x; });
      if (!bound) return config_error(json, "run", "missing --input for " + x);
    }
    Outcome o = eval(erase(subst_term(p.body, gamma)), fuel);
    int code = o.kind == Outcome::Kind::Value     ? exit_code::kOk
               : o.kind == Outcome::Kind::Timeout ? exit_code::kTimeout
                                                  : exit_code::kStuck;
    if (json) {
      Json j = envelope("run", code);
      j.update(to_json(o));
      out_ << dump_line(j);
      return code;
    }
    switch (o.kind) {
      case Outcome::Kind::Value:
        out_ << pretty_print(o.value) << "\n";
        break;
      case Outcome::Kind::Timeout:
        out_ << "timeout after " << o.steps << " steps\n";
        break;
      case Outcome::Kind::Stuck:
        out_ << "stuck: " << o.reason << " at " << pretty_print(o.redex) << "\n";
        break;
    }
    return code;
  }

  int prni(const std::string& file, const std::optional<std::string>& observe,
           PrniConfig config, bool json) {
    auto loaded = load(file, json, "prni");
    if (!loaded) return exit_code::kInputError;
    Verdict v;
    SecType obs;
    try {
      obs = observe ? parse_sectype(*observe, loaded->program)
                    : default_observation(loaded->program);
      v = prni_test(loaded->program, obs, config);
    } catch (const GobsecError& e) {
      return config_error(json, "prni", e.what());
    }
    int code = v.counterexample ? exit_code::kCounterexample : exit_code::kOk;
    if (json) {
      Json j = envelope("prni", code);
      j["observe"] = display(obs, loaded->program);
      j.update(to_json(v));
      out_ << dump_line(j);
      return code;
    }
    if (!v.counterexample) {
      out_ << "no counterexample at " << display(obs, loaded->program) << ": " << v.trials
           << " trials (" << v.substs_tested << " substitutions x " << v.pairs_tested
           << " pairs), k=" << v.max_k << ", " << v.timeouts << " timeouts, seed " << v.seed
           << "\n";
      return code;
    }
    const Witness& w = *v.witness;
    out_ << "counterexample at " << display(obs, loaded->program) << " (trial " << v.trials
         << ", seed " << v.seed << ")\n";
    for (const auto& [x, t] : w.sigma) out_ << "  " << x << " := " << pretty_print(t) << "\n";
    for (std::size_t i = 0; i < w.gamma1.size(); ++i) {
      out_ << "  " << w.gamma1[i].first << " = " << pretty_print(w.gamma1[i].second) << " | "
           << pretty_print(w.gamma2[i].second) << "\n";
    }
    out_ << "  observed" << (w.observation.path.empty() ? "" : " " + w.observation.path) << ": "
         << pretty_print(w.observation.left) << " vs " << pretty_print(w.observation.right)
         << "\n";
    return code;
  }

  int corpus(const std::string& dir, PrniConfig config, bool parallel, bool json) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) return config_error(json, "corpus", "not a directory: " + dir);
    auto entries = run_corpus(dir, config, parallel);
    std::size_t failed = 0;
    for (const auto& e : entries) failed += e.pass ? 0 : 1;
    int code = failed == 0 ? exit_code::kOk : exit_code::kTypeError;
    if (json) {
      Json j = envelope("corpus", code);
      Json rows = Json::array();
      for (const auto& e : entries) {
        rows.push_back({{"file", e.file},
                        {"expected", std::string(expectation_name(e.expected))},
                        {"actual", std::string(expectation_name(e.actual))},
                        {"pass", e.pass},
                        {"detail", e.detail}});
      }
      j["files"] = rows;
      j["passed"] = entries.size() - failed;
      j["failed"] = failed;
      out_ << dump_line(j);
      return code;
    }
    for (const auto& e : entries) {
      out_ << (e.pass ? "PASS  " : "FAIL  ") << e.file << "  expected "
           << expectation_name(e.expected) << ", got " << expectation_name(e.actual) << "  ["
           << e.detail << "]\n";
    }
    out_ << entries.size() - failed << "/" << entries.size() << " passed\n";
    return code;
  }

 private:
  Json envelope(const char* command, int code) {
    Json j;
    j["command"] = command;
    j["exit"] = code;
    return j;
  }

  int config_error(bool json, const char* command, const std::string& message) {
    if (json) {
      Json j = envelope(command, exit_code::kInputError);
      j["status"] = "error";
      j["diagnostics"] = to_json(std::vector<Diagnostic>{{Severity::Error, "Config", message, 0}});
      out_ << dump_line(j);
    } else {
      err_ << "error: " << message << "\n";
    }
    return exit_code::kInputError;
  }

  std::optional<LoadedProgram> load(const std::string& file, bool json, const char* command) {
    std::ifstream in(file);
    if (!in) {
      config_error(json, command, "cannot read " + file);
      return std::nullopt;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    LoadedProgram lp{ss.str(), {}};
    try {
      lp.program = parse_program(lp.text);
    } catch (const ParseError& e) {
      if (json) {
        Json j = envelope(command, exit_code::kInputError);
        j["status"] = "parse-error";
        Json d = to_json(e.diagnostic());
        d["span"]["line"] = e.line();
        d["span"]["column"] = e.column();
        j["diagnostics"] = Json::array({d});
        out_ << dump_line(j);
      } else {
        err_ << file << ":" << e.line() << ":" << e.column() << ": " << e.diagnostic().to_line() << "\n";
      }
      return std::nullopt;
    } catch (const GobsecError& e) {
      if (json) {
        Json j = envelope(command, exit_code::kInputError);
        j["status"] = "parse-error";
        j["diagnostics"] = Json::array({to_json(e.diagnostic())});
        out_ << dump_line(j);
      } else {
        report(err_, file, lp.text, e.diagnostic());
      }
      return std::nullopt;
    }
    return lp;
  }

  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Security-typed object calculus: checker, interpreter, noninterference tester"};
  app.require_subcommand(1);

  std::string file;
  bool json = false;
  bool simple = false;
  auto* check = app.add_subcommand("check", "Typecheck a program and print its type");
  check->add_option("file", file, "program")->required();
  check->add_flag("--simple", simple, "single-facet type system only");
  check->add_flag("--json", json);

  std::vector<std::string> inputs;
  std::size_t fuel = kDefaultFuel;
  auto* run = app.add_subcommand("run", "Evaluate a program");
  run->add_option("file", file, "program")->required();
  run->add_option("--input", inputs, "name=value binding for a declared variable");
  run->add_option("--fuel", fuel, "step limit");
  run->add_flag("--json", json);

  PrniConfig config;
  config.seed = seed_from_env();
  std::optional<std::string> observe;
  bool serial = false;
  auto* prni = app.add_subcommand("prni", "Differential noninterference test");
  prni->add_option("file", file, "program")->required();
  prni->add_option("--observe", observe, "observation type (default: the program's type)");
  prni->add_option("--pairs", config.pairs, "related input pairs per substitution");
  prni->add_option("--substs", config.substs, "type substitutions");
  prni->add_option("--k", config.k, "observation depth");
  prni->add_option("--fuel", config.fuel, "step limit per run");
  prni->add_option("--seed", config.seed, "seed (default: GOBSEC_SEED or 0)");
  prni->add_flag("--serial", serial, "single-threaded");
  prni->add_flag("--json", json);

  std::string dir;
  auto* corpus = app.add_subcommand("corpus", "Check every .gobsec file against its expect line");
  corpus->add_option("dir", dir, "directory")->required();
  corpus->add_option("--seed", config.seed, "seed for the differential test");
  corpus->add_flag("--serial", serial, "single-threaded");
  corpus->add_flag("--json", json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_code::kOk : exit_code::kInputError;
  }

  Commands cmd(out, err);
  config.parallel = !serial;
  if (*check) return cmd.check(file, simple, json);
  if (*run) return cmd.run(file, inputs, fuel, json);
  if (*prni) return cmd.prni(file, observe, config, json);
  return cmd.corpus(dir, config, !serial, json);
}

}  // namespace gobsec
