#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>

#include "gobsec/cli.hpp"
#include "gobsec/fuzz.hpp"
#include "gobsec/subtyping.hpp"
#include "gobsec/type_algebra.hpp"
#include "oracle.hpp"
#include "samples.hpp"

using namespace gobsec;
using namespace testing_support;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool report(int n, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", n, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  return pass;
}

PrniConfig full_config() {
  PrniConfig c;
  c.pairs = 1000;
  c.substs = 10;
  c.k = 6;
  c.fuel = 10000;
  c.seed = 20240601;
  return c;
}

// Judgments each corpus file is meant to reproduce.
const std::map<std::string, Expectation> kJudgments = {
    {"login.gobsec", Expectation::Secure},
    {"password_leak.gobsec", Expectation::IllTyped},
    {"login_hash.gobsec", Expectation::Secure},
    {"list_cons_concat.gobsec", Expectation::Secure},
    {"list_contains.gobsec", Expectation::Secure},
    {"list_mixed_concat.gobsec", Expectation::Secure},
    {"bounded_length.gobsec", Expectation::Secure},
    {"bounded_first.gobsec", Expectation::Insecure},
    {"bounded_at_len.gobsec", Expectation::Secure},
    {"bounded_at_fst.gobsec", Expectation::Insecure},
    {"prim_eq_public.gobsec", Expectation::Secure},
    {"prim_eq_private.gobsec", Expectation::Secure},
    {"prim_poly_eq.gobsec", Expectation::Secure},
    {"prim_poly_concat.gobsec", Expectation::Secure},
    {"string_eq_bad.gobsec", Expectation::IllTyped},
    {"bool_int.gobsec", Expectation::IllTyped},
};

bool criterion1() {
  auto t0 = Clock::now();
  auto entries = run_corpus(GOBSEC_CORPUS_DIR, full_config());
  double secs = seconds_since(t0);
  std::size_t passed = 0, judged = 0;
  std::string bad;
  for (const auto& e : entries) {
    if (e.pass) ++passed;
    else bad += " " + e.file;
    auto it = kJudgments.find(e.file);
    if (it != kJudgments.end() && it->second == e.expected && e.actual == e.expected) ++judged;
  }
  bool ok = entries.size() >= 14 && passed == entries.size() && judged == kJudgments.size() &&
            secs < 5.0;
  std::ostringstream d;
  d << passed << "/" << entries.size() << " files match, " << judged << "/" << kJudgments.size()
    << " stated judgments, " << secs << " s" << bad;
  return report(1, ok, d.str());
}

bool criterion2() {
  auto t0 = Clock::now();
  FuzzReport r = fuzz_safety(7, 10000, 10000);
  double secs = seconds_since(t0);
  bool ok = r.terms == 10000 && r.stuck == 0 && r.simple_failures == 0 && secs < 300.0;
  std::ostringstream d;
  d << r.terms << " terms, " << r.values << " values, " << r.timeouts << " timeouts, " << r.stuck
    << " stuck, " << secs << " s";
  return report(2, ok, d.str());
}

bool criterion3() {
  auto t0 = Clock::now();
  std::size_t secure = 0, secure_ok = 0, insecure = 0, insecure_ok = 0;
  std::string bad;
  for (const auto& f : std::filesystem::directory_iterator(GOBSEC_CORPUS_DIR)) {
    if (f.path().extension() != ".gobsec") continue;
    SourceProgram p = parse_program(read_file(f.path().string()));
    std::string name = f.path().filename().string();
    if (p.expect == Expectation::Secure) {
      ++secure;
      Verdict v = prni_test(p, default_observation(p), full_config());
      if (!v.counterexample) ++secure_ok;
      else bad += " " + name;
    } else if (p.expect == Expectation::Insecure) {
      ++insecure;
      Verdict v = prni_test(p, default_observation(p), full_config());
      if (v.counterexample && v.witness && v.witness->pair_index < 1000) ++insecure_ok;
      else bad += " " + name;
    }
  }
  double secs = seconds_since(t0);
  bool ok = secure == secure_ok && insecure >= 4 && insecure == insecure_ok && secs < 600.0;
  std::ostringstream d;
  d << secure_ok << "/" << secure << " secure without counterexample, " << insecure_ok << "/"
    << insecure << " insecure refuted, " << secs << " s" << bad;
  return report(3, ok, d.str());
}

bool criterion4() {
  auto t0 = Clock::now();
  std::vector<TypePtr> u = oracle::universe();
  std::size_t pairs = 0, agree = 0, unknown = 0;
  std::string first;
  for (auto mode : {oracle::Mode::Standard, oracle::Mode::WellFormed}) {
    SubMode m = mode == oracle::Mode::Standard ? SubMode::Standard : SubMode::WellFormed;
    for (const auto& a : u) {
      for (const auto& b : u) {
        ++pairs;
        oracle::Tri o = oracle::sub({}, a, b, 8, mode);
        bool alg = sub_type({}, {}, a, b, m);
        if (o == oracle::Tri::Unknown) ++unknown;
        if (o != oracle::Tri::Unknown && (o == oracle::Tri::Yes) == alg) ++agree;
        else if (first.empty()) first = " first mismatch: " + canonical(a) + " <: " + canonical(b);
      }
    }
  }
  double secs = seconds_since(t0);
  bool ok = agree == pairs && secs < 120.0;
  std::ostringstream d;
  d << agree << "/" << pairs << " pairs agree over " << u.size() << " types x 2 modes, " << unknown
    << " undecided, " << secs << " s" << first;
  return report(4, ok, d.str());
}

bool criterion5() {
  TypePtr a1 = ty("Obj(a)[ m<X: a..Top> : a! -> a! ]");
  TypePtr b1 = ty("Obj(b)[ m<X: b..Top> : b! -> b! ]");
  TypePtr a2 = ty("Obj(a)[ m<X: a..Top> : Top! -> a! ]");
  TypePtr b2 = ty("Obj(a)[ m<X: a..Top> : Top! -> Obj(b)[ m<Y: b..Top> : Top! -> b! ]! ]");
  bool examples = type_equiv(a1, b1) && type_equiv(a2, b2);
  EquivStats s = sample_equivalence(10000, 5);
  std::size_t folds = 0, fold_fail = 0;
  for (const auto& fam : equivalence_families()) {
    for (const auto& t : fam) {
      if (!t->is_obj()) continue;
      ++folds;
      if (!type_equiv(t, unfold(t)) || !type_equiv(unfold(t), t)) ++fold_fail;
    }
  }
  bool ok = examples && s.refl_fail == 0 && s.sym_fail == 0 && s.trans_fail == 0 && fold_fail == 0;
  std::ostringstream d;
  d << "examples " << (examples ? "hold" : "fail") << ", " << s.samples << " samples: refl "
    << s.refl_fail << " sym " << s.sym_fail << " trans " << s.trans_fail << " failures ("
    << s.trans_checked << " chains), fold/unfold " << folds - fold_fail << "/" << folds;
  return report(5, ok, d.str());
}

bool criterion6() {
  std::size_t total = 0, good = 0;
  std::string bad;
  auto row = [&](const char* name, bool v) {
    ++total;
    if (v) ++good;
    else bad += std::string(" ") + name;
  };
  row("rdecl(Int!,Bool)=Bool", type_equiv(rdecl(st("Int!"), PrimKind::Bool), make_prim(PrimKind::Bool)));
  row("rdecl(String<StringEq>,Bool)=Top", is_top(rdecl(st("String<StringEq>"), PrimKind::Bool)));
  row("rdecl(Unit!,Int)=Int", type_equiv(rdecl(st("Unit!"), PrimKind::Int), make_prim(PrimKind::Int)));
  row("soundsig(StringEqL)", soundsig(ty("StringEqL")->methods[0].sig));
  row("!soundsig(StringEqBad)", !soundsig(ty("StringEqBad")->methods[0].sig));
  row("ub(String)=String",
      type_equiv(upper_bound({}, make_prim(PrimKind::String)), make_prim(PrimKind::String)));
  TypeVarEnv d1({{"X", ty("StrFstLen"), ty("StringLen")}});
  row("ub(X)=StringLen", type_equiv(upper_bound(d1, make_type_var("X")), ty("StringLen")));
  TypeVarEnv d2({{"X", ty("String"), make_type_var("Y")}, {"Y", ty("String"), top_type()}});
  row("ub(X)=Top via Y", is_top(upper_bound(d2, make_type_var("X"))));
  row("has_method(StringLen,length)", has_method({}, ty("StringLen"), "length"));
  row("has_method(X,length)", has_method(d1, make_type_var("X"), "length"));
  row("!has_method(X,first)", !has_method(d1, make_type_var("X"), "first"));
  MethodSig len = msig({}, ty("StringLen"), "length");
  row("msig(StringLen,length)=Unit!->Int!",
      !len.is_prim() && len.type_params.empty() && len.params.size() == 1 &&
          sectype_equiv(len.params[0], st("Unit!")) && sectype_equiv(len.ret, st("Int!")));
  MethodSig slen = msig({}, make_prim(PrimKind::String), "length");
  row("msig(String,length)=Unit<*>->Int<*>",
      slen.is_prim() && slen.prim_params == std::vector<PrimKind>{PrimKind::Unit} &&
          slen.prim_ret == PrimKind::Int);
  std::ostringstream d;
  d << good << "/" << total << " rows" << bad;
  return report(6, good == total, d.str());
}

bool criterion7() {
  auto cli = [](std::vector<std::string> args) {
    args.insert(args.begin(), "gobsec");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return out.str();
  };
  std::size_t runs = 0, identical = 0;
  for (const char* f : {"list_head_leak.gobsec", "login.gobsec", "bounded_first.gobsec"}) {
    std::vector<std::string> args{"prni", corpus_file(f), "--seed", "31337", "--pairs", "300", "--json"};
    std::string a = cli(args);
    std::string b = cli(args);
    args.push_back("--serial");
    std::string c = cli(args);
    ++runs;
    if (!a.empty() && a == b && a == c) ++identical;
  }
  auto par = run_corpus(GOBSEC_CORPUS_DIR, full_config(), true);
  auto ser = run_corpus(GOBSEC_CORPUS_DIR, full_config(), false);
  bool corpus_agree = par.size() == ser.size();
  for (std::size_t i = 0; corpus_agree && i < par.size(); ++i) {
    corpus_agree = par[i].file == ser[i].file && par[i].actual == ser[i].actual &&
                   par[i].detail == ser[i].detail;
  }
  std::ostringstream d;
  d << identical << "/" << runs << " prni JSON outputs byte-identical across repeat and serial runs, "
    << "corpus parallel vs serial " << (corpus_agree ? "agree" : "differ");
  return report(7, identical == runs && corpus_agree, d.str());
}

}  // namespace

int main() {
  bool ok = true;
  ok = criterion1() && ok;
  ok = criterion2() && ok;
  ok = criterion3() && ok;
  ok = criterion4() && ok;
  ok = criterion5() && ok;
  ok = criterion6() && ok;
  ok = criterion7() && ok;
  return ok ? 0 : 1;
}
