// Serial reference vs OpenMP kernels: PRNI trials, corpus runner, fuzzing.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <omp.h>

#include "gobsec/cli.hpp"
#include "gobsec/fuzz.hpp"
#include "gobsec/json_io.hpp"
#include "gobsec/prni.hpp"

using namespace gobsec;

namespace {

template <class F>
double seconds(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double serial, double parallel, bool agree) {
  std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n", name, serial, parallel,
              serial / parallel, agree ? "agree" : "DISAGREE");
}

}  // namespace

int main(int argc, char** argv) {
  std::string corpus = argc > 1 ? argv[1] : GOBSEC_CORPUS_DIR;
  std::printf("threads: %d\n", omp_get_max_threads());

  std::ifstream in(corpus + "/list_mixed_concat.gobsec");
  std::stringstream ss;
  ss << in.rdbuf();
  SourceProgram p = parse_program(ss.str());
  SecType obs = default_observation(p);
  PrniConfig cfg;
  cfg.seed = 11;
  Verdict vs, vp;
  cfg.parallel = false;
  double ts = seconds([&] { vs = prni_test(p, obs, cfg); });
  cfg.parallel = true;
  double tp = seconds([&] { vp = prni_test(p, obs, cfg); });
  row("prni list_mixed_concat", ts, tp, to_json(vs) == to_json(vp));

  PrniConfig ccfg;
  std::vector<CorpusEntry> cs, cp;
  ts = seconds([&] { cs = run_corpus(corpus, ccfg, false); });
  tp = seconds([&] { cp = run_corpus(corpus, ccfg, true); });
  bool same = cs.size() == cp.size();
  for (std::size_t i = 0; same && i < cs.size(); ++i) same = cs[i].actual == cp[i].actual && cs[i].detail == cp[i].detail;
  row("corpus", ts, tp, same);

  FuzzReport fs, fp;
  ts = seconds([&] { fs = fuzz_safety(5, 10000, 10000, false); });
  tp = seconds([&] { fp = fuzz_safety(5, 10000, 10000, true); });
  row("fuzz 10k terms", ts, tp, fs.values == fp.values && fs.stuck == fp.stuck);
  return 0;
}
