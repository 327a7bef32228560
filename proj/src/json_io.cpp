#include "gobsec/json_io.hpp"

#include "gobsec/printer.hpp"

namespace gobsec {

Json to_json(const Diagnostic& d) {
  Json j;
  j["severity"] = d.severity == Severity::Error ? "error" : "warning";
  j["rule"] = d.rule;
  j["message"] = d.message;
  j["span"] = {{"offset", d.offset}};
  return j;
}

Json to_json(const std::vector<Diagnostic>& ds) {
  Json arr = Json::array();
  for (const auto& d : ds) arr.push_back(to_json(d));
  return arr;
}

Json to_json(const Outcome& o) {
  Json j;
  j["outcome"] = std::string(outcome_name(o.kind));
  j["steps"] = o.steps;
  if (o.kind == Outcome::Kind::Value) j["value"] = pretty_print(o.value);
  if (o.kind == Outcome::Kind::Stuck) {
    j["redex"] = pretty_print(o.redex);
    j["reason"] = o.reason;
  }
  return j;
}

namespace {

Json values(const ValueSubst& g) {
  Json j = Json::object();
  for (const auto& [x, v] : g) j[x] = pretty_print(v);
  return j;
}

}  // namespace

Json to_json(const Verdict& v) {
  Json j;
  j["verdict"] = v.counterexample ? "counterexample" : "no-counterexample";
  j["trials"] = v.trials;
  j["seed"] = v.seed;
  j["pairs"] = v.pairs_tested;
  j["substs"] = v.substs_tested;
  j["k"] = v.max_k;
  j["timeouts"] = v.timeouts;
  if (v.witness) {
    const Witness& w = *v.witness;
    Json sigma = Json::object();
    for (const auto& [x, t] : w.sigma) sigma[x] = pretty_print(t);
    Json wj;
    wj["sigma"] = sigma;
    wj["gamma1"] = values(w.gamma1);
    wj["gamma2"] = values(w.gamma2);
    wj["outputs"] = {pretty_print(w.output1), pretty_print(w.output2)};
    wj["observation"] = {{"path", w.observation.path},
                         {"left", pretty_print(w.observation.left)},
                         {"right", pretty_print(w.observation.right)}};
    wj["trial"] = {{"subst", w.subst_index}, {"pair", w.pair_index}};
    j["witness"] = wj;
  }
  return j;
}

std::string dump_line(const Json& j) { return j.dump() + "\n"; }

}  // namespace gobsec
