#include "pseudofin/report.hpp"

#include <cstdio>

namespace pseudofin {

Json to_json(const VectorFp& v) {
  Json a = Json::array();
  for (auto c : v.coords()) a.push_back(c);
  return a;
}

Json to_json(const GroupElement& g) { return {{"v", to_json(g.v)}, {"w", to_json(g.w)}}; }

Json to_json(const AxiomVerdict& v) {
  Json j{{"holds", v.holds}, {"cases_checked", v.cases_checked}};
  if (v.counterexample) {
    Json tuple = Json::array(), target = Json::array();
    for (const auto& x : v.counterexample->tuple) tuple.push_back(to_json(x));
    for (const auto& x : v.counterexample->target) target.push_back(to_json(x));
    j["counterexample"] = {{"tuple", tuple}, {"target", target}};
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

Json to_json(const FailureDensity& d) {
  return {{"subspaces", d.subspaces},
          {"failing_subspaces", d.failing_subspaces},
          {"failing_subspace_fraction", to_string(d.failing_subspace_fraction)},
          {"unreachable_target_fraction", to_string(d.unreachable_target_fraction)}};
}

Json to_json(const ExhaustReport& r) {
  Json j{{"p", r.p},
         {"n", r.n},
         {"d", r.d},
         {"maps_checked", r.maps_checked},
         {"satisfying_count", r.satisfying_count}};
  j["first_satisfying_index"] =
      r.first_satisfying_index ? Json(*r.first_satisfying_index) : Json(nullptr);
  j["refutation"] = r.refutation;
  return j;
}

Json to_json(const CountingBound& b) {
  return {{"family_size", to_string(b.family_size)},
          {"vectors_required", to_string(b.vectors_required)},
          {"vectors_available", to_string(b.vectors_available)},
          {"packing_possible", b.packing_possible}};
}

Json to_json(const ConstructionCertificate& c) {
  return {{"order", c.order},
          {"exhaustive", c.exhaustive},
          {"associativity", c.associativity},
          {"associativity_exhaustive", c.associativity_exhaustive},
          {"associativity_cases", c.associativity_cases},
          {"exponent_p", c.exponent_p},
          {"commutator_formula", c.commutator_formula},
          {"center", c.center},
          {"center_order", c.center_order},
          {"derived", c.derived},
          {"derived_order", c.derived_order},
          {"passed", c.passed()}};
}

Json to_json(const SeriesReport& s) {
  return {{"orders", s.orders}, {"nilpotency_class", s.nilpotency_class}};
}

Json to_json(const IdentityReport& r) {
  Json j{{"holds", r.holds}, {"cases_checked", r.cases_checked}};
  j["failure"] = r.failure ? Json(*r.failure) : Json(nullptr);
  return j;
}

Json to_json(const LaurentReport& r) {
  return {{"p", r.p},
          {"m", r.m},
          {"gamma2_order", r.gamma2_order},
          {"gamma3_order", r.gamma3_order},
          {"bound", to_string(r.bound)},
          {"holds", r.holds},
          {"series", to_json(r.series)}};
}

Json to_json(const RhoReport& r) {
  return {{"holds", r.holds},
          {"commutator_values", r.commutator_values},
          {"center_order", r.center_order},
          {"class_at_most_2", r.class_at_most_2},
          {"exponent_p", r.exponent_p},
          {"cases_checked", r.cases_checked}};
}

Json to_json(const GroupSigmaVerdict& v) {
  Json j{{"holds", v.holds}, {"cases_checked", v.cases_checked}};
  if (!v.holds) {
    j["tuple"] = v.tuple;
    j["target"] = v.target;
    j["failed_block"] = v.failed_block;
  }
  return j;
}

Json to_json(const ChainReport& c) {
  return {{"base_element", c.base_element},
          {"elements", c.elements},
          {"centralizer_orders", c.centralizer_orders},
          {"formula_orders", c.formula_orders},
          {"strict", c.strict},
          {"separating", c.separating},
          {"valid", c.valid()}};
}

Json to_json(const MaximalityReport& m) {
  return {{"element", m.element},
          {"centralizer_order", m.centralizer_order},
          {"non_central_checked", m.non_central_checked},
          {"validated", m.validated}};
}

Json to_json(const StarInstance& inst) {
  Json gens = Json::array(), alpha = Json::array();
  for (const auto& v : inst.generators) gens.push_back(to_json(v));
  for (const auto& a : inst.alpha) alpha.push_back(to_json(a));
  return {{"generators", gens}, {"alpha", alpha}, {"w", to_json(inst.w)}, {"r", inst.r}};
}

Json to_json(const StarScanReport& r) {
  Json j{{"instances", r.instances},
         {"satisfied", r.satisfied},
         {"failed", r.failed},
         {"subgroups", r.subgroups},
         {"truncated", r.truncated},
         {"instances_by_rank", r.instances_by_rank},
         {"satisfied_by_rank", r.satisfied_by_rank}};
  j["first_failure"] = r.first_failure ? to_json(*r.first_failure) : Json(nullptr);
  return j;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json strip_timing(const Json& j) {
  if (j.is_object()) {
    Json out = Json::object();
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() != kTimingField) out[it.key()] = strip_timing(it.value());
    }
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& e : j) out.push_back(strip_timing(e));
    return out;
  }
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace pseudofin
