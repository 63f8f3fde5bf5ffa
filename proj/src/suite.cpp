#include "pseudofin/suite.hpp"

#include <chrono>
#include <functional>
#include <stdexcept>

#include "pseudofin/comprehensive.hpp"
#include "pseudofin/error.hpp"
#include "pseudofin/modelcheck.hpp"

namespace pseudofin {

namespace {

struct NamedGroup {
  std::string name;
  Class2Group group;
};

BilinearStructure zero_plus_symplectic() {
  // Orthogonal sum of two symplectic planes with values in GF(3)^2, one per
  // coordinate of W: n = 4, d = 2.
  const PrimeField f(3);
  BilinearStructure s(f, 4, 2);
  s.set_gram_entry(0, 1, VectorFp(f, {1, 0}));
  s.set_gram_entry(1, 0, VectorFp(f, {2, 0}));
  s.set_gram_entry(2, 3, VectorFp(f, {0, 1}));
  s.set_gram_entry(3, 2, VectorFp(f, {0, 2}));
  return s;
}

CriterionResult lemma_bil(const SuiteOptions& o) {
  CriterionResult r{1, "lemma-bil certificate", true, Json::object(), 0};
  Json runs = Json::array();
  struct Case {
    std::uint32_t p;
    std::size_t n, d;
    std::uint64_t maps;
    bool expect_zero;
  };
  for (const Case c : {Case{3, 2, 2, 6561, true}, Case{5, 2, 2, 390625, true},
                       Case{3, 2, 1, 81, false}}) {
    const auto rep = lemma_bil_exhaust(c.p, c.n, c.d, kDefaultMapBudget, o.threads);
    const bool ok = rep.maps_checked == c.maps &&
                    (c.expect_zero ? rep.satisfying_count == 0 && !rep.refutation
                                   : rep.satisfying_count >= 1);
    r.pass = r.pass && ok;
    Json j = to_json(rep);
    j["pass"] = ok;
    runs.push_back(j);
  }
  r.details["runs"] = runs;
  return r;
}

CriterionResult counting_grid(const SuiteOptions&) {
  CriterionResult r{2, "counting inequality grid", true, Json::object(), 0};
  std::uint64_t cells = 0;
  Json violations = Json::array();
  for (std::uint32_t p : {3u, 5u, 7u}) {
    for (std::size_t n = 2; n <= 6; ++n) {
      for (std::size_t d = 1; d <= 6; ++d) {
        ++cells;
        const auto b = counting_bound(p, n, d);
        if (b.packing_possible != (d == 1)) violations.push_back({p, n, d});
      }
    }
  }
  r.pass = violations.empty();
  r.details = {{"cells", cells}, {"violations", violations}};
  return r;
}

CriterionResult reduction(const SuiteOptions&) {
  CriterionResult r{3, "reduction coherence", true, Json::object(), 0};
  const std::vector<NamedGroup> groups = {
      {"extraspecial(3,1)", extraspecial(3, 1)},
      {"extraspecial(3,2)", extraspecial(3, 2)},
      {"heisenberg(3,2,1)", heisenberg(3, 2, 1)},
      {"central_product(extraspecial(3,1),2)", central_product(extraspecial(3, 1), 2)}};
  Json rows = Json::array();
  for (const auto& ng : groups) {
    const BilinearStructure s = reduce_to_bilinear(ng.group);
    for (std::size_t k = 1; k <= 3; ++k) {
      const auto gv = sigma_on_group(ng.group, k);
      const auto sv = sigma_check(s, k);
      const bool agree = gv.holds == sv.holds;
      r.pass = r.pass && agree;
      rows.push_back({{"group", ng.name},
                      {"k", k},
                      {"group_holds", gv.holds},
                      {"group_cases", gv.cases_checked},
                      {"structure_holds", sv.holds},
                      {"structure_cases", sv.cases_checked},
                      {"agree", agree}});
    }
  }
  r.details["rows"] = rows;
  return r;
}

CriterionResult sigma_profile(const SuiteOptions& o) {
  CriterionResult r{4, "sigma profile of the example families", true, Json::object(), 0};
  const auto ex = extraspecial(3, 2).structure();
  const auto he = heisenberg(3, 2, 1).structure();
  const auto e1 = sigma_check(ex, 1), e2 = sigma_check(ex, 2);
  const auto h1 = sigma_check(he, 1), h2 = sigma_check(he, 2);
  const bool witness_ok = !h2.holds && h2.counterexample &&
                          counterexample_is_valid(he, *h2.counterexample);
  const auto density = sigma_failure_density(he, 2, o.threads);
  const bool positive = density.failing_subspace_fraction > 0;
  const bool frozen =
      to_string(density.failing_subspace_fraction) == kHeisenbergSigma2FailingFraction &&
      to_string(density.unreachable_target_fraction) == kHeisenbergSigma2UnreachableFraction;
  r.pass = e1.holds && e2.holds && h1.holds && witness_ok && positive && frozen;
  r.details = {{"extraspecial(3,2)", {{"sigma1", to_json(e1)}, {"sigma2", to_json(e2)}}},
               {"heisenberg(3,2,1)", {{"sigma1", to_json(h1)}, {"sigma2", to_json(h2)}}},
               {"witness_revalidated", witness_ok},
               {"density", to_json(density)},
               {"density_matches_frozen", frozen}};
  return r;
}

CriterionResult class3(const SuiteOptions& o) {
  CriterionResult r{5, "class-3 bound and Hall-Witt", true, Json::object(), 0};
  const TableGroup u2 = ut_group(2, 4), u3 = ut_group(3, 4);
  const auto l2 = laurent_bound_check(u2), l3 = laurent_bound_check(u3);
  const bool series_ok =
      l2.series.orders == std::vector<std::uint64_t>{64, 8, 2, 1} &&
      l3.series.orders == std::vector<std::uint64_t>{729, 27, 3, 1};
  const auto hw2 = hall_witt_check(u2, CheckMode::exhaustive(), o.threads);
  const auto hw3 = hall_witt_check(u3, CheckMode::sample(100'000, o.seed), o.threads);
  r.pass = l2.holds && l3.holds && series_ok && hw2.holds &&
           hw2.cases_checked == 64ULL * 64 * 64 && hw3.holds && hw3.cases_checked == 100'000;
  r.details = {{"ut(2,4)", {{"laurent", to_json(l2)}, {"hall_witt", to_json(hw2)}}},
               {"ut(3,4)", {{"laurent", to_json(l3)}, {"hall_witt", to_json(hw3)}}},
               {"seed", o.seed},
               {"series_match", series_ok}};
  return r;
}

CriterionResult commutator_identities(const SuiteOptions&) {
  CriterionResult r{6, "commutator identities", true, Json::object(), 0};
  const auto a = commutator_power_check(extraspecial(3, 1), {2, 3}, CheckMode::exhaustive());
  const auto b =
      commutator_power_check(extraspecial(5, 1), {2, 3, 4, 5}, CheckMode::exhaustive());
  r.pass = a.holds && b.holds;
  r.details = {{"extraspecial(3,1)", to_json(a)}, {"extraspecial(5,1)", to_json(b)}};
  return r;
}

CriterionResult chains(const SuiteOptions&) {
  CriterionResult r{7, "centralizer chains", true, Json::object(), 0};
  const Class2Group g = extraspecial(3, 1);
  const auto chain = sop_chain_direct_power(g, 4);
  const std::vector<std::uint64_t> expected = {9ULL * 27 * 27 * 27, 9ULL * 9 * 27 * 27,
                                               9ULL * 9 * 9 * 27, 9ULL * 9 * 9 * 9};
  const auto maxi = finite_stage_maximality(g, 2);
  r.pass = chain.valid() && chain.centralizer_orders == expected && maxi.validated &&
           maxi.centralizer_order == 81;
  r.details = {{"chain", to_json(chain)}, {"maximality_k2", to_json(maxi)}};
  return r;
}

bool all_subgroups_pure(const AbelianPGroup& a) {
  for (std::uint64_t x = 0; x < a.order(); ++x) {
    for (std::uint64_t y = x; y < a.order(); ++y) {
      if (!is_pure(a, AbelianSubgroup(a, {a.element_at(x), a.element_at(y)}))) return false;
    }
  }
  return true;
}

CriterionResult comprehensiveness(const SuiteOptions&) {
  CriterionResult r{8, "comprehensiveness instances", true, Json::object(), 0};
  const auto scan = star_scan(extraspecial(3, 2), 1);
  const AbelianPGroup c9(3, {2});
  const AbelianPGroup::Element a3{3};
  const std::size_t ht = height(c9, a3);
  const bool pure = is_pure(c9, AbelianSubgroup(c9, {a3}));
  const bool el33 = all_subgroups_pure(AbelianPGroup(3, {1, 1}));
  const bool el333 = all_subgroups_pure(AbelianPGroup(3, {1, 1, 1}));
  const bool el55 = all_subgroups_pure(AbelianPGroup(5, {1, 1}));
  r.pass = scan.instances > 0 && scan.failed == 0 && !scan.truncated && ht == 1 && !pure &&
           el33 && el333 && el55;
  r.details = {{"star_scan_extraspecial(3,2)_rank1", to_json(scan)},
               {"height_C9_a3", ht},
               {"a3_pure_in_C9", pure},
               {"elementary_C3xC3_all_pure", el33},
               {"elementary_C3^3_all_pure", el333},
               {"elementary_C5xC5_all_pure", el55}};
  return r;
}

CriterionResult certificates(const SuiteOptions& o) {
  CriterionResult r{9, "construction certificates", true, Json::object(), 0};
  const std::vector<NamedGroup> groups = {
      {"from_bilinear(zero,p=3,n=1,d=1)", group_from_bilinear(BilinearStructure(PrimeField(3), 1, 1))},
      {"extraspecial(3,1)", extraspecial(3, 1)},
      {"extraspecial(3,2)", extraspecial(3, 2)},
      {"extraspecial(5,1)", extraspecial(5, 1)},
      {"extraspecial(7,1)", extraspecial(7, 1)},
      {"heisenberg(3,1,1)", heisenberg(3, 1, 1)},
      {"heisenberg(3,2,1)", heisenberg(3, 2, 1)},
      {"heisenberg(3,1,2)", heisenberg(3, 1, 2)},
      {"heisenberg(5,1,1)", heisenberg(5, 1, 1)},
      {"central_product(extraspecial(3,1),2)", central_product(extraspecial(3, 1), 2)},
      {"from_bilinear(orthogonal_sum,p=3,n=4,d=2)", group_from_bilinear(zero_plus_symplectic())}};
  Json rows = Json::object();
  for (const auto& ng : groups) {
    const auto cert = certify(ng.group, o.seed, 200'000, o.threads);
    const bool ok = cert.passed() && cert.exhaustive && cert.associativity_exhaustive &&
                    BigInt(cert.order) == ng.group.order();
    r.pass = r.pass && ok;
    rows[ng.name] = to_json(cert);
  }
  const Class2Group cp = central_product(extraspecial(3, 1), 2);
  const bool cp_order = cp.order() == 243;
  const bool cp_equal = cp.structure() == extraspecial(3, 2).structure();
  r.pass = r.pass && cp_order && cp_equal;
  r.details = {{"certificates", rows},
               {"central_product_order_243", cp_order},
               {"central_product_equals_extraspecial(3,2)", cp_equal}};
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, const SuiteOptions& opts) {
  static const std::vector<std::function<CriterionResult(const SuiteOptions&)>> table = {
      lemma_bil, counting_grid,       reduction, sigma_profile, class3,
      commutator_identities, chains, comprehensiveness, certificates};
  if (id < 1 || id > static_cast<int>(table.size())) {
    throw PreconditionError("unknown criterion " + std::to_string(id));
  }
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = table[static_cast<std::size_t>(id - 1)](opts);
  } catch (const std::exception& e) {
    r = {id, "criterion " + std::to_string(id), false, {{"error", e.what()}}, 0};
  }
  r.wall_time_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return r;
}

bool is_known_suite(const std::string& name) {
  return name == "acceptance" || name == "quick";
}

std::vector<int> suite_criteria(const std::string& name) {
  if (name == "acceptance") return {1, 2, 3, 4, 5, 6, 7, 8, 9};
  if (name == "quick") return {1, 2, 3, 4, 5, 6, 7, 8};
  throw PreconditionError("unknown suite '" + name + "'");
}

std::vector<CriterionResult> run_suite(const std::string& name, const SuiteOptions& opts) {
  std::vector<CriterionResult> out;
  for (int id : suite_criteria(name)) out.push_back(run_criterion(id, opts));
  return out;
}

Json to_json(const CriterionResult& r) {
  return {{"id", r.id},
          {"name", r.name},
          {"pass", r.pass},
          {"details", r.details},
          {kTimingField, static_cast<std::int64_t>(r.wall_time_ms)}};
}

}  // namespace pseudofin
