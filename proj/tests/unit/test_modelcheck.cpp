#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "pseudofin/error.hpp"
#include "pseudofin/modelcheck.hpp"

using namespace pseudofin;

namespace {

const PrimeField F3(3);

// Symplectic plane plus a radical line: 3^4 elements.
Class2Group plane_plus_line() {
  return group_from_bilinear(
      orthogonal_sum(BilinearStructure::symplectic(F3, 1), BilinearStructure(F3, 1, 1)));
}

Class2Group abelian9() { return group_from_bilinear(BilinearStructure(F3, 1, 1)); }

}  // namespace

TEST_CASE("centralizer examples") {
  const auto g = extraspecial(3, 1);
  const auto central = g.make(VectorFp(F3, 2), VectorFp(F3, {1}));
  CHECK(centralizer(g, central).order == 27);
  const auto x = g.make(VectorFp(F3, {1, 0}), VectorFp(F3, 1));
  CHECK(centralizer(g, x).order == 9);
  const auto t = as_table(g);
  CHECK(centralizer_scan(t, static_cast<TableGroup::Index>(g.index_of(x))).order() == 9);
}

TEST_CASE("rho examples") {
  CHECK(rho_check(extraspecial(3, 1)).holds);
  const auto ab = rho_check(abelian9());
  CHECK_FALSE(ab.holds);
  CHECK(ab.commutator_values == 1);
  CHECK(ab.center_order == 9);
  const auto rad = rho_check(plane_plus_line());
  CHECK_FALSE(rad.holds);
  CHECK(rad.commutator_values == 3);
  CHECK(rad.center_order == 9);
  CHECK(rad.class_at_most_2);
  CHECK(rad.exponent_p);
}

TEST_CASE("rho holds on small extraspecial groups, confirmed by brute force") {
  for (auto [p, k] : std::vector<std::pair<std::uint32_t, std::size_t>>{{3, 1}, {3, 2}, {5, 1}}) {
    const auto g = extraspecial(p, k);
    CHECK(rho_check(g).holds);
    const auto t = as_table(g);
    std::set<TableGroup::Index> values;
    for (TableGroup::Index x = 0; x < t.order(); ++x)
      for (TableGroup::Index y = 0; y < t.order(); ++y) values.insert(t.commutator(x, y));
    CHECK(values.size() == center(t).order());
    for (auto v : values) CHECK(center(t).contains(v));
  }
}

TEST_CASE("sigma on group examples") {
  const auto ex = sigma_on_group(extraspecial(3, 2), 2);
  CHECK(ex.holds);
  CHECK(ex.cases_checked > 0);

  const auto he = heisenberg(3, 2, 1);
  const auto v = sigma_on_group(he, 2);
  CHECK_FALSE(v.holds);
  CHECK(v.tuple.size() == 2);
  CHECK(v.target.size() == 2);
  CHECK(v.failed_block == "simultaneous_solution_missing");
  CHECK(group_counterexample_is_valid(he, v));

  CHECK(sigma_on_group(he, 1).holds);
  CHECK(sigma_on_group(extraspecial(3, 1), 1).holds);
}

TEST_CASE("sigma on group reports targets outside the commutator set") {
  const auto g = plane_plus_line();
  const auto v = sigma_on_group(g, 1);
  CHECK_FALSE(v.holds);
  CHECK(v.failed_block == "target_outside_commutator_set");
  CHECK(group_counterexample_is_valid(g, v));
}

TEST_CASE("reduce_to_bilinear") {
  const auto r = reduce_to_bilinear(plane_plus_line());
  CHECK(r.n() == 2);
  CHECK(r.d() == 2);
  CHECK(radical(r).dim() == 0);
  CHECK(reduce_to_bilinear(extraspecial(3, 2)) == extraspecial(3, 2).structure());
  CHECK_THROWS_AS(reduce_to_bilinear(abelian9()), PreconditionError);
}

TEST_CASE("chain examples") {
  const auto g = extraspecial(3, 1);
  const auto c3 = sop_chain_direct_power(g, 3);
  CHECK(c3.centralizer_orders == std::vector<std::uint64_t>{9 * 27 * 27, 9 * 9 * 27, 9 * 9 * 9});
  CHECK(c3.formula_orders == c3.centralizer_orders);
  CHECK(c3.valid());
  CHECK(c3.strict == std::vector<bool>{true, true});

  const auto c1 = sop_chain_direct_power(g, 1);
  CHECK(c1.elements.size() == 1);
  CHECK(c1.centralizer_orders == std::vector<std::uint64_t>{9});
  CHECK(c1.strict.empty());

  CHECK_THROWS_WITH_AS(sop_chain_direct_power(abelian9(), 2),
                       doctest::Contains("no non-central element"), PreconditionError);
}

TEST_CASE("chain at k = 2 agrees with table scans and separating elements re-validate") {
  const auto g = extraspecial(3, 1);
  const auto c = sop_chain_direct_power(g, 2);
  const auto t = direct_power(g, 2);
  REQUIRE(c.elements.size() == 2);
  const auto c0 = centralizer_scan(t, static_cast<TableGroup::Index>(c.elements[0]));
  const auto c1 = centralizer_scan(t, static_cast<TableGroup::Index>(c.elements[1]));
  CHECK(c0.order() == c.centralizer_orders[0]);
  CHECK(c1.order() == c.centralizer_orders[1]);
  for (auto x : c1.elements) CHECK(c0.contains(x));
  const auto s = static_cast<TableGroup::Index>(c.separating[0]);
  const auto phi0 = static_cast<TableGroup::Index>(c.elements[0]);
  const auto phi1 = static_cast<TableGroup::Index>(c.elements[1]);
  CHECK(t.mul(s, phi0) == t.mul(phi0, s));
  CHECK(t.mul(s, phi1) != t.mul(phi1, s));
}

TEST_CASE("maximality examples") {
  const auto g = extraspecial(3, 1);
  const auto m1 = finite_stage_maximality(g, 1);
  CHECK(m1.centralizer_order == 9);
  CHECK(m1.validated);
  CHECK_FALSE(g.is_central(g.element_at(m1.element)));

  const auto m2 = finite_stage_maximality(g, 2);
  CHECK(m2.centralizer_order == 81);
  CHECK(m2.validated);
  // Exhaustive minimization over the table.
  const auto t = direct_power(g, 2);
  const auto z = center(t);
  std::uint64_t best = t.order(), best_index = 0;
  for (TableGroup::Index x = 0; x < t.order(); ++x) {
    if (z.contains(x)) continue;
    const auto o = centralizer_scan(t, x).order();
    if (o < best) { best = o; best_index = x; }
  }
  CHECK(best == 81);
  CHECK(m2.element == best_index);
  CHECK_THROWS_AS(finite_stage_maximality(abelian9(), 1), PreconditionError);
}

// -- properties --------------------------------------------------------------

TEST_CASE("property: sigma on groups agrees with sigma on the reduced structure") {
  const std::vector<Class2Group> groups = {extraspecial(3, 1), extraspecial(3, 2),
                                           heisenberg(3, 2, 1), plane_plus_line(),
                                           central_product(extraspecial(3, 1), 2)};
  for (const auto& g : groups) {
    const auto reduced = reduce_to_bilinear(g);
    for (std::size_t k = 1; k <= 3; ++k) {
      const auto on_group = sigma_on_group(g, k);
      CHECK(on_group.holds == sigma_check(reduced, k).holds);
      if (reduced.n() <= 4 && k <= 2) CHECK(on_group.holds == oracle::sigma_brute(reduced, k));
      if (!on_group.holds) CHECK(group_counterexample_is_valid(g, on_group));
    }
  }
}

TEST_CASE("property: kernel and scan centralizers agree element by element") {
  const std::vector<Class2Group> groups = {extraspecial(3, 1), extraspecial(3, 2),
                                           plane_plus_line(), abelian9(),
                                           extraspecial(5, 1)};
  for (const auto& g : groups) {
    const auto t = as_table(g);
    const auto n = g.order_u64();
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto x = g.element_at(i);
      const auto rec = centralizer(g, x);
      const auto scan = centralizer_scan(t, static_cast<TableGroup::Index>(i));
      REQUIRE(rec.order == BigInt(scan.order()));
      for (std::uint64_t j = 0; j < n; ++j) {
        REQUIRE(scan.contains(static_cast<TableGroup::Index>(j)) == rec.kernel.contains(g.element_at(j).v));
      }
    }
  }
}

TEST_CASE("property: chain orders follow |C_G(x)|^i |G|^(k-i)") {
  for (std::size_t k = 1; k <= 4; ++k) {
    const auto c = sop_chain_direct_power(extraspecial(3, 1), k);
    CHECK(c.valid());
    for (std::size_t i = 0; i < k; ++i) {
      CHECK(c.centralizer_orders[i] == oracle::ipow(9, i + 1) * oracle::ipow(27, k - i - 1));
    }
  }
}
