#include <doctest.h>

#include <array>
#include <set>

#include "oracles.hpp"
#include "pseudofin/error.hpp"
#include "pseudofin/groups.hpp"

using namespace pseudofin;

namespace {

const PrimeField F3(3);

// Center by an all-pairs scan.
std::uint64_t brute_center_order(const TableGroup& t) {
  std::uint64_t count = 0;
  for (TableGroup::Index x = 0; x < t.order(); ++x) {
    bool central = true;
    for (TableGroup::Index y = 0; y < t.order() && central; ++y) {
      central = t.mul(x, y) == t.mul(y, x);
    }
    count += central;
  }
  return count;
}

// Largest element order, by repeated multiplication.
std::uint64_t brute_exponent(const TableGroup& t) {
  std::uint64_t best = 1;
  for (TableGroup::Index x = 0; x < t.order(); ++x) {
    std::uint64_t n = 1;
    for (auto y = x; y != t.identity(); y = t.mul(y, x)) ++n;
    if (x == t.identity()) n = 1;
    best = std::max(best, n);
  }
  return best;
}

// Unitriangular matrices written out as dense arrays.
using Dense = std::vector<std::uint64_t>;

Dense ut_decode(std::uint32_t p, std::size_t dim, std::uint64_t index) {
  Dense m(dim * dim, 0);
  for (std::size_t i = 0; i < dim; ++i) m[i * dim + i] = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      m[i * dim + j] = index % p;
      index /= p;
    }
  }
  return m;
}

std::uint64_t ut_encode(std::uint32_t p, std::size_t dim, const Dense& m) {
  std::uint64_t index = 0, scale = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      index += m[i * dim + j] * scale;
      scale *= p;
    }
  }
  return index;
}

Dense dense_mul(std::uint32_t p, std::size_t dim, const Dense& a, const Dense& b) {
  Dense c(dim * dim, 0);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t k = 0; k < dim; ++k) c[i * dim + j] += a[i * dim + k] * b[k * dim + j];
  for (auto& x : c) x %= p;
  return c;
}

TableGroup cyclic(std::size_t n) {
  std::vector<TableGroup::Index> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a * n + b] = static_cast<TableGroup::Index>((a + b) % n);
  return TableGroup::from_cayley_table(n, std::move(table));
}

TableGroup symmetric3() {
  // Permutations of {0,1,2} in lexicographic order.
  const std::vector<std::array<int, 3>> perms = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                                 {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<TableGroup::Index> table(36);
  for (std::size_t a = 0; a < 6; ++a) {
    for (std::size_t b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
      for (std::size_t k = 0; k < 6; ++k)
        if (perms[k] == c) table[a * 6 + b] = static_cast<TableGroup::Index>(k);
    }
  }
  return TableGroup::from_cayley_table(6, std::move(table));
}

}  // namespace

TEST_CASE("group_from_bilinear examples") {
  const auto ab = group_from_bilinear(BilinearStructure(F3, 1, 1));
  CHECK(ab.order() == 9);
  CHECK(ab.is_abelian());
  const auto t = as_table(ab);
  CHECK(brute_center_order(t) == 9);

  const auto ex = group_from_bilinear(BilinearStructure::symplectic(F3, 1));
  const auto te = as_table(ex);
  CHECK(te.order() == 27);
  CHECK(brute_exponent(te) == 3);

  const auto os = orthogonal_sum(BilinearStructure::symplectic(F3, 1),
                                 BilinearStructure::symplectic(F3, 1));
  BilinearStructure wide(F3, 4, 2);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      wide.set_gram_entry(i, j, VectorFp(F3, {os.gram_coord(i, j, 0), i < 2 && j < 2 ? os.gram_coord(i, j, 0) : Residue{0}}));
  CHECK(group_from_bilinear(wide).order() == 729);
}

TEST_CASE("group_from_bilinear errors") {
  BilinearStructure bad(F3, 2, 1);
  bad.set_gram_entry(0, 1, VectorFp(F3, {1}));
  CHECK_THROWS_AS(group_from_bilinear(bad), PreconditionError);
  CHECK_THROWS_AS(group_from_bilinear(BilinearStructure::symplectic(PrimeField(2), 1)),
                  PreconditionError);
}

TEST_CASE("extraspecial examples") {
  for (std::size_t k : {1u, 2u}) {
    const auto g = extraspecial(3, k);
    const auto t = as_table(g);
    CHECK(t.order() == oracle::ipow(3, 2 * k + 1));
    CHECK(brute_center_order(t) == 3);
    CHECK(brute_exponent(t) == 3);
  }
  CHECK(extraspecial(5, 1).order() == 125);
}

TEST_CASE("least irreducible polynomials have no roots and are least") {
  for (std::uint32_t p : {3u, 5u}) {
    const PrimeField f(p);
    for (std::size_t deg : {2u, 3u}) {
      const auto c = least_irreducible_polynomial(f, deg);
      REQUIRE(c.size() == deg);
      auto eval = [&](const std::vector<std::uint64_t>& coeffs, std::uint64_t x) {
        std::uint64_t acc = 1;  // leading coefficient
        for (std::size_t i = deg; i-- > 0;) acc = (acc * x + coeffs[i]) % p;
        return acc;
      };
      // Degree <= 3: irreducible iff no root. Scan codes in increasing order.
      std::uint64_t first = 0;
      for (std::uint64_t code = 0;; ++code) {
        std::vector<std::uint64_t> coeffs(deg);
        std::uint64_t x = code;
        for (auto& ci : coeffs) { ci = x % p; x /= p; }
        bool root = false;
        for (std::uint64_t r = 0; r < p; ++r) root = root || eval(coeffs, r) == 0;
        if (!root) { first = code; break; }
      }
      std::uint64_t code = 0, scale = 1;
      for (auto ci : c) { code += ci * scale; scale *= p; }
      CHECK(code == first);
    }
  }
  CHECK(least_irreducible_polynomial(F3, 2) == std::vector<Residue>{1, 0});
}

TEST_CASE("heisenberg examples") {
  CHECK(heisenberg(3, 1, 1).structure() == extraspecial(3, 1).structure());
  const auto h = heisenberg(3, 2, 1);
  CHECK(h.order() == 729);
  CHECK(brute_center_order(as_table(h)) == 9);
  CHECK(h.radical_v().dim() == 0);
  CHECK(sigma_check(h.structure(), 1).holds);
  CHECK(oracle::sigma_brute(h.structure(), 1));
}

TEST_CASE("heisenberg with m = 2 keeps class 2, exponent p and center of rank n") {
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, std::size_t>>{{3, 1}, {5, 1}, {3, 2}}) {
    const auto h = heisenberg(p, n, 2);
    CHECK(h.n() == 4 * n);
    CHECK(h.d() == n);
    CHECK(h.radical_v().dim() == 0);
    if (h.order_u64() <= 10'000) {
      const auto t = as_table(h);
      CHECK(brute_center_order(t) == oracle::ipow(p, n));
      CHECK(brute_exponent(t) == p);
      CHECK(lower_central_series(t).nilpotency_class == 2);
    }
  }
}

TEST_CASE("central product examples") {
  const auto e1 = extraspecial(3, 1);
  CHECK(central_product(e1, 1).structure() == e1.structure());
  const auto c2 = central_product(e1, 2);
  CHECK(c2.order() == 243);
  CHECK(as_table(c2).order() == 27 * 27 / 3);
  CHECK(c2.structure() == extraspecial(3, 2).structure());
  CHECK(central_product(heisenberg(3, 2, 1), 2).order() == BigInt(729) * 729 / 9);
  CHECK_THROWS_AS(central_product(e1, 0), PreconditionError);
}

TEST_CASE("direct power examples") {
  const auto e1 = extraspecial(3, 1);
  const auto t1 = direct_power(e1, 1), t0 = as_table(e1);
  CHECK(t1.order() == 27);
  for (TableGroup::Index a = 0; a < 27; ++a)
    for (TableGroup::Index b = 0; b < 27; ++b) CHECK(t1.mul(a, b) == t0.mul(a, b));
  const auto t2 = direct_power(e1, 2);
  CHECK(t2.order() == 729);
  CHECK(brute_center_order(t2) == 9);
  CHECK(center(t2).order() == 9);
  CHECK_THROWS_AS(direct_power(e1, 5), BudgetExceeded);
}

TEST_CASE("unitriangular groups agree with dense matrix products") {
  for (auto [p, dim] : std::vector<std::pair<std::uint32_t, std::size_t>>{{3, 3}, {2, 4}, {3, 4}}) {
    const auto g = ut_group(p, dim);
    CHECK(g.order() == oracle::ipow(p, dim * (dim - 1) / 2));
    Lcg64 rng(p * 100 + dim);
    for (int t = 0; t < 300; ++t) {
      const auto a = rng.below(g.order()), b = rng.below(g.order());
      const auto expect = ut_encode(p, dim, dense_mul(p, dim, ut_decode(p, dim, a), ut_decode(p, dim, b)));
      CHECK(g.mul(static_cast<TableGroup::Index>(a), static_cast<TableGroup::Index>(b)) == expect);
    }
  }
  CHECK_THROWS_AS(ut_group(3, 1), PreconditionError);
  CHECK_THROWS_AS(ut_group(3, 7), BudgetExceeded);
}

TEST_CASE("lower central series examples") {
  const auto ab = lower_central_series(as_table(group_from_bilinear(BilinearStructure(F3, 2, 1))));
  CHECK(ab.orders == std::vector<std::uint64_t>{27, 1});
  CHECK(ab.nilpotency_class == 1);
  const auto ex = lower_central_series(as_table(extraspecial(3, 1)));
  CHECK(ex.orders == std::vector<std::uint64_t>{27, 3, 1});
  CHECK(ex.nilpotency_class == 2);
  const auto u34 = lower_central_series(ut_group(3, 4));
  CHECK(u34.orders == std::vector<std::uint64_t>{729, 27, 3, 1});
  CHECK(u34.nilpotency_class == 3);
  CHECK(lower_central_series(ut_group(3, 3)).nilpotency_class == 2);
  CHECK(lower_central_series(ut_group(2, 4)).nilpotency_class == 3);
  CHECK_THROWS_AS(lower_central_series(symmetric3()), PreconditionError);
}

TEST_CASE("hall-witt examples") {
  CHECK(hall_witt_check(ut_group(2, 4), CheckMode::exhaustive()).holds);
  const auto s = hall_witt_check(ut_group(3, 4), CheckMode::sample(100'000, 1));
  CHECK(s.holds);
  CHECK(s.cases_checked == 100'000);
  const auto e = hall_witt_check(as_table(extraspecial(3, 1)), CheckMode::exhaustive());
  CHECK(e.holds);
  CHECK(e.cases_checked == 27 * 27 * 27);
}

TEST_CASE("laurent bound examples") {
  const auto a = laurent_bound_check(ut_group(3, 4));
  CHECK(a.m == 2);
  CHECK(a.gamma3_order == 3);
  CHECK(a.bound == BigInt(oracle::ipow(3, 16)));
  CHECK(a.holds);
  const auto b = laurent_bound_check(ut_group(2, 4));
  CHECK(b.m == 2);
  CHECK(b.gamma3_order == 2);
  CHECK(b.bound == BigInt(oracle::ipow(2, 16)));
  CHECK(b.holds);
  const auto c = laurent_bound_check(as_table(extraspecial(3, 1)));
  CHECK(c.m == 1);
  CHECK(c.gamma3_order == 1);
  CHECK(c.holds);
}

TEST_CASE("laurent bound rejects inputs outside the hypothesis") {
  CHECK_THROWS_WITH_AS(laurent_bound_check(ut_group(2, 5)),
                       doctest::Contains("lemma hypothesis requires class 3"), PreconditionError);
  CHECK_THROWS_AS(laurent_bound_check(cyclic(6)), PreconditionError);
}

TEST_CASE("commutator power examples") {
  const auto a = commutator_power_check(extraspecial(3, 1), {2, 3}, CheckMode::exhaustive());
  CHECK(a.holds);
  CHECK(a.cases_checked > 0);
  CHECK(commutator_power_check(group_from_bilinear(BilinearStructure(F3, 2, 1)), {2, 3},
                               CheckMode::exhaustive())
            .holds);
  CHECK(commutator_power_check(extraspecial(5, 1), {2, 3, 4, 5}, CheckMode::exhaustive()).holds);
}

TEST_CASE("table validation") {
  std::vector<TableGroup::Index> t = {0, 1, 1, 1};
  CHECK_THROWS_AS(TableGroup::from_cayley_table(2, t), PreconditionError);
  CHECK_THROWS_AS(TableGroup::from_cayley_table(2, {0, 1, 1, 5}), PreconditionError);
  CHECK_THROWS_AS(TableGroup::from_cayley_table(2, {0, 1, 1}), PreconditionError);
}

TEST_CASE("a damaged table fails associativity") {
  // Z/5 with two entries swapped so identity and inverse laws survive.
  auto table = cyclic(5).cayley_table();
  std::swap(table[1 * 5 + 2], table[1 * 5 + 3]);  // 1+2 -> 4, 1+3 -> 3
  std::swap(table[2 * 5 + 1], table[3 * 5 + 1]);
  const auto g = TableGroup::from_cayley_table(5, table);
  const auto r = associativity_check(g, CheckMode::exhaustive());
  CHECK_FALSE(r.holds);
  REQUIRE(r.failure);
  const auto& f = *r.failure;
  const auto x = static_cast<TableGroup::Index>(f[0]), y = static_cast<TableGroup::Index>(f[1]),
             z = static_cast<TableGroup::Index>(f[2]);
  CHECK(g.mul(g.mul(x, y), z) != g.mul(x, g.mul(y, z)));
}

// -- properties --------------------------------------------------------------

TEST_CASE("property: every constructed class-2 group passes its certificate") {
  const std::vector<Class2Group> groups = {
      extraspecial(3, 1), extraspecial(3, 2), extraspecial(5, 1), heisenberg(3, 2, 1),
      heisenberg(3, 1, 2), central_product(extraspecial(3, 1), 2),
      group_from_bilinear(BilinearStructure(F3, 3, 1)),
      group_from_bilinear(orthogonal_sum(BilinearStructure::symplectic(F3, 1), BilinearStructure(F3, 1, 1)))};
  for (const auto& g : groups) {
    const auto c = certify(g);
    CHECK(c.passed());
    CHECK(c.exhaustive);
    const auto t = as_table(g);
    CHECK(c.center_order == brute_center_order(t));
    // Derived subgroup by closure of all commutators.
    CHECK(c.derived_order == commutator_subgroup(t, whole_group(t), whole_group(t)).order());
    CHECK(BigInt(t.order()) == g.order());
  }
}

TEST_CASE("property: class is 2 for nonzero forms and 1 for the zero form") {
  Lcg64 rng(41);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 2 + rng.below(2);
    BilinearStructure s(F3, n, 1 + rng.below(2));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        VectorFp w(F3, s.d());
        for (std::size_t c = 0; c < s.d(); ++c) w.set(c, static_cast<Residue>(rng.below(3)));
        s.set_gram_entry(i, j, w);
        s.set_gram_entry(j, i, w.scaled(2));
      }
    }
    const auto series = lower_central_series(as_table(group_from_bilinear(s)));
    CHECK(series.nilpotency_class == (s.is_zero() ? 1u : 2u));
    CHECK(hall_witt_check(as_table(group_from_bilinear(s)), CheckMode::sample(2000, trial)).holds);
  }
}

TEST_CASE("property: order formulas") {
  const auto e1 = extraspecial(3, 1);
  for (std::size_t c = 1; c <= 4; ++c) {
    CHECK(central_product(e1, c).order() * big_pow(3, c - 1) == big_pow(27, c));
  }
  for (std::size_t k = 1; k <= 3; ++k) CHECK(direct_power(e1, k).order() == oracle::ipow(27, k));
}

TEST_CASE("property: iterating the gamma computation on gamma_2 matches [[G,G],G]") {
  const auto g = ut_group(2, 4);
  const auto series = lower_central_series(g);
  const auto whole = whole_group(g);
  const auto g2 = commutator_subgroup(g, whole, whole);
  CHECK(g2.elements.size() == series.orders[1]);
  // Brute force: all [[x, y], z], closed under multiplication.
  std::set<TableGroup::Index> gens;
  for (TableGroup::Index x = 0; x < g.order(); ++x)
    for (TableGroup::Index y = 0; y < g.order(); ++y) {
      const auto c = g.commutator(x, y);
      for (TableGroup::Index z = 0; z < g.order(); ++z) gens.insert(g.commutator(c, z));
    }
  const auto closure = generate_subgroup(g, {gens.begin(), gens.end()});
  const auto g3 = commutator_subgroup(g, g2, whole);
  CHECK(g3.order() == closure.order());
  CHECK(g3.order() == series.orders[2]);
  for (auto x : closure.elements) CHECK(series.terms[2].contains(x));
}

TEST_CASE("property: sampled identity checks are reproducible and thread independent") {
  const auto g = ut_group(3, 4);
  const auto a = hall_witt_check(g, CheckMode::sample(5000, 9), 1);
  const auto b = hall_witt_check(g, CheckMode::sample(5000, 9), 4);
  CHECK(a.holds == b.holds);
  CHECK(a.cases_checked == b.cases_checked);
  const auto e = as_table(extraspecial(3, 1));
  CHECK(associativity_check(e, CheckMode::exhaustive(), 1).cases_checked ==
        associativity_check(e, CheckMode::exhaustive(), 3).cases_checked);
}

TEST_CASE("property: class-2 element arithmetic matches the table view") {
  const auto g = heisenberg(3, 2, 1);
  const auto t = as_table(g);
  Lcg64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = rng.below(729), b = rng.below(729);
    const auto x = g.element_at(a), y = g.element_at(b);
    CHECK(g.index_of(g.multiply(x, y)) == t.mul(static_cast<TableGroup::Index>(a), static_cast<TableGroup::Index>(b)));
    CHECK(g.commutator(x, y) == g.make(VectorFp(F3, 4), beta_eval(g.structure(), x.v, y.v)));
    CHECK(g.power(x, 3) == g.identity());
    CHECK(g.multiply(x, g.inverse(x)) == g.identity());
  }
}
