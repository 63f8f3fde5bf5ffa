#include <doctest.h>

#include "oracles.hpp"
#include "pseudofin/error.hpp"
#include "pseudofin/fplinalg.hpp"

using namespace pseudofin;

namespace {

const PrimeField F3(3);
const PrimeField F5(5);

MatrixFp M(const PrimeField& f, std::size_t cols,
           const std::vector<std::vector<std::int64_t>>& rows) {
  return MatrixFp::from_rows(f, cols, rows);
}

}  // namespace

TEST_CASE("prime field rejects composites and large moduli") {
  CHECK_THROWS_AS(PrimeField(9), PreconditionError);
  CHECK_THROWS_AS(PrimeField(1), PreconditionError);
  CHECK_THROWS_AS(PrimeField(65537), PreconditionError);
  CHECK_NOTHROW(PrimeField(2));
  CHECK_NOTHROW(PrimeField(65521));
  for (Residue a = 1; a < 7; ++a) CHECK(PrimeField(7).mul(a, PrimeField(7).inv(a)) == 1);
  CHECK_THROWS(F3.inv(0));
}

TEST_CASE("vectors reduce coordinates") {
  const VectorFp v(F3, {4, -1, 3});
  CHECK(v[0] == 1);
  CHECK(v[1] == 2);
  CHECK(v[2] == 0);
}

TEST_CASE("rref of the zero matrix") {
  const auto r = rref(MatrixFp(F3, 2, 2));
  CHECK(r.rank == 0);
  CHECK(r.reduced.rows() == 0);
}

TEST_CASE("rref of the identity") {
  const auto r = rref(MatrixFp::identity(F5, 3));
  CHECK(r.rank == 3);
  CHECK(r.reduced == MatrixFp::identity(F5, 3));
}

TEST_CASE("rref of a rank-one matrix matches its row space") {
  const MatrixFp m = M(F3, 2, {{1, 2}, {2, 4}});
  const auto r = rref(m);
  CHECK(r.rank == 1);
  CHECK(r.reduced == M(F3, 2, {{1, 2}}));
  // Oracle: the row space is the 3 multiples of (1, 2).
  const auto rows = oracle::span_set(F3, 2, m.row_vectors());
  CHECK(rows.size() == 3);
  CHECK(rows == oracle::span_set(F3, 2, r.reduced.row_vectors()));
}

TEST_CASE("kernel examples") {
  CHECK(kernel(MatrixFp(F3, 2, 2)) == Subspace::full(F3, 2));
  CHECK(kernel(MatrixFp::identity(F3, 2)).dim() == 0);
  const Subspace k = kernel(M(F3, 2, {{1, 2}}));
  CHECK(k.dim() == 1);
  CHECK(k.contains(VectorFp(F3, {1, 1})));
  // Oracle: test all 9 vectors.
  std::size_t zeros = 0;
  for (const auto& v : oracle::all_vectors(F3, 2)) {
    const bool in = oracle::mat_vec(M(F3, 2, {{1, 2}}), v).is_zero();
    zeros += in;
    CHECK(in == k.contains(v));
  }
  CHECK(zeros == 3);
}

TEST_CASE("solve examples") {
  const VectorFp b(F3, {2, 1});
  CHECK(solve(MatrixFp::identity(F3, 2), b) == b);
  CHECK_FALSE(solve(MatrixFp(F3, 2, 2), b).has_value());
  const MatrixFp m = M(F3, 2, {{1, 1}, {0, 1}});
  const auto x = solve(m, b);
  REQUIRE(x.has_value());
  CHECK(*x == VectorFp(F3, {1, 1}));
  std::size_t hits = 0;
  for (const auto& v : oracle::all_vectors(F3, 2)) hits += oracle::mat_vec(m, v) == b;
  CHECK(hits == 1);
  CHECK_THROWS_AS(solve(m, VectorFp(F3, 3)), DimensionError);
}

TEST_CASE("solve pins free variables to zero") {
  const auto x = solve(M(F3, 3, {{1, 0, 2}}), VectorFp(F3, {1}));
  REQUIRE(x.has_value());
  CHECK(*x == VectorFp(F3, {1, 0, 0}));
}

TEST_CASE("annihilator examples") {
  CHECK(annihilator(Subspace::zero(F3, 2)) == Subspace::full(F3, 2));
  CHECK(annihilator(Subspace::full(F3, 2)).dim() == 0);
  const Subspace line = Subspace::span(F3, 2, std::vector{VectorFp(F3, {1, 0})});
  const Subspace ann = annihilator(line);
  CHECK(ann == Subspace::span(F3, 2, std::vector{VectorFp(F3, {0, 1})}));
  for (const auto& u : oracle::all_vectors(F3, 2)) {
    CHECK(ann.contains(u) == (u.dot(VectorFp(F3, {1, 0})) == 0));
  }
}

TEST_CASE("sum and intersection examples") {
  const Subspace a = Subspace::span(F3, 2, std::vector{VectorFp(F3, {1, 0})});
  const Subspace b = Subspace::span(F3, 2, std::vector{VectorFp(F3, {1, 1})});
  auto same = subspace_ops(a, a);
  CHECK(same.sum == a);
  CHECK(same.intersection == a);
  auto two = subspace_ops(a, b);
  CHECK(two.sum == Subspace::full(F3, 2));
  CHECK(two.intersection.dim() == 0);
  auto nested = subspace_ops(a, Subspace::full(F3, 2));
  CHECK(nested.sum == Subspace::full(F3, 2));
  CHECK(nested.intersection == a);
  CHECK_THROWS_AS(subspace_ops(a, Subspace::zero(F3, 3)), DimensionError);
}

TEST_CASE("subspace enumeration examples") {
  CHECK(enumerate_subspaces(3, 0, F3).size() == 1);
  CHECK(enumerate_subspaces(2, 1, F3).size() == 4);
  CHECK(enumerate_subspaces(4, 2, F3).size() == 130);
  // Independent evaluation of the product formula.
  CHECK(gaussian_binomial(4, 2, 3) == BigInt(130));
}

// -- properties --------------------------------------------------------------

TEST_CASE("property: rref is idempotent and rank plus nullity equals columns") {
  Lcg64 rng(7);
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const PrimeField f(p);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t rows = 1 + rng.below(6), cols = 1 + rng.below(6);
      const MatrixFp m = oracle::random_matrix(f, rows, cols, rng);
      const auto r = rref(m);
      const auto rr = rref(r.reduced);
      CHECK(rr.rank == r.rank);
      CHECK(rr.reduced == r.reduced);
      CHECK(r.rank + kernel(m).dim() == cols);
    }
  }
}

TEST_CASE("property: double annihilator is the identity on subspaces of GF(3)^n") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      for_each_subspace(n, k, F3, [&](const Subspace& s) {
        CHECK(annihilator(annihilator(s)) == s);
        CHECK(annihilator(s).dim() == n - k);
        return true;
      });
    }
  }
}

TEST_CASE("property: modular dimension law on GF(3)^3 with set oracle") {
  std::vector<Subspace> all;
  for (std::size_t k = 0; k <= 3; ++k) {
    for (auto& s : enumerate_subspaces(3, k, F3)) all.push_back(s);
  }
  for (const auto& a : all) {
    for (const auto& b : all) {
      const auto ops = subspace_ops(a, b);
      CHECK(ops.sum.dim() + ops.intersection.dim() == a.dim() + b.dim());
      // Intersection by set arithmetic.
      std::set<std::vector<Residue>> inter;
      const auto sa = oracle::subspace_set(a), sb = oracle::subspace_set(b);
      for (const auto& x : sa)
        if (sb.count(x)) inter.insert(x);
      CHECK(inter == oracle::subspace_set(ops.intersection));
    }
  }
}

TEST_CASE("property: solve agrees with a brute-force search") {
  Lcg64 rng(11);
  for (std::uint32_t p : {3u, 5u}) {
    const PrimeField f(p);
    for (int trial = 0; trial < 80; ++trial) {
      const std::size_t rows = 1 + rng.below(4), cols = 1 + rng.below(4);
      const MatrixFp m = oracle::random_matrix(f, rows, cols, rng);
      VectorFp b(f, rows);
      for (std::size_t i = 0; i < rows; ++i) b.set(i, static_cast<Residue>(rng.below(p)));
      const auto x = solve(m, b);
      bool exists = false;
      for (const auto& v : oracle::all_vectors(f, cols)) exists = exists || oracle::mat_vec(m, v) == b;
      CHECK(x.has_value() == exists);
      if (x) CHECK(oracle::mat_vec(m, *x) == b);
    }
  }
}

TEST_CASE("property: subspace counts match the Gaussian binomial") {
  for (std::uint32_t p : {3u, 5u}) {
    const PrimeField f(p);
    for (std::size_t n = 0; n <= 4; ++n) {
      for (std::size_t k = 0; k <= n; ++k) {
        const auto subs = enumerate_subspaces(n, k, f);
        // Independent evaluation: prod (q^{n-i} - 1) / (q^{k-i} - 1).
        BigInt num = 1, den = 1;
        for (std::size_t i = 0; i < k; ++i) {
          num *= BigInt(oracle::ipow(p, n - i)) - 1;
          den *= BigInt(oracle::ipow(p, k - i)) - 1;
        }
        CHECK(BigInt(subs.size()) == num / den);
        // Every subspace appears once.
        std::set<std::vector<Residue>> keys;
        for (const auto& s : subs) {
          const auto e = s.basis().entries();
          keys.insert({e.begin(), e.end()});
          CHECK(s.dim() == k);
        }
        CHECK(keys.size() == subs.size());
      }
    }
  }
}

TEST_CASE("property: RREF canonical form respects set equality") {
  Lcg64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const MatrixFp a = oracle::random_matrix(F3, 1 + rng.below(3), 3, rng);
    const MatrixFp b = oracle::random_matrix(F3, 1 + rng.below(3), 3, rng);
    const bool same_sets = oracle::span_set(F3, 3, a.row_vectors()) ==
                           oracle::span_set(F3, 3, b.row_vectors());
    CHECK((Subspace::span(a) == Subspace::span(b)) == same_sets);
  }
}
