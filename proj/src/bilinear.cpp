#include "pseudofin/bilinear.hpp"

#include <string>
#include <utility>

#include "pseudofin/error.hpp"
#include "pseudofin/parallel.hpp"

namespace pseudofin {

BilinearStructure::BilinearStructure(PrimeField field, std::size_t n,
                                     std::size_t d)
    : BilinearStructure(field, n, d, std::vector<Residue>(n * n * d, 0)) {}

BilinearStructure::BilinearStructure(PrimeField field, std::size_t n,
                                     std::size_t d, std::vector<Residue> gram)
    : field_(field), n_(n), d_(d), gram_(std::move(gram)) {
  if (n == 0 || d == 0) {
    throw PreconditionError("bilinear structure needs dim V >= 1 and dim W >= 1");
  }
  if (gram_.size() != n * n * d) {
    throw DimensionError("gram array has " + std::to_string(gram_.size()) +
                         " residues, expected " + std::to_string(n * n * d));
  }
  for (auto& r : gram_) r %= field_.p();
}

BilinearStructure BilinearStructure::symplectic(PrimeField field, std::size_t k) {
  BilinearStructure s(field, 2 * k, 1);
  for (std::size_t i = 0; i < k; ++i) {
    s.gram_[(2 * i) * s.n_ + 2 * i + 1] = 1;
    s.gram_[(2 * i + 1) * s.n_ + 2 * i] = field.neg(1);
  }
  return s;
}

VectorFp BilinearStructure::gram_entry(std::size_t i, std::size_t j) const {
  VectorFp w(field_, d_);
  for (std::size_t c = 0; c < d_; ++c) w.set(c, gram_coord(i, j, c));
  return w;
}

void BilinearStructure::set_gram_entry(std::size_t i, std::size_t j,
                                       const VectorFp& w) {
  if (w.dim() != d_ || i >= n_ || j >= n_) {
    throw DimensionError("gram entry index or dimension out of range");
  }
  for (std::size_t c = 0; c < d_; ++c) gram_[(i * n_ + j) * d_ + c] = w[c];
}

bool BilinearStructure::is_zero() const noexcept {
  for (auto r : gram_) {
    if (r != 0) return false;
  }
  return true;
}

namespace {

void require_dim(const BilinearStructure& s, const VectorFp& v) {
  if (v.dim() != s.n() || v.field() != s.field()) {
    throw DimensionError("vector of dim " + std::to_string(v.dim()) +
                         " does not lie in V of dim " + std::to_string(s.n()));
  }
}

}  // namespace

VectorFp beta_eval(const BilinearStructure& s, const VectorFp& v1,
                   const VectorFp& v2) {
  require_dim(s, v1);
  require_dim(s, v2);
  const auto& f = s.field();
  std::vector<std::uint64_t> acc(s.d(), 0);
  for (std::size_t i = 0; i < s.n(); ++i) {
    if (v1[i] == 0) continue;
    for (std::size_t j = 0; j < s.n(); ++j) {
      if (v2[j] == 0) continue;
      const Residue coef = f.mul(v1[i], v2[j]);
      for (std::size_t c = 0; c < s.d(); ++c) {
        acc[c] = (acc[c] + static_cast<std::uint64_t>(coef) * s.gram_coord(i, j, c)) %
                 f.p();
      }
    }
  }
  VectorFp out(f, s.d());
  for (std::size_t c = 0; c < s.d(); ++c) out.set(c, static_cast<Residue>(acc[c]));
  return out;
}

MatrixFp left_map(const BilinearStructure& s, const VectorFp& v) {
  require_dim(s, v);
  const auto& f = s.field();
  MatrixFp m(f, s.d(), s.n());
  // Column j is beta(v, e_j) = sum_i v_i gram(i, j).
  for (std::size_t j = 0; j < s.n(); ++j) {
    for (std::size_t c = 0; c < s.d(); ++c) {
      std::uint64_t acc = 0;
      for (std::size_t i = 0; i < s.n(); ++i) {
        acc += static_cast<std::uint64_t>(v[i]) * s.gram_coord(i, j, c);
      }
      m.set(c, j, static_cast<Residue>(acc % f.p()));
    }
  }
  return m;
}

MatrixFp right_map(const BilinearStructure& s, const VectorFp& v) {
  require_dim(s, v);
  const auto& f = s.field();
  MatrixFp m(f, s.d(), s.n());
  for (std::size_t i = 0; i < s.n(); ++i) {
    for (std::size_t c = 0; c < s.d(); ++c) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < s.n(); ++j) {
        acc += static_cast<std::uint64_t>(v[j]) * s.gram_coord(i, j, c);
      }
      m.set(c, i, static_cast<Residue>(acc % f.p()));
    }
  }
  return m;
}

bool is_alternating(const BilinearStructure& s) {
  const auto& f = s.field();
  for (std::size_t i = 0; i < s.n(); ++i) {
    for (std::size_t c = 0; c < s.d(); ++c) {
      if (s.gram_coord(i, i, c) != 0) return false;
    }
    for (std::size_t j = i + 1; j < s.n(); ++j) {
      for (std::size_t c = 0; c < s.d(); ++c) {
        if (f.add(s.gram_coord(i, j, c), s.gram_coord(j, i, c)) != 0) return false;
      }
    }
  }
  return true;
}

Subspace radical(const BilinearStructure& s) {
  // Row (side, j, c) holds the coefficients of v in beta(v, e_j)_c
  // (side 0) or beta(e_j, v)_c (side 1).
  const std::size_t n = s.n(), d = s.d();
  MatrixFp m(s.field(), 2 * n * d, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t c = 0; c < d; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        m.set(j * d + c, i, s.gram_coord(i, j, c));
        m.set(n * d + j * d + c, i, s.gram_coord(j, i, c));
      }
    }
  }
  return kernel(m);
}

BilinearStructure orthogonal_sum(const BilinearStructure& a,
                                 const BilinearStructure& b) {
  if (a.d() != b.d() || a.field() != b.field()) {
    throw DimensionError("orthogonal sum needs a common W");
  }
  const std::size_t n = a.n() + b.n(), d = a.d();
  std::vector<Residue> gram(n * n * d, 0);
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j)
      for (std::size_t c = 0; c < d; ++c)
        gram[(i * n + j) * d + c] = a.gram_coord(i, j, c);
  for (std::size_t i = 0; i < b.n(); ++i)
    for (std::size_t j = 0; j < b.n(); ++j)
      for (std::size_t c = 0; c < d; ++c)
        gram[((a.n() + i) * n + a.n() + j) * d + c] = b.gram_coord(i, j, c);
  return BilinearStructure(a.field(), n, d, std::move(gram));
}

MatrixFp stacked_left_map(const BilinearStructure& s,
                          const std::vector<VectorFp>& tuple) {
  MatrixFp m(s.field(), 0, s.n());
  for (const auto& v : tuple) m = m.vstack(left_map(s, v));
  return m;
}

namespace {

// A target outside the column space of a non-surjective stacked map: take
// the first RREF basis vector y of the left kernel and the unit vector at
// its pivot, so <y, b> = 1.
std::vector<VectorFp> unreachable_target(const BilinearStructure& s,
                                         const MatrixFp& stacked,
                                         std::size_t k) {
  const Subspace left = kernel(stacked.transpose());
  const std::size_t pivot = left.pivots().front();
  std::vector<VectorFp> target;
  for (std::size_t i = 0; i < k; ++i) {
    VectorFp w(s.field(), s.d());
    if (pivot / s.d() == i) w.set(pivot % s.d(), 1);
    target.push_back(std::move(w));
  }
  return target;
}

VectorFp vector_at(PrimeField f, std::size_t dim, std::uint64_t index) {
  VectorFp v(f, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    v.set(i, static_cast<Residue>(index % f.p()));
    index /= f.p();
  }
  return v;
}

std::uint64_t small_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

// Literal quantification over ordered independent pairs; stops at the first
// failing pair.
AxiomVerdict psi_sweep(const BilinearStructure& s) {
  AxiomVerdict verdict;
  const auto& f = s.field();
  const std::uint64_t size = small_pow(f.p(), s.n());
  std::vector<std::optional<MatrixFp>> maps(size);
  auto map_of = [&](std::uint64_t a, const VectorFp& v) -> const MatrixFp& {
    if (!maps[a]) maps[a] = left_map(s, v);
    return *maps[a];
  };
  for (std::uint64_t a = 1; a < size; ++a) {
    const VectorFp v1 = vector_at(f, s.n(), a);
    for (std::uint64_t b = 1; b < size; ++b) {
      const VectorFp v2 = vector_at(f, s.n(), b);
      std::vector<VectorFp> pair{v1, v2};
      if (rank(MatrixFp::from_vectors(f, s.n(), pair)) < 2) continue;
      ++verdict.cases_checked;
      const MatrixFp stacked = map_of(a, v1).vstack(map_of(b, v2));
      if (rank(stacked) == 2 * s.d()) continue;
      verdict.holds = false;
      verdict.counterexample =
          Counterexample{std::move(pair), unreachable_target(s, stacked, 2)};
      return verdict;
    }
  }
  return verdict;
}

}  // namespace

AxiomVerdict psi_check(const BilinearStructure& s) {
  if (s.n() < 2) {
    throw PreconditionError("hypothesis of psi requires dim V >= 2");
  }
  return psi_sweep(s);
}

AxiomVerdict sigma_check(const BilinearStructure& s, std::size_t k) {
  if (k == 0) throw PreconditionError("sigma_k requires k >= 1");
  AxiomVerdict verdict;
  for_each_subspace(s.n(), k, s.field(), [&](const Subspace& sub) {
    ++verdict.cases_checked;
    std::vector<VectorFp> tuple = sub.basis().row_vectors();
    const MatrixFp stacked = stacked_left_map(s, tuple);
    if (rank(stacked) == k * s.d()) return true;
    verdict.holds = false;
    verdict.counterexample =
        Counterexample{std::move(tuple), unreachable_target(s, stacked, k)};
    return false;
  });
  return verdict;
}

bool counterexample_is_valid(const BilinearStructure& s,
                             const Counterexample& ce) {
  const auto& f = s.field();
  if (ce.tuple.size() != ce.target.size() || ce.tuple.empty()) return false;
  if (rank(MatrixFp::from_vectors(f, s.n(), ce.tuple)) != ce.tuple.size()) {
    return false;
  }
  const std::uint64_t size = small_pow(f.p(), s.n());
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    const VectorFp z = vector_at(f, s.n(), idx);
    bool all = true;
    for (std::size_t i = 0; i < ce.tuple.size() && all; ++i) {
      all = beta_eval(s, ce.tuple[i], z) == ce.target[i];
    }
    if (all) return false;
  }
  return true;
}

FailureDensity sigma_failure_density(const BilinearStructure& s, std::size_t k,
                                     unsigned threads) {
  if (k == 0 || k > s.n()) {
    throw PreconditionError("failure density requires 1 <= k <= dim V");
  }
  const auto subspaces = enumerate_subspaces(s.n(), k, s.field());
  const std::uint64_t p = s.field().p();

  struct Tally {
    std::uint64_t failing = 0;
    BigInt unreachable = 0;
  };
  const Tally tally = parallel_reduce(
      subspaces.size(), threads, Tally{},
      [&](std::uint64_t begin, std::uint64_t end) {
        Tally t;
        for (auto i = begin; i < end; ++i) {
          const std::size_t r =
              rank(stacked_left_map(s, subspaces[i].basis().row_vectors()));
          if (r == k * s.d()) continue;
          ++t.failing;
          t.unreachable += big_pow(p, k * s.d()) - big_pow(p, r);
        }
        return t;
      },
      [](Tally a, Tally b) {
        a.failing += b.failing;
        a.unreachable += b.unreachable;
        return a;
      });

  FailureDensity out;
  out.subspaces = subspaces.size();
  out.failing_subspaces = tally.failing;
  out.failing_subspace_fraction = Rational(tally.failing, out.subspaces);
  if (tally.failing > 0) {
    out.unreachable_target_fraction =
        Rational(tally.unreachable, BigInt(tally.failing) * big_pow(p, k * s.d()));
  }
  return out;
}

BilinearStructure bilinear_map_at(PrimeField field, std::size_t n,
                                  std::size_t d, std::uint64_t index) {
  std::vector<Residue> gram(n * n * d);
  for (auto& g : gram) {
    g = static_cast<Residue>(index % field.p());
    index /= field.p();
  }
  return BilinearStructure(field, n, d, std::move(gram));
}

ExhaustReport lemma_bil_exhaust(std::uint32_t p, std::size_t n, std::size_t d,
                                std::uint64_t budget, unsigned threads) {
  const PrimeField field(p);
  if (p == 2) throw PreconditionError("lemma verifier requires an odd prime");
  if (n == 0 || d == 0) throw PreconditionError("dimensions must be >= 1");
  const BigInt total = big_pow(p, d * n * n);
  if (total > budget) {
    throw BudgetExceeded("enumeration requires " + total.str() +
                         " bilinear maps, budget is " + std::to_string(budget));
  }
  const auto count = static_cast<std::uint64_t>(total);

  struct Tally {
    std::uint64_t satisfying = 0;
    std::optional<std::uint64_t> first;
  };
  const Tally tally = parallel_reduce(
      count, threads, Tally{},
      [&](std::uint64_t begin, std::uint64_t end) {
        Tally t;
        if (begin == end) return t;
        BilinearStructure s = bilinear_map_at(field, n, d, begin);
        std::vector<Residue> digits = s.gram();
        for (auto idx = begin; idx < end; ++idx) {
          // With n = 1 there are no independent pairs: psi holds vacuously.
          const bool holds = n < 2 || psi_sweep(s).holds;
          if (holds) {
            ++t.satisfying;
            if (!t.first) t.first = idx;
          }
          for (auto& g : digits) {
            if (++g < p) break;
            g = 0;
          }
          s = BilinearStructure(field, n, d, digits);
        }
        return t;
      },
      [](Tally a, Tally b) {
        a.satisfying += b.satisfying;
        if (!a.first || (b.first && *b.first < *a.first)) a.first = b.first;
        return a;
      });

  ExhaustReport report;
  report.p = p;
  report.n = n;
  report.d = d;
  report.maps_checked = count;
  report.satisfying_count = tally.satisfying;
  report.first_satisfying_index = tally.first;
  report.refutation = n >= 2 && d >= 2 && tally.satisfying > 0;
  return report;
}

CountingBound counting_bound(std::uint32_t p, std::size_t n, std::size_t d) {
  const PrimeField field(p);
  if (n < 2 || d < 1) throw PreconditionError("counting bound needs n >= 2, d >= 1");
  CountingBound out;
  out.vectors_available = big_pow(p, n) - 1;
  out.family_size = out.vectors_available / (p - 1);
  out.vectors_required = out.family_size * (big_pow(p, d) - 1);
  out.packing_possible = out.vectors_required <= out.vectors_available;
  return out;
}

}  // namespace pseudofin
