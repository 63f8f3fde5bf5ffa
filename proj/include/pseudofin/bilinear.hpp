#pragma once

// Two-sorted bilinear structures (V, W, beta) over GF(p) and the axioms
// evaluated on them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pseudofin/bigint.hpp"
#include "pseudofin/fplinalg.hpp"

namespace pseudofin {

// beta: V x V -> W with dim V = n, dim W = d, stored through its structure
// constants gram(i, j) = beta(e_i, e_j) in W.
class BilinearStructure {
 public:
  // The zero map. Requires n >= 1 and d >= 1.
  BilinearStructure(PrimeField field, std::size_t n, std::size_t d);
  // gram is row-major over (i, j, c): gram[(i*n + j)*d + c].
  BilinearStructure(PrimeField field, std::size_t n, std::size_t d,
                    std::vector<Residue> gram);

  // Standard symplectic form on GF(p)^{2k} with values in GF(p): e_{2i}
  // pairs with e_{2i+1}.
  static BilinearStructure symplectic(PrimeField field, std::size_t k);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }

  Residue gram_coord(std::size_t i, std::size_t j, std::size_t c) const {
    return gram_[(i * n_ + j) * d_ + c];
  }
  VectorFp gram_entry(std::size_t i, std::size_t j) const;
  void set_gram_entry(std::size_t i, std::size_t j, const VectorFp& w);
  const std::vector<Residue>& gram() const noexcept { return gram_; }

  bool is_zero() const noexcept;

  friend bool operator==(const BilinearStructure&,
                         const BilinearStructure&) = default;

 private:
  PrimeField field_;
  std::size_t n_;
  std::size_t d_;
  std::vector<Residue> gram_;
};

VectorFp beta_eval(const BilinearStructure& s, const VectorFp& v1,
                   const VectorFp& v2);
// d x n matrix of z -> beta(v, z).
MatrixFp left_map(const BilinearStructure& s, const VectorFp& v);
// d x n matrix of z -> beta(z, v).
MatrixFp right_map(const BilinearStructure& s, const VectorFp& v);
bool is_alternating(const BilinearStructure& s);
// {v : beta(v, .) = 0 and beta(., v) = 0}
Subspace radical(const BilinearStructure& s);
// Orthogonal sum of forms sharing the same W.
BilinearStructure orthogonal_sum(const BilinearStructure& a,
                                 const BilinearStructure& b);

// Rows beta(v_1, .), ..., beta(v_k, .) stacked into a (k d) x n matrix.
MatrixFp stacked_left_map(const BilinearStructure& s,
                          const std::vector<VectorFp>& tuple);

struct Counterexample {
  // Linearly independent vectors of V.
  std::vector<VectorFp> tuple;
  // Targets in W, one per tuple entry, with no simultaneous solution z.
  std::vector<VectorFp> target;
};

struct AxiomVerdict {
  bool holds = true;
  std::optional<Counterexample> counterexample;
  std::uint64_t cases_checked = 0;
};

// psi: every independent pair v1, v2 and every (w1, w2) admit z with
// beta(v1, z) = w1 and beta(v2, z) = w2. Quantifies literally over ordered
// independent pairs. Throws PreconditionError when n < 2.
AxiomVerdict psi_check(const BilinearStructure& s);

// sigma_k on the structure: quantifies over one RREF basis per
// k-dimensional subspace of V. k > n holds vacuously.
AxiomVerdict sigma_check(const BilinearStructure& s, std::size_t k);

// Replays a counterexample by sweeping all z in V.
bool counterexample_is_valid(const BilinearStructure& s,
                             const Counterexample& ce);

struct FailureDensity {
  Rational failing_subspace_fraction;
  Rational unreachable_target_fraction;
  std::uint64_t subspaces = 0;
  std::uint64_t failing_subspaces = 0;
};

FailureDensity sigma_failure_density(const BilinearStructure& s, std::size_t k,
                                     unsigned threads = 1);

struct ExhaustReport {
  std::uint32_t p = 0;
  std::size_t n = 0;
  std::size_t d = 0;
  std::uint64_t maps_checked = 0;
  std::uint64_t satisfying_count = 0;
  // Odometer index of the first psi-satisfying map, if any.
  std::optional<std::uint64_t> first_satisfying_index;
  // A satisfying map with n >= 2 and d >= 2.
  bool refutation = false;
};

inline constexpr std::uint64_t kDefaultMapBudget = 10'000'000;

// Enumerates all p^{d n^2} bilinear maps GF(p)^n x GF(p)^n -> GF(p)^d and
// counts those satisfying psi. Throws BudgetExceeded when the map count
// exceeds budget.
ExhaustReport lemma_bil_exhaust(std::uint32_t p, std::size_t n, std::size_t d,
                                std::uint64_t budget = kDefaultMapBudget,
                                unsigned threads = 1);

// Decodes map number `index` of the enumeration order used above.
BilinearStructure bilinear_map_at(PrimeField field, std::size_t n,
                                  std::size_t d, std::uint64_t index);

struct CountingBound {
  BigInt family_size;
  BigInt vectors_required;
  BigInt vectors_available;
  bool packing_possible = false;
};

// Dual-space packing count: (p^n-1)/(p-1) subspaces of dimension d meeting
// pairwise in 0 need (p^n-1)/(p-1) * (p^d-1) nonzero vectors out of p^n-1.
CountingBound counting_bound(std::uint32_t p, std::size_t n, std::size_t d);

}  // namespace pseudofin
