#pragma once

// Concrete finite groups: class-2 exponent-p groups presented on V x W by an
// alternating form, and table groups given by an element count plus a
// multiplication oracle (unitriangular groups, direct powers, loaded
// Cayley tables).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pseudofin/bigint.hpp"
#include "pseudofin/bilinear.hpp"
#include "pseudofin/fplinalg.hpp"

namespace pseudofin {

struct GroupElement {
  VectorFp v;
  VectorFp w;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

// Elements (v, w) in V x W with
//   (v1, w1)(v2, w2) = (v1 + v2, w1 + w2 + beta(v1, v2) / 2).
// For alternating beta and odd p this has exponent p and
// [(v1, w1), (v2, w2)] = (0, beta(v1, v2)).
class Class2Group {
 public:
  // Throws PreconditionError for p = 2 or a non-alternating form. On
  // construction x^p = 1 and [x, s] = (0, beta(x.v, s.v)) are checked for
  // every element x against every generator s (up to 10^4 elements; seeded
  // samples above) and a failure throws Error. certify() runs the full
  // pairwise and triple checks.
  explicit Class2Group(BilinearStructure structure);

  const BilinearStructure& structure() const noexcept { return structure_; }
  const PrimeField& field() const noexcept { return structure_.field(); }
  std::size_t n() const noexcept { return structure_.n(); }
  std::size_t d() const noexcept { return structure_.d(); }

  BigInt order() const { return big_pow(field().p(), n() + d()); }
  // Throws BudgetExceeded above 2^62 elements.
  std::uint64_t order_u64() const;

  GroupElement identity() const;
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& a) const;
  GroupElement power(const GroupElement& a, std::uint64_t e) const;
  // [a, b] = a^-1 b^-1 a b
  GroupElement commutator(const GroupElement& a, const GroupElement& b) const;
  // a^b = b^-1 a b
  GroupElement conjugate(const GroupElement& a, const GroupElement& b) const;

  // Mixed-radix index: v coordinates first (least significant), then w.
  GroupElement element_at(std::uint64_t index) const;
  std::uint64_t index_of(const GroupElement& g) const;
  GroupElement make(const VectorFp& v, const VectorFp& w) const;

  // Raw form of multiply on concatenated (v, w) coordinates.
  void multiply_raw(const Residue* a, const Residue* b, Residue* out) const;

  // radical(beta), so that Z(G) = radical x W.
  const Subspace& radical_v() const noexcept { return radical_; }
  bool is_central(const GroupElement& g) const { return radical_.contains(g.v); }
  bool is_abelian() const { return structure_.is_zero(); }

 private:
  BilinearStructure structure_;
  std::vector<Residue> half_gram_;
  Subspace radical_;
};

Class2Group group_from_bilinear(const BilinearStructure& s);
// V = GF(p)^{2k} with the standard symplectic form, W = GF(p).
Class2Group extraspecial(std::uint32_t p, std::size_t k);
// H(p, n) with V of GF(p^n)-dimension 2m carrying the standard
// GF(p^n)-symplectic form; W = GF(p^n). As a GF(p)-structure dim V = 2mn and
// dim W = n.
Class2Group heisenberg(std::uint32_t p, std::size_t n, std::size_t m = 1);
// Central product of `copies` copies amalgamated over W.
Class2Group central_product(const Class2Group& g, std::size_t copies);

// Coefficients c_0..c_{n-1} of the least monic irreducible
// x^n + c_{n-1} x^{n-1} + ... + c_0 over GF(p), ordered by the integer
// sum c_i p^i.
std::vector<Residue> least_irreducible_polynomial(PrimeField field,
                                                  std::size_t degree);

struct ConstructionCertificate {
  std::uint64_t order = 0;
  bool exhaustive = true;
  bool associativity_exhaustive = true;
  std::uint64_t associativity_cases = 0;
  bool associativity = true;
  bool exponent_p = true;
  bool commutator_formula = true;
  bool center = true;
  bool derived = true;
  std::uint64_t center_order = 0;
  std::uint64_t derived_order = 0;
  bool passed() const {
    return associativity && exponent_p && commutator_formula && center && derived;
  }
};

inline constexpr std::uint64_t kExhaustiveCertificateLimit = 10'000;
inline constexpr std::uint64_t kExhaustiveAssociativityLimit = 1'000;

ConstructionCertificate certify(const Class2Group& g, std::uint64_t seed = 1,
                                std::uint64_t samples = 200'000,
                                unsigned threads = 1);

// ---------------------------------------------------------------------------
// Table groups

class TableGroup {
 public:
  using Index = std::uint32_t;
  using Oracle = std::function<Index(Index, Index)>;

  // Cayley table, row-major, table[a * order + b] = a b. Entry range,
  // identity and inverse laws are verified exhaustively; throws
  // PreconditionError when one fails. Associativity is left to
  // associativity_check so that damaged tables can still be inspected.
  static TableGroup from_cayley_table(std::size_t order, std::vector<Index> table);
  static TableGroup from_oracle(std::size_t order, Oracle mult, Index identity,
                                std::vector<Index> inverses);

  std::size_t order() const noexcept { return order_; }
  Index identity() const noexcept { return identity_; }
  Index mul(Index a, Index b) const {
    return table_ ? (*table_)[static_cast<std::size_t>(a) * order_ + b] : oracle_(a, b);
  }
  Index inv(Index a) const { return (*inverses_)[a]; }
  Index commutator(Index a, Index b) const {
    return mul(mul(inv(a), inv(b)), mul(a, b));
  }
  Index conjugate(Index a, Index b) const { return mul(mul(inv(b), a), b); }
  Index power(Index a, std::uint64_t e) const;

  bool has_table() const noexcept { return table_ != nullptr; }
  // Cayley table (materialized on demand); throws BudgetExceeded when
  // order^2 exceeds max_entries.
  std::vector<Index> cayley_table(std::uint64_t max_entries = 1ULL << 24) const;
  // Stores the full table internally when order^2 <= max_entries.
  void materialize(std::uint64_t max_entries = 1ULL << 20);

 private:
  TableGroup() = default;
  std::size_t order_ = 0;
  Index identity_ = 0;
  Oracle oracle_;
  std::shared_ptr<const std::vector<Index>> table_;
  std::shared_ptr<const std::vector<Index>> inverses_;
};

inline constexpr std::uint64_t kDefaultTableBudget = 1'000'000;

// Element index of the table agrees with Class2Group::index_of.
TableGroup as_table(const Class2Group& g,
                    std::uint64_t budget = kDefaultTableBudget);
// G^k with componentwise multiplication; index = sum digit_i |G|^i.
TableGroup direct_power(const Class2Group& g, std::size_t k,
                        std::uint64_t budget = kDefaultTableBudget);
// Upper unitriangular dim x dim matrices over GF(p). Index encodes the
// entries above the diagonal row by row, first entry least significant.
TableGroup ut_group(std::uint32_t p, std::size_t dim,
                    std::uint64_t budget = kDefaultTableBudget);

struct Subgroup {
  std::vector<bool> member;
  std::vector<TableGroup::Index> elements;
  std::size_t order() const noexcept { return elements.size(); }
  bool contains(TableGroup::Index x) const { return member[x]; }
};

Subgroup whole_group(const TableGroup& g);
// Breadth-first closure of the generators under multiplication.
Subgroup generate_subgroup(const TableGroup& g,
                           const std::vector<TableGroup::Index>& generators);
// [A, B] = <[a, b] : a in A, b in B>
Subgroup commutator_subgroup(const TableGroup& g, const Subgroup& a,
                             const Subgroup& b);
Subgroup center(const TableGroup& g);

struct SeriesReport {
  // |gamma_1|, |gamma_2|, ..., 1
  std::vector<std::uint64_t> orders;
  std::size_t nilpotency_class = 0;
  std::vector<Subgroup> terms;
};

// Throws PreconditionError when the series stops shrinking above the
// trivial group.
SeriesReport lower_central_series(const TableGroup& g);

struct CheckMode {
  enum class Kind { kExhaustive, kSample };
  Kind kind = Kind::kExhaustive;
  std::uint64_t samples = 0;
  std::uint64_t seed = 1;

  static CheckMode exhaustive() { return {}; }
  static CheckMode sample(std::uint64_t count, std::uint64_t seed) {
    return {Kind::kSample, count, seed};
  }
};

struct IdentityReport {
  bool holds = true;
  std::uint64_t cases_checked = 0;
  // First failing tuple (element indices) in enumeration order.
  std::optional<std::vector<std::uint64_t>> failure;
};

// Exhaustive up to 10^3 elements under CheckMode::exhaustive().
IdentityReport associativity_check(const TableGroup& g, CheckMode mode,
                                   unsigned threads = 1);

// [[x,y^-1],z]^y [[y,z^-1],x]^z [[z,x^-1],y]^x = 1
IdentityReport hall_witt_check(const TableGroup& g, CheckMode mode,
                               unsigned threads = 1);

struct LaurentReport {
  std::uint32_t p = 0;
  std::size_t m = 0;
  std::uint64_t gamma2_order = 0;
  std::uint64_t gamma3_order = 0;
  BigInt bound;
  bool holds = false;
  SeriesReport series;
};

// |gamma_3| <= p^{2 m^3} where p^m = |gamma_2 / gamma_3|. Throws
// PreconditionError for class > 3 or non-p-groups.
LaurentReport laurent_bound_check(const TableGroup& g);

// [x,y]^e = [x^e, y] for each e, and [xz, y] = [x,y]^z [z,y].
IdentityReport commutator_power_check(const Class2Group& g,
                                      const std::vector<std::uint64_t>& exponents,
                                      CheckMode mode);

}  // namespace pseudofin
