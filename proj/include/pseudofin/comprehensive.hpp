#pragma once

// Heights and purity in finite abelian p-groups, and instances of the
// extension condition (*) on class-2 groups.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pseudofin/fplinalg.hpp"
#include "pseudofin/groups.hpp"

namespace pseudofin {

// Height of the identity.
inline constexpr std::size_t kInfiniteHeight = std::numeric_limits<std::size_t>::max();

// C_{p^e_1} x C_{p^e_2} x ... with e_1 >= e_2 >= ... >= 1. Elements are
// coordinate vectors, coordinate i reduced mod p^{e_i}.
class AbelianPGroup {
 public:
  using Element = std::vector<std::uint64_t>;

  // Exponents are sorted into decreasing order; zeros are dropped.
  AbelianPGroup(std::uint32_t p, std::vector<std::size_t> exponents);

  std::uint32_t p() const noexcept { return p_; }
  const std::vector<std::size_t>& exponents() const noexcept { return exponents_; }
  std::size_t rank() const noexcept { return exponents_.size(); }
  std::uint64_t order() const noexcept { return order_; }
  std::uint64_t modulus(std::size_t i) const { return moduli_[i]; }

  Element identity() const { return Element(rank(), 0); }
  Element add(const Element& a, const Element& b) const;
  Element scale(const Element& a, std::uint64_t m) const;
  bool contains(const Element& a) const;

  // Mixed-radix index, first coordinate least significant.
  Element element_at(std::uint64_t index) const;
  std::uint64_t index_of(const Element& a) const;

 private:
  std::uint32_t p_;
  std::vector<std::size_t> exponents_;
  std::vector<std::uint64_t> moduli_;
  std::uint64_t order_ = 1;
};

// sup{n : g = h^{p^n} for some h}; kInfiniteHeight for the identity. Uses
// the p-adic valuation of the coordinates.
std::size_t height(const AbelianPGroup& a, const AbelianPGroup::Element& g);

// A subgroup given by generators, with its element set.
class AbelianSubgroup {
 public:
  AbelianSubgroup(const AbelianPGroup& ambient,
                  const std::vector<AbelianPGroup::Element>& generators);

  const AbelianPGroup& ambient() const noexcept { return ambient_; }
  const std::vector<std::uint64_t>& elements() const noexcept { return elements_; }
  std::uint64_t order() const noexcept { return elements_.size(); }
  bool contains(const AbelianPGroup::Element& g) const;

 private:
  AbelianPGroup ambient_;
  std::vector<bool> member_;
  std::vector<std::uint64_t> elements_;
};

// Height of g computed inside the subgroup by enumeration.
std::size_t height_in(const AbelianSubgroup& b, const AbelianPGroup::Element& g);

bool is_pure(const AbelianPGroup& a, const AbelianSubgroup& b);

// Element orders and exponents in an abelian p-group, as powers of p.
std::size_t order_exponent(const AbelianPGroup& a, const AbelianPGroup::Element& g);

struct StarInstance {
  // Generators of A, given by V-coordinates of preimages in G.
  std::vector<VectorFp> generators;
  // alpha on each generator, as an element of Z(G).
  std::vector<GroupElement> alpha;
  GroupElement w;
  std::size_t r = 0;
};

struct StarVerdict {
  std::optional<std::uint64_t> witness;
  std::uint64_t elements_scanned = 0;
};

// Checks the hypothesis of (*) (A pure in G*, alpha well defined into Z,
// exp(alpha(A)) <= p^r <= exp(G*), p^r |w| <= exp(G)) and throws
// PreconditionError naming the failing clause. Then sweeps G in index order
// for g with <A, g*> pure in G*, |g*| = p^r, g^{p^r} = w and
// [a, g] = alpha(a) on the generators. A returned witness has passed
// verify_star_witness.
StarVerdict star_witness(const Class2Group& g, const StarInstance& inst);

// Replays all four clauses of (*) on a candidate using group operations.
bool verify_star_witness(const Class2Group& g, const StarInstance& inst,
                         const GroupElement& candidate);

struct StarScanReport {
  std::uint64_t instances = 0;
  std::uint64_t satisfied = 0;
  std::uint64_t failed = 0;
  std::uint64_t subgroups = 0;
  bool truncated = false;
  // The first failing instance in enumeration order.
  std::optional<StarInstance> first_failure;
  // Per rank of A: instances and satisfied counts.
  std::vector<std::uint64_t> instances_by_rank;
  std::vector<std::uint64_t> satisfied_by_rank;
};

inline constexpr std::uint64_t kDefaultStarInstances = 100'000;
inline constexpr std::size_t kMaxStarRank = 3;

// Enumerates A over subspaces of G* (RREF order, rank 0..max_rank, clamped
// to 3), alpha over the generator-image odometer into Z, then r and w, and
// runs star_witness on each. Stops with truncated = true at max_instances.
StarScanReport star_scan(const Class2Group& g, std::size_t max_rank,
                         std::uint64_t max_instances = kDefaultStarInstances);

}  // namespace pseudofin
