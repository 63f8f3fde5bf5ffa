#pragma once

// The group-language axioms evaluated on finite groups, centralizers, and
// the finite-stage chain diagnostics for direct powers.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pseudofin/bilinear.hpp"
#include "pseudofin/fplinalg.hpp"
#include "pseudofin/groups.hpp"

namespace pseudofin {

struct CentralizerRecord {
  std::uint64_t element = 0;
  BigInt order;
  // kernel(left_map(beta, v)); C(g) is its preimage times W.
  Subspace kernel;
};

// |C(g)| = p^{d + dim kernel(beta_v)}.
CentralizerRecord centralizer(const Class2Group& g, const GroupElement& x);
// Exact centralizer by scanning every element.
Subgroup centralizer_scan(const TableGroup& g, TableGroup::Index x);

struct RhoReport {
  bool holds = false;
  std::uint64_t commutator_values = 0;
  std::uint64_t center_order = 0;
  bool class_at_most_2 = false;
  bool exponent_p = false;
  std::uint64_t cases_checked = 0;
};

// The set of commutator values {[x, y]} equals Z(G), G has class <= 2 and
// exponent p. Exhaustive; throws BudgetExceeded above the table budget.
RhoReport rho_check(const Class2Group& g);

// G -> (G/Z, Z, commutator map). G/Z is coordinatized by the non-pivot
// columns of radical(beta) and Z = radical x W by (radical coordinates, W).
// Throws PreconditionError for abelian g (G/Z is trivial).
BilinearStructure reduce_to_bilinear(const Class2Group& g);

struct GroupSigmaVerdict {
  bool holds = true;
  std::uint64_t cases_checked = 0;
  // Element indices of the failing tuple and of one unreachable target.
  std::vector<std::uint64_t> tuple;
  std::vector<std::uint64_t> target;
  // "target_outside_commutator_set": some h_i is not of the form [g_i, k]
  // at all. "simultaneous_solution_missing": each h_i is reachable on its
  // own but not together.
  std::string failed_block;
};

// sigma_k read directly on group elements: for all g_1..g_k in G \ Z(G)
// independent modulo Z(G) and all h_1..h_k in Z(G) there is k with
// [g_i, k] = h_i. Tuples run over increasing coset representatives (least
// element index per coset of Z); k runs over all of G.
GroupSigmaVerdict sigma_on_group(const Class2Group& g, std::size_t k);

// Replays a failing verdict by sweeping all of G.
bool group_counterexample_is_valid(const Class2Group& g,
                                   const GroupSigmaVerdict& v);

struct ChainReport {
  // phi_i = (x, ..., x, 1, ..., 1) with i copies of x, as indices of G^k.
  std::vector<std::uint64_t> elements;
  std::vector<std::uint64_t> centralizer_orders;
  // |C_G(x)|^i |G|^{k-i}
  std::vector<std::uint64_t> formula_orders;
  // Per adjacent pair: C(phi_{i+1}) is a subset of C(phi_i) and the
  // separating element lies in C(phi_i) but not in C(phi_{i+1}).
  std::vector<bool> strict;
  std::vector<std::uint64_t> separating;
  std::uint64_t base_element = 0;
  bool valid() const;
};

ChainReport sop_chain_direct_power(const Class2Group& g, std::size_t k,
                                   std::uint64_t budget = kDefaultTableBudget);

struct MaximalityReport {
  std::uint64_t element = 0;
  std::uint64_t centralizer_order = 0;
  std::uint64_t non_central_checked = 0;
  // No non-central y has C(y) strictly inside C(element).
  bool validated = false;
};

// A non-central element of G^k with a centralizer of least order, least
// index on ties.
MaximalityReport finite_stage_maximality(const Class2Group& g, std::size_t k,
                                         std::uint64_t budget = kDefaultTableBudget);

}  // namespace pseudofin
