#include "pseudofin/modelcheck.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "pseudofin/error.hpp"

namespace pseudofin {

CentralizerRecord centralizer(const Class2Group& g, const GroupElement& x) {
  Subspace ker = kernel(left_map(g.structure(), x.v));
  BigInt order = big_pow(g.field().p(), g.d() + ker.dim());
  return {g.index_of(x), std::move(order), std::move(ker)};
}

Subgroup centralizer_scan(const TableGroup& g, TableGroup::Index x) {
  Subgroup c;
  c.member.assign(g.order(), false);
  for (std::size_t y = 0; y < g.order(); ++y) {
    const auto yi = static_cast<TableGroup::Index>(y);
    if (g.mul(x, yi) == g.mul(yi, x)) {
      c.member[y] = true;
      c.elements.push_back(yi);
    }
  }
  return c;
}

namespace {

std::vector<GroupElement> generators(const Class2Group& g) {
  const PrimeField& f = g.field();
  std::vector<GroupElement> gens;
  for (std::size_t i = 0; i < g.n(); ++i) {
    gens.push_back(g.make(VectorFp::unit(f, g.n(), i), VectorFp(f, g.d())));
  }
  for (std::size_t j = 0; j < g.d(); ++j) {
    gens.push_back(g.make(VectorFp(f, g.n()), VectorFp::unit(f, g.d(), j)));
  }
  return gens;
}

void require_order_within(std::uint64_t order, std::uint64_t budget) {
  if (order > budget) {
    throw BudgetExceeded("group of order " + std::to_string(order) +
                         " exceeds the element budget " + std::to_string(budget));
  }
}

}  // namespace

RhoReport rho_check(const Class2Group& g) {
  RhoReport report;
  const std::uint64_t order = g.order_u64();
  require_order_within(order, kDefaultTableBudget);
  const auto gens = generators(g);

  std::vector<bool> central(order, false);
  report.exponent_p = true;
  for (std::uint64_t i = 0; i < order; ++i) {
    const GroupElement x = g.element_at(i);
    bool c = true;
    for (const auto& s : gens) {
      if (!(g.multiply(x, s) == g.multiply(s, x))) {
        c = false;
        break;
      }
    }
    central[i] = c;
    if (c) ++report.center_order;
    if (!(g.power(x, g.field().p()) == g.identity())) report.exponent_p = false;
  }

  // W is central, so [(v1, w1), (v2, w2)] = [(v1, 0), (v2, 0)] and pairs of
  // V-parts cover every commutator value.
  const std::uint64_t pv = big_pow(g.field().p(), g.n()).convert_to<std::uint64_t>();
  std::vector<bool> value(order, false);
  report.class_at_most_2 = true;
  for (std::uint64_t a = 0; a < pv; ++a) {
    const GroupElement x = g.element_at(a);
    for (std::uint64_t b = 0; b < pv; ++b) {
      const std::uint64_t c = g.index_of(g.commutator(x, g.element_at(b)));
      ++report.cases_checked;
      if (!central[c]) report.class_at_most_2 = false;
      if (!value[c]) {
        value[c] = true;
        ++report.commutator_values;
      }
    }
  }
  report.holds = report.class_at_most_2 && report.exponent_p && value == central;
  return report;
}

BilinearStructure reduce_to_bilinear(const Class2Group& g) {
  const Subspace& rad = g.radical_v();
  if (rad.dim() == g.n()) {
    throw PreconditionError("abelian group: G/Z(G) is trivial");
  }
  std::vector<std::size_t> free_cols;
  std::size_t next = 0;
  for (std::size_t c = 0; c < g.n(); ++c) {
    if (next < rad.pivots().size() && rad.pivots()[next] == c) {
      ++next;
    } else {
      free_cols.push_back(c);
    }
  }
  const std::size_t r = rad.dim();
  const std::size_t n2 = free_cols.size();
  const std::size_t d2 = r + g.d();
  BilinearStructure out(g.field(), n2, d2);
  for (std::size_t i = 0; i < n2; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const VectorFp w = g.structure().gram_entry(free_cols[i], free_cols[j]);
      out.set_gram_entry(i, j, VectorFp(g.field(), r).concat(w));
    }
  }
  return out;
}

GroupSigmaVerdict sigma_on_group(const Class2Group& g, std::size_t k) {
  if (k == 0) throw PreconditionError("sigma_k needs k >= 1");
  GroupSigmaVerdict verdict;
  const TableGroup table = as_table(g);
  const std::size_t order = table.order();
  const Subgroup z = center(table);
  if (z.order() == order) return verdict;  // no non-central elements

  std::vector<std::uint64_t> zpos(order, 0);
  for (std::size_t i = 0; i < z.elements.size(); ++i) zpos[z.elements[i]] = i;
  const std::uint64_t zsize = z.order();

  std::uint64_t targets = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (targets > 10'000'000 / zsize) {
      throw BudgetExceeded("target space Z^" + std::to_string(k) + " too large");
    }
    targets *= zsize;
  }

  // Least index in each coset of Z.
  std::vector<bool> covered(order, false);
  std::vector<TableGroup::Index> reps;
  for (std::size_t x = 0; x < order; ++x) {
    if (covered[x]) continue;
    for (auto c : z.elements) covered[table.mul(static_cast<TableGroup::Index>(x), c)] = true;
    if (!z.contains(static_cast<TableGroup::Index>(x))) {
      reps.push_back(static_cast<TableGroup::Index>(x));
    }
  }

  // comm[r * order + y] = position in Z of [reps[r], y].
  std::vector<std::uint32_t> comm(reps.size() * order);
  for (std::size_t r = 0; r < reps.size(); ++r) {
    for (std::size_t y = 0; y < order; ++y) {
      const auto c = table.commutator(reps[r], static_cast<TableGroup::Index>(y));
      if (!z.contains(c)) throw Error("commutator outside the centre: class exceeds 2");
      comm[r * order + y] = static_cast<std::uint32_t>(zpos[c]);
    }
  }

  const PrimeField& f = g.field();
  const MatrixFp rad_basis = g.radical_v().basis();
  auto independent = [&](const std::vector<std::size_t>& idx) {
    std::vector<VectorFp> rows = rad_basis.row_vectors();
    for (auto i : idx) rows.push_back(g.element_at(reps[i]).v);
    return rank(MatrixFp::from_vectors(f, g.n(), rows)) == rows.size();
  };

  std::vector<bool> reached(targets);
  std::vector<std::size_t> tuple;
  bool failed = false;

  auto evaluate = [&]() {
    ++verdict.cases_checked;
    std::fill(reached.begin(), reached.end(), false);
    std::uint64_t hits = 0;
    for (std::size_t y = 0; y < order; ++y) {
      std::uint64_t code = 0, radix = 1;
      for (auto t : tuple) {
        code += comm[t * order + y] * radix;
        radix *= zsize;
      }
      if (!reached[code]) {
        reached[code] = true;
        ++hits;
      }
    }
    if (hits == targets) return;
    failed = true;
    verdict.holds = false;
    std::uint64_t missing = 0;
    while (reached[missing]) ++missing;
    verdict.failed_block = "simultaneous_solution_missing";
    std::uint64_t code = missing;
    for (auto t : tuple) {
      const std::uint64_t h = code % zsize;
      code /= zsize;
      verdict.tuple.push_back(reps[t]);
      verdict.target.push_back(z.elements[h]);
      bool single = false;
      for (std::size_t y = 0; y < order && !single; ++y) single = comm[t * order + y] == h;
      if (!single) verdict.failed_block = "target_outside_commutator_set";
    }
  };

  std::function<void(std::size_t)> extend = [&](std::size_t start) {
    if (failed) return;
    if (tuple.size() == k) {
      evaluate();
      return;
    }
    for (std::size_t i = start; i < reps.size() && !failed; ++i) {
      tuple.push_back(i);
      if (independent(tuple)) extend(i + 1);
      tuple.pop_back();
    }
  };
  extend(0);
  return verdict;
}

bool group_counterexample_is_valid(const Class2Group& g,
                                   const GroupSigmaVerdict& v) {
  if (v.holds || v.tuple.empty() || v.tuple.size() != v.target.size()) return false;
  std::vector<GroupElement> xs, hs;
  for (auto i : v.tuple) {
    xs.push_back(g.element_at(i));
    if (g.is_central(xs.back())) return false;
  }
  for (auto i : v.target) {
    hs.push_back(g.element_at(i));
    if (!g.is_central(hs.back())) return false;
  }
  const std::uint64_t order = g.order_u64();
  for (std::uint64_t y = 0; y < order; ++y) {
    const GroupElement k = g.element_at(y);
    bool all = true;
    for (std::size_t i = 0; i < xs.size() && all; ++i) {
      all = g.commutator(xs[i], k) == hs[i];
    }
    if (all) return false;
  }
  return true;
}

bool ChainReport::valid() const {
  if (elements.empty()) return false;
  for (std::size_t i = 0; i < centralizer_orders.size(); ++i) {
    if (centralizer_orders[i] != formula_orders[i]) return false;
    if (i > 0 && centralizer_orders[i] >= centralizer_orders[i - 1]) return false;
  }
  return std::all_of(strict.begin(), strict.end(), [](bool b) { return b; });
}

namespace {

std::uint64_t first_non_central(const Class2Group& g) {
  if (g.is_abelian()) throw PreconditionError("no non-central element: group is abelian");
  const TableGroup table = as_table(g);
  const Subgroup z = center(table);
  for (std::size_t x = 0; x < table.order(); ++x) {
    if (!z.contains(static_cast<TableGroup::Index>(x))) return x;
  }
  throw PreconditionError("no non-central element");
}

}  // namespace

ChainReport sop_chain_direct_power(const Class2Group& g, std::size_t k,
                                   std::uint64_t budget) {
  if (k == 0) throw PreconditionError("chain length k must be >= 1");
  ChainReport report;
  report.base_element = first_non_central(g);
  const std::uint64_t base_order = g.order_u64();
  const std::uint64_t cx =
      centralizer(g, g.element_at(report.base_element)).order.convert_to<std::uint64_t>();
  const TableGroup h = direct_power(g, k, budget);

  std::vector<Subgroup> cents;
  for (std::size_t i = 1; i <= k; ++i) {
    std::uint64_t phi = 0, radix = 1, formula = 1;
    for (std::size_t j = 0; j < k; ++j) {
      if (j < i) phi += report.base_element * radix;
      formula *= j < i ? cx : base_order;
      radix *= base_order;
    }
    report.elements.push_back(phi);
    report.formula_orders.push_back(formula);
    cents.push_back(centralizer_scan(h, static_cast<TableGroup::Index>(phi)));
    report.centralizer_orders.push_back(cents.back().order());
  }

  for (std::size_t i = 0; i + 1 < k; ++i) {
    const Subgroup& big = cents[i];
    const Subgroup& small = cents[i + 1];
    bool subset = std::all_of(small.elements.begin(), small.elements.end(),
                              [&](auto y) { return big.contains(y); });
    std::optional<TableGroup::Index> sep;
    for (auto y : big.elements) {
      if (!small.contains(y)) {
        sep = y;
        break;
      }
    }
    bool strict = subset && sep.has_value();
    if (sep) {
      const auto a = static_cast<TableGroup::Index>(report.elements[i]);
      const auto b = static_cast<TableGroup::Index>(report.elements[i + 1]);
      strict = strict && h.mul(a, *sep) == h.mul(*sep, a) &&
               h.mul(b, *sep) != h.mul(*sep, b);
    }
    report.strict.push_back(strict);
    report.separating.push_back(sep ? *sep : 0);
  }
  return report;
}

MaximalityReport finite_stage_maximality(const Class2Group& g, std::size_t k,
                                         std::uint64_t budget) {
  if (k == 0) throw PreconditionError("power k must be >= 1");
  first_non_central(g);
  const TableGroup h = direct_power(g, k, budget);
  const std::uint64_t n = h.order();
  if (n > 10'000) {
    throw BudgetExceeded("pairwise centralizer sweep over " + std::to_string(n) +
                         " elements exceeds 10^4");
  }
  std::vector<Subgroup> cents;
  cents.reserve(n);
  for (std::uint64_t x = 0; x < n; ++x) {
    cents.push_back(centralizer_scan(h, static_cast<TableGroup::Index>(x)));
  }
  MaximalityReport report;
  std::optional<std::uint64_t> best;
  for (std::uint64_t x = 0; x < n; ++x) {
    if (cents[x].order() == n) continue;
    ++report.non_central_checked;
    if (!best || cents[x].order() < cents[*best].order()) best = x;
  }
  report.element = *best;
  report.centralizer_order = cents[*best].order();

  const Subgroup& cx = cents[*best];
  report.validated = true;
  for (std::uint64_t y = 0; y < n && report.validated; ++y) {
    const Subgroup& cy = cents[y];
    if (cy.order() == n || cy.order() >= cx.order()) continue;
    const bool inside = std::all_of(cy.elements.begin(), cy.elements.end(),
                                    [&](auto e) { return cx.contains(e); });
    if (inside) report.validated = false;
  }
  return report;
}

}  // namespace pseudofin
