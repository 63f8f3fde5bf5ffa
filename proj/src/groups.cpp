#include "pseudofin/groups.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <utility>

#include "pseudofin/error.hpp"
#include "pseudofin/parallel.hpp"

namespace pseudofin {

namespace {

std::uint64_t checked_pow(std::uint64_t base, std::size_t exp,
                          std::uint64_t limit) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > limit / base) {
      throw BudgetExceeded("group of order " + to_string(big_pow(base, exp)) +
                           " exceeds the element budget " + std::to_string(limit));
    }
    r *= base;
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Class2Group

Class2Group::Class2Group(BilinearStructure structure)
    : structure_(std::move(structure)),
      radical_(Subspace::zero(structure_.field(), structure_.n())) {
  const PrimeField& f = structure_.field();
  if (f.p() == 2) throw PreconditionError("class-2 groups need an odd prime");
  if (!is_alternating(structure_)) {
    throw PreconditionError("bilinear structure is not alternating");
  }
  const Residue half = f.inv(2);
  half_gram_ = structure_.gram();
  for (auto& r : half_gram_) r = f.mul(r, half);
  radical_ = radical(structure_);

  // Construction certificate: every element (or seeded samples) against
  // every generator.
  const BigInt big_order = order();
  const bool exhaustive = big_order <= kExhaustiveCertificateLimit;
  const std::uint64_t count =
      exhaustive ? static_cast<std::uint64_t>(big_order) : 2'000;
  Lcg64 rng(0x5eed);
  std::vector<GroupElement> gens;
  for (std::size_t i = 0; i < n(); ++i) {
    gens.push_back(make(VectorFp::unit(f, n(), i), VectorFp(f, d())));
  }
  for (std::size_t j = 0; j < d(); ++j) {
    gens.push_back(make(VectorFp(f, n()), VectorFp::unit(f, d(), j)));
  }
  for (std::uint64_t t = 0; t < count; ++t) {
    GroupElement x(identity());
    if (exhaustive) {
      x = element_at(t);
    } else {
      VectorFp v(f, n()), w(f, d());
      for (std::size_t i = 0; i < n(); ++i) v.set(i, static_cast<Residue>(rng.below(f.p())));
      for (std::size_t i = 0; i < d(); ++i) w.set(i, static_cast<Residue>(rng.below(f.p())));
      x = make(v, w);
    }
    if (!(power(x, f.p()) == identity())) {
      throw Error("construction certificate: element of order != p");
    }
    for (const auto& s : gens) {
      const GroupElement c = commutator(x, s);
      if (!c.v.is_zero() || !(c.w == beta_eval(structure_, x.v, s.v))) {
        throw Error("construction certificate: commutator formula fails");
      }
    }
  }
}

std::uint64_t Class2Group::order_u64() const {
  return checked_pow(field().p(), n() + d(), 1ULL << 62);
}

GroupElement Class2Group::identity() const {
  return {VectorFp(field(), n()), VectorFp(field(), d())};
}

GroupElement Class2Group::make(const VectorFp& v, const VectorFp& w) const {
  if (v.dim() != n() || w.dim() != d() || v.field() != field() ||
      w.field() != field()) {
    throw DimensionError("element does not match group dimensions (n=" +
                         std::to_string(n()) + ", d=" + std::to_string(d()) + ")");
  }
  return {v, w};
}

void Class2Group::multiply_raw(const Residue* a, const Residue* b,
                               Residue* out) const {
  const PrimeField& f = field();
  const std::size_t nn = n(), dd = d();
  std::uint64_t acc[64];
  std::vector<std::uint64_t> big;
  std::uint64_t* q = acc;
  if (dd > 64) {
    big.assign(dd, 0);
    q = big.data();
  } else {
    std::fill_n(acc, dd, 0);
  }
  for (std::size_t i = 0; i < nn; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < nn; ++j) {
      if (b[j] == 0) continue;
      const std::uint64_t coef = static_cast<std::uint64_t>(a[i]) * b[j] % f.p();
      const Residue* h = &half_gram_[(i * nn + j) * dd];
      for (std::size_t c = 0; c < dd; ++c) q[c] = (q[c] + coef * h[c]) % f.p();
    }
  }
  for (std::size_t i = 0; i < nn; ++i) out[i] = f.add(a[i], b[i]);
  for (std::size_t c = 0; c < dd; ++c) {
    out[nn + c] = f.add(f.add(a[nn + c], b[nn + c]), static_cast<Residue>(q[c]));
  }
}

GroupElement Class2Group::multiply(const GroupElement& a,
                                   const GroupElement& b) const {
  if (a.v.dim() != n() || b.v.dim() != n() || a.w.dim() != d() ||
      b.w.dim() != d()) {
    throw DimensionError("element does not belong to this group");
  }
  std::vector<Residue> x(n() + d()), y(n() + d()), z(n() + d());
  std::copy(a.v.coords().begin(), a.v.coords().end(), x.begin());
  std::copy(a.w.coords().begin(), a.w.coords().end(), x.begin() + static_cast<std::ptrdiff_t>(n()));
  std::copy(b.v.coords().begin(), b.v.coords().end(), y.begin());
  std::copy(b.w.coords().begin(), b.w.coords().end(), y.begin() + static_cast<std::ptrdiff_t>(n()));
  multiply_raw(x.data(), y.data(), z.data());
  GroupElement out = identity();
  for (std::size_t i = 0; i < n(); ++i) out.v.set(i, z[i]);
  for (std::size_t c = 0; c < d(); ++c) out.w.set(c, z[n() + c]);
  return out;
}

GroupElement Class2Group::inverse(const GroupElement& a) const {
  // beta(v, v) = 0, so (v, w)^-1 = (-v, -w).
  return {-a.v, -a.w};
}

GroupElement Class2Group::power(const GroupElement& a, std::uint64_t e) const {
  GroupElement result = identity();
  GroupElement base = a;
  while (e > 0) {
    if (e & 1) result = multiply(result, base);
    base = multiply(base, base);
    e >>= 1;
  }
  return result;
}

GroupElement Class2Group::commutator(const GroupElement& a,
                                     const GroupElement& b) const {
  return multiply(multiply(inverse(a), inverse(b)), multiply(a, b));
}

GroupElement Class2Group::conjugate(const GroupElement& a,
                                    const GroupElement& b) const {
  return multiply(multiply(inverse(b), a), b);
}

GroupElement Class2Group::element_at(std::uint64_t index) const {
  GroupElement g = identity();
  const auto p = field().p();
  for (std::size_t i = 0; i < n(); ++i) {
    g.v.set(i, static_cast<Residue>(index % p));
    index /= p;
  }
  for (std::size_t c = 0; c < d(); ++c) {
    g.w.set(c, static_cast<Residue>(index % p));
    index /= p;
  }
  return g;
}

std::uint64_t Class2Group::index_of(const GroupElement& g) const {
  const auto p = field().p();
  std::uint64_t idx = 0;
  for (std::size_t c = d(); c-- > 0;) idx = idx * p + g.w[c];
  for (std::size_t i = n(); i-- > 0;) idx = idx * p + g.v[i];
  return idx;
}

Class2Group group_from_bilinear(const BilinearStructure& s) { return Class2Group(s); }

Class2Group extraspecial(std::uint32_t p, std::size_t k) {
  if (k == 0) throw PreconditionError("extraspecial group needs k >= 1");
  return Class2Group(BilinearStructure::symplectic(PrimeField(p), k));
}

namespace {

using Poly = std::vector<Residue>;  // coefficient i of x^i

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo a monic b.
Poly poly_mod(Poly a, const Poly& b, const PrimeField& f) {
  trim(a);
  const std::size_t db = b.size() - 1;
  while (a.size() >= b.size()) {
    const Residue lead = a.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      a[shift + i] = f.sub(a[shift + i], f.mul(lead, b[i]));
    }
    trim(a);
  }
  return a;
}

Poly monic_from_code(std::uint64_t code, std::size_t degree, std::uint32_t p) {
  Poly poly(degree + 1, 0);
  for (std::size_t i = 0; i < degree; ++i) {
    poly[i] = static_cast<Residue>(code % p);
    code /= p;
  }
  poly[degree] = 1;
  return poly;
}

}  // namespace

std::vector<Residue> least_irreducible_polynomial(PrimeField field,
                                                  std::size_t degree) {
  if (degree == 0) throw PreconditionError("degree must be >= 1");
  const std::uint32_t p = field.p();
  const std::uint64_t candidates = checked_pow(p, degree, 1ULL << 40);
  for (std::uint64_t code = 0; code < candidates; ++code) {
    const Poly poly = monic_from_code(code, degree, p);
    bool irreducible = true;
    for (std::size_t dd = 1; dd <= degree / 2 && irreducible; ++dd) {
      const std::uint64_t divisors = checked_pow(p, dd, 1ULL << 40);
      for (std::uint64_t dc = 0; dc < divisors; ++dc) {
        if (poly_mod(poly, monic_from_code(dc, dd, p), field).empty()) {
          irreducible = false;
          break;
        }
      }
    }
    if (irreducible) return Poly(poly.begin(), poly.end() - 1);
  }
  throw Error("no irreducible polynomial found");  // unreachable for prime p
}

Class2Group heisenberg(std::uint32_t p, std::size_t n, std::size_t m) {
  const PrimeField f(p);
  if (n == 0 || m == 0) throw PreconditionError("heisenberg needs n >= 1, m >= 1");
  Poly modulus = least_irreducible_polynomial(f, n);
  modulus.push_back(1);
  // x^e mod modulus for e < 2n - 1, padded to n coordinates.
  std::vector<Poly> powers;
  for (std::size_t e = 0; e + 1 < 2 * n; ++e) {
    Poly mono(e + 1, 0);
    mono[e] = 1;
    Poly r = poly_mod(mono, modulus, f);
    r.resize(n, 0);
    powers.push_back(std::move(r));
  }
  // GF(p)-basis of V: index a*n + i is x^i in GF(p^n)-coordinate a.
  const std::size_t dim_v = 2 * m * n;
  BilinearStructure s(f, dim_v, n);
  for (std::size_t a = 0; a < 2 * m; ++a) {
    const std::size_t b = a ^ 1;
    const bool positive = (a % 2) == 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        VectorFp w(f, n);
        for (std::size_t c = 0; c < n; ++c) {
          const Residue r = powers[i + j][c];
          w.set(c, positive ? r : f.neg(r));
        }
        s.set_gram_entry(a * n + i, b * n + j, w);
      }
    }
  }
  return Class2Group(std::move(s));
}

Class2Group central_product(const Class2Group& g, std::size_t copies) {
  if (copies == 0) throw PreconditionError("central product needs copies >= 1");
  BilinearStructure s = g.structure();
  for (std::size_t c = 1; c < copies; ++c) s = orthogonal_sum(s, g.structure());
  return Class2Group(std::move(s));
}

// ---------------------------------------------------------------------------
// TableGroup

TableGroup TableGroup::from_cayley_table(std::size_t order,
                                         std::vector<Index> table) {
  if (order == 0) throw PreconditionError("a group has at least one element");
  if (table.size() != order * order) {
    throw PreconditionError("table has " + std::to_string(table.size()) +
                            " entries, expected " + std::to_string(order * order));
  }
  for (auto e : table) {
    if (e >= order) throw PreconditionError("table entry out of range");
  }
  auto at = [&](std::size_t a, std::size_t b) { return table[a * order + b]; };
  std::optional<Index> identity;
  for (std::size_t e = 0; e < order && !identity; ++e) {
    bool ok = true;
    for (std::size_t a = 0; a < order && ok; ++a) ok = at(e, a) == a && at(a, e) == a;
    if (ok) identity = static_cast<Index>(e);
  }
  if (!identity) throw PreconditionError("table has no identity element");
  std::vector<Index> inverses(order);
  for (std::size_t a = 0; a < order; ++a) {
    std::size_t b = 0;
    while (b < order && !(at(a, b) == *identity && at(b, a) == *identity)) ++b;
    if (b == order) {
      throw PreconditionError("element " + std::to_string(a) + " has no inverse");
    }
    inverses[a] = static_cast<Index>(b);
  }
  TableGroup g;
  g.order_ = order;
  g.identity_ = *identity;
  g.table_ = std::make_shared<const std::vector<Index>>(std::move(table));
  g.inverses_ = std::make_shared<const std::vector<Index>>(std::move(inverses));
  return g;
}

TableGroup TableGroup::from_oracle(std::size_t order, Oracle mult, Index identity,
                                   std::vector<Index> inverses) {
  if (inverses.size() != order) throw PreconditionError("inverse table size mismatch");
  TableGroup g;
  g.order_ = order;
  g.identity_ = identity;
  g.oracle_ = std::move(mult);
  g.inverses_ = std::make_shared<const std::vector<Index>>(std::move(inverses));
  return g;
}

TableGroup::Index TableGroup::power(Index a, std::uint64_t e) const {
  Index result = identity_;
  Index base = a;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

std::vector<TableGroup::Index> TableGroup::cayley_table(
    std::uint64_t max_entries) const {
  const std::uint64_t entries = static_cast<std::uint64_t>(order_) * order_;
  if (entries > max_entries) {
    throw BudgetExceeded("Cayley table with " + std::to_string(entries) +
                         " entries exceeds budget " + std::to_string(max_entries));
  }
  if (table_) return *table_;
  std::vector<Index> t(entries);
  for (std::size_t a = 0; a < order_; ++a) {
    for (std::size_t b = 0; b < order_; ++b) {
      t[a * order_ + b] = oracle_(static_cast<Index>(a), static_cast<Index>(b));
    }
  }
  return t;
}

void TableGroup::materialize(std::uint64_t max_entries) {
  if (table_ || static_cast<std::uint64_t>(order_) * order_ > max_entries) return;
  table_ = std::make_shared<const std::vector<Index>>(cayley_table(max_entries));
}

namespace {

std::vector<TableGroup::Index> inverses_by_power(std::size_t order,
                                                 const TableGroup::Oracle& mult,
                                                 TableGroup::Index identity) {
  // a^{|G|} = 1, so a^{-1} = a^{|G| - 1}.
  std::vector<TableGroup::Index> inv(order);
  for (std::size_t a = 0; a < order; ++a) {
    TableGroup::Index result = identity, base = static_cast<TableGroup::Index>(a);
    std::uint64_t e = order - 1;
    while (e > 0) {
      if (e & 1) result = mult(result, base);
      base = mult(base, base);
      e >>= 1;
    }
    inv[a] = result;
  }
  return inv;
}

}  // namespace

TableGroup as_table(const Class2Group& g, std::uint64_t budget) {
  const std::uint64_t order = checked_pow(g.field().p(), g.n() + g.d(), budget);
  const std::size_t width = g.n() + g.d();
  auto digits = std::make_shared<std::vector<Residue>>(order * width);
  for (std::uint64_t i = 0; i < order; ++i) {
    std::uint64_t x = i;
    for (std::size_t c = 0; c < width; ++c) {
      (*digits)[i * width + c] = static_cast<Residue>(x % g.field().p());
      x /= g.field().p();
    }
  }
  const std::uint32_t p = g.field().p();
  // Class2Group is immutable; the oracle keeps its own copy.
  auto group = std::make_shared<const Class2Group>(g);
  TableGroup::Oracle mult = [group, digits, width, p](TableGroup::Index a,
                                                      TableGroup::Index b) {
    Residue out[128];
    std::vector<Residue> big;
    Residue* z = out;
    if (width > 128) {
      big.resize(width);
      z = big.data();
    }
    group->multiply_raw(&(*digits)[a * width], &(*digits)[b * width], z);
    std::uint64_t idx = 0;
    for (std::size_t c = width; c-- > 0;) idx = idx * p + z[c];
    return static_cast<TableGroup::Index>(idx);
  };
  std::vector<TableGroup::Index> inv(order);
  for (std::uint64_t i = 0; i < order; ++i) {
    inv[i] = static_cast<TableGroup::Index>(g.index_of(g.inverse(g.element_at(i))));
  }
  TableGroup t = TableGroup::from_oracle(order, std::move(mult), 0, std::move(inv));
  t.materialize(1ULL << 22);
  return t;
}

TableGroup direct_power(const Class2Group& g, std::size_t k, std::uint64_t budget) {
  if (k == 0) throw PreconditionError("direct power needs k >= 1");
  const std::uint64_t base_order = g.order_u64();
  const std::uint64_t order = checked_pow(base_order, k, budget);
  auto base = std::make_shared<const TableGroup>(as_table(g, budget));
  TableGroup::Oracle mult = [base, base_order, k](TableGroup::Index a,
                                                  TableGroup::Index b) {
    std::uint64_t result = 0, radix = 1;
    for (std::size_t i = 0; i < k; ++i) {
      const auto da = static_cast<TableGroup::Index>(a % base_order);
      const auto db = static_cast<TableGroup::Index>(b % base_order);
      result += base->mul(da, db) * radix;
      radix *= base_order;
      a = static_cast<TableGroup::Index>(a / base_order);
      b = static_cast<TableGroup::Index>(b / base_order);
    }
    return static_cast<TableGroup::Index>(result);
  };
  std::vector<TableGroup::Index> inv(order);
  for (std::uint64_t x = 0; x < order; ++x) {
    std::uint64_t y = x, result = 0, radix = 1;
    for (std::size_t i = 0; i < k; ++i) {
      result += base->inv(static_cast<TableGroup::Index>(y % base_order)) * radix;
      radix *= base_order;
      y /= base_order;
    }
    inv[x] = static_cast<TableGroup::Index>(result);
  }
  TableGroup t = TableGroup::from_oracle(order, std::move(mult), 0, std::move(inv));
  t.materialize();
  return t;
}

TableGroup ut_group(std::uint32_t p, std::size_t dim, std::uint64_t budget) {
  const PrimeField f(p);
  if (dim < 2) throw PreconditionError("unitriangular group needs dim >= 2");
  const std::size_t entries = dim * (dim - 1) / 2;
  const std::uint64_t order = checked_pow(p, entries, budget);
  // slot[i][j] for i < j: position of entry (i, j) in the index digits.
  std::vector<std::size_t> slot(dim * dim, 0);
  std::size_t s = 0;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j) slot[i * dim + j] = s++;

  TableGroup::Oracle mult = [f, dim, entries, slot](TableGroup::Index a,
                                                    TableGroup::Index b) {
    std::vector<Residue> x(entries), y(entries);
    std::uint64_t ta = a, tb = b;
    for (std::size_t e = 0; e < entries; ++e) {
      x[e] = static_cast<Residue>(ta % f.p());
      ta /= f.p();
      y[e] = static_cast<Residue>(tb % f.p());
      tb /= f.p();
    }
    auto get = [&](const std::vector<Residue>& m, std::size_t i, std::size_t j) -> Residue {
      if (i == j) return 1;
      if (i > j) return 0;
      return m[slot[i * dim + j]];
    };
    std::uint64_t idx = 0, radix = 1;
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i + 1; j < dim; ++j) {
        std::uint64_t acc = 0;
        for (std::size_t l = i; l <= j; ++l) {
          acc += static_cast<std::uint64_t>(get(x, i, l)) * get(y, l, j);
        }
        idx += (acc % f.p()) * radix;
        radix *= f.p();
      }
    }
    return static_cast<TableGroup::Index>(idx);
  };
  auto inv = inverses_by_power(order, mult, 0);
  TableGroup t = TableGroup::from_oracle(order, std::move(mult), 0, std::move(inv));
  t.materialize();
  return t;
}

// ---------------------------------------------------------------------------
// Subgroups and series

Subgroup whole_group(const TableGroup& g) {
  Subgroup h;
  h.member.assign(g.order(), true);
  h.elements.resize(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) h.elements[i] = static_cast<TableGroup::Index>(i);
  return h;
}

Subgroup generate_subgroup(const TableGroup& g,
                           const std::vector<TableGroup::Index>& generators) {
  Subgroup h;
  h.member.assign(g.order(), false);
  std::deque<TableGroup::Index> queue;
  h.member[g.identity()] = true;
  h.elements.push_back(g.identity());
  queue.push_back(g.identity());
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    for (auto s : generators) {
      const auto y = g.mul(x, s);
      if (!h.member[y]) {
        h.member[y] = true;
        h.elements.push_back(y);
        queue.push_back(y);
      }
    }
  }
  std::sort(h.elements.begin(), h.elements.end());
  return h;
}

Subgroup commutator_subgroup(const TableGroup& g, const Subgroup& a,
                             const Subgroup& b) {
  std::vector<bool> seen(g.order(), false);
  std::vector<TableGroup::Index> gens;
  for (auto x : a.elements) {
    for (auto y : b.elements) {
      const auto c = g.commutator(x, y);
      if (!seen[c]) {
        seen[c] = true;
        gens.push_back(c);
      }
    }
  }
  return generate_subgroup(g, gens);
}

Subgroup center(const TableGroup& g) {
  std::vector<TableGroup::Index> central;
  for (std::size_t x = 0; x < g.order(); ++x) {
    bool ok = true;
    for (std::size_t y = 0; y < g.order() && ok; ++y) {
      const auto a = static_cast<TableGroup::Index>(x), b = static_cast<TableGroup::Index>(y);
      ok = g.mul(a, b) == g.mul(b, a);
    }
    if (ok) central.push_back(static_cast<TableGroup::Index>(x));
  }
  Subgroup z;
  z.member.assign(g.order(), false);
  for (auto x : central) z.member[x] = true;
  z.elements = std::move(central);
  return z;
}

SeriesReport lower_central_series(const TableGroup& g) {
  SeriesReport report;
  const Subgroup whole = whole_group(g);
  report.terms.push_back(whole);
  while (report.terms.back().order() > 1) {
    Subgroup next = commutator_subgroup(g, report.terms.back(), whole);
    if (next.order() == report.terms.back().order()) {
      throw PreconditionError("lower central series stabilizes at order " +
                              std::to_string(next.order()) +
                              ": group is not nilpotent");
    }
    report.terms.push_back(std::move(next));
  }
  for (const auto& t : report.terms) report.orders.push_back(t.order());
  report.nilpotency_class = report.terms.size() - 1;
  return report;
}

// ---------------------------------------------------------------------------
// Identity checks

namespace {

struct Tally {
  std::uint64_t cases = 0;
  std::optional<std::vector<std::uint64_t>> failure;
};

Tally merge(Tally a, Tally b) {
  a.cases += b.cases;
  if (!a.failure || (b.failure && *b.failure < *a.failure)) a.failure = std::move(b.failure);
  return a;
}

IdentityReport to_report(const Tally& t) {
  return {!t.failure.has_value(), t.cases, t.failure};
}

template <class Pred>
IdentityReport triple_check(const TableGroup& g, CheckMode mode,
                            unsigned threads, Pred holds) {
  const std::uint64_t n = g.order();
  if (mode.kind == CheckMode::Kind::kSample) {
    Tally t;
    Lcg64 rng(mode.seed);
    for (std::uint64_t s = 0; s < mode.samples; ++s) {
      const auto x = static_cast<TableGroup::Index>(rng.below(n));
      const auto y = static_cast<TableGroup::Index>(rng.below(n));
      const auto z = static_cast<TableGroup::Index>(rng.below(n));
      ++t.cases;
      if (!holds(x, y, z) && !t.failure) t.failure = std::vector<std::uint64_t>{x, y, z};
    }
    return to_report(t);
  }
  return to_report(parallel_reduce(
      n, threads, Tally{},
      [&](std::uint64_t begin, std::uint64_t end) {
        Tally t;
        for (auto x = begin; x < end; ++x) {
          for (std::uint64_t y = 0; y < n; ++y) {
            for (std::uint64_t z = 0; z < n; ++z) {
              ++t.cases;
              if (!t.failure &&
                  !holds(static_cast<TableGroup::Index>(x),
                         static_cast<TableGroup::Index>(y),
                         static_cast<TableGroup::Index>(z))) {
                t.failure = std::vector<std::uint64_t>{x, y, z};
              }
            }
          }
        }
        return t;
      },
      merge));
}

}  // namespace

IdentityReport associativity_check(const TableGroup& g, CheckMode mode,
                                   unsigned threads) {
  if (mode.kind == CheckMode::Kind::kExhaustive &&
      g.order() > kExhaustiveAssociativityLimit) {
    mode = CheckMode::sample(1'000'000, mode.seed);
  }
  return triple_check(g, mode, threads, [&](auto x, auto y, auto z) {
    return g.mul(g.mul(x, y), z) == g.mul(x, g.mul(y, z));
  });
}

IdentityReport hall_witt_check(const TableGroup& g, CheckMode mode,
                               unsigned threads) {
  return triple_check(g, mode, threads, [&](auto x, auto y, auto z) {
    const auto a = g.conjugate(g.commutator(g.commutator(x, g.inv(y)), z), y);
    const auto b = g.conjugate(g.commutator(g.commutator(y, g.inv(z)), x), z);
    const auto c = g.conjugate(g.commutator(g.commutator(z, g.inv(x)), y), x);
    return g.mul(g.mul(a, b), c) == g.identity();
  });
}

LaurentReport laurent_bound_check(const TableGroup& g) {
  const std::uint64_t order = g.order();
  if (order < 2) throw PreconditionError("trivial group is not a p-group");
  std::uint64_t p = 2;
  while (order % p != 0) ++p;
  std::uint64_t rest = order;
  while (rest % p == 0) rest /= p;
  if (rest != 1) {
    throw PreconditionError("group of order " + std::to_string(order) +
                            " is not a p-group");
  }
  LaurentReport report;
  report.series = lower_central_series(g);
  if (report.series.nilpotency_class > 3) {
    throw PreconditionError("lemma hypothesis requires class 3 (group has class " +
                            std::to_string(report.series.nilpotency_class) + ")");
  }
  const auto& o = report.series.orders;
  report.p = static_cast<std::uint32_t>(p);
  report.gamma2_order = o.size() > 1 ? o[1] : 1;
  report.gamma3_order = o.size() > 2 ? o[2] : 1;
  std::uint64_t quotient = report.gamma2_order / report.gamma3_order;
  while (quotient > 1) {
    quotient /= p;
    ++report.m;
  }
  report.bound = big_pow(p, 2 * report.m * report.m * report.m);
  report.holds = report.gamma3_order <= report.bound;
  return report;
}

IdentityReport commutator_power_check(const Class2Group& g,
                                      const std::vector<std::uint64_t>& exponents,
                                      CheckMode mode) {
  Tally t;
  auto record = [&](bool ok, std::vector<std::uint64_t> tuple) {
    ++t.cases;
    if (!ok && !t.failure) t.failure = std::move(tuple);
  };
  auto check_pair = [&](const GroupElement& x, const GroupElement& y,
                        std::uint64_t ix, std::uint64_t iy) {
    const GroupElement c = g.commutator(x, y);
    for (auto e : exponents) {
      record(g.power(c, e) == g.commutator(g.power(x, e), y), {ix, iy, e});
    }
  };
  auto check_triple = [&](const GroupElement& x, const GroupElement& y,
                          const GroupElement& z, std::uint64_t ix,
                          std::uint64_t iy, std::uint64_t iz) {
    const GroupElement lhs = g.commutator(g.multiply(x, z), y);
    const GroupElement rhs =
        g.multiply(g.conjugate(g.commutator(x, y), z), g.commutator(z, y));
    record(lhs == rhs, {ix, iy, iz});
  };

  if (mode.kind == CheckMode::Kind::kSample) {
    const std::uint64_t n = g.order_u64();
    Lcg64 rng(mode.seed);
    for (std::uint64_t s = 0; s < mode.samples; ++s) {
      const auto ix = rng.below(n), iy = rng.below(n), iz = rng.below(n);
      const auto x = g.element_at(ix), y = g.element_at(iy), z = g.element_at(iz);
      check_pair(x, y, ix, iy);
      check_triple(x, y, z, ix, iy, iz);
    }
    return to_report(t);
  }

  const std::uint64_t n = g.order_u64();
  std::vector<GroupElement> elems;
  elems.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) elems.push_back(g.element_at(i));
  for (std::uint64_t x = 0; x < n; ++x) {
    for (std::uint64_t y = 0; y < n; ++y) check_pair(elems[x], elems[y], x, y);
  }
  // The triple identity is checked on the Cayley table built from the same
  // multiplication.
  const TableGroup table = as_table(g);
  for (std::uint64_t x = 0; x < n; ++x) {
    for (std::uint64_t y = 0; y < n; ++y) {
      const auto cxy = table.commutator(static_cast<TableGroup::Index>(x),
                                        static_cast<TableGroup::Index>(y));
      for (std::uint64_t z = 0; z < n; ++z) {
        const auto xi = static_cast<TableGroup::Index>(x);
        const auto yi = static_cast<TableGroup::Index>(y);
        const auto zi = static_cast<TableGroup::Index>(z);
        const auto lhs = table.commutator(table.mul(xi, zi), yi);
        const auto rhs = table.mul(table.conjugate(cxy, zi), table.commutator(zi, yi));
        record(lhs == rhs, {x, y, z});
      }
    }
  }
  return to_report(t);
}

// ---------------------------------------------------------------------------
// Certificate

ConstructionCertificate certify(const Class2Group& g, std::uint64_t seed,
                                std::uint64_t samples, unsigned threads) {
  ConstructionCertificate cert;
  const PrimeField& f = g.field();
  const std::uint64_t order = g.order_u64();
  cert.order = order;
  cert.exhaustive = order <= kExhaustiveCertificateLimit;
  Lcg64 rng(seed);

  std::vector<std::uint64_t> xs;
  if (cert.exhaustive) {
    xs.resize(order);
    for (std::uint64_t i = 0; i < order; ++i) xs[i] = i;
  } else {
    for (std::uint64_t s = 0; s < samples; ++s) xs.push_back(rng.below(order));
  }

  for (auto i : xs) {
    if (!(g.power(g.element_at(i), f.p()) == g.identity())) cert.exponent_p = false;
  }

  // Commutator formula on all pairs (or sampled pairs).
  if (cert.exhaustive) {
    std::vector<GroupElement> elems;
    for (std::uint64_t i = 0; i < order; ++i) elems.push_back(g.element_at(i));
    for (const auto& x : elems) {
      for (const auto& y : elems) {
        const GroupElement c = g.commutator(x, y);
        if (!c.v.is_zero() || !(c.w == beta_eval(g.structure(), x.v, y.v))) {
          cert.commutator_formula = false;
        }
      }
    }
  } else {
    for (std::uint64_t s = 0; s < samples; ++s) {
      const auto x = g.element_at(rng.below(order)), y = g.element_at(rng.below(order));
      const GroupElement c = g.commutator(x, y);
      if (!c.v.is_zero() || !(c.w == beta_eval(g.structure(), x.v, y.v))) {
        cert.commutator_formula = false;
      }
    }
  }

  // Center by scan against the generators, compared with radical x W.
  std::vector<GroupElement> gens;
  for (std::size_t i = 0; i < g.n(); ++i) {
    gens.push_back(g.make(VectorFp::unit(f, g.n(), i), VectorFp(f, g.d())));
  }
  for (std::size_t j = 0; j < g.d(); ++j) {
    gens.push_back(g.make(VectorFp(f, g.n()), VectorFp::unit(f, g.d(), j)));
  }
  for (auto i : xs) {
    const GroupElement x = g.element_at(i);
    bool central = true;
    for (const auto& s : gens) {
      if (!(g.multiply(x, s) == g.multiply(s, x))) {
        central = false;
        break;
      }
    }
    if (central) ++cert.center_order;
    if (central != g.is_central(x)) cert.center = false;
  }

  // Derived subgroup: closure of [x, s] compared with {0} x span(im beta).
  std::vector<VectorFp> image;
  for (std::size_t i = 0; i < g.n(); ++i)
    for (std::size_t j = 0; j < g.n(); ++j) image.push_back(g.structure().gram_entry(i, j));
  const Subspace expected = Subspace::span(f, g.d(), image);
  std::vector<VectorFp> commutator_ws;
  for (auto i : xs) {
    const GroupElement x = g.element_at(i);
    for (const auto& s : gens) {
      const GroupElement c = g.commutator(x, s);
      if (!c.v.is_zero()) cert.derived = false;
      commutator_ws.push_back(c.w);
    }
  }
  if (!cert.exhaustive) {
    for (const auto& a : gens)
      for (const auto& b : gens) commutator_ws.push_back(g.commutator(a, b).w);
  }
  // Closure inside {0} x W: the W-parts add under multiplication.
  const Subspace derived = Subspace::span(f, g.d(), commutator_ws);
  if (!(derived == expected)) cert.derived = false;
  cert.derived_order = derived.size();

  if (order <= kExhaustiveAssociativityLimit) {
    const auto report = associativity_check(as_table(g), CheckMode::exhaustive(), threads);
    cert.associativity = report.holds;
    cert.associativity_cases = report.cases_checked;
  } else {
    cert.associativity_exhaustive = false;
    for (std::uint64_t s = 0; s < samples; ++s) {
      const auto x = g.element_at(rng.below(order));
      const auto y = g.element_at(rng.below(order));
      const auto z = g.element_at(rng.below(order));
      ++cert.associativity_cases;
      if (!(g.multiply(g.multiply(x, y), z) == g.multiply(x, g.multiply(y, z)))) {
        cert.associativity = false;
      }
    }
  }
  return cert;
}

}  // namespace pseudofin
