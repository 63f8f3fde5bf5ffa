#include "pseudofin/comprehensive.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <string>

#include "pseudofin/error.hpp"

namespace pseudofin {

// ---------------------------------------------------------------------------
// Abelian p-groups

AbelianPGroup::AbelianPGroup(std::uint32_t p, std::vector<std::size_t> exponents)
    : p_(p) {
  if (!is_prime(p)) throw PreconditionError(std::to_string(p) + " is not prime");
  for (auto e : exponents) {
    if (e > 0) exponents_.push_back(e);
  }
  std::sort(exponents_.begin(), exponents_.end(), std::greater<>());
  for (auto e : exponents_) {
    std::uint64_t m = 1;
    for (std::size_t i = 0; i < e; ++i) {
      if (m > (1ULL << 40) / p) throw BudgetExceeded("cyclic factor too large");
      m *= p;
    }
    moduli_.push_back(m);
    if (order_ > (1ULL << 40) / m) throw BudgetExceeded("abelian group too large");
    order_ *= m;
  }
}

AbelianPGroup::Element AbelianPGroup::add(const Element& a, const Element& b) const {
  Element out(rank());
  for (std::size_t i = 0; i < rank(); ++i) out[i] = (a[i] + b[i]) % moduli_[i];
  return out;
}

AbelianPGroup::Element AbelianPGroup::scale(const Element& a, std::uint64_t m) const {
  Element out(rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    out[i] = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a[i]) * m) % moduli_[i]);
  }
  return out;
}

bool AbelianPGroup::contains(const Element& a) const {
  if (a.size() != rank()) return false;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (a[i] >= moduli_[i]) return false;
  }
  return true;
}

AbelianPGroup::Element AbelianPGroup::element_at(std::uint64_t index) const {
  Element out(rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    out[i] = index % moduli_[i];
    index /= moduli_[i];
  }
  return out;
}

std::uint64_t AbelianPGroup::index_of(const Element& a) const {
  std::uint64_t idx = 0;
  for (std::size_t i = rank(); i-- > 0;) idx = idx * moduli_[i] + a[i];
  return idx;
}

std::size_t height(const AbelianPGroup& a, const AbelianPGroup::Element& g) {
  if (!a.contains(g)) throw DimensionError("element not in group");
  std::size_t best = kInfiniteHeight;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (g[i] == 0) continue;
    std::size_t v = 0;
    for (std::uint64_t x = g[i]; x % a.p() == 0; x /= a.p()) ++v;
    best = std::min(best, v);
  }
  return best;
}

std::size_t order_exponent(const AbelianPGroup& a, const AbelianPGroup::Element& g) {
  std::size_t e = 0;
  AbelianPGroup::Element x = g;
  while (x != a.identity()) {
    x = a.scale(x, a.p());
    ++e;
  }
  return e;
}

AbelianSubgroup::AbelianSubgroup(const AbelianPGroup& ambient,
                                 const std::vector<AbelianPGroup::Element>& generators)
    : ambient_(ambient), member_(ambient.order(), false) {
  for (const auto& s : generators) {
    if (!ambient.contains(s)) throw DimensionError("generator not in group");
  }
  std::deque<std::uint64_t> queue{ambient.index_of(ambient.identity())};
  member_[queue.front()] = true;
  elements_.push_back(queue.front());
  while (!queue.empty()) {
    const auto x = ambient.element_at(queue.front());
    queue.pop_front();
    for (const auto& s : generators) {
      const auto y = ambient.index_of(ambient.add(x, s));
      if (!member_[y]) {
        member_[y] = true;
        elements_.push_back(y);
        queue.push_back(y);
      }
    }
  }
  std::sort(elements_.begin(), elements_.end());
}

bool AbelianSubgroup::contains(const AbelianPGroup::Element& g) const {
  return ambient_.contains(g) && member_[ambient_.index_of(g)];
}

std::size_t height_in(const AbelianSubgroup& b, const AbelianPGroup::Element& g) {
  const AbelianPGroup& a = b.ambient();
  if (!b.contains(g)) throw DimensionError("element not in subgroup");
  if (g == a.identity()) return kInfiniteHeight;
  const std::size_t top = a.exponents().empty() ? 0 : a.exponents().front();
  for (std::size_t n = top; n-- > 0;) {
    std::uint64_t pn = 1;
    for (std::size_t i = 0; i < n; ++i) pn *= a.p();
    for (auto h : b.elements()) {
      if (a.scale(a.element_at(h), pn) == g) return n;
    }
  }
  return 0;  // unreachable: n = 0 is witnessed by h = g
}

bool is_pure(const AbelianPGroup& a, const AbelianSubgroup& b) {
  for (auto idx : b.elements()) {
    const auto g = a.element_at(idx);
    if (height_in(b, g) != height(a, g)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Condition (*)

namespace {

// G* = V / radical, coordinatized by the non-pivot columns of the radical.
struct Quotient {
  std::vector<std::size_t> free_cols;
  AbelianPGroup gstar;

  explicit Quotient(const Class2Group& g)
      : gstar(g.field().p(), {}) {
    const auto& piv = g.radical_v().pivots();
    for (std::size_t c = 0; c < g.n(); ++c) {
      if (std::find(piv.begin(), piv.end(), c) == piv.end()) free_cols.push_back(c);
    }
    gstar = AbelianPGroup(g.field().p(), std::vector<std::size_t>(free_cols.size(), 1));
  }

  AbelianPGroup::Element project(const Class2Group& g, const VectorFp& v) const {
    const VectorFp r = g.radical_v().reduce(v);
    AbelianPGroup::Element e(free_cols.size());
    for (std::size_t i = 0; i < free_cols.size(); ++i) e[i] = r[free_cols[i]];
    return e;
  }

  VectorFp lift(const Class2Group& g, const AbelianPGroup::Element& e) const {
    VectorFp v(g.field(), g.n());
    for (std::size_t i = 0; i < free_cols.size(); ++i) {
      v.set(free_cols[i], static_cast<Residue>(e[i]));
    }
    return v;
  }

  std::uint64_t exponent() const { return gstar.rank() == 0 ? 1 : gstar.p(); }
};

std::uint64_t checked_p_power(std::uint32_t p, std::size_t r) {
  std::uint64_t x = 1;
  for (std::size_t i = 0; i < r; ++i) {
    if (x > (1ULL << 40)) throw PreconditionError("p^r out of range");
    x *= p;
  }
  return x;
}

// Element order in G (exponent p), via repeated powering.
std::uint64_t element_order(const Class2Group& g, const GroupElement& x) {
  std::uint64_t o = 1;
  GroupElement y = x;
  while (!(y == g.identity())) {
    y = g.multiply(y, x);
    ++o;
  }
  return o;
}

bool commutes_with_generators(const Class2Group& g, const GroupElement& x) {
  const PrimeField& f = g.field();
  for (std::size_t i = 0; i < g.n(); ++i) {
    const GroupElement s = g.make(VectorFp::unit(f, g.n(), i), VectorFp(f, g.d()));
    if (!(g.multiply(x, s) == g.multiply(s, x))) return false;
  }
  return true;  // W is central
}

// Calls visit(coefficients) for every c in GF(p)^k, first entry fastest.
void for_each_coefficients(std::uint32_t p, std::size_t k,
                           const std::function<void(const std::vector<Residue>&)>& visit) {
  if (checked_p_power(p, k) > 1'000'000) {
    throw BudgetExceeded("more than 10^6 coefficient vectors for A");
  }
  std::vector<Residue> c(k, 0);
  while (true) {
    visit(c);
    std::size_t i = 0;
    while (i < k && ++c[i] == p) c[i++] = 0;
    if (i == k) return;
  }
}

bool generates_pure(const Class2Group& g, const Quotient& q,
                    const std::vector<VectorFp>& gens) {
  std::vector<AbelianPGroup::Element> proj;
  for (const auto& v : gens) proj.push_back(q.project(g, v));
  return is_pure(q.gstar, AbelianSubgroup(q.gstar, proj));
}

void check_hypothesis(const Class2Group& g, const Quotient& q,
                      const StarInstance& inst) {
  const PrimeField& f = g.field();
  if (inst.alpha.size() != inst.generators.size()) {
    throw PreconditionError("alpha must give one value per generator of A");
  }
  for (const auto& v : inst.generators) {
    if (v.dim() != g.n()) throw DimensionError("generator of A has wrong dimension");
  }
  for (const auto& a : inst.alpha) {
    if (a.v.dim() != g.n() || a.w.dim() != g.d() || !commutes_with_generators(g, a)) {
      throw PreconditionError("clause alpha in Hom(A, Z) fails: value outside Z");
    }
  }
  if (inst.w.v.dim() != g.n() || inst.w.w.dim() != g.d() ||
      !commutes_with_generators(g, inst.w)) {
    throw PreconditionError("clause w in Z fails");
  }
  // alpha is well defined iff every relation among the generators in G*
  // maps to the identity.
  const std::size_t k = inst.generators.size();
  bool well_defined = true;
  for_each_coefficients(f.p(), k, [&](const std::vector<Residue>& c) {
    VectorFp v(f, g.n());
    GroupElement image = g.identity();
    for (std::size_t i = 0; i < k; ++i) {
      v += inst.generators[i].scaled(c[i]);
      image = g.multiply(image, g.power(inst.alpha[i], c[i]));
    }
    if (g.radical_v().contains(v) && !(image == g.identity())) well_defined = false;
  });
  if (!well_defined) {
    throw PreconditionError("clause alpha in Hom(A, Z) fails: not well defined on A");
  }
  if (!generates_pure(g, q, inst.generators)) {
    throw PreconditionError("clause A pure in G* fails");
  }
  std::uint64_t exp_alpha = 1;
  for (const auto& a : inst.alpha) exp_alpha = std::max(exp_alpha, element_order(g, a));
  const std::uint64_t pr = checked_p_power(f.p(), inst.r);
  if (exp_alpha > pr) throw PreconditionError("clause exp(alpha(A)) <= p^r fails");
  if (pr > q.exponent()) throw PreconditionError("clause p^r <= exp(G*) fails");
  // G has exponent p.
  if (pr * element_order(g, inst.w) > f.p()) {
    throw PreconditionError("clause p^r |w| <= exp(G) fails");
  }
}

}  // namespace

bool verify_star_witness(const Class2Group& g, const StarInstance& inst,
                         const GroupElement& x) {
  const PrimeField& f = g.field();
  const Quotient q(g);
  const std::uint64_t pr = checked_p_power(f.p(), inst.r);
  // |g*| = p^r: least e with x^e central.
  std::uint64_t e = 1;
  GroupElement y = x;
  while (!commutes_with_generators(g, y)) {
    y = g.multiply(y, x);
    ++e;
  }
  if (e != pr) return false;
  if (!(g.power(x, pr) == inst.w)) return false;
  // [a, x] = alpha(a) for every a in A, not just the generators.
  const std::size_t k = inst.generators.size();
  bool ok = true;
  for_each_coefficients(f.p(), k, [&](const std::vector<Residue>& c) {
    GroupElement a = g.identity(), image = g.identity();
    for (std::size_t i = 0; i < k; ++i) {
      const GroupElement s = g.make(inst.generators[i], VectorFp(f, g.d()));
      a = g.multiply(a, g.power(s, c[i]));
      image = g.multiply(image, g.power(inst.alpha[i], c[i]));
    }
    if (!(g.commutator(a, x) == image)) ok = false;
  });
  if (!ok) return false;
  std::vector<VectorFp> gens = inst.generators;
  gens.push_back(x.v);
  return generates_pure(g, q, gens);
}

StarVerdict star_witness(const Class2Group& g, const StarInstance& inst) {
  const Quotient q(g);
  check_hypothesis(g, q, inst);
  StarVerdict verdict;
  const std::uint64_t order = g.order_u64();
  if (order > kDefaultTableBudget) {
    throw BudgetExceeded("witness sweep over " + std::to_string(order) + " elements");
  }
  const std::uint64_t pr = checked_p_power(g.field().p(), inst.r);
  std::vector<MatrixFp> maps;
  for (const auto& a : inst.generators) maps.push_back(left_map(g.structure(), a));
  for (std::uint64_t idx = 0; idx < order; ++idx) {
    ++verdict.elements_scanned;
    const GroupElement x = g.element_at(idx);
    // In exponent p, |x*| is 1 on the radical and p elsewhere.
    const bool trivial_image = g.radical_v().contains(x.v);
    if (trivial_image != (pr == 1)) continue;
    bool ok = true;
    for (std::size_t i = 0; i < maps.size() && ok; ++i) {
      ok = inst.alpha[i].v.is_zero() && maps[i].apply(x.v) == inst.alpha[i].w;
    }
    if (!ok || !(g.power(x, pr) == inst.w)) continue;
    std::vector<VectorFp> gens = inst.generators;
    gens.push_back(x.v);
    if (!generates_pure(g, q, gens)) continue;
    if (!verify_star_witness(g, inst, x)) {
      throw Error("witness " + std::to_string(idx) + " failed re-verification");
    }
    verdict.witness = idx;
    return verdict;
  }
  return verdict;
}

StarScanReport star_scan(const Class2Group& g, std::size_t max_rank,
                         std::uint64_t max_instances) {
  if (max_instances == 0) throw PreconditionError("instance bound must be positive");
  const PrimeField& f = g.field();
  const Quotient q(g);
  const std::size_t top = std::min({max_rank, kMaxStarRank, q.gstar.rank()});

  // Z = radical x W, radical coordinates least significant.
  std::vector<GroupElement> zlist;
  {
    const auto rad = g.radical_v().basis().row_vectors();
    const std::uint64_t zsize = checked_p_power(f.p(), rad.size() + g.d());
    for (std::uint64_t i = 0; i < zsize; ++i) {
      std::uint64_t x = i;
      VectorFp v(f, g.n()), w(f, g.d());
      for (const auto& b : rad) {
        v += b.scaled(static_cast<Residue>(x % f.p()));
        x /= f.p();
      }
      for (std::size_t c = 0; c < g.d(); ++c) {
        w.set(c, static_cast<Residue>(x % f.p()));
        x /= f.p();
      }
      zlist.push_back(g.make(v, w));
    }
  }
  std::vector<std::uint64_t> zorder;
  for (const auto& z : zlist) zorder.push_back(element_order(g, z));

  StarScanReport report;
  report.instances_by_rank.assign(top + 1, 0);
  report.satisfied_by_rank.assign(top + 1, 0);

  for (std::size_t rank = 0; rank <= top && !report.truncated; ++rank) {
    for_each_subspace(q.gstar.rank(), rank, f, [&](const Subspace& a) {
      ++report.subgroups;
      std::vector<VectorFp> gens;
      for (std::size_t i = 0; i < a.dim(); ++i) {
        AbelianPGroup::Element e(q.gstar.rank());
        for (std::size_t c = 0; c < e.size(); ++c) e[c] = a.basis().at(i, c);
        gens.push_back(q.lift(g, e));
      }
      std::vector<std::size_t> images(rank, 0);
      while (true) {
        std::uint64_t exp_alpha = 1;
        for (auto im : images) exp_alpha = std::max(exp_alpha, zorder[im]);
        for (std::size_t r = 0;; ++r) {
          const std::uint64_t pr = checked_p_power(f.p(), r);
          if (pr > q.exponent()) break;
          if (exp_alpha > pr) continue;
          for (std::size_t wi = 0; wi < zlist.size(); ++wi) {
            if (pr * zorder[wi] > f.p()) continue;
            if (report.instances == max_instances) {
              report.truncated = true;
              return false;
            }
            std::vector<GroupElement> alpha;
            for (auto im : images) alpha.push_back(zlist[im]);
            StarInstance inst{gens, std::move(alpha), zlist[wi], r};
            const bool ok = star_witness(g, inst).witness.has_value();
            ++report.instances;
            ++report.instances_by_rank[rank];
            if (ok) {
              ++report.satisfied;
              ++report.satisfied_by_rank[rank];
            } else {
              ++report.failed;
              if (!report.first_failure) report.first_failure = std::move(inst);
            }
          }
        }
        std::size_t i = 0;
        while (i < rank && ++images[i] == zlist.size()) images[i++] = 0;
        if (i == rank) break;
      }
      return true;
    });
  }
  return report;
}

}  // namespace pseudofin
