#include "pseudofin/fplinalg.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "pseudofin/error.hpp"

namespace pseudofin {

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (p >= kMaxModulus || !is_prime(p)) {
    throw PreconditionError("modulus " + std::to_string(p) +
                            " is not a prime below 65536");
  }
}

Residue PrimeField::pow(Residue a, std::uint64_t e) const noexcept {
  Residue result = 1 % p_;
  Residue base = a % p_;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Residue PrimeField::inv(Residue a) const {
  if (a % p_ == 0) throw PreconditionError("zero has no inverse");
  return pow(a, p_ - 2);
}

// ---------------------------------------------------------------------------
// VectorFp

namespace {

void require_same_shape(const VectorFp& a, const VectorFp& b) {
  if (a.field() != b.field() || a.dim() != b.dim()) {
    throw DimensionError("vector shape mismatch: dim " +
                         std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
}

}  // namespace

VectorFp::VectorFp(PrimeField field, std::size_t dim)
    : field_(field), coords_(dim, 0) {}

VectorFp::VectorFp(PrimeField field, std::vector<std::int64_t> coords)
    : field_(field), coords_(coords.size()) {
  for (std::size_t i = 0; i < coords.size(); ++i) {
    coords_[i] = field_.reduce(coords[i]);
  }
}

VectorFp::VectorFp(PrimeField field, std::initializer_list<std::int64_t> coords)
    : VectorFp(field, std::vector<std::int64_t>(coords)) {}

VectorFp VectorFp::unit(PrimeField field, std::size_t dim, std::size_t i) {
  VectorFp v(field, dim);
  v.coords_.at(i) = 1;
  return v;
}

bool VectorFp::is_zero() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(),
                     [](Residue r) { return r == 0; });
}

VectorFp& VectorFp::operator+=(const VectorFp& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    coords_[i] = field_.add(coords_[i], other.coords_[i]);
  }
  return *this;
}

VectorFp& VectorFp::operator-=(const VectorFp& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    coords_[i] = field_.sub(coords_[i], other.coords_[i]);
  }
  return *this;
}

VectorFp operator-(const VectorFp& a) {
  VectorFp out(a.field_, a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    out.coords_[i] = a.field_.neg(a.coords_[i]);
  }
  return out;
}

VectorFp VectorFp::scaled(Residue a) const {
  VectorFp out(field_, dim());
  a %= field_.p();
  for (std::size_t i = 0; i < dim(); ++i) {
    out.coords_[i] = field_.mul(a, coords_[i]);
  }
  return out;
}

Residue VectorFp::dot(const VectorFp& other) const {
  require_same_shape(*this, other);
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < dim(); ++i) {
    acc = (acc + static_cast<std::uint64_t>(coords_[i]) * other.coords_[i]) %
          field_.p();
  }
  return static_cast<Residue>(acc);
}

VectorFp VectorFp::concat(const VectorFp& tail) const {
  if (tail.field_ != field_) throw DimensionError("field mismatch in concat");
  VectorFp out(field_, dim() + tail.dim());
  std::copy(coords_.begin(), coords_.end(), out.coords_.begin());
  std::copy(tail.coords_.begin(), tail.coords_.end(),
            out.coords_.begin() + static_cast<std::ptrdiff_t>(dim()));
  return out;
}

VectorFp VectorFp::slice(std::size_t begin, std::size_t count) const {
  if (begin + count > dim()) throw DimensionError("slice out of range");
  VectorFp out(field_, count);
  std::copy_n(coords_.begin() + static_cast<std::ptrdiff_t>(begin), count,
              out.coords_.begin());
  return out;
}

// ---------------------------------------------------------------------------
// MatrixFp

MatrixFp::MatrixFp(PrimeField field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

MatrixFp MatrixFp::from_rows(PrimeField field, std::size_t cols,
                             const std::vector<std::vector<std::int64_t>>& rows) {
  MatrixFp m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionError("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) {
      m.entries_[r * cols + c] = field.reduce(rows[r][c]);
    }
  }
  return m;
}

MatrixFp MatrixFp::from_vectors(PrimeField field, std::size_t cols,
                                std::span<const VectorFp> rows) {
  MatrixFp m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].dim() != cols || rows[r].field() != field) {
      throw DimensionError("row vector does not match matrix shape");
    }
    std::copy(rows[r].coords().begin(), rows[r].coords().end(),
              m.entries_.begin() + static_cast<std::ptrdiff_t>(r * cols));
  }
  return m;
}

MatrixFp MatrixFp::identity(PrimeField field, std::size_t n) {
  MatrixFp m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.entries_[i * n + i] = 1 % field.p();
  return m;
}

MatrixFp MatrixFp::from_entries(PrimeField field, std::size_t rows,
                                std::size_t cols, std::vector<Residue> entries) {
  if (entries.size() != rows * cols) {
    throw DimensionError("entry count does not match matrix shape");
  }
  MatrixFp m(field, 0, 0);
  m.rows_ = rows;
  m.cols_ = cols;
  for (auto& e : entries) e %= field.p();
  m.entries_ = std::move(entries);
  return m;
}

VectorFp MatrixFp::row_vector(std::size_t r) const {
  VectorFp v(field_, cols_);
  for (std::size_t c = 0; c < cols_; ++c) v.set(c, at(r, c));
  return v;
}

std::vector<VectorFp> MatrixFp::row_vectors() const {
  std::vector<VectorFp> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(row_vector(r));
  return out;
}

VectorFp MatrixFp::apply(const VectorFp& x) const {
  if (x.dim() != cols_ || x.field() != field_) {
    throw DimensionError("matrix has " + std::to_string(cols_) +
                         " columns, vector has dim " + std::to_string(x.dim()));
  }
  VectorFp out(field_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::uint64_t acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      acc += static_cast<std::uint64_t>(entries_[r * cols_ + c]) * x[c];
      if ((c & 63) == 63) acc %= field_.p();
    }
    out.set(r, static_cast<Residue>(acc % field_.p()));
  }
  return out;
}

MatrixFp MatrixFp::operator*(const MatrixFp& rhs) const {
  if (cols_ != rhs.rows_ || field_ != rhs.field_) {
    throw DimensionError("matrix product shape mismatch");
  }
  MatrixFp out(field_, rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < rhs.cols_; ++c) {
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < cols_; ++k) {
        acc = (acc + static_cast<std::uint64_t>(at(r, k)) * rhs.at(k, c)) %
              field_.p();
      }
      out.entries_[r * rhs.cols_ + c] = static_cast<Residue>(acc);
    }
  }
  return out;
}

MatrixFp MatrixFp::transpose() const {
  MatrixFp out(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      out.entries_[c * rows_ + r] = at(r, c);
    }
  }
  return out;
}

MatrixFp MatrixFp::vstack(const MatrixFp& below) const {
  if (cols_ != below.cols_ || field_ != below.field_) {
    throw DimensionError("vstack column mismatch");
  }
  MatrixFp out(field_, rows_ + below.rows_, cols_);
  std::copy(entries_.begin(), entries_.end(), out.entries_.begin());
  std::copy(below.entries_.begin(), below.entries_.end(),
            out.entries_.begin() + static_cast<std::ptrdiff_t>(entries_.size()));
  return out;
}

// ---------------------------------------------------------------------------
// Row reduction

namespace {

// Gauss-Jordan elimination in place on a row-major buffer. Returns the pivot
// columns; the first pivots.size() rows hold the reduced form.
std::vector<std::size_t> reduce_in_place(const PrimeField& f,
                                         std::vector<Residue>& a,
                                         std::size_t rows, std::size_t cols,
                                         std::size_t col_limit) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < col_limit && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && a[sel * cols + c] == 0) ++sel;
    if (sel == rows) continue;
    if (sel != r) {
      std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(sel * cols),
                       a.begin() + static_cast<std::ptrdiff_t>(sel * cols + cols),
                       a.begin() + static_cast<std::ptrdiff_t>(r * cols));
    }
    const Residue inv = f.inv(a[r * cols + c]);
    for (std::size_t j = c; j < cols; ++j) {
      a[r * cols + j] = f.mul(a[r * cols + j], inv);
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const Residue factor = a[i * cols + c];
      if (factor == 0) continue;
      for (std::size_t j = c; j < cols; ++j) {
        a[i * cols + j] = f.sub(a[i * cols + j], f.mul(factor, a[r * cols + j]));
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

RrefResult rref(const MatrixFp& m) {
  std::vector<Residue> buf(m.entries().begin(), m.entries().end());
  auto pivots = reduce_in_place(m.field(), buf, m.rows(), m.cols(), m.cols());
  const std::size_t rk = pivots.size();
  buf.resize(rk * m.cols());
  return {rk, MatrixFp::from_entries(m.field(), rk, m.cols(), std::move(buf)),
          std::move(pivots)};
}

std::size_t rank(const MatrixFp& m) { return rref(m).rank; }

// ---------------------------------------------------------------------------
// Subspaces

class SubspaceBuilder {
 public:
  static Subspace from_rref(RrefResult r) {
    return Subspace(std::move(r.reduced), std::move(r.pivots));
  }
  static Subspace trusted(MatrixFp basis, std::vector<std::size_t> pivots) {
    return Subspace(std::move(basis), std::move(pivots));
  }
};

Subspace Subspace::span(const MatrixFp& generators) {
  return SubspaceBuilder::from_rref(rref(generators));
}

Subspace Subspace::span(PrimeField field, std::size_t ambient_dim,
                        std::span<const VectorFp> generators) {
  return span(MatrixFp::from_vectors(field, ambient_dim, generators));
}

Subspace Subspace::zero(PrimeField field, std::size_t ambient_dim) {
  return Subspace(MatrixFp(field, 0, ambient_dim), {});
}

Subspace Subspace::full(PrimeField field, std::size_t ambient_dim) {
  std::vector<std::size_t> piv(ambient_dim);
  for (std::size_t i = 0; i < ambient_dim; ++i) piv[i] = i;
  return Subspace(MatrixFp::identity(field, ambient_dim), std::move(piv));
}

VectorFp Subspace::reduce(const VectorFp& v) const {
  if (v.dim() != ambient_dim()) {
    throw DimensionError("vector dim " + std::to_string(v.dim()) +
                         " vs ambient dim " + std::to_string(ambient_dim()));
  }
  VectorFp out = v;
  for (std::size_t i = 0; i < pivots_.size(); ++i) {
    const Residue c = out[pivots_[i]];
    if (c != 0) out -= basis_.row_vector(i).scaled(c);
  }
  return out;
}

bool Subspace::contains(const VectorFp& v) const { return reduce(v).is_zero(); }

std::uint64_t Subspace::size() const {
  std::uint64_t s = 1;
  for (std::size_t i = 0; i < dim(); ++i) s *= field().p();
  return s;
}

std::vector<VectorFp> Subspace::elements() const {
  const std::uint64_t total = size();
  const auto p = field().p();
  std::vector<VectorFp> out;
  out.reserve(total);
  std::vector<Residue> coef(dim(), 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    VectorFp v(field(), ambient_dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      if (coef[i] != 0) v += basis_.row_vector(i).scaled(coef[i]);
    }
    out.push_back(std::move(v));
    for (std::size_t i = 0; i < dim(); ++i) {
      if (++coef[i] < p) break;
      coef[i] = 0;
    }
  }
  return out;
}

Subspace kernel(const MatrixFp& m) {
  const auto r = rref(m);
  const PrimeField& f = m.field();
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto c : r.pivots) is_pivot[c] = true;
  std::vector<VectorFp> gens;
  for (std::size_t j = 0; j < n; ++j) {
    if (is_pivot[j]) continue;
    VectorFp x(f, n);
    x.set(j, 1);
    for (std::size_t i = 0; i < r.rank; ++i) {
      x.set(r.pivots[i], f.neg(r.reduced.at(i, j)));
    }
    gens.push_back(std::move(x));
  }
  return Subspace::span(f, n, gens);
}

std::optional<VectorFp> solve(const MatrixFp& m, const VectorFp& b) {
  if (b.dim() != m.rows() || b.field() != m.field()) {
    throw DimensionError("solve: right-hand side has dim " +
                         std::to_string(b.dim()) + ", matrix has " +
                         std::to_string(m.rows()) + " rows");
  }
  const std::size_t cols = m.cols() + 1;
  std::vector<Residue> buf(m.rows() * cols);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) buf[r * cols + c] = m.at(r, c);
    buf[r * cols + m.cols()] = b[r];
  }
  const auto pivots = reduce_in_place(m.field(), buf, m.rows(), cols, cols);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  VectorFp x(m.field(), m.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    x.set(pivots[i], buf[i * cols + m.cols()]);
  }
  return x;
}

Subspace annihilator(const Subspace& s) { return kernel(s.basis()); }

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim() || a.field() != b.field()) {
    throw DimensionError("subspaces live in different ambient spaces");
  }
  return Subspace::span(a.basis().vstack(b.basis()));
}

Subspace subspace_intersection(const Subspace& a, const Subspace& b) {
  // (A ∩ B)° = A° + B°
  return annihilator(subspace_sum(annihilator(a), annihilator(b)));
}

SubspacePair subspace_ops(const Subspace& a, const Subspace& b) {
  return {subspace_sum(a, b), subspace_intersection(a, b)};
}

void for_each_subspace(std::size_t n, std::size_t k, PrimeField field,
                       const std::function<bool(const Subspace&)>& visit) {
  if (k > n) return;
  const Residue p = field.p();
  std::vector<std::size_t> piv(k);
  for (std::size_t i = 0; i < k; ++i) piv[i] = i;
  while (true) {
    // Free slots: (row i, column j) with j > piv[i] and j not a pivot.
    std::vector<bool> is_pivot(n, false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<std::pair<std::size_t, std::size_t>> free_slots;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = piv[i] + 1; j < n; ++j) {
        if (!is_pivot[j]) free_slots.emplace_back(i, j);
      }
    }
    std::vector<Residue> base(k * n, 0);
    for (std::size_t i = 0; i < k; ++i) base[i * n + piv[i]] = 1;
    std::vector<Residue> digits(free_slots.size(), 0);
    while (true) {
      std::vector<Residue> entries = base;
      for (std::size_t s = 0; s < free_slots.size(); ++s) {
        entries[free_slots[s].first * n + free_slots[s].second] = digits[s];
      }
      if (!visit(SubspaceBuilder::trusted(
              MatrixFp::from_entries(field, k, n, std::move(entries)), piv))) {
        return;
      }
      std::size_t s = 0;
      for (; s < digits.size(); ++s) {
        if (++digits[s] < p) break;
        digits[s] = 0;
      }
      if (s == digits.size()) break;
    }
    // Next pivot set in lexicographic order.
    std::size_t i = k;
    while (i > 0 && piv[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++piv[i - 1];
    for (std::size_t j = i; j < k; ++j) piv[j] = piv[j - 1] + 1;
  }
}

std::vector<Subspace> enumerate_subspaces(std::size_t n, std::size_t k,
                                          PrimeField field) {
  std::vector<Subspace> out;
  for_each_subspace(n, k, field, [&](const Subspace& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

BigInt gaussian_binomial(std::size_t n, std::size_t k, std::uint64_t q) {
  if (k > n) return 0;
  BigInt num = 1, den = 1;
  for (std::size_t i = 0; i < k; ++i) {
    num *= big_pow(q, n - i) - 1;
    den *= big_pow(q, i + 1) - 1;
  }
  return num / den;
}

}  // namespace pseudofin
