#pragma once

// Exact linear algebra over prime fields GF(p).
//
// Residues are stored as least non-negative representatives. Subspaces are
// carried by their reduced row echelon basis, so two Subspace values compare
// equal exactly when they are equal as sets of vectors.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "pseudofin/bigint.hpp"

namespace pseudofin {

using Residue = std::uint32_t;

bool is_prime(std::uint64_t n) noexcept;

class PrimeField {
 public:
  static constexpr std::uint32_t kMaxModulus = 1u << 16;

  // Throws PreconditionError unless p is a prime below kMaxModulus.
  explicit PrimeField(std::uint32_t p);

  std::uint32_t p() const noexcept { return p_; }

  Residue reduce(std::int64_t x) const noexcept {
    const auto m = static_cast<std::int64_t>(p_);
    auto r = x % m;
    return static_cast<Residue>(r < 0 ? r + m : r);
  }
  Residue add(Residue a, Residue b) const noexcept {
    Residue s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept {
    return a >= b ? a - b : a + p_ - b;
  }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const noexcept {
    return static_cast<Residue>(static_cast<std::uint64_t>(a) * b % p_);
  }
  Residue pow(Residue a, std::uint64_t e) const noexcept;
  // Throws PreconditionError on zero.
  Residue inv(Residue a) const;

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t p_;
};

class VectorFp {
 public:
  VectorFp(PrimeField field, std::size_t dim);
  // Coordinates are reduced mod p.
  VectorFp(PrimeField field, std::vector<std::int64_t> coords);
  VectorFp(PrimeField field, std::initializer_list<std::int64_t> coords);

  static VectorFp unit(PrimeField field, std::size_t dim, std::size_t i);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t dim() const noexcept { return coords_.size(); }
  Residue operator[](std::size_t i) const { return coords_[i]; }
  void set(std::size_t i, Residue r) { coords_[i] = r % field_.p(); }
  std::span<const Residue> coords() const noexcept { return coords_; }

  bool is_zero() const noexcept;
  VectorFp& operator+=(const VectorFp& other);
  VectorFp& operator-=(const VectorFp& other);
  VectorFp scaled(Residue a) const;
  Residue dot(const VectorFp& other) const;

  friend VectorFp operator+(VectorFp a, const VectorFp& b) { return a += b; }
  friend VectorFp operator-(VectorFp a, const VectorFp& b) { return a -= b; }
  friend VectorFp operator-(const VectorFp& a);
  friend bool operator==(const VectorFp&, const VectorFp&) = default;

  // Concatenation, used for (v, w) pairs.
  VectorFp concat(const VectorFp& tail) const;
  VectorFp slice(std::size_t begin, std::size_t count) const;

 private:
  PrimeField field_;
  std::vector<Residue> coords_;
};

class MatrixFp {
 public:
  MatrixFp(PrimeField field, std::size_t rows, std::size_t cols);
  static MatrixFp from_rows(PrimeField field, std::size_t cols,
                            const std::vector<std::vector<std::int64_t>>& rows);
  static MatrixFp from_vectors(PrimeField field, std::size_t cols,
                               std::span<const VectorFp> rows);
  static MatrixFp identity(PrimeField field, std::size_t n);
  // Row-major entries, each already in [0, p).
  static MatrixFp from_entries(PrimeField field, std::size_t rows,
                               std::size_t cols, std::vector<Residue> entries);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Residue at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Residue v) {
    entries_[r * cols_ + c] = v % field_.p();
  }
  std::span<const Residue> entries() const noexcept { return entries_; }
  std::span<const Residue> row(std::size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }
  VectorFp row_vector(std::size_t r) const;
  std::vector<VectorFp> row_vectors() const;

  // m . x
  VectorFp apply(const VectorFp& x) const;
  MatrixFp operator*(const MatrixFp& rhs) const;
  MatrixFp transpose() const;
  // Rows of *this followed by rows of below.
  MatrixFp vstack(const MatrixFp& below) const;

  friend bool operator==(const MatrixFp&, const MatrixFp&) = default;

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Residue> entries_;
};

struct RrefResult {
  std::size_t rank;
  // The unique reduced row echelon form with zero rows removed
  // (rank x cols).
  MatrixFp reduced;
  std::vector<std::size_t> pivots;
};

RrefResult rref(const MatrixFp& m);
std::size_t rank(const MatrixFp& m);

class Subspace {
 public:
  static Subspace span(const MatrixFp& generators);
  static Subspace span(PrimeField field, std::size_t ambient_dim,
                       std::span<const VectorFp> generators);
  static Subspace zero(PrimeField field, std::size_t ambient_dim);
  static Subspace full(PrimeField field, std::size_t ambient_dim);

  const PrimeField& field() const noexcept { return basis_.field(); }
  std::size_t ambient_dim() const noexcept { return basis_.cols(); }
  std::size_t dim() const noexcept { return basis_.rows(); }
  const MatrixFp& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  bool contains(const VectorFp& v) const;
  // Canonical coset representative: v reduced against the basis, so that
  // every pivot coordinate is zero.
  VectorFp reduce(const VectorFp& v) const;
  // All p^dim vectors, in odometer order over basis coefficients.
  std::vector<VectorFp> elements() const;
  std::uint64_t size() const;

  friend bool operator==(const Subspace&, const Subspace&) = default;

 private:
  friend class SubspaceBuilder;
  Subspace(MatrixFp basis, std::vector<std::size_t> pivots)
      : basis_(std::move(basis)), pivots_(std::move(pivots)) {}

  MatrixFp basis_;
  std::vector<std::size_t> pivots_;
};

Subspace kernel(const MatrixFp& m);
// Returns x with m.x = b, free variables pinned to zero; nullopt if the
// system is inconsistent. Throws DimensionError if b.dim() != m.rows().
std::optional<VectorFp> solve(const MatrixFp& m, const VectorFp& b);
// The annihilator in the dual, identified with GF(p)^n by the standard
// pairing.
Subspace annihilator(const Subspace& s);

struct SubspacePair {
  Subspace sum;
  Subspace intersection;
};
SubspacePair subspace_ops(const Subspace& a, const Subspace& b);
Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace subspace_intersection(const Subspace& a, const Subspace& b);

// Visits every k-dimensional subspace of GF(p)^n exactly once. Pivot column
// sets are taken in lexicographic order; within a pivot set the free
// entries run as an odometer, first free entry fastest. Returning false
// from visit stops the enumeration.
void for_each_subspace(std::size_t n, std::size_t k, PrimeField field,
                       const std::function<bool(const Subspace&)>& visit);
std::vector<Subspace> enumerate_subspaces(std::size_t n, std::size_t k,
                                          PrimeField field);

BigInt gaussian_binomial(std::size_t n, std::size_t k, std::uint64_t q);

}  // namespace pseudofin
