#pragma once

// Exact scalar and vector kernel. Every quantity downstream of this header is
// an arbitrary-precision integer or rational; nothing is ever rounded.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dualball {

using Integer = mpz_class;
using Rational = mpq_class;

/// A point of Q^d.
using RatVector = std::vector<Rational>;
/// A point of Z^d.
using LatticeVector = std::vector<Integer>;

/// Raised when operands disagree on the ambient dimension.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Row-major integer matrix, m rows of length d.
class IntMatrix {
 public:
  IntMatrix() = default;
  /// Throws DimensionError when rows are ragged.
  explicit IntMatrix(std::vector<LatticeVector> rows);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  const LatticeVector& row(std::size_t i) const { return rows_.at(i); }
  const std::vector<LatticeVector>& data() const { return rows_; }

  RatVector apply(const RatVector& x) const;
  LatticeVector apply(const LatticeVector& x) const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::vector<LatticeVector> rows_;
  std::size_t cols_ = 0;
};

/// Builds a rational from numerator/denominator in lowest terms.
/// Throws std::domain_error on a zero denominator.
Rational make_rational(const Integer& num, const Integer& den);

bool is_integer(const Rational& q);

/// Exact conversion; throws std::domain_error when q is not integral.
Integer to_integer(const Rational& q);

/// "p/q", or plain "p" when integral.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Parses "p", "-p" or "p/q".  Throws std::invalid_argument on malformed text.
Rational parse_rational(const std::string& text);

RatVector to_rational(const LatticeVector& v);
bool is_lattice(const RatVector& v);
/// Throws std::domain_error when some coordinate is not integral.
LatticeVector to_lattice(const RatVector& v);

Rational dot(const RatVector& x, const RatVector& y);
Rational dot(const LatticeVector& x, const RatVector& y);
Integer dot(const LatticeVector& x, const LatticeVector& y);

Rational squared_norm(const RatVector& x);

RatVector add(const RatVector& x, const RatVector& y);
RatVector sub(const RatVector& x, const RatVector& y);
RatVector scale(const Rational& t, const RatVector& x);
LatticeVector add(const LatticeVector& x, const LatticeVector& y);
LatticeVector sub(const LatticeVector& x, const LatticeVector& y);
LatticeVector scale(const Integer& t, const LatticeVector& x);
LatticeVector negate(const LatticeVector& x);
RatVector negate(const RatVector& x);

bool is_zero(const RatVector& x);
bool is_zero(const LatticeVector& x);

Integer abs_max(const LatticeVector& x);

/// j-th standard basis vector of Z^d.
LatticeVector unit_vector(std::size_t d, std::size_t j);

/// Nearest integer; exact halves go toward +infinity.
Integer round_half_up(const Rational& q);

/// Componentwise nearest lattice point, halves rounded toward +infinity.
LatticeVector nearest_lattice(const RatVector& p);

/// Divides out the gcd of the entries.  Throws std::invalid_argument on zero.
LatticeVector primitive(const LatticeVector& v);

/// Scales a nonzero rational vector by a positive factor to a primitive
/// integer vector.  Throws std::invalid_argument on zero.
LatticeVector primitive(const RatVector& v);

/// Lexicographic comparison on equal-length vectors.
bool lex_less(const RatVector& a, const RatVector& b);
bool lex_less(const LatticeVector& a, const LatticeVector& b);

/// Exact Gaussian elimination helpers on rational row sets.
struct RowEchelon {
  std::vector<RatVector> rows;       // reduced rows, one per pivot
  std::vector<std::size_t> pivots;   // pivot column per row
  std::vector<std::size_t> sources;  // index of the input row that created each pivot
};

/// Reduced row echelon form of the given rows (each of length cols).
RowEchelon row_reduce(const std::vector<RatVector>& rows, std::size_t cols);

std::size_t rank(const std::vector<RatVector>& rows, std::size_t cols);

/// Integer basis of {x : row . x = 0 for every row}.  Each basis vector is
/// primitive; the basis is the canonical one read off the reduced echelon form.
std::vector<LatticeVector> null_space(const std::vector<RatVector>& rows, std::size_t cols);

/// Deterministic 64-bit generator (splitmix64) used for every seeded draw so
/// that outputs are reproducible across standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform-ish integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t state_;
};

/// Mixes an integer into a running 64-bit hash.
std::uint64_t hash_mix(std::uint64_t h, const Integer& z);
std::uint64_t hash_mix(std::uint64_t h, std::uint64_t v);

}  // namespace dualball
