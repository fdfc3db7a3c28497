#include "dualball/exact_math.hpp"

#include <algorithm>
#include <cctype>

namespace dualball {

namespace {

template <typename V>
void require_same_length(const V& x, const V& y, const char* what) {
  if (x.size() != y.size()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()) + ")");
  }
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

IntMatrix::IntMatrix(std::vector<LatticeVector> rows) : rows_(std::move(rows)) {
  cols_ = rows_.empty() ? 0 : rows_.front().size();
  for (const auto& r : rows_) {
    if (r.size() != cols_) throw DimensionError("matrix rows have unequal length");
  }
}

RatVector IntMatrix::apply(const RatVector& x) const {
  if (x.size() != cols_) throw DimensionError("matrix/vector dimension mismatch");
  RatVector out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(dot(r, x));
  return out;
}

LatticeVector IntMatrix::apply(const LatticeVector& x) const {
  if (x.size() != cols_) throw DimensionError("matrix/vector dimension mismatch");
  LatticeVector out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(dot(r, x));
  return out;
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

Integer to_integer(const Rational& q) {
  if (!is_integer(q)) throw std::domain_error("value " + to_string(q) + " is not an integer");
  return q.get_num();
}

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_string(const Rational& q) {
  if (is_integer(q)) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
  auto parse_int = [&](std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.size() == start ||
        !std::all_of(s.begin() + static_cast<std::ptrdiff_t>(start), s.end(),
                     [](unsigned char c) { return std::isdigit(c); })) {
      throw std::invalid_argument("malformed number '" + text + "'");
    }
    if (s[0] == '+') s.erase(0, 1);
    return Integer(s, 10);
  };
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(text));
  Integer den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  return make_rational(parse_int(text.substr(0, slash)), den);
}

RatVector to_rational(const LatticeVector& v) {
  RatVector out;
  out.reserve(v.size());
  for (const auto& z : v) out.emplace_back(z);
  return out;
}

bool is_lattice(const RatVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return is_integer(q); });
}

LatticeVector to_lattice(const RatVector& v) {
  LatticeVector out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(to_integer(q));
  return out;
}

Rational dot(const RatVector& x, const RatVector& y) {
  require_same_length(x, y, "dot");
  Rational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

Rational dot(const LatticeVector& x, const RatVector& y) {
  if (x.size() != y.size()) throw DimensionError("dot: dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += Rational(x[i]) * y[i];
  return s;
}

Integer dot(const LatticeVector& x, const LatticeVector& y) {
  require_same_length(x, y, "dot");
  Integer s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

Rational squared_norm(const RatVector& x) { return dot(x, x); }

RatVector add(const RatVector& x, const RatVector& y) {
  require_same_length(x, y, "add");
  RatVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
  return out;
}

RatVector sub(const RatVector& x, const RatVector& y) {
  require_same_length(x, y, "sub");
  RatVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return out;
}

RatVector scale(const Rational& t, const RatVector& x) {
  RatVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = t * x[i];
  return out;
}

LatticeVector add(const LatticeVector& x, const LatticeVector& y) {
  require_same_length(x, y, "add");
  LatticeVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
  return out;
}

LatticeVector sub(const LatticeVector& x, const LatticeVector& y) {
  require_same_length(x, y, "sub");
  LatticeVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return out;
}

LatticeVector scale(const Integer& t, const LatticeVector& x) {
  LatticeVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = t * x[i];
  return out;
}

LatticeVector negate(const LatticeVector& x) { return scale(Integer(-1), x); }

RatVector negate(const RatVector& x) { return scale(Rational(-1), x); }

bool is_zero(const RatVector& x) {
  return std::all_of(x.begin(), x.end(), [](const Rational& q) { return q == 0; });
}

bool is_zero(const LatticeVector& x) {
  return std::all_of(x.begin(), x.end(), [](const Integer& z) { return z == 0; });
}

Integer abs_max(const LatticeVector& x) {
  Integer m = 0;
  for (const auto& z : x) {
    Integer a = abs(z);
    if (a > m) m = a;
  }
  return m;
}

LatticeVector unit_vector(std::size_t d, std::size_t j) {
  LatticeVector e(d, Integer(0));
  e.at(j) = 1;
  return e;
}

Integer round_half_up(const Rational& q) {
  // floor(q + 1/2) = floor((2p + q) / 2q)
  return floor_div(2 * q.get_num() + q.get_den(), 2 * q.get_den());
}

LatticeVector nearest_lattice(const RatVector& p) {
  LatticeVector out;
  out.reserve(p.size());
  for (const auto& q : p) out.push_back(round_half_up(q));
  return out;
}

LatticeVector primitive(const LatticeVector& v) {
  Integer g = 0;
  for (const auto& z : v) g = gcd(g, z);
  if (g == 0) throw std::invalid_argument("primitive: zero vector has no direction");
  LatticeVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
  return out;
}

LatticeVector primitive(const RatVector& v) {
  Integer l = 1;
  for (const auto& q : v) l = lcm(l, q.get_den());
  LatticeVector scaled;
  scaled.reserve(v.size());
  for (const auto& q : v) scaled.push_back(q.get_num() * (l / q.get_den()));
  return primitive(scaled);
}

bool lex_less(const RatVector& a, const RatVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool lex_less(const LatticeVector& a, const LatticeVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

RowEchelon row_reduce(const std::vector<RatVector>& rows, std::size_t cols) {
  RowEchelon out;
  std::vector<RatVector> work = rows;
  std::vector<std::size_t> origin(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DimensionError("row_reduce: ragged rows");
    origin[i] = i;
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < work.size(); ++c) {
    std::size_t p = r;
    while (p < work.size() && work[p][c] == 0) ++p;
    if (p == work.size()) continue;
    std::swap(work[p], work[r]);
    std::swap(origin[p], origin[r]);
    Rational inv = 1 / work[r][c];
    for (auto& q : work[r]) q *= inv;
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (i == r || work[i][c] == 0) continue;
      Rational f = work[i][c];
      for (std::size_t k = c; k < cols; ++k) work[i][k] -= f * work[r][k];
    }
    out.pivots.push_back(c);
    out.sources.push_back(origin[r]);
    ++r;
  }
  work.resize(r);
  out.rows = std::move(work);
  return out;
}

std::size_t rank(const std::vector<RatVector>& rows, std::size_t cols) {
  return row_reduce(rows, cols).pivots.size();
}

std::vector<LatticeVector> null_space(const std::vector<RatVector>& rows, std::size_t cols) {
  RowEchelon e = row_reduce(rows, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<LatticeVector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RatVector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.rows[i][free];
    basis.push_back(primitive(v));
  }
  return basis;
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::int64_t SplitMix64::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("uniform: empty range");
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next());
  return lo + static_cast<std::int64_t>(next() % span);
}

std::uint64_t hash_mix(std::uint64_t h, std::uint64_t v) {
  SplitMix64 g(h ^ (v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
  return g.next();
}

std::uint64_t hash_mix(std::uint64_t h, const Integer& z) {
  h = hash_mix(h, static_cast<std::uint64_t>(sgn(z) + 1));
  Integer a = abs(z);
  // Fold the magnitude in 32-bit limbs so the hash does not depend on limb width.
  const Integer base = Integer(1) << 32;
  do {
    Integer r = a % base;
    h = hash_mix(h, static_cast<std::uint64_t>(r.get_ui()));
    a /= base;
  } while (a != 0);
  return h;
}

}  // namespace dualball
