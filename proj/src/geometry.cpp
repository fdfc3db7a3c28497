#include "dualball/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>
#include <string>

namespace dualball {

namespace {

// Fixed-capacity bitset over input point indices, used for the zero sets of
// the double-description rays.
class IndexSet {
 public:
  explicit IndexSet(std::size_t n) : words_((n + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool subset_of(const IndexSet& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      if ((words_[k] & ~o.words_[k]) != 0) return false;
    }
    return true;
  }

  friend IndexSet operator&(const IndexSet& a, const IndexSet& b) {
    IndexSet r = a;
    for (std::size_t k = 0; k < r.words_.size(); ++k) r.words_[k] &= b.words_[k];
    return r;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  LatticeVector w;  // (c, c0): facet c . y <= -c0
  IndexSet zeros;
};

// Clears denominators by a positive factor.
LatticeVector clear_denominators(const RatVector& v) {
  Integer l = 1;
  for (const auto& q : v) l = lcm(l, q.get_den());
  LatticeVector out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(q.get_num() * (l / q.get_den()));
  return out;
}

// Solves A w = b for square nonsingular A.
RatVector solve(const std::vector<RatVector>& a, const RatVector& b) {
  const std::size_t n = a.size();
  std::vector<RatVector> aug;
  aug.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RatVector row = a[i];
    row.push_back(b[i]);
    aug.push_back(std::move(row));
  }
  RowEchelon e = row_reduce(aug, n + 1);
  if (e.pivots.size() != n || e.pivots.back() != n - 1) {
    throw std::logic_error("convex_hull: initial simplex is singular");
  }
  RatVector w(n);
  for (std::size_t i = 0; i < n; ++i) w[e.pivots[i]] = e.rows[i][n];
  return w;
}

// Extreme rays of {w : g_i . w <= 0 for all i}, the cone of valid
// inequalities of a full-dimensional point set in Q^k (g_i homogenized).
// Points are inserted one at a time; new rays come from adjacent pairs of
// rays on opposite sides of the inserted constraint (combinatorial test).
std::vector<Ray> double_description(const std::vector<LatticeVector>& g,
                                    const std::vector<std::size_t>& simplex) {
  const std::size_t n = g.size();
  const std::size_t cone_dim = simplex.size();

  std::vector<RatVector> a0;
  for (auto i : simplex) a0.push_back(to_rational(g[i]));
  std::vector<Ray> rays;
  for (std::size_t j = 0; j < cone_dim; ++j) {
    RatVector rhs(cone_dim, Rational(0));
    rhs[j] = -1;
    Ray r{primitive(solve(a0, rhs)), IndexSet(n)};
    for (std::size_t i = 0; i < cone_dim; ++i) {
      if (i != j) r.zeros.set(simplex[i]);
    }
    rays.push_back(std::move(r));
  }

  std::vector<bool> in_simplex(n, false);
  for (auto i : simplex) in_simplex[i] = true;

  for (std::size_t i = 0; i < n; ++i) {
    if (in_simplex[i]) continue;
    std::vector<Integer> s(rays.size());
    std::vector<std::size_t> pos, neg, zero;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      s[r] = dot(g[i], rays[r].w);
      if (s[r] > 0) {
        pos.push_back(r);
      } else if (s[r] < 0) {
        neg.push_back(r);
      } else {
        zero.push_back(r);
      }
    }
    if (pos.empty()) {
      for (auto r : zero) rays[r].zeros.set(i);
      continue;
    }

    std::vector<Ray> next;
    for (auto p : pos) {
      for (auto q : neg) {
        IndexSet common = rays[p].zeros & rays[q].zeros;
        if (common.count() + 2 < cone_dim) continue;
        bool adjacent = true;
        for (std::size_t t = 0; t < rays.size() && adjacent; ++t) {
          if (t != p && t != q && common.subset_of(rays[t].zeros)) adjacent = false;
        }
        if (!adjacent) continue;
        LatticeVector w = add(scale(s[p], rays[q].w), scale(Integer(-s[q]), rays[p].w));
        Ray nr{primitive(w), common};
        nr.zeros.set(i);
        next.push_back(std::move(nr));
      }
    }
    for (auto r : zero) {
      rays[r].zeros.set(i);
      next.push_back(std::move(rays[r]));
    }
    for (auto r : neg) next.push_back(std::move(rays[r]));
    rays = std::move(next);
  }
  return rays;
}

}  // namespace

bool Polytope::has_integer_vertices() const {
  return std::all_of(vertices_.begin(), vertices_.end(), [](const RatVector& v) { return is_lattice(v); });
}

bool Polytope::contains(const RatVector& y) const {
  if (y.size() != dim_) throw DimensionError("contains: dimension mismatch");
  for (const auto& e : equations_) {
    if (dot(e.normal, y) != e.value) return false;
  }
  for (const auto& f : facets_) {
    if (dot(f.normal, y) > f.offset) return false;
  }
  return true;
}

Polytope convex_hull(const std::vector<RatVector>& points) {
  if (points.empty()) throw std::invalid_argument("convex_hull: empty point list");
  const std::size_t d = points.front().size();
  for (const auto& p : points) {
    if (p.size() != d) throw DimensionError("convex_hull: points of unequal dimension");
  }
  std::vector<RatVector> pts = points;
  std::sort(pts.begin(), pts.end(), [](const RatVector& a, const RatVector& b) { return lex_less(a, b); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  Polytope out;
  out.dim_ = d;

  std::vector<RatVector> diffs;
  diffs.reserve(pts.size() - 1);
  for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(pts[i], pts[0]));
  RowEchelon span = row_reduce(diffs, d);
  const std::size_t k = span.pivots.size();
  for (const auto& row : span.rows) out.span_.push_back(primitive(row));
  {
    std::vector<RatVector> basis_rows;
    for (const auto& b : out.span_) basis_rows.push_back(to_rational(b));
    for (auto& w : null_space(basis_rows, d)) {
      Rational value = dot(w, pts[0]);
      out.equations_.push_back({std::move(w), value});
    }
  }

  if (k == 0) {
    out.vertices_ = {pts[0]};
    return out;
  }

  // Coordinates in the span: y_i = B p_i, injective on the affine hull.
  std::vector<LatticeVector> homog;
  homog.reserve(pts.size());
  for (const auto& p : pts) {
    RatVector h;
    h.reserve(k + 1);
    for (const auto& b : out.span_) h.push_back(dot(b, p));
    h.emplace_back(1);
    homog.push_back(clear_denominators(h));
  }
  std::vector<std::size_t> simplex{0};
  for (auto src : span.sources) simplex.push_back(src + 1);

  std::vector<Ray> rays = double_description(homog, simplex);

  struct Raw {
    Facet facet;
    LatticeVector local;
    const IndexSet* zeros;
  };
  std::vector<Raw> raw;
  for (const auto& r : rays) {
    LatticeVector normal(d, Integer(0));
    for (std::size_t j = 0; j < k; ++j) normal = add(normal, scale(r.w[j], out.span_[j]));
    Integer g = 0;
    for (const auto& z : normal) g = gcd(g, z);
    Rational offset = make_rational(-r.w[k], g);
    for (auto& z : normal) z /= g;
    raw.push_back({{std::move(normal), offset}, LatticeVector(r.w.begin(), r.w.begin() + static_cast<std::ptrdiff_t>(k)), &r.zeros});
  }

  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<RatVector> tight;
    for (const auto& f : raw) {
      if (f.zeros->test(i)) tight.push_back(to_rational(f.local));
    }
    if (tight.size() >= k && rank(tight, k) == k) out.vertices_.push_back(pts[i]);
  }
  for (auto& f : raw) out.facets_.push_back(std::move(f.facet));
  std::sort(out.facets_.begin(), out.facets_.end(), [](const Facet& a, const Facet& b) {
    if (a.normal != b.normal) return lex_less(a.normal, b.normal);
    return a.offset < b.offset;
  });
  return out;
}

Polytope convex_hull(const std::vector<LatticeVector>& points) {
  std::vector<RatVector> pts;
  pts.reserve(points.size());
  for (const auto& p : points) pts.push_back(to_rational(p));
  return convex_hull(pts);
}

SupportResult support(const Polytope& p, const RatVector& x) {
  if (x.size() != p.dim()) throw DimensionError("support: dimension mismatch");
  SupportResult res;
  const auto& vs = p.vertices();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    Rational v = dot(x, vs[i]);
    if (res.argmax_vertices.empty() || v > res.value) {
      res.value = v;
      res.argmax_vertices = {i};
    } else if (v == res.value) {
      res.argmax_vertices.push_back(i);
    }
  }
  return res;
}

SupportResult support(const Polytope& p, const LatticeVector& x) { return support(p, to_rational(x)); }

Polytope polar(const Polytope& p) {
  if (!p.full_dimensional()) {
    throw PolarUndefined("polar undefined: polytope is not full-dimensional");
  }
  std::vector<RatVector> pts;
  for (const auto& f : p.facets()) {
    if (f.offset <= 0) throw PolarUndefined("polar undefined: origin is not an interior point");
    pts.push_back(scale(1 / f.offset, to_rational(f.normal)));
  }
  return convex_hull(pts);
}

Polytope minkowski_sum(const Polytope& p, const Polytope& q) {
  if (p.dim() != q.dim()) throw DimensionError("minkowski_sum: dimension mismatch");
  std::vector<RatVector> sums;
  sums.reserve(p.vertices().size() * q.vertices().size());
  for (const auto& a : p.vertices()) {
    for (const auto& b : q.vertices()) sums.push_back(add(a, b));
  }
  return convex_hull(sums);
}

LatticeVector exposure_witness(const Polytope& p, std::size_t vertex) {
  const auto& vs = p.vertices();
  if (vertex >= vs.size()) throw std::out_of_range("exposure_witness: vertex index out of range");
  if (vs.size() == 1) throw std::domain_error("nothing to separate: polytope is a single point");
  LatticeVector u(p.dim(), Integer(0));
  for (const auto& f : p.facets()) {
    if (dot(f.normal, vs[vertex]) == f.offset) u = add(u, f.normal);
  }
  return primitive(u);
}

std::vector<std::size_t> exposed_points(const Polytope& p) {
  const auto& vs = p.vertices();
  if (vs.size() == 1) return {0};
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    LatticeVector u = exposure_witness(p, i);
    Rational top = dot(u, vs[i]);
    bool strict = true;
    for (std::size_t j = 0; j < vs.size() && strict; ++j) {
      if (j != i && dot(u, vs[j]) >= top) strict = false;
    }
    if (strict) out.push_back(i);
  }
  return out;
}

bool equal(const Polytope& p, const Polytope& q) {
  return p.dim() == q.dim() && p.vertices() == q.vertices();
}

std::string check_consistency(const Polytope& p) {
  const std::size_t k = p.affine_dim();
  for (std::size_t i = 0; i < p.vertices().size(); ++i) {
    const auto& v = p.vertices()[i];
    if (!p.contains(v)) return "vertex " + std::to_string(i) + " violates a constraint";
    std::size_t tight = 0;
    for (const auto& f : p.facets()) tight += dot(f.normal, v) == f.offset ? 1 : 0;
    if (tight < k) return "vertex " + std::to_string(i) + " lies on fewer than affine_dim facets";
  }
  for (std::size_t j = 0; j < p.facets().size(); ++j) {
    const auto& f = p.facets()[j];
    std::size_t tight = 0;
    for (const auto& v : p.vertices()) tight += dot(f.normal, v) == f.offset ? 1 : 0;
    if (tight < k) return "facet " + std::to_string(j) + " is tight at fewer than affine_dim vertices";
  }
  for (std::size_t i = 1; i < p.vertices().size(); ++i) {
    if (!lex_less(p.vertices()[i - 1], p.vertices()[i])) return "vertices not in canonical order";
  }
  return {};
}

}  // namespace dualball
