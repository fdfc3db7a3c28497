#pragma once

#include "dualball/exact_math.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dualball {

/// Raised by polar() when the input is not full-dimensional with the origin
/// strictly inside.
class PolarUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// <normal, y> <= offset.  The normal is primitive and lies in the direction
/// space of the polytope's affine span, so it is canonical.
struct Facet {
  LatticeVector normal;
  Rational offset;

  friend bool operator==(const Facet&, const Facet&) = default;
};

/// <normal, y> = value; one of the equations cutting out the affine span.
struct AffineEquation {
  LatticeVector normal;
  Rational value;

  friend bool operator==(const AffineEquation&, const AffineEquation&) = default;
};

/// A convex polytope held in both representations, in canonical form:
///  - vertices are exactly the extreme points, sorted lexicographically;
///  - facets have primitive normals inside the span's direction space, sorted
///    by (normal, offset);
///  - span() is the reduced-echelon integer basis of the direction space.
/// Instances are only produced by convex_hull(), which enforces all of this.
class Polytope {
 public:
  std::size_t dim() const { return dim_; }
  std::size_t affine_dim() const { return span_.size(); }
  bool full_dimensional() const { return affine_dim() == dim_; }

  const std::vector<RatVector>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<LatticeVector>& span() const { return span_; }
  const std::vector<AffineEquation>& equations() const { return equations_; }

  bool has_integer_vertices() const;

  /// Exact membership test.
  bool contains(const RatVector& y) const;

 private:
  friend Polytope convex_hull(const std::vector<RatVector>& points);

  std::size_t dim_ = 0;
  std::vector<RatVector> vertices_;
  std::vector<Facet> facets_;
  std::vector<LatticeVector> span_;
  std::vector<AffineEquation> equations_;
};

/// Canonical hull of a nonempty point list.  Detects the affine dimension and
/// computes facets within the span.  Throws std::invalid_argument on an empty
/// list and DimensionError on ragged input.
Polytope convex_hull(const std::vector<RatVector>& points);
Polytope convex_hull(const std::vector<LatticeVector>& points);

struct SupportResult {
  Rational value;
  std::vector<std::size_t> argmax_vertices;  // indices into vertices(), ascending
};

SupportResult support(const Polytope& p, const RatVector& x);
SupportResult support(const Polytope& p, const LatticeVector& x);

/// {x : <x, y> <= 1 for all y in P}.  Throws PolarUndefined unless P is
/// full-dimensional with 0 in its interior.
Polytope polar(const Polytope& p);

Polytope minkowski_sum(const Polytope& p, const Polytope& q);

/// Integer direction u with <u, v> > <u, w> for every other vertex w: the
/// primitive sum of the normals of the facets through v.  Throws
/// std::domain_error for a single point ("nothing to separate") and
/// std::out_of_range for a bad index.
LatticeVector exposure_witness(const Polytope& p, std::size_t vertex);

/// Indices of exposed vertices (all of them, for a polytope); a single point
/// counts as exposed.
std::vector<std::size_t> exposed_points(const Polytope& p);

/// Canonical equality: same ambient dimension and identical vertex lists.
bool equal(const Polytope& p, const Polytope& q);

/// Verifies the V/H invariants exactly; returns an empty string when they hold
/// and a description of the first violation otherwise.
std::string check_consistency(const Polytope& p);

}  // namespace dualball
