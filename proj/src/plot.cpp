#include "dualball/plot.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace dualball {

namespace {

RatVector cross(const RatVector& a, const RatVector& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

RatVector centroid(const std::vector<RatVector>& pts) {
  RatVector c(pts.front().size(), Rational(0));
  for (const auto& p : pts) c = add(c, p);
  return scale(Rational(1, static_cast<unsigned long>(pts.size())), c);
}

// Sorts points counterclockwise around `center` as seen against `up` (in the
// plane case `up` is unused and the 2D cross product is taken), starting from
// `points.front()`.
template <class Cross>
void sort_ccw(std::vector<std::size_t>& idx, const std::vector<RatVector>& pts, const RatVector& center,
              Cross signed_area) {
  const RatVector ref = sub(pts[idx.front()], center);
  auto half = [&](const RatVector& u) {
    Rational s = signed_area(ref, u);
    if (s > 0) return 0;
    if (s == 0 && dot(ref, u) > 0) return 0;
    return 1;
  };
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    RatVector ua = sub(pts[a], center), ub = sub(pts[b], center);
    int ha = half(ua), hb = half(ub);
    if (ha != hb) return ha < hb;
    return signed_area(ua, ub) > 0;
  });
}

std::string obj_number(const Rational& q) {
  if (is_integer(q)) return to_string(q);
  std::ostringstream ss;
  ss << std::setprecision(17) << q.get_d();
  return ss.str();
}

}  // namespace

std::string polygon_csv(const Polytope& p) {
  if (p.dim() != 2) throw DimensionError("polygon CSV needs a polytope in R^2");
  const auto& vs = p.vertices();
  std::vector<std::size_t> order(vs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (p.affine_dim() == 2) {
    sort_ccw(order, vs, centroid(vs), [](const RatVector& a, const RatVector& b) -> Rational {
      return a[0] * b[1] - a[1] * b[0];
    });
  }
  std::ostringstream out;
  out << "x,y\n";
  for (std::size_t i : order) out << to_string(vs[i][0]) << "," << to_string(vs[i][1]) << "\n";
  out << to_string(vs[order.front()][0]) << "," << to_string(vs[order.front()][1]) << "\n";
  return out.str();
}

std::string mesh_obj(const Polytope& p) {
  if (p.dim() != 3) throw DimensionError("OBJ mesh needs a polytope in R^3");
  if (!p.full_dimensional()) throw std::domain_error("OBJ mesh needs a full-dimensional polytope");
  const auto& vs = p.vertices();
  std::ostringstream out;
  for (const auto& v : vs) out << "v " << obj_number(v[0]) << " " << obj_number(v[1]) << " " << obj_number(v[2]) << "\n";
  for (const auto& f : p.facets()) {
    std::vector<std::size_t> face;
    std::vector<RatVector> face_pts;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (dot(f.normal, vs[i]) == f.offset) {
        face.push_back(i);
        face_pts.push_back(vs[i]);
      }
    }
    const RatVector n = to_rational(f.normal);
    sort_ccw(face, vs, centroid(face_pts), [&](const RatVector& a, const RatVector& b) -> Rational {
      return dot(n, cross(a, b));
    });
    out << "f";
    for (std::size_t i : face) out << " " << i + 1;
    out << "\n";
  }
  return out.str();
}

std::string trace_csv(const std::vector<TraceStep>& steps) {
  std::ostringstream out;
  out << "n,lambda,value,gap\n";
  for (const auto& s : steps) {
    out << s.probe.n << "," << to_string(*s.probe.lambda_n) << "," << to_string(s.probe.value) << ","
        << to_string(s.gap) << "\n";
  }
  return out.str();
}

}  // namespace dualball
