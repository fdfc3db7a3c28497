#pragma once

#include "dualball/geometry.hpp"
#include "dualball/reconstruct.hpp"

#include <string>
#include <vector>

namespace dualball {

/// Boundary of a polytope in R^2 as CSV: header "x,y", then the vertices
/// counterclockwise from the lexicographically smallest one, with the first
/// vertex repeated at the end.  Values are exact ("p/q" or integers).
/// Throws DimensionError unless dim() == 2.
std::string polygon_csv(const Polytope& p);

/// Boundary mesh of a full-dimensional polytope in R^3 as Wavefront OBJ: one
/// "v" record per vertex and one polygonal "f" record per facet, wound
/// counterclockwise seen from outside.  Non-integral coordinates are written
/// as decimals, the only inexact output of the library.
/// Throws DimensionError unless dim() == 3, std::domain_error if not solid.
std::string mesh_obj(const Polytope& p);

/// Probe-trace overlay: header "n,lambda,value,gap", one row per step.
std::string trace_csv(const std::vector<TraceStep>& steps);

}  // namespace dualball
