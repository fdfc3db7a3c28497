#pragma once

#include "dualball/exact_math.hpp"

#include <cstddef>
#include <functional>

namespace dualball {

/// Visits every lattice point x of Z^d with |x|_inf <= radius, shell by shell
/// (|x|_inf = 0, 1, 2, ...).  Inside a shell points come in lexicographic
/// order with coordinates ranked 0, 1, -1, 2, -2, ...  The visitor returns
/// false to stop early.  Returns the number of points visited.
std::size_t for_each_lattice_point(std::size_t dim, std::size_t radius,
                                   const std::function<bool(const LatticeVector&)>& visit);

}  // namespace dualball
