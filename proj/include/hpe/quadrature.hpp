#pragma once

#include <vector>

#include "hpe/geometry.hpp"

namespace hpe {

/// Points and weights on a reference simplex.
///
/// Intervals live on [0,1]; triangles on the unit triangle with vertices
/// (0,0), (1,0), (0,1). `degree` is the total polynomial degree integrated
/// exactly.
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Gauss-Legendre rule with `n` points on [0,1].
const QuadratureRule& gauss_legendre(int n);

/// Exact for polynomials of degree <= `degree` on [0,1].
const QuadratureRule& interval_rule(int degree);

/// Collapsed (Duffy) Gauss rule on the unit triangle, exact up to `degree`.
///
/// The collapsed edge of the square is mapped onto reference vertex
/// `collapse_vertex`, which clusters points there and cancels a 1/r
/// singularity located at that vertex. No point lies on the boundary.
const QuadratureRule& triangle_rule(int degree, int collapse_vertex = 0);

}  // namespace hpe
