#pragma once

#include <array>
#include <span>

#include <Eigen/Dense>

#include "hpe/geometry.hpp"
#include "hpe/quadrature.hpp"

namespace hpe {

/// Data that fixes an element's hierarchical basis: element degree and, for
/// triangles, the degree carried by each edge (minimum rule).
///
/// Local ordering: vertex modes, then edge modes 2..q[e] for e = 0,1,2 (edge e
/// is opposite vertex e), then interior modes. Edge modes use the canonical
/// orientation from local vertex (e+1)%3 to (e+2)%3; a reversed edge flips
/// the sign of its odd modes.
struct ElementShape {
  int dim = 2;
  int p = 1;
  std::array<int, 3> q{1, 1, 1};

  auto operator<=>(const ElementShape&) const = default;
};

int num_vertex_modes(const ElementShape& s);
int num_edge_modes(const ElementShape& s, int edge);
int num_interior_modes(const ElementShape& s);
int num_local_modes(const ElementShape& s);

/// Legendre polynomials P_0..P_n at x and their derivatives.
void legendre(int n, double x, std::span<double> value, std::span<double> deriv);

/// Values and reference gradients of all local modes at a reference point.
void eval_basis(const ElementShape& s, const Point& ref, std::span<double> value, std::span<double> dxi,
                std::span<double> deta);

/// Local modes tabulated at the points of a quadrature rule (rows = points).
struct Tabulation {
  Eigen::MatrixXd value;
  Eigen::MatrixXd dxi;
  Eigen::MatrixXd deta;
};

/// Cached per thread; the reference stays valid for the thread's lifetime.
const Tabulation& tabulate(const ElementShape& s, const QuadratureRule& rule);

}  // namespace hpe
