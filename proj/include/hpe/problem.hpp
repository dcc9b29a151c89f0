#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "hpe/geometry.hpp"
#include "hpe/mesh.hpp"

namespace hpe {

/// Symmetric 2x2 matrix stored as {a11, a12, a22}.
struct Sym2 {
  double xx = 0.0, xy = 0.0, yy = 0.0;
};

/// Which norm of the error is reported as the energy norm.
enum class EnergyNormKind { Weighted, H1, W1pSemi };

/// Convex energy E(u) = ∫ mu(∇u) + g(u) - f u with Dirichlet data.
struct ProblemDef {
  std::string name;
  int dim = 2;

  std::function<double(const Point&)> mu;
  std::function<Point(const Point&)> dmu;
  std::function<Sym2(const Point&)> d2mu;
  std::function<double(double)> g;
  std::function<double(double)> dg;
  std::function<double(double)> d2g;
  std::function<double(const Point&)> f;
  std::function<double(const Point&)> dirichlet;

  std::function<double(const Point&)> exact;
  std::function<Point(const Point&)> exact_grad;
  /// E(u*) from an independent high-accuracy evaluation, if known.
  std::optional<double> exact_energy;

  /// Exponent of the L^p / W^{1,p} error norms.
  double norm_exponent = 2.0;
  EnergyNormKind energy_norm = EnergyNormKind::H1;
  /// Weight of |∇e|^2 in the weighted energy norm.
  double energy_norm_weight = 1.0;
  /// mu quadratic and g quadratic: Newton converges in one step.
  bool linear = false;
  /// Point singularity of f or u* sitting on a mesh vertex.
  std::optional<Point> singular_point;
  /// Added to the baseline quadrature degree 2p+2.
  int quadrature_bump = 0;

  bool has_exact() const { return static_cast<bool>(exact) && static_cast<bool>(exact_grad); }
};

class ProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One of "ex1", "ex2", "ex3". Throws ProblemError otherwise.
ProblemDef builtin_problem(const std::string& name);

/// Ex1 with a custom diffusion coefficient.
ProblemDef make_reaction_diffusion_1d(double epsilon);
/// Quasilinear problem on the L-shaped domain.
ProblemDef make_quasilinear_lshape();
/// p-Laplacian with u* = r^alpha on the unit square.
ProblemDef make_p_laplacian(double p, double alpha);

/// Initial mesh used for a built-in problem.
Mesh builtin_mesh(const std::string& name);

/// L-shape (-1,1)^2 minus [0,1)x(-1,0] split into 12 criss-cross triangles.
Mesh lshape_mesh();
/// Unit square split into 8 triangles along diagonals parallel to x = y.
Mesh unit_square_mesh();

}  // namespace hpe
