#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hpe/forms.hpp"
#include "hpe/patch.hpp"
#include "hpe/space.hpp"

namespace hpe {

/// A quadrature point on ∂κ carrying the averaged normal flux there.
struct FluxPoint {
  Point x{};
  double weight = 0.0;
  double normal_flux = 0.0;
};

/// Averaged normal flux {mu'(∇u)}·n_κ sampled on ∂κ.
struct FluxField {
  std::vector<FluxPoint> points;
};

/// Quadrature point on the boundary of an element with its outward normal.
struct BoundaryPoint {
  Point x{};
  double weight = 0.0;
  Point normal{};
};

/// Quadrature on ∂e. Each face is split at its midpoint so the points match
/// the faces of the red-refined element; `npts` Gauss points per half.
/// In 1D the two end points with unit weight.
std::vector<BoundaryPoint> element_boundary_points(const Mesh& mesh, int e, int npts);

/// ½(q⁺ + q⁻)·n, or q⁺·n when there is no outer trace.
double flux_average(const Point& q_plus, const std::optional<Point>& q_minus, const Point& normal);

/// Flux of the local reference solution on ∂κ, κ being root 0 of the
/// refined patch. The inner trace comes from κ's children, the outer one
/// from the neighbour pieces; faces without a neighbour are one-sided.
FluxField reference_flux(const Patch& refined, const FEFunction& u_ref, const ProblemDef& problem, int npts);

/// Averaged flux of a global function w across the faces of leaf e. The
/// field is single-valued per face, so modified energies telescope.
FluxField function_flux(const FEFunction& w, const ProblemDef& problem, int e, int npts);

/// mu'(∇u*)·n from the exact solution.
FluxField exact_flux(const Mesh& mesh, const ProblemDef& problem, int e, int npts);

/// Ẽ'_κ(v) = E_κ(v) − ∫_∂κ flux · v ds.
double local_modified_energy(double energy_on_kappa, const FluxField& flux,
                             const std::function<double(const Point&)>& trace);

/// Ẽ'_κ of a global function on leaf e.
double modified_energy(const Assembler& global, const FEFunction& u, int e, const FluxField& flux);

/// Ẽ'_κ of a patch function: energy over the pieces of root 0 and its trace
/// on ∂κ taken from inside κ.
double modified_energy(const Assembler& local, const Patch& patch, const FEFunction& v, const FluxField& flux);

/// Ẽ'_κ(u_hp) − Ẽ'_κ(u_candidate). May be negative.
double predicted_reduction(double modified_uhp, double modified_candidate);

/// Error measures of u_hp against the exact solution.
struct ErrorNorms {
  double energy = 0.0;          ///< E(u_hp)
  bool has_exact = false;
  double energy_gap = 0.0;      ///< |E(u*) − E(u_hp)|
  double err_energy_norm = 0.0;
  double err_Lp = 0.0;
  double err_W1p = 0.0;         ///< W^{1,p} seminorm
};

/// Norms by quadrature `extra` degrees above the assembly rule. E(u*) is the
/// problem's independent value when available, else the same quadrature.
ErrorNorms error_norms(const ProblemDef& problem, const FEFunction& u_hp, int extra = 4);

}  // namespace hpe
