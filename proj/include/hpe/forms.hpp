#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hpe/problem.hpp"
#include "hpe/space.hpp"

namespace hpe {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Quadrature degree for an element of degree p: 2p + 2 + problem bump,
/// one more when the element touches the problem's singular point.
int quadrature_degree(const ProblemDef& problem, int p, bool touches_singularity, int extra = 0);

/// Quadrature rule and signed, physical basis tables of one element.
struct ElementQuadrature {
  int element = -1;
  std::vector<int> dofs;
  Eigen::VectorXd weights;  ///< physical weights
  Eigen::MatrixXd N, Gx, Gy;  ///< rows = points, columns = local modes (signs applied)
  std::vector<Point> points;
  Eigen::VectorXd load;  ///< f at the points
};

/// Builds the tables for leaf e with `extra` added to the quadrature degree.
ElementQuadrature element_quadrature(const Space& space, const ProblemDef& problem, int e, int extra = 0);

/// Energy, residual and Jacobian of the Galerkin system over a space.
///
/// Element tables are built once in the constructor and reused, which pays
/// off for repeated Newton evaluations on the same space.
class Assembler {
 public:
  Assembler(const Space& space, const ProblemDef& problem, int extra_degree = 0);

  const Space& space() const { return *space_; }
  const ProblemDef& problem() const { return *problem_; }
  const ElementQuadrature& element(int e) const { return quad_[space_->topology().leaf_index(e)]; }

  double energy(const Eigen::VectorXd& u) const;
  double element_energy(const Eigen::VectorXd& u, int e) const;
  /// a(u, phi_i) - l(phi_i); fixed rows zeroed when constraints are given.
  Eigen::VectorXd residual(const Eigen::VectorXd& u, const Constraints* constraints = nullptr) const;
  /// Hessian of the energy; fixed rows and columns replaced by identity.
  SparseMatrix jacobian(const Eigen::VectorXd& u, const Constraints* constraints = nullptr) const;
  /// Mass matrix (used for projections).
  SparseMatrix mass(const Constraints* constraints = nullptr) const;

 private:
  const Space* space_;
  const ProblemDef* problem_;
  std::vector<ElementQuadrature> quad_;
};

double energy(const Space& space, const ProblemDef& problem, const Eigen::VectorXd& u);
double element_energy(const Space& space, const ProblemDef& problem, const Eigen::VectorXd& u, int e);
Eigen::VectorXd residual(const Space& space, const ProblemDef& problem, const Eigen::VectorXd& u,
                         const Constraints& constraints);
SparseMatrix jacobian(const Space& space, const ProblemDef& problem, const Eigen::VectorXd& u,
                      const Constraints* constraints = nullptr);

}  // namespace hpe
