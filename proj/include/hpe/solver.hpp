#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "hpe/forms.hpp"
#include "hpe/patch.hpp"

namespace hpe {

enum class LinearSolverKind { Direct, ConjugateGradient };

struct SolverConfig {
  double newton_tol = 1e-10;  ///< on the residual infinity norm
  int max_newton_iters = 30;
  double backtrack = 0.5;
  double armijo = 1e-4;
  LinearSolverKind linear = LinearSolverKind::Direct;
  double cg_tol = 1e-12;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
  std::vector<double> residual_history;
  std::vector<double> energy_history;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Damped Newton with an Armijo backtracking search on the energy.
/// Fixed DoFs keep the values of `constraints`.
Eigen::VectorXd newton_solve(const Assembler& assembler, const Constraints& constraints, Eigen::VectorXd initial,
                             const SolverConfig& config, SolveReport* report = nullptr);

/// Solves J x = b with the configured linear solver. Throws SolverError if
/// the matrix is singular.
Eigen::VectorXd linear_solve(const SparseMatrix& J, const Eigen::VectorXd& b, const SolverConfig& config);

/// Problem Dirichlet data on every domain-boundary face.
Constraints dirichlet_constraints(const Space& space, const ProblemDef& problem);

/// Same data and load, quadratic energy 1/2|∇u|^2 + 1/2 g''(0) u^2. Used as
/// a warm start for nonlinear problems.
ProblemDef quadratic_surrogate(const ProblemDef& problem);

/// Global Galerkin solution. Nonlinear problems start from the quadratic
/// surrogate's solution unless `initial` is given.
FEFunction solve_global(const Space& space, const ProblemDef& problem, const SolverConfig& config,
                        SolveReport* report = nullptr, const Eigen::VectorXd* initial = nullptr);

/// A local problem on a patch: interface faces take the trace of u_hp,
/// domain-boundary faces the problem's Dirichlet data.
struct PatchProblem {
  const Patch* patch = nullptr;
  const Space* space = nullptr;
  const ProblemDef* problem = nullptr;
  Constraints constraints;
};

PatchProblem make_patch_problem(const Patch& patch, const Space& local_space, const ProblemDef& problem,
                                const FEFunction& u_hp);

/// Vertex interpolation of u_hp on the local space (higher modes zero),
/// with the patch constraints applied.
Eigen::VectorXd patch_initial_guess(const PatchProblem& pp, const FEFunction& u_hp);

FEFunction solve_patch(const PatchProblem& pp, const Eigen::VectorXd& initial, const SolverConfig& config,
                       SolveReport* report = nullptr);

}  // namespace hpe
