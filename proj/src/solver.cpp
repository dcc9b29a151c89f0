#include "hpe/solver.hpp"

#include <cmath>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace hpe {

Eigen::VectorXd linear_solve(const SparseMatrix& J, const Eigen::VectorXd& b, const SolverConfig& config) {
  if (config.linear == LinearSolverKind::ConjugateGradient) {
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(config.cg_tol);
    cg.setMaxIterations(std::max<Eigen::Index>(1000, 10 * J.rows()));
    cg.compute(J);
    Eigen::VectorXd x = cg.solve(b);
    if (cg.info() == Eigen::Success) return x;
  }
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(J);
  if (ldlt.info() == Eigen::Success) {
    Eigen::VectorXd x = ldlt.solve(b);
    if (ldlt.info() == Eigen::Success && x.allFinite()) return x;
  }
  SparseMatrix Jc = J;
  Jc.makeCompressed();
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(Jc);
  if (lu.info() != Eigen::Success) throw SolverError("singular Jacobian");
  Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite()) throw SolverError("singular Jacobian");
  return x;
}

Eigen::VectorXd newton_solve(const Assembler& A, const Constraints& constraints, Eigen::VectorXd u,
                             const SolverConfig& config, SolveReport* report) {
  SolveReport local;
  SolveReport& rep = report ? *report : local;
  rep = SolveReport{};
  constraints.apply(u);
  double E = A.energy(u);
  Eigen::VectorXd r = A.residual(u, &constraints);
  for (int it = 0;; ++it) {
    const double res = r.lpNorm<Eigen::Infinity>();
    rep.residual = res;
    rep.residual_history.push_back(res);
    rep.energy_history.push_back(E);
    rep.iterations = it;
    if (!std::isfinite(res)) break;
    if (res <= config.newton_tol) {
      rep.converged = true;
      break;
    }
    if (it >= config.max_newton_iters) break;

    const SparseMatrix J = A.jacobian(u, &constraints);
    Eigen::VectorXd d = linear_solve(J, -r, config);
    constraints.zero(d);
    const double slope = r.dot(d);
    // Below this the energy difference is round-off; take the Newton step.
    const double noise = 1e-13 * (1.0 + std::abs(E));
    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd trial;
    double Et = E;
    for (int ls = 0; ls < 50; ++ls, t *= config.backtrack) {
      trial = u + t * d;
      Et = A.energy(trial);
      if (!std::isfinite(Et)) continue;
      if (Et <= E + config.armijo * t * slope || -slope * t <= noise) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    u = std::move(trial);
    E = Et;
    r = A.residual(u, &constraints);
  }
  return u;
}

Constraints dirichlet_constraints(const Space& space, const ProblemDef& problem) {
  return constrain_dirichlet(
      space, [&problem](const Point& x, int, int) { return problem.dirichlet(x); },
      [](int m) { return m == kDirichlet; });
}

ProblemDef quadratic_surrogate(const ProblemDef& problem) {
  ProblemDef q = problem;
  const double c = problem.d2g(0.0);
  q.mu = [](const Point& xi) { return 0.5 * dot(xi, xi); };
  q.dmu = [](const Point& xi) { return xi; };
  q.d2mu = [](const Point&) { return Sym2{1.0, 0.0, 1.0}; };
  q.g = [c](double u) { return 0.5 * c * u * u; };
  q.dg = [c](double u) { return c * u; };
  q.d2g = [c](double) { return c; };
  q.linear = true;
  return q;
}

FEFunction solve_global(const Space& space, const ProblemDef& problem, const SolverConfig& config,
                        SolveReport* report, const Eigen::VectorXd* initial) {
  const Constraints c = dirichlet_constraints(space, problem);
  Eigen::VectorXd u0 = Eigen::VectorXd::Zero(space.num_dofs());
  if (initial) {
    u0 = *initial;
  } else if (!problem.linear) {
    const ProblemDef q = quadratic_surrogate(problem);
    const Assembler Aq(space, q);
    u0 = newton_solve(Aq, c, u0, config);
  }
  const Assembler A(space, problem);
  return FEFunction(space, newton_solve(A, c, std::move(u0), config, report));
}

PatchProblem make_patch_problem(const Patch& patch, const Space& local_space, const ProblemDef& problem,
                                const FEFunction& u_hp) {
  PatchProblem pp;
  pp.patch = &patch;
  pp.space = &local_space;
  pp.problem = &problem;
  pp.constraints = constrain_dirichlet(local_space, [&](const Point& x, int e, int marker) {
    if (marker == kDirichlet) return problem.dirichlet(x);
    return u_hp.value_at(patch.global_of(e), x);
  });
  return pp;
}

Eigen::VectorXd patch_initial_guess(const PatchProblem& pp, const FEFunction& u_hp) {
  const Space& space = *pp.space;
  const Mesh& mesh = space.mesh();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(space.num_dofs());
  std::vector<char> done(mesh.num_vertices(), 0);
  for (int e : space.leaves())
    for (int i = 0; i <= mesh.dim(); ++i) {
      const int v = mesh.element(e).v[i];
      if (done[v]) continue;
      done[v] = 1;
      u[space.vertex_dof(v)] = u_hp.value_at(pp.patch->global_of(e), mesh.vertex(v));
    }
  pp.constraints.apply(u);
  return u;
}

FEFunction solve_patch(const PatchProblem& pp, const Eigen::VectorXd& initial, const SolverConfig& config,
                       SolveReport* report) {
  const Assembler A(*pp.space, *pp.problem);
  return FEFunction(*pp.space, newton_solve(A, pp.constraints, initial, config, report));
}

}  // namespace hpe
