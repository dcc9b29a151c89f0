#include "hpe/adapt.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <thread>

namespace hpe {
namespace {

constexpr double kFailed = -std::numeric_limits<double>::infinity();

int flux_points(const ProblemDef& problem, int p) { return p + 3 + problem.quadrature_bump / 2; }

/// `base` on every local element, except that neighbour pieces never drop
/// below the degree their global element already has.
Degrees patch_degrees(const Patch& patch, const Space& global, int base) {
  Degrees d(patch.mesh.num_elements(), base);
  for (int e = 0; e < patch.mesh.num_elements(); ++e)
    if (patch.origin(e) != 0) d[e] = std::max(base, global.degree(patch.global_of(e)));
  return d;
}

/// Solves the patch problem on `degrees` and returns the local solution.
struct LocalSolution {
  std::unique_ptr<Space> space;
  std::unique_ptr<FEFunction> u;
};

LocalSolution solve_local(const Patch& patch, Degrees degrees, const ProblemDef& problem, const FEFunction& u_hp,
                          const SolverConfig& solver) {
  LocalSolution out;
  out.space = std::make_unique<Space>(patch.mesh, std::move(degrees));
  const PatchProblem pp = make_patch_problem(patch, *out.space, problem, u_hp);
  out.u = std::make_unique<FEFunction>(solve_patch(pp, patch_initial_guess(pp, u_hp), solver));
  return out;
}

double local_modified(const Patch& patch, const LocalSolution& sol, const ProblemDef& problem, const FluxField& flux) {
  const Assembler local(*sol.space, problem);
  return modified_energy(local, patch, *sol.u, flux);
}

}  // namespace

ElementEstimate estimate_element(const Assembler& global, const FEFunction& u_hp, int kappa, const AdaptConfig& config,
                                 int iteration) {
  const Space& space = global.space();
  const ProblemDef& problem = global.problem();
  const Mesh& mesh = space.mesh();
  const int p = space.degree(kappa);
  ElementEstimate est;
  est.element = kappa;
  est.reduction = kFailed;

  const Patch refined = build_refined_patch(mesh, space.topology(), kappa);
  FluxField flux;
  try {
    const LocalSolution ref = solve_local(refined, patch_degrees(refined, space, p + 1), problem, u_hp, config.solver);
    flux = reference_flux(refined, *ref.u, problem, flux_points(problem, p));
  } catch (const std::exception& ex) {
    std::cerr << "warning: reference solve failed on element " << kappa << ": " << ex.what() << '\n';
    return est;
  }
  const double base = modified_energy(global, u_hp, kappa, flux);

  const Patch plain = build_patch(mesh, space.topology(), kappa);
  try {
    const LocalSolution cand = solve_local(plain, patch_degrees(plain, space, p + 1), problem, u_hp, config.solver);
    est.p_reduction = predicted_reduction(base, local_modified(plain, cand, problem, flux));
  } catch (const std::exception& ex) {
    std::cerr << "warning: p candidate failed on element " << kappa << ": " << ex.what() << '\n';
    est.p_reduction = kFailed;
  }
  est.reduction = est.p_reduction;
  est.best = Decision::p();

  std::vector<DegreeTuple> tuples = enumerate_candidates(p, mesh.dim());
  if (config.n_max) tuples = subsample(tuples, *config.n_max, element_seed(config.seed, kappa, iteration));
  const std::vector<int>& kids = refined.mesh.element(0).children;
  for (const DegreeTuple& t : tuples) {
    Degrees deg = patch_degrees(refined, space, p);
    for (std::size_t i = 0; i < kids.size(); ++i) deg[kids[i]] = t[i];
    double r = kFailed;
    try {
      const LocalSolution cand = solve_local(refined, std::move(deg), problem, u_hp, config.solver);
      r = predicted_reduction(base, local_modified(refined, cand, problem, flux));
    } catch (const std::exception& ex) {
      std::cerr << "warning: hp candidate failed on element " << kappa << ": " << ex.what() << '\n';
    }
    est.hp_reductions.emplace_back(t, r);
    if (r > est.reduction) {
      est.reduction = r;
      est.best = Decision::hp(t);
    }
  }
  if (std::isnan(est.reduction)) throw SolverError("estimate_element: NaN reduction");
  return est;
}

double null_candidate_reduction(const Assembler& global, const FEFunction& u_hp, int kappa, const AdaptConfig& config) {
  const Space& space = global.space();
  const ProblemDef& problem = global.problem();
  const int p = space.degree(kappa);
  const Patch refined = build_refined_patch(space.mesh(), space.topology(), kappa);
  const LocalSolution ref = solve_local(refined, patch_degrees(refined, space, p + 1), problem, u_hp, config.solver);
  const FluxField flux = reference_flux(refined, *ref.u, problem, flux_points(problem, p));

  const Patch plain = build_patch(space.mesh(), space.topology(), kappa);
  Degrees deg(plain.mesh.num_elements());
  for (int r = 0; r < plain.num_roots(); ++r) deg[r] = space.degree(plain.global_element[r]);
  const LocalSolution cand = solve_local(plain, std::move(deg), problem, u_hp, config.solver);
  return predicted_reduction(modified_energy(global, u_hp, kappa, flux), local_modified(plain, cand, problem, flux));
}

std::vector<ElementEstimate> estimate_all(const Assembler& global, const FEFunction& u_hp, const AdaptConfig& config,
                                          int iteration) {
  const std::vector<int>& leaves = global.space().leaves();
  std::vector<ElementEstimate> out(leaves.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < leaves.size();)
      out[i] = estimate_element(global, u_hp, leaves[i], config, iteration);
  };
  const int nthreads = std::max(1, std::min<int>(config.threads, static_cast<int>(leaves.size())));
  if (nthreads == 1) {
    worker();
    return out;
  }
  std::vector<std::jthread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  pool.clear();
  return out;
}

std::vector<int> mark(const std::vector<double>& reductions, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("mark: theta must lie in (0,1)");
  std::vector<int> out;
  if (reductions.empty()) return out;
  const double top = *std::max_element(reductions.begin(), reductions.end());
  if (!(top > 0.0)) return out;
  for (std::size_t i = 0; i < reductions.size(); ++i)
    if (reductions[i] > theta * top && reductions[i] > 0.0) out.push_back(static_cast<int>(i));
  return out;
}

void apply_refinements(Mesh& mesh, Degrees& degrees, const std::map<int, Decision>& decisions) {
  for (const auto& [e, d] : decisions)
    if (e < 0 || e >= mesh.num_elements() || !mesh.element(e).is_leaf())
      throw MeshError("apply_refinements: decision references a non-leaf element");
  degrees.resize(mesh.num_elements(), 0);

  auto ungreen_max = [&](int parent, const std::vector<int>& removed) {
    int q = 0;
    for (int c : removed) q = std::max(q, degrees[c]);
    if (q > 0) degrees[parent] = q;
  };

  for (const auto& [e, d] : decisions)
    if (d.kind == Decision::Kind::P) ++degrees[e];

  for (const auto& [e, d] : decisions) {
    if (d.kind != Decision::Kind::HP) continue;
    const Element& el = mesh.element(e);
    if (el.kind == ElementKind::Green) {
      // A sibling's decision may already have re-refined the parent.
      if (!el.is_leaf()) continue;
      const int parent = el.parent;
      const std::vector<int> removed = mesh.element(parent).children;
      ungreen_max(parent, removed);
      mesh.ungreen(parent);
      const auto kids = mesh.refine_red(parent);
      degrees.resize(mesh.num_elements(), 0);
      for (int k : kids) degrees[k] = degrees[parent];
      continue;
    }
    if (d.tuple.size() != (mesh.dim() == 1 ? 2u : 4u))
      throw std::invalid_argument("apply_refinements: tuple size does not match the element");
    const auto kids = mesh.refine_red(e);
    degrees.resize(mesh.num_elements(), 0);
    for (std::size_t i = 0; i < kids.size(); ++i) degrees[kids[i]] = d.tuple[i];
  }

  const std::size_t before = degrees.size();
  const auto removed = mesh.close_green();
  degrees.resize(mesh.num_elements(), 0);
  for (const auto& [parent, kids] : removed) ungreen_max(parent, kids);
  for (int e = static_cast<int>(before); e < mesh.num_elements(); ++e)
    if (degrees[e] == 0) degrees[e] = degrees[mesh.element(e).parent];
  // Children created earlier in this call whose parent was re-refined by
  // closure already carry degrees; anything still unset inherits.
  for (int e = 0; e < mesh.num_elements(); ++e)
    if (degrees[e] == 0 && mesh.element(e).parent >= 0) degrees[e] = degrees[mesh.element(e).parent];
}

AdaptState::AdaptState(Mesh m, int initial_degree)
    : mesh(std::make_unique<Mesh>(std::move(m))), degrees(mesh->num_elements(), initial_degree) {}

const ConvergenceRecord& solve_and_record(AdaptState& state, const ProblemDef& problem, const AdaptConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  state.u.reset();
  state.space = std::make_unique<Space>(*state.mesh, state.degrees);
  SolveReport report;
  state.u = std::make_unique<FEFunction>(solve_global(*state.space, problem, config.solver, &report));
  const ErrorNorms n = error_norms(problem, *state.u);
  ConvergenceRecord rec;
  rec.iteration = state.iteration;
  rec.ndof = state.space->num_dofs();
  rec.energy = n.energy;
  rec.energy_gap = n.energy_gap;
  rec.err_energy_norm = n.err_energy_norm;
  rec.err_Lp = n.err_Lp;
  rec.err_W1p = n.err_W1p;
  rec.newton_iterations = report.iterations;
  rec.newton_converged = report.converged;
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  state.records.push_back(rec);
  return state.records.back();
}

bool refine_step(AdaptState& state, const ProblemDef& problem, const AdaptConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!state.u) throw std::logic_error("refine_step: no solution on the current space");
  state.marked.clear();
  if (config.max_dofs > 0 && state.space->num_dofs() >= config.max_dofs) {
    state.converged = true;
    return false;
  }
  const Assembler global(*state.space, problem);
  const auto estimates = estimate_all(global, *state.u, config, state.iteration);
  std::vector<double> reductions;
  for (const auto& e : estimates) reductions.push_back(e.reduction);
  const std::vector<int> marked = mark(reductions, config.theta);
  if (marked.empty()) {
    state.converged = true;
    return false;
  }
  std::map<int, Decision> decisions;
  for (int i : marked) {
    decisions[estimates[i].element] = estimates[i].best;
    state.marked.push_back(estimates[i].element);
  }
  // Refining invalidates the space and the solution.
  state.u.reset();
  state.space.reset();
  apply_refinements(*state.mesh, state.degrees, decisions);
  ++state.iteration;
  if (!state.records.empty())
    state.records.back().seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return true;
}

bool adapt_step(AdaptState& state, const ProblemDef& problem, const AdaptConfig& config) {
  solve_and_record(state, problem, config);
  return refine_step(state, problem, config);
}

}  // namespace hpe
