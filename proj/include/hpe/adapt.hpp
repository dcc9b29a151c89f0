#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "hpe/candidates.hpp"
#include "hpe/estimator.hpp"
#include "hpe/solver.hpp"

namespace hpe {

/// Refinement chosen for a marked element.
struct Decision {
  enum class Kind { P, HP } kind = Kind::P;
  DegreeTuple tuple;  ///< children degrees for HP

  static Decision p() { return {}; }
  static Decision hp(DegreeTuple t) { return {Kind::HP, std::move(t)}; }
  bool operator==(const Decision&) const = default;
};

struct AdaptConfig {
  double theta = 1.0 / 3.0;
  std::optional<int> n_max;  ///< Monte-Carlo cap on hp candidates
  std::uint64_t seed = 0;
  int max_iterations = 10;
  long max_dofs = 0;  ///< 0 means no budget
  int threads = 1;
  SolverConfig solver;
};

/// Outcome of the competition on one element.
struct ElementEstimate {
  int element = -1;
  double reduction = 0.0;  ///< max over candidates; -inf if the reference solve failed
  Decision best;
  double p_reduction = 0.0;
  std::vector<std::pair<DegreeTuple, double>> hp_reductions;
};

/// Runs the local competition for leaf κ: reference solve on the refined
/// patch, the p candidate on the unrefined patch and every (or a sampled set
/// of) DoF-matched hp candidate. Ties favour P, then the smallest tuple.
ElementEstimate estimate_element(const Assembler& global, const FEFunction& u_hp, int kappa,
                                 const AdaptConfig& config, int iteration = 0);

/// Predicted reduction of a candidate equal to the current space on the
/// unrefined patch. Zero up to solver tolerance.
double null_candidate_reduction(const Assembler& global, const FEFunction& u_hp, int kappa,
                                const AdaptConfig& config);

/// Estimates every leaf on `threads` workers; results follow leaf order.
std::vector<ElementEstimate> estimate_all(const Assembler& global, const FEFunction& u_hp, const AdaptConfig& config,
                                          int iteration);

/// Indices i with reductions[i] > θ·max and reductions[i] > 0.
std::vector<int> mark(const std::vector<double>& reductions, double theta);

/// Applies p and hp decisions, then restores conformity. New elements
/// inherit their parent's degree; un-greened parents take the largest degree
/// of their removed green children. Throws MeshError for a non-leaf key.
void apply_refinements(Mesh& mesh, Degrees& degrees, const std::map<int, Decision>& decisions);

struct ConvergenceRecord {
  int iteration = 0;
  long ndof = 0;
  double energy = 0.0;
  double energy_gap = 0.0;
  double err_energy_norm = 0.0;
  double err_Lp = 0.0;
  double err_W1p = 0.0;
  double seconds = 0.0;
  int newton_iterations = 0;
  bool newton_converged = false;
};

/// Mesh, degrees and solution of an adaptive run. Held through pointers
/// because the space and the solution refer to the mesh.
struct AdaptState {
  std::unique_ptr<Mesh> mesh;
  Degrees degrees;
  std::unique_ptr<Space> space;
  std::unique_ptr<FEFunction> u;
  int iteration = 0;
  bool converged = false;
  std::vector<ConvergenceRecord> records;
  std::vector<int> marked;  ///< elements refined in the last step

  AdaptState(Mesh m, int initial_degree);
};

/// Solves on the current space and appends a record.
const ConvergenceRecord& solve_and_record(AdaptState& state, const ProblemDef& problem, const AdaptConfig& config);

/// Estimate, mark and refine using the current solution. Returns false (and
/// flags convergence) when nothing is marked or the DoF budget is reached.
bool refine_step(AdaptState& state, const ProblemDef& problem, const AdaptConfig& config);

/// One pass of the adaptive loop: solve, record, estimate, mark, refine.
bool adapt_step(AdaptState& state, const ProblemDef& problem, const AdaptConfig& config);

}  // namespace hpe
