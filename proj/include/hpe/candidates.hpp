#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hpe {

/// Degrees of the children of an h-refined element. 1D uses entries 0..1,
/// 2D uses 0..3 (corner child i touches vertex i, entry 3 is the central
/// child).
using DegreeTuple = std::vector<int>;

/// Degrees of freedom the competition attributes to an h-refined triangle:
/// 6 + Σ_{i<3} [min(p_i, p_3) − 1 + 2(p_i − 1)] + ½ Σ_i (p_i − 1)(p_i − 2).
/// Throws std::invalid_argument if any degree is < 1.
int count_center_dofs_2d(int p1, int p2, int p3, int p4);

/// DoFs of κ after p-enrichment: p+2 in 1D, ½(p+2)(p+3) in 2D.
int p_target_dofs(int p, int dim);

/// Hp tuples matching p-enrichment in DoF count, in lexicographic order.
/// 1D: p1 + p2 = p+1. 2D: count_center_dofs_2d == p_target_dofs with every
/// degree in [1, p+2].
std::vector<DegreeTuple> enumerate_candidates(int p, int dim);

/// Uniform sample of at most n_max tuples without replacement, in their
/// original order. Deterministic in `seed`.
std::vector<DegreeTuple> subsample(const std::vector<DegreeTuple>& candidates, int n_max, std::uint64_t seed);

/// Seed for the candidate draw of one element in one iteration, so results
/// do not depend on the order in which elements are estimated.
std::uint64_t element_seed(std::uint64_t seed, int element, int iteration);

}  // namespace hpe
