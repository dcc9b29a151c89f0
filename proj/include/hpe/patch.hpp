#pragma once

#include <vector>

#include "hpe/mesh.hpp"
#include "hpe/topology.hpp"

namespace hpe {

/// Local mesh around an element κ: κ and its face-wise neighbours.
///
/// The patch elements are the roots of `mesh`; root 0 is κ and roots
/// 1..n follow κ's local face order. Faces on the patch boundary carry
/// kDirichlet when they lie on the domain boundary and kInterface otherwise.
struct Patch {
  Mesh mesh;
  std::vector<int> global_element;  ///< root id -> global element id

  int center_global() const { return global_element.front(); }
  int num_roots() const { return static_cast<int>(global_element.size()); }
  /// Patch element (root id) containing local element e.
  int origin(int e) const { return mesh.root_of(e); }
  /// Global element containing local element e.
  int global_of(int e) const { return global_element[origin(e)]; }
};

/// κ plus its face neighbours, unrefined.
Patch build_patch(const Mesh& mesh, const Topology& topo, int kappa);

/// build_patch with κ red-refined and the neighbours green-closed (1D: κ
/// bisected, neighbours untouched).
Patch build_refined_patch(const Mesh& mesh, const Topology& topo, int kappa);

}  // namespace hpe
