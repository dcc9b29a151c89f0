#pragma once

#include <array>
#include <vector>

#include "hpe/mesh.hpp"

namespace hpe {

/// A face of the leaf mesh: an edge in 2D, a vertex in 1D.
struct Face {
  std::array<int, 2> v{-1, -1};       ///< sorted vertex ids (1D: v[0] == v[1])
  std::array<int, 2> elem{-1, -1};    ///< adjacent leaves; elem[1] == -1 on the boundary
  std::array<int, 2> local{-1, -1};   ///< local face index within each adjacent leaf
  int marker = kInterior;

  bool is_boundary() const { return elem[1] < 0; }
};

/// Leaf-level connectivity snapshot of a conforming mesh.
class Topology {
 public:
  explicit Topology(const Mesh& mesh);

  const std::vector<int>& leaves() const { return leaves_; }
  const std::vector<Face>& faces() const { return faces_; }
  /// Position of element e in leaves(), or -1.
  int leaf_index(int e) const { return e < static_cast<int>(leaf_index_.size()) ? leaf_index_[e] : -1; }
  /// Face ids of the local faces of leaf e.
  const std::array<int, 3>& element_faces(int e) const { return element_faces_[leaf_index(e)]; }
  /// Leaf across local face i of e, or -1 on the boundary.
  int neighbor(int e, int i) const;
  /// Face-neighbours of e in local face order (boundary faces skipped).
  std::vector<int> neighbors(int e) const;

 private:
  std::vector<int> leaves_;
  std::vector<int> leaf_index_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 3>> element_faces_;
};

}  // namespace hpe
