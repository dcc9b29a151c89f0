#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hpe/basis.hpp"
#include "hpe/mesh.hpp"
#include "hpe/topology.hpp"

namespace hpe {

/// Affine map from the reference simplex onto a mesh element.
struct AffineMap {
  Point origin{};
  std::array<std::array<double, 2>, 2> jac{};      ///< columns are edge vectors
  std::array<std::array<double, 2>, 2> inv_jac{};  ///< inverse of jac
  double det = 0.0;
  int dim = 2;

  AffineMap(const Mesh& mesh, int e);
  Point to_physical(const Point& ref) const;
  Point to_reference(const Point& x) const;
  /// Physical gradient from a reference gradient.
  Point gradient(double dxi, double deta) const {
    return {inv_jac[0][0] * dxi + inv_jac[1][0] * deta, inv_jac[0][1] * dxi + inv_jac[1][1] * deta};
  }
};

/// Global DoF indices and orientation signs of one element's local modes.
struct ElementDofs {
  ElementShape shape;
  std::vector<int> dofs;
  Eigen::VectorXd signs;
};

/// Conforming H1 hp space with hierarchical modes and minimum-rule edges.
///
/// Holds a reference to the mesh, which must outlive the space and stay
/// unmodified.
class Space {
 public:
  /// Throws MeshError if the mesh is not conforming or a leaf degree is < 1.
  Space(const Mesh& mesh, Degrees degrees);

  const Mesh& mesh() const { return *mesh_; }
  const Topology& topology() const { return *topo_; }
  const std::vector<int>& leaves() const { return topo_->leaves(); }
  const Degrees& degrees() const { return degrees_; }
  int degree(int e) const { return degrees_[e]; }
  int dim() const { return mesh_->dim(); }
  int num_dofs() const { return ndofs_; }

  const ElementDofs& element_dofs(int e) const { return element_dofs_[topo_->leaf_index(e)]; }
  /// Polynomial degree carried by face f (min of adjacent element degrees).
  int face_degree(int f) const { return face_degree_[f]; }
  int vertex_dof(int v) const { return vertex_dof_[v]; }
  /// DoFs of edge modes 2..q of face f, in mode order (empty in 1D).
  const std::vector<int>& edge_dofs(int f) const { return edge_dofs_[f]; }

 private:
  const Mesh* mesh_;
  std::shared_ptr<const Topology> topo_;
  Degrees degrees_;
  int ndofs_ = 0;
  std::vector<int> vertex_dof_;
  std::vector<int> face_degree_;
  std::vector<std::vector<int>> edge_dofs_;
  std::vector<ElementDofs> element_dofs_;
};

/// Dirichlet datum evaluated at a boundary point. `element` is the leaf
/// adjacent to the face, `marker` the face's boundary marker.
using TraceDatum = std::function<double(const Point& x, int element, int marker)>;

/// Fixed DoF values.
struct Constraints {
  std::vector<char> fixed;
  Eigen::VectorXd value;

  explicit Constraints(int ndofs = 0) : fixed(ndofs, 0), value(Eigen::VectorXd::Zero(ndofs)) {}
  int size() const { return static_cast<int>(fixed.size()); }
  int num_fixed() const;
  /// Overwrites the fixed entries of u.
  void apply(Eigen::VectorXd& u) const;
  /// Zeroes the fixed entries of r.
  void zero(Eigen::VectorXd& r) const;
};

/// Constrains every DoF on boundary faces whose marker passes `accept`:
/// vertex values by interpolation, edge modes by facewise L2 projection of
/// the datum minus the vertex interpolant. Reproduces any datum that is the
/// trace of a space function.
Constraints constrain_dirichlet(const Space& space, const TraceDatum& datum,
                                const std::function<bool(int)>& accept = [](int m) { return m != kInterior; });

/// A coefficient vector over a space.
class FEFunction {
 public:
  FEFunction(const Space& space, Eigen::VectorXd coeffs);

  const Space& space() const { return *space_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  Eigen::VectorXd& coeffs() { return coeffs_; }

  /// Value and physical gradient at a reference point of leaf e.
  std::pair<double, Point> evaluate(int e, const Point& ref) const;
  /// Value and physical gradient at physical point x of leaf e.
  std::pair<double, Point> evaluate_at(int e, const Point& x) const;
  double value_at(int e, const Point& x) const { return evaluate_at(e, x).first; }

 private:
  const Space* space_;
  Eigen::VectorXd coeffs_;
};

/// Locates a leaf of `candidates` containing x (tolerant of round-off on
/// faces); -1 if none.
int locate(const Mesh& mesh, std::span<const int> candidates, const Point& x, double tol = 1e-10);

}  // namespace hpe
