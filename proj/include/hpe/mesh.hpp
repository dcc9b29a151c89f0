#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hpe/geometry.hpp"

namespace hpe {

/// Raised for violated mesh preconditions (refining a green child, etc.).
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ElementKind : std::uint8_t { Root, Red, Green };

/// Boundary markers attached to faces.
enum BoundaryMarker : int {
  kInterior = 0,
  kDirichlet = 1,  ///< part of the domain boundary
  kInterface = 2,  ///< artificial boundary of a local patch
};

/// A simplex in the refinement forest. Intervals use `v[0..1]`, triangles
/// `v[0..2]` in counter-clockwise order.
struct Element {
  std::array<int, 3> v{-1, -1, -1};
  int parent = -1;
  std::vector<int> children;
  ElementKind kind = ElementKind::Root;
  bool alive = true;
  int level = 0;

  bool is_leaf() const { return alive && children.empty(); }
};

/// Hp degree per element id. Only leaf entries are meaningful.
using Degrees = std::vector<int>;

/// Simplicial mesh in 1D or 2D with red/green refinement.
///
/// Elements are never erased: un-greening marks the green children dead and
/// reactivates their parent, so element ids stay stable across refinement.
/// Vertices are deduplicated through the edge-midpoint table, never by
/// comparing coordinates.
class Mesh {
 public:
  Mesh() = default;

  /// Uniform partition of [a,b] into n intervals. Both end points are
  /// Dirichlet boundary.
  static Mesh interval(double a, double b, int n);

  /// Mesh from explicit 1D nodes (sorted) forming consecutive intervals.
  static Mesh interval(std::span<const double> nodes);

  /// Triangle mesh; every face with a single adjacent element is marked as
  /// Dirichlet boundary. Triangles are reoriented counter-clockwise.
  static Mesh triangles(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells);

  /// Mesh from raw cells without boundary markers; orientation is kept.
  static Mesh from_cells(int dim, std::vector<Point> vertices, std::vector<std::array<int, 3>> cells);

  int dim() const { return dim_; }
  int vertices_per_element() const { return dim_ + 1; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  const Point& vertex(int i) const { return vertices_[i]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const Element& element(int e) const { return elements_[e]; }

  /// Leaf element ids in increasing order.
  std::vector<int> leaves() const;
  int num_leaves() const;

  /// Physical coordinates of the vertices of element e.
  std::array<Point, 3> corners(int e) const;
  double measure(int e) const;
  double diameter(int e) const;
  Point centroid(int e) const;

  /// Sum of leaf measures.
  double total_measure() const;

  /// Subdivides a leaf: interval into 2, triangle into 4 (corner child i
  /// touches vertex i, child 3 is the midpoint triangle). Returns the child
  /// ids.
  std::vector<int> refine_red(int e);

  /// Bisects triangle e from vertex `apex` toward the midpoint of the
  /// opposite edge, which must already exist.
  std::vector<int> refine_green(int e, int apex);

  /// Removes the green children of `parent` and makes it a leaf again.
  void ungreen(int parent);

  /// Restores conformity after red refinements. No-op in 1D.
  /// Returns a map from each un-greened parent to the green children removed.
  std::map<int, std::vector<int>> close_green();

  /// Number of (leaf edge, midpoint) pairs where the midpoint is a vertex of
  /// another leaf. Zero means conforming.
  int count_hanging() const;
  bool is_conforming() const { return count_hanging() == 0; }

  /// Midpoint vertex of edge (a,b), or -1 if it was never created.
  int edge_midpoint(int a, int b) const;

  /// Marker of the face with the given vertex set (1D: a == b).
  int boundary_marker(int a, int b) const;
  void set_boundary_marker(int a, int b, int marker);

  /// Vertex ids of local face i (the face opposite vertex i).
  std::array<int, 2> face_vertices(int e, int i) const;

  /// Top-level ancestor of e.
  int root_of(int e) const;

 private:
  static std::pair<int, int> key(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }
  int get_or_create_midpoint(int a, int b);
  int add_element(std::array<int, 3> v, int parent, ElementKind kind);

  int dim_ = 2;
  std::vector<Point> vertices_;
  std::vector<Element> elements_;
  std::map<std::pair<int, int>, int> midpoints_;
  std::map<std::pair<int, int>, int> markers_;
};

}  // namespace hpe
