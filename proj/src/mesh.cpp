#include "hpe/mesh.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace hpe {

Mesh Mesh::interval(double a, double b, int n) {
  if (n < 1 || !(b > a)) throw MeshError("interval mesh needs n >= 1 and b > a");
  std::vector<double> nodes(n + 1);
  for (int i = 0; i <= n; ++i) nodes[i] = a + (b - a) * i / n;
  nodes[n] = b;
  return interval(nodes);
}

Mesh Mesh::interval(std::span<const double> nodes) {
  if (nodes.size() < 2) throw MeshError("interval mesh needs at least two nodes");
  Mesh m;
  m.dim_ = 1;
  for (double x : nodes) m.vertices_.push_back({x, 0.0});
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (!(nodes[i + 1] > nodes[i])) throw MeshError("interval nodes must be strictly increasing");
    m.add_element({static_cast<int>(i), static_cast<int>(i + 1), -1}, -1, ElementKind::Root);
  }
  m.set_boundary_marker(0, 0, kDirichlet);
  const int last = static_cast<int>(nodes.size()) - 1;
  m.set_boundary_marker(last, last, kDirichlet);
  return m;
}

Mesh Mesh::triangles(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells) {
  Mesh m;
  m.dim_ = 2;
  m.vertices_ = std::move(vertices);
  std::map<std::pair<int, int>, int> face_count;
  for (auto c : cells) {
    for (int i : c)
      if (i < 0 || i >= m.num_vertices()) throw MeshError("triangle references unknown vertex");
    const Point& p0 = m.vertices_[c[0]];
    const Point& p1 = m.vertices_[c[1]];
    const Point& p2 = m.vertices_[c[2]];
    const double cross = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0]);
    if (cross == 0.0) throw MeshError("degenerate triangle");
    if (cross < 0.0) std::swap(c[1], c[2]);
    const int e = m.add_element(c, -1, ElementKind::Root);
    for (int i = 0; i < 3; ++i) {
      const auto f = m.face_vertices(e, i);
      ++face_count[key(f[0], f[1])];
    }
  }
  for (const auto& [f, n] : face_count) {
    if (n > 2) throw MeshError("non-manifold face in triangle mesh");
    if (n == 1) m.markers_[f] = kDirichlet;
  }
  return m;
}

Mesh Mesh::from_cells(int dim, std::vector<Point> vertices, std::vector<std::array<int, 3>> cells) {
  if (dim != 1 && dim != 2) throw MeshError("mesh dimension must be 1 or 2");
  Mesh m;
  m.dim_ = dim;
  m.vertices_ = std::move(vertices);
  for (const auto& c : cells) {
    const int e = m.add_element(c, -1, ElementKind::Root);
    if (!(m.measure(e) > 0.0)) throw MeshError("element with non-positive measure");
  }
  return m;
}

int Mesh::add_element(std::array<int, 3> v, int parent, ElementKind kind) {
  Element el;
  el.v = v;
  el.parent = parent;
  el.kind = kind;
  el.level = parent < 0 ? 0 : elements_[parent].level + 1;
  elements_.push_back(std::move(el));
  return num_elements() - 1;
}

std::vector<int> Mesh::leaves() const {
  std::vector<int> out;
  for (int e = 0; e < num_elements(); ++e)
    if (elements_[e].is_leaf()) out.push_back(e);
  return out;
}

int Mesh::num_leaves() const {
  return static_cast<int>(std::count_if(elements_.begin(), elements_.end(),
                                        [](const Element& el) { return el.is_leaf(); }));
}

std::array<Point, 3> Mesh::corners(int e) const {
  const auto& el = elements_[e];
  std::array<Point, 3> out{};
  for (int i = 0; i <= dim_; ++i) out[i] = vertices_[el.v[i]];
  return out;
}

double Mesh::measure(int e) const {
  const auto c = corners(e);
  if (dim_ == 1) return c[1][0] - c[0][0];
  return 0.5 * ((c[1][0] - c[0][0]) * (c[2][1] - c[0][1]) - (c[1][1] - c[0][1]) * (c[2][0] - c[0][0]));
}

double Mesh::diameter(int e) const {
  const auto c = corners(e);
  if (dim_ == 1) return c[1][0] - c[0][0];
  return std::max({norm(c[1] - c[0]), norm(c[2] - c[1]), norm(c[0] - c[2])});
}

Point Mesh::centroid(int e) const {
  const auto c = corners(e);
  if (dim_ == 1) return midpoint(c[0], c[1]);
  return {(c[0][0] + c[1][0] + c[2][0]) / 3.0, (c[0][1] + c[1][1] + c[2][1]) / 3.0};
}

double Mesh::total_measure() const {
  double s = 0.0;
  for (int e : leaves()) s += measure(e);
  return s;
}

int Mesh::edge_midpoint(int a, int b) const {
  auto it = midpoints_.find(key(a, b));
  return it == midpoints_.end() ? -1 : it->second;
}

int Mesh::get_or_create_midpoint(int a, int b) {
  const auto k = key(a, b);
  if (auto it = midpoints_.find(k); it != midpoints_.end()) return it->second;
  vertices_.push_back(midpoint(vertices_[a], vertices_[b]));
  const int m = num_vertices() - 1;
  midpoints_.emplace(k, m);
  if (dim_ == 2) {
    if (const int marker = boundary_marker(a, b); marker != kInterior) {
      markers_[key(a, m)] = marker;
      markers_[key(m, b)] = marker;
    }
  }
  return m;
}

int Mesh::boundary_marker(int a, int b) const {
  auto it = markers_.find(key(a, b));
  return it == markers_.end() ? kInterior : it->second;
}

void Mesh::set_boundary_marker(int a, int b, int marker) {
  if (marker == kInterior)
    markers_.erase(key(a, b));
  else
    markers_[key(a, b)] = marker;
}

std::array<int, 2> Mesh::face_vertices(int e, int i) const {
  const auto& v = elements_[e].v;
  if (dim_ == 1) return {v[1 - i], v[1 - i]};
  return {v[(i + 1) % 3], v[(i + 2) % 3]};
}

int Mesh::root_of(int e) const {
  while (elements_[e].parent >= 0) e = elements_[e].parent;
  return e;
}

std::vector<int> Mesh::refine_red(int e) {
  if (e < 0 || e >= num_elements() || !elements_[e].is_leaf())
    throw MeshError("refine_red: element is not a leaf");
  if (elements_[e].kind == ElementKind::Green)
    throw MeshError("refine_red: green closure must be removed first");
  const auto v = elements_[e].v;
  std::vector<int> kids;
  if (dim_ == 1) {
    const int m = get_or_create_midpoint(v[0], v[1]);
    kids.push_back(add_element({v[0], m, -1}, e, ElementKind::Red));
    kids.push_back(add_element({m, v[1], -1}, e, ElementKind::Red));
  } else {
    const int m01 = get_or_create_midpoint(v[0], v[1]);
    const int m12 = get_or_create_midpoint(v[1], v[2]);
    const int m20 = get_or_create_midpoint(v[2], v[0]);
    kids.push_back(add_element({v[0], m01, m20}, e, ElementKind::Red));
    kids.push_back(add_element({m01, v[1], m12}, e, ElementKind::Red));
    kids.push_back(add_element({m20, m12, v[2]}, e, ElementKind::Red));
    kids.push_back(add_element({m01, m12, m20}, e, ElementKind::Red));
  }
  elements_[e].children = kids;
  return kids;
}

std::vector<int> Mesh::refine_green(int e, int apex) {
  if (dim_ != 2) throw MeshError("refine_green: only triangles are bisected");
  if (!elements_[e].is_leaf()) throw MeshError("refine_green: element is not a leaf");
  if (elements_[e].kind == ElementKind::Green)
    throw MeshError("refine_green: green closure must be removed first");
  const auto v = elements_[e].v;
  const int a = v[(apex + 1) % 3];
  const int b = v[(apex + 2) % 3];
  const int m = edge_midpoint(a, b);
  if (m < 0) throw MeshError("refine_green: edge has no midpoint");
  std::vector<int> kids;
  kids.push_back(add_element({v[apex], a, m}, e, ElementKind::Green));
  kids.push_back(add_element({v[apex], m, b}, e, ElementKind::Green));
  elements_[e].children = kids;
  return kids;
}

void Mesh::ungreen(int parent) {
  auto& p = elements_[parent];
  for (int c : p.children) {
    if (elements_[c].kind != ElementKind::Green || !elements_[c].is_leaf())
      throw MeshError("ungreen: children are not green leaves");
  }
  for (int c : p.children) elements_[c].alive = false;
  p.children.clear();
}

int Mesh::count_hanging() const {
  if (dim_ == 1) return 0;
  int n = 0;
  for (int e = 0; e < num_elements(); ++e) {
    if (!elements_[e].is_leaf()) continue;
    for (int i = 0; i < 3; ++i) {
      const auto f = face_vertices(e, i);
      if (edge_midpoint(f[0], f[1]) >= 0) ++n;
    }
  }
  return n;
}

std::map<int, std::vector<int>> Mesh::close_green() {
  std::map<int, std::vector<int>> removed;
  if (dim_ == 1) return removed;

  auto hanging_faces = [this](int e) {
    std::vector<int> out;
    for (int i = 0; i < 3; ++i) {
      const auto f = face_vertices(e, i);
      if (edge_midpoint(f[0], f[1]) >= 0) out.push_back(i);
    }
    return out;
  };

  // Each pass only refines, and refinement depth is bounded by the deepest
  // existing midpoint, so the loop terminates.
  const int guard = 64 * (num_elements() + 16);
  for (int pass = 0;; ++pass) {
    assert(pass < guard && "green closure did not terminate");
    if (pass >= guard) throw MeshError("close_green: closure did not terminate");
    bool changed = false;
    // Red phase: un-green touched green children, red-refine elements with
    // two or more hanging edges.
    for (int e = 0; e < num_elements(); ++e) {
      if (!elements_[e].is_leaf()) continue;
      const auto h = hanging_faces(e);
      if (h.empty()) continue;
      if (elements_[e].kind == ElementKind::Green) {
        const int p = elements_[e].parent;
        auto& rec = removed[p];
        rec.insert(rec.end(), elements_[p].children.begin(), elements_[p].children.end());
        ungreen(p);
        refine_red(p);
        changed = true;
      } else if (h.size() >= 2) {
        refine_red(e);
        changed = true;
      }
    }
    if (changed) continue;
    // Green phase: bisect elements with exactly one hanging edge.
    for (int e = 0; e < num_elements(); ++e) {
      if (!elements_[e].is_leaf()) continue;
      const auto h = hanging_faces(e);
      if (h.size() == 1) {
        refine_green(e, h.front());
        changed = true;
      }
    }
    if (!changed) break;
  }
  assert(count_hanging() == 0);
  return removed;
}

}  // namespace hpe
