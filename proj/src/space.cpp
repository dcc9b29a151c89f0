#include "hpe/space.hpp"

#include <algorithm>
#include <cmath>

namespace hpe {

AffineMap::AffineMap(const Mesh& mesh, int e) : dim(mesh.dim()) {
  const auto c = mesh.corners(e);
  origin = c[0];
  if (dim == 1) {
    const double h = c[1][0] - c[0][0];
    jac = {{{h, 0.0}, {0.0, 1.0}}};
    inv_jac = {{{1.0 / h, 0.0}, {0.0, 0.0}}};
    det = h;
    return;
  }
  jac = {{{c[1][0] - c[0][0], c[2][0] - c[0][0]}, {c[1][1] - c[0][1], c[2][1] - c[0][1]}}};
  det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
  inv_jac = {{{jac[1][1] / det, -jac[0][1] / det}, {-jac[1][0] / det, jac[0][0] / det}}};
}

Point AffineMap::to_physical(const Point& ref) const {
  if (dim == 1) return {origin[0] + jac[0][0] * ref[0], 0.0};
  return {origin[0] + jac[0][0] * ref[0] + jac[0][1] * ref[1], origin[1] + jac[1][0] * ref[0] + jac[1][1] * ref[1]};
}

Point AffineMap::to_reference(const Point& x) const {
  const Point d = x - origin;
  if (dim == 1) return {d[0] * inv_jac[0][0], 0.0};
  return {inv_jac[0][0] * d[0] + inv_jac[0][1] * d[1], inv_jac[1][0] * d[0] + inv_jac[1][1] * d[1]};
}

Space::Space(const Mesh& mesh, Degrees degrees)
    : mesh_(&mesh), topo_(std::make_shared<Topology>(mesh)), degrees_(std::move(degrees)) {
  if (!mesh.is_conforming()) throw MeshError("build_space: mesh has hanging nodes");
  degrees_.resize(mesh.num_elements(), 1);
  const auto& leaves = topo_->leaves();
  const auto& faces = topo_->faces();
  for (int e : leaves)
    if (degrees_[e] < 1) throw MeshError("build_space: polynomial degree must be >= 1");

  vertex_dof_.assign(mesh.num_vertices(), -1);
  for (int e : leaves)
    for (int i = 0; i <= mesh.dim(); ++i) {
      int& d = vertex_dof_[mesh.element(e).v[i]];
      if (d < 0) d = ndofs_++;
    }

  face_degree_.assign(faces.size(), 0);
  edge_dofs_.assign(faces.size(), {});
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const Face& face = faces[f];
    int q = degrees_[face.elem[0]];
    if (face.elem[1] >= 0) q = std::min(q, degrees_[face.elem[1]]);
    face_degree_[f] = q;
    if (mesh.dim() == 2)
      for (int m = 2; m <= q; ++m) edge_dofs_[f].push_back(ndofs_++);
  }

  element_dofs_.resize(leaves.size());
  for (std::size_t li = 0; li < leaves.size(); ++li) {
    const int e = leaves[li];
    const auto& el = mesh.element(e);
    ElementDofs& ed = element_dofs_[li];
    ed.shape.dim = mesh.dim();
    ed.shape.p = degrees_[e];
    if (mesh.dim() == 2)
      for (int i = 0; i < 3; ++i) ed.shape.q[i] = face_degree_[topo_->element_faces(e)[i]];
    std::vector<double> signs;
    for (int i = 0; i <= mesh.dim(); ++i) {
      ed.dofs.push_back(vertex_dof_[el.v[i]]);
      signs.push_back(1.0);
    }
    if (mesh.dim() == 2) {
      for (int i = 0; i < 3; ++i) {
        const int f = topo_->element_faces(e)[i];
        const bool reversed = el.v[(i + 1) % 3] > el.v[(i + 2) % 3];
        for (int m = 2; m <= face_degree_[f]; ++m) {
          ed.dofs.push_back(edge_dofs_[f][m - 2]);
          signs.push_back(reversed && (m % 2 == 1) ? -1.0 : 1.0);
        }
      }
    }
    const int nint = num_interior_modes(ed.shape);
    for (int k = 0; k < nint; ++k) {
      ed.dofs.push_back(ndofs_++);
      signs.push_back(1.0);
    }
    ed.signs = Eigen::Map<Eigen::VectorXd>(signs.data(), static_cast<Eigen::Index>(signs.size()));
  }
}

int Constraints::num_fixed() const {
  return static_cast<int>(std::count(fixed.begin(), fixed.end(), 1));
}

void Constraints::apply(Eigen::VectorXd& u) const {
  for (int i = 0; i < size(); ++i)
    if (fixed[i]) u[i] = value[i];
}

void Constraints::zero(Eigen::VectorXd& r) const {
  for (int i = 0; i < size(); ++i)
    if (fixed[i]) r[i] = 0.0;
}

Constraints constrain_dirichlet(const Space& space, const TraceDatum& datum, const std::function<bool(int)>& accept) {
  const Mesh& mesh = space.mesh();
  const auto& faces = space.topology().faces();
  Constraints c(space.num_dofs());
  std::vector<double> pl, dl;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const Face& face = faces[f];
    if (!face.is_boundary() || !accept(face.marker)) continue;
    const int e = face.elem[0];
    for (int v : {face.v[0], face.v[1]}) {
      const int d = space.vertex_dof(v);
      if (c.fixed[d]) continue;
      c.fixed[d] = 1;
      c.value[d] = datum(mesh.vertex(v), e, face.marker);
    }
    if (mesh.dim() == 1) continue;
    const auto& edofs = space.edge_dofs(static_cast<int>(f));
    const int nm = static_cast<int>(edofs.size());
    if (nm == 0) continue;
    // face.v is sorted, so v[0] -> v[1] is the canonical orientation.
    const Point a = mesh.vertex(face.v[0]);
    const Point b = mesh.vertex(face.v[1]);
    const double ua = c.value[space.vertex_dof(face.v[0])];
    const double ub = c.value[space.vertex_dof(face.v[1])];
    const QuadratureRule& rule = gauss_legendre(nm + 8);
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nm, nm);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nm);
    pl.resize(nm + 1);
    dl.resize(nm + 1);
    Eigen::VectorXd phi(nm);
    for (std::size_t iq = 0; iq < rule.size(); ++iq) {
      const double t = rule.points[iq][0];
      const double w = rule.weights[iq];
      const Point x = (1.0 - t) * a + t * b;
      legendre(nm - 1, 2.0 * t - 1.0, pl, dl);
      for (int m = 0; m < nm; ++m) phi[m] = t * (1.0 - t) * pl[m];
      const double r = datum(x, e, face.marker) - ((1.0 - t) * ua + t * ub);
      mass.noalias() += w * phi * phi.transpose();
      rhs += (w * r) * phi;
    }
    const Eigen::VectorXd coef = mass.ldlt().solve(rhs);
    for (int m = 0; m < nm; ++m) {
      c.fixed[edofs[m]] = 1;
      c.value[edofs[m]] = coef[m];
    }
  }
  return c;
}

FEFunction::FEFunction(const Space& space, Eigen::VectorXd coeffs) : space_(&space), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != space.num_dofs()) throw std::invalid_argument("FEFunction: coefficient length mismatch");
}

std::pair<double, Point> FEFunction::evaluate(int e, const Point& ref) const {
  if (space_->topology().leaf_index(e) < 0) throw MeshError("evaluate: element is not a leaf");
  const ElementDofs& ed = space_->element_dofs(e);
  const int n = static_cast<int>(ed.dofs.size());
  thread_local std::vector<double> v, dx, dy;
  v.resize(n);
  dx.resize(n);
  dy.resize(n);
  eval_basis(ed.shape, ref, v, dx, dy);
  double val = 0.0, gx = 0.0, gy = 0.0;
  for (int j = 0; j < n; ++j) {
    const double c = ed.signs[j] * coeffs_[ed.dofs[j]];
    val += c * v[j];
    gx += c * dx[j];
    gy += c * dy[j];
  }
  const AffineMap map(space_->mesh(), e);
  return {val, map.gradient(gx, gy)};
}

std::pair<double, Point> FEFunction::evaluate_at(int e, const Point& x) const {
  const AffineMap map(space_->mesh(), e);
  return evaluate(e, map.to_reference(x));
}

int locate(const Mesh& mesh, std::span<const int> candidates, const Point& x, double tol) {
  int best = -1;
  double best_min = -1e300;
  for (int e : candidates) {
    const AffineMap map(mesh, e);
    const Point r = map.to_reference(x);
    const double m = mesh.dim() == 1 ? std::min(r[0], 1.0 - r[0]) : std::min({r[0], r[1], 1.0 - r[0] - r[1]});
    if (m > best_min) {
      best_min = m;
      best = e;
    }
  }
  return best_min >= -tol ? best : -1;
}

}  // namespace hpe
