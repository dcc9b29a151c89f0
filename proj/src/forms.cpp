#include "hpe/forms.hpp"

#include <cmath>

namespace hpe {
namespace {

/// Local vertex sitting on the problem's singular point, or -1.
int singular_vertex(const Mesh& mesh, const ProblemDef& problem, int e) {
  if (!problem.singular_point) return -1;
  const auto c = mesh.corners(e);
  for (int i = 0; i <= mesh.dim(); ++i)
    if (norm(c[i] - *problem.singular_point) < 1e-14) return i;
  return -1;
}

}  // namespace

int quadrature_degree(const ProblemDef& problem, int p, bool touches_singularity, int extra) {
  return 2 * p + 2 + problem.quadrature_bump + (touches_singularity ? 1 : 0) + extra;
}

ElementQuadrature element_quadrature(const Space& space, const ProblemDef& problem, int e, int extra) {
  const Mesh& mesh = space.mesh();
  const ElementDofs& ed = space.element_dofs(e);
  const int sv = singular_vertex(mesh, problem, e);
  const int degree = quadrature_degree(problem, ed.shape.p, sv >= 0, extra);
  const QuadratureRule& rule = mesh.dim() == 1 ? interval_rule(degree) : triangle_rule(degree, std::max(sv, 0));
  const Tabulation& tab = tabulate(ed.shape, rule);
  const AffineMap map(mesh, e);

  ElementQuadrature q;
  q.element = e;
  q.dofs = ed.dofs;
  const int nq = static_cast<int>(rule.size());
  q.weights.resize(nq);
  q.points.resize(nq);
  q.load.resize(nq);
  const double jac = std::abs(map.det);
  for (int i = 0; i < nq; ++i) {
    q.weights[i] = rule.weights[i] * jac;
    q.points[i] = map.to_physical(rule.points[i]);
    q.load[i] = problem.f(q.points[i]);
  }
  const auto S = ed.signs.asDiagonal();
  q.N = tab.value * S;
  if (mesh.dim() == 1) {
    q.Gx = (map.inv_jac[0][0] * tab.dxi) * S;
    q.Gy.resize(0, 0);
  } else {
    q.Gx = (map.inv_jac[0][0] * tab.dxi + map.inv_jac[1][0] * tab.deta) * S;
    q.Gy = (map.inv_jac[0][1] * tab.dxi + map.inv_jac[1][1] * tab.deta) * S;
  }
  return q;
}

Assembler::Assembler(const Space& space, const ProblemDef& problem, int extra_degree)
    : space_(&space), problem_(&problem) {
  quad_.reserve(space.leaves().size());
  for (int e : space.leaves()) quad_.push_back(element_quadrature(space, problem, e, extra_degree));
}

namespace {

Eigen::VectorXd gather(const Eigen::VectorXd& u, const std::vector<int>& dofs) {
  Eigen::VectorXd out(dofs.size());
  for (std::size_t j = 0; j < dofs.size(); ++j) out[j] = u[dofs[j]];
  return out;
}

double element_energy_impl(const ProblemDef& pb, const ElementQuadrature& q, const Eigen::VectorXd& u) {
  const Eigen::VectorXd c = gather(u, q.dofs);
  const Eigen::VectorXd val = q.N * c;
  const Eigen::VectorXd gx = q.Gx * c;
  const Eigen::VectorXd gy = q.Gy.size() ? Eigen::VectorXd(q.Gy * c) : Eigen::VectorXd::Zero(gx.size());
  double s = 0.0;
  for (Eigen::Index i = 0; i < val.size(); ++i)
    s += q.weights[i] * (pb.mu({gx[i], gy[i]}) + pb.g(val[i]) - q.load[i] * val[i]);
  return s;
}

}  // namespace

double Assembler::energy(const Eigen::VectorXd& u) const {
  double s = 0.0;
  for (const auto& q : quad_) s += element_energy_impl(*problem_, q, u);
  return s;
}

double Assembler::element_energy(const Eigen::VectorXd& u, int e) const {
  return element_energy_impl(*problem_, element(e), u);
}

Eigen::VectorXd Assembler::residual(const Eigen::VectorXd& u, const Constraints* constraints) const {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(space_->num_dofs());
  const ProblemDef& pb = *problem_;
  for (const auto& q : quad_) {
    const Eigen::VectorXd c = gather(u, q.dofs);
    const Eigen::VectorXd val = q.N * c;
    const Eigen::VectorXd gx = q.Gx * c;
    const bool two_d = q.Gy.size() > 0;
    const Eigen::VectorXd gy = two_d ? Eigen::VectorXd(q.Gy * c) : Eigen::VectorXd::Zero(gx.size());
    const Eigen::Index nq = val.size();
    Eigen::VectorXd a(nq), bx(nq), by(nq);
    for (Eigen::Index i = 0; i < nq; ++i) {
      const Point d = pb.dmu({gx[i], gy[i]});
      a[i] = q.weights[i] * (pb.dg(val[i]) - q.load[i]);
      bx[i] = q.weights[i] * d[0];
      by[i] = q.weights[i] * d[1];
    }
    Eigen::VectorXd local = q.N.transpose() * a + q.Gx.transpose() * bx;
    if (two_d) local.noalias() += q.Gy.transpose() * by;
    for (std::size_t j = 0; j < q.dofs.size(); ++j) r[q.dofs[j]] += local[j];
  }
  if (constraints) constraints->zero(r);
  return r;
}

SparseMatrix Assembler::jacobian(const Eigen::VectorXd& u, const Constraints* constraints) const {
  const ProblemDef& pb = *problem_;
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& q : quad_) {
    const Eigen::VectorXd c = gather(u, q.dofs);
    const Eigen::VectorXd val = q.N * c;
    const Eigen::VectorXd gx = q.Gx * c;
    const bool two_d = q.Gy.size() > 0;
    const Eigen::VectorXd gy = two_d ? Eigen::VectorXd(q.Gy * c) : Eigen::VectorXd::Zero(gx.size());
    const Eigen::Index nq = val.size();
    Eigen::VectorXd m(nq), dxx(nq), dxy(nq), dyy(nq);
    for (Eigen::Index i = 0; i < nq; ++i) {
      const Sym2 h = pb.d2mu({gx[i], gy[i]});
      m[i] = q.weights[i] * pb.d2g(val[i]);
      dxx[i] = q.weights[i] * h.xx;
      dxy[i] = q.weights[i] * h.xy;
      dyy[i] = q.weights[i] * h.yy;
    }
    Eigen::MatrixXd K = q.N.transpose() * m.asDiagonal() * q.N;
    if (two_d) {
      const Eigen::MatrixXd Fx = dxx.asDiagonal() * q.Gx + dxy.asDiagonal() * q.Gy;
      const Eigen::MatrixXd Fy = dxy.asDiagonal() * q.Gx + dyy.asDiagonal() * q.Gy;
      K.noalias() += q.Gx.transpose() * Fx;
      K.noalias() += q.Gy.transpose() * Fy;
    } else {
      K.noalias() += q.Gx.transpose() * dxx.asDiagonal() * q.Gx;
    }
    const int n = static_cast<int>(q.dofs.size());
    for (int a = 0; a < n; ++a) {
      const int ia = q.dofs[a];
      if (constraints && constraints->fixed[ia]) continue;
      for (int b = 0; b < n; ++b) {
        const int ib = q.dofs[b];
        if (constraints && constraints->fixed[ib]) continue;
        trip.emplace_back(ia, ib, K(a, b));
      }
    }
  }
  if (constraints)
    for (int i = 0; i < constraints->size(); ++i)
      if (constraints->fixed[i]) trip.emplace_back(i, i, 1.0);
  SparseMatrix J(space_->num_dofs(), space_->num_dofs());
  J.setFromTriplets(trip.begin(), trip.end());
  return J;
}

SparseMatrix Assembler::mass(const Constraints* constraints) const {
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& q : quad_) {
    const Eigen::MatrixXd M = q.N.transpose() * q.weights.asDiagonal() * q.N;
    const int n = static_cast<int>(q.dofs.size());
    for (int a = 0; a < n; ++a) {
      if (constraints && constraints->fixed[q.dofs[a]]) continue;
      for (int b = 0; b < n; ++b) {
        if (constraints && constraints->fixed[q.dofs[b]]) continue;
        trip.emplace_back(q.dofs[a], q.dofs[b], M(a, b));
      }
    }
  }
  if (constraints)
    for (int i = 0; i < constraints->size(); ++i)
      if (constraints->fixed[i]) trip.emplace_back(i, i, 1.0);
  SparseMatrix M(space_->num_dofs(), space_->num_dofs());
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

double energy(const Space& space, const ProblemDef& problem, const Eigen::VectorXd& u) {
  return Assembler(space, problem).energy(u);
}

double element_energy(const Space& space, const ProblemDef& problem, const Eigen::VectorXd& u, int e) {
  return element_energy_impl(problem, element_quadrature(space, problem, e), u);
}

Eigen::VectorXd residual(const Space& space, const ProblemDef& problem, const Eigen::VectorXd& u,
                         const Constraints& constraints) {
  return Assembler(space, problem).residual(u, &constraints);
}

SparseMatrix jacobian(const Space& space, const ProblemDef& problem, const Eigen::VectorXd& u,
                      const Constraints* constraints) {
  return Assembler(space, problem).jacobian(u, constraints);
}

}  // namespace hpe
