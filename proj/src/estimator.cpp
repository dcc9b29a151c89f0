#include "hpe/estimator.hpp"

#include <cmath>

#include "hpe/quadrature.hpp"

namespace hpe {

std::vector<BoundaryPoint> element_boundary_points(const Mesh& mesh, int e, int npts) {
  std::vector<BoundaryPoint> out;
  const auto c = mesh.corners(e);
  if (mesh.dim() == 1) {
    out.push_back({c[1], 1.0, {1.0, 0.0}});
    out.push_back({c[0], 1.0, {-1.0, 0.0}});
    return out;
  }
  const QuadratureRule& gl = gauss_legendre(npts);
  for (int i = 0; i < 3; ++i) {
    const Point a = c[(i + 1) % 3];
    const Point b = c[(i + 2) % 3];
    const Point d = b - a;
    const double len = norm(d);
    const Point n{d[1] / len, -d[0] / len};
    const Point m = midpoint(a, b);
    for (const auto& [s, t] : {std::pair{a, m}, std::pair{m, b}})
      for (std::size_t q = 0; q < gl.size(); ++q) {
        const double u = gl.points[q][0];
        out.push_back({(1.0 - u) * s + u * t, 0.5 * len * gl.weights[q], n});
      }
  }
  return out;
}

double flux_average(const Point& q_plus, const std::optional<Point>& q_minus, const Point& normal) {
  const Point q = q_minus ? 0.5 * (q_plus + *q_minus) : q_plus;
  return dot(q, normal);
}

namespace {

std::vector<int> leaves_where(const Patch& patch, bool center) {
  std::vector<int> out;
  for (int e : patch.mesh.leaves())
    if ((patch.origin(e) == 0) == center) out.push_back(e);
  return out;
}

}  // namespace

FluxField reference_flux(const Patch& refined, const FEFunction& u_ref, const ProblemDef& problem, int npts) {
  const Mesh& mesh = refined.mesh;
  const std::vector<int> inner = leaves_where(refined, true);
  const std::vector<int> outer = leaves_where(refined, false);
  FluxField field;
  for (const auto& bp : element_boundary_points(mesh, 0, npts)) {
    const int ein = locate(mesh, inner, bp.x);
    if (ein < 0) throw MeshError("reference_flux: boundary point outside the centre element");
    const Point qin = problem.dmu(u_ref.evaluate_at(ein, bp.x).second);
    std::optional<Point> qout;
    if (const int eout = locate(mesh, outer, bp.x); eout >= 0) qout = problem.dmu(u_ref.evaluate_at(eout, bp.x).second);
    field.points.push_back({bp.x, bp.weight, flux_average(qin, qout, bp.normal)});
  }
  return field;
}

FluxField function_flux(const FEFunction& w, const ProblemDef& problem, int e, int npts) {
  const Space& space = w.space();
  const Mesh& mesh = space.mesh();
  const Topology& topo = space.topology();
  const auto pts = element_boundary_points(mesh, e, npts);
  const std::size_t per_face = pts.size() / (mesh.dim() + 1);
  FluxField field;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto& bp = pts[k];
    const int nb = topo.neighbor(e, static_cast<int>(k / per_face));
    const Point qin = problem.dmu(w.evaluate_at(e, bp.x).second);
    std::optional<Point> qout;
    if (nb >= 0) qout = problem.dmu(w.evaluate_at(nb, bp.x).second);
    field.points.push_back({bp.x, bp.weight, flux_average(qin, qout, bp.normal)});
  }
  return field;
}

FluxField exact_flux(const Mesh& mesh, const ProblemDef& problem, int e, int npts) {
  FluxField field;
  for (const auto& bp : element_boundary_points(mesh, e, npts))
    field.points.push_back({bp.x, bp.weight, dot(problem.dmu(problem.exact_grad(bp.x)), bp.normal)});
  return field;
}

double local_modified_energy(double energy_on_kappa, const FluxField& flux,
                             const std::function<double(const Point&)>& trace) {
  double s = 0.0;
  for (const auto& fp : flux.points) s += fp.weight * fp.normal_flux * trace(fp.x);
  return energy_on_kappa - s;
}

double modified_energy(const Assembler& global, const FEFunction& u, int e, const FluxField& flux) {
  return local_modified_energy(global.element_energy(u.coeffs(), e), flux,
                               [&](const Point& x) { return u.value_at(e, x); });
}

double modified_energy(const Assembler& local, const Patch& patch, const FEFunction& v, const FluxField& flux) {
  const std::vector<int> inner = leaves_where(patch, true);
  double ek = 0.0;
  for (int e : inner) ek += local.element_energy(v.coeffs(), e);
  return local_modified_energy(ek, flux, [&](const Point& x) {
    const int e = locate(patch.mesh, inner, x);
    if (e < 0) throw MeshError("modified_energy: trace point outside the centre element");
    return v.value_at(e, x);
  });
}

double predicted_reduction(double modified_uhp, double modified_candidate) {
  return modified_uhp - modified_candidate;
}

ErrorNorms error_norms(const ProblemDef& problem, const FEFunction& u_hp, int extra) {
  const Space& space = u_hp.space();
  ErrorNorms out;
  const Assembler assembler(space, problem, extra);
  out.energy = assembler.energy(u_hp.coeffs());
  if (!problem.has_exact()) return out;
  out.has_exact = true;

  const double pn = problem.norm_exponent;
  double exact_energy = 0.0, en = 0.0, lp = 0.0, w1p = 0.0;
  for (int e : space.leaves()) {
    const ElementQuadrature& q = assembler.element(e);
    Eigen::VectorXd c(q.dofs.size());
    for (std::size_t j = 0; j < q.dofs.size(); ++j) c[j] = u_hp.coeffs()[q.dofs[j]];
    const Eigen::VectorXd val = q.N * c;
    const Eigen::VectorXd gx = q.Gx * c;
    const Eigen::VectorXd gy = q.Gy.size() ? Eigen::VectorXd(q.Gy * c) : Eigen::VectorXd::Zero(gx.size());
    for (Eigen::Index i = 0; i < val.size(); ++i) {
      const Point& x = q.points[i];
      const double w = q.weights[i];
      const double ue = problem.exact(x);
      Point ge = problem.exact_grad(x);
      if (space.dim() == 1) ge[1] = 0.0;
      const double ev = ue - val[i];
      const double eg = norm(Point{ge[0] - gx[i], ge[1] - gy[i]});
      exact_energy += w * (problem.mu(ge) + problem.g(ue) - q.load[i] * ue);
      lp += w * std::pow(std::abs(ev), pn);
      w1p += w * std::pow(eg, pn);
      switch (problem.energy_norm) {
        case EnergyNormKind::Weighted: en += w * (problem.energy_norm_weight * eg * eg + ev * ev); break;
        case EnergyNormKind::H1: en += w * (eg * eg + ev * ev); break;
        case EnergyNormKind::W1pSemi: en += w * std::pow(eg, pn); break;
      }
    }
  }
  if (problem.exact_energy) exact_energy = *problem.exact_energy;
  out.energy_gap = std::abs(exact_energy - out.energy);
  out.err_Lp = std::pow(lp, 1.0 / pn);
  out.err_W1p = std::pow(w1p, 1.0 / pn);
  out.err_energy_norm = problem.energy_norm == EnergyNormKind::W1pSemi ? std::pow(en, 1.0 / pn) : std::sqrt(en);
  return out;
}

}  // namespace hpe
