#include "hpe/problem.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hpe/quadrature.hpp"

namespace hpe {
namespace {

constexpr double kPi = std::numbers::pi;

/// Polar angle in [0, 2π).
double polar_angle(const Point& x) {
  double phi = std::atan2(x[1], x[0]);
  if (phi < 0.0) phi += 2.0 * kPi;
  return phi;
}

/// ∫ over a star-shaped polygonal region around the origin in polar form.
/// `radius(phi)` is the distance to the boundary, `integrand(r, phi)`.
/// r = R t^3 absorbs weak r^a singularities at the origin.
double polar_integral(double phi0, double phi1, int sectors, const std::function<double(double)>& radius,
                      const std::function<double(double, double)>& integrand) {
  const QuadratureRule& gp = gauss_legendre(48);
  const QuadratureRule& gr = gauss_legendre(64);
  double total = 0.0;
  const double dphi = (phi1 - phi0) / sectors;
  for (int s = 0; s < sectors; ++s) {
    for (std::size_t i = 0; i < gp.size(); ++i) {
      const double phi = phi0 + dphi * (s + gp.points[i][0]);
      const double R = radius(phi);
      double inner = 0.0;
      for (std::size_t j = 0; j < gr.size(); ++j) {
        const double t = gr.points[j][0];
        const double r = R * t * t * t;
        inner += gr.weights[j] * integrand(r, phi) * r * 3.0 * R * t * t;
      }
      total += gp.weights[i] * dphi * inner;
    }
  }
  return total;
}

}  // namespace

ProblemDef make_reaction_diffusion_1d(double epsilon) {
  if (!(epsilon > 0.0)) throw ProblemError("epsilon must be positive");
  ProblemDef p;
  p.name = "ex1";
  p.dim = 1;
  p.mu = [epsilon](const Point& xi) { return 0.5 * epsilon * xi[0] * xi[0]; };
  p.dmu = [epsilon](const Point& xi) { return Point{epsilon * xi[0], 0.0}; };
  p.d2mu = [epsilon](const Point&) { return Sym2{epsilon, 0.0, epsilon}; };
  p.g = [](double u) { return 0.5 * u * u; };
  p.dg = [](double u) { return u; };
  p.d2g = [](double) { return 1.0; };
  p.f = [](const Point&) { return 1.0; };
  p.dirichlet = [](const Point&) { return 0.0; };

  // u* = 1 - cosh(k(x-1/2)) / cosh(k/2), k = 1/sqrt(eps), written without
  // overflow for small eps.
  const double k = 1.0 / std::sqrt(epsilon);
  const double denom = 1.0 + std::exp(-k);
  p.exact = [k, denom](const Point& x) {
    const double d = std::abs(x[0] - 0.5);
    return 1.0 - std::exp(k * (d - 0.5)) * (1.0 + std::exp(-2.0 * k * d)) / denom;
  };
  p.exact_grad = [k, denom](const Point& x) {
    const double s = x[0] - 0.5;
    const double d = std::abs(s);
    const double sgn = s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
    return Point{-k * sgn * std::exp(k * (d - 0.5)) * (1.0 - std::exp(-2.0 * k * d)) / denom, 0.0};
  };
  // E(u*) = -1/2 ∫u*, ∫u* = 1 - (2/k) tanh(k/2).
  p.exact_energy = -0.5 * (1.0 - 2.0 / k * std::tanh(0.5 * k));
  p.norm_exponent = 2.0;
  p.energy_norm = EnergyNormKind::Weighted;
  p.energy_norm_weight = epsilon;
  p.linear = true;
  return p;
}

ProblemDef make_quasilinear_lshape() {
  ProblemDef p;
  p.name = "ex2";
  p.dim = 2;
  p.mu = [](const Point& xi) {
    const double s = dot(xi, xi);
    return 0.5 * (s - std::exp(-s));
  };
  p.dmu = [](const Point& xi) {
    const double c = 1.0 + std::exp(-dot(xi, xi));
    return Point{c * xi[0], c * xi[1]};
  };
  p.d2mu = [](const Point& xi) {
    const double e = std::exp(-dot(xi, xi));
    return Sym2{1.0 + e - 2.0 * e * xi[0] * xi[0], -2.0 * e * xi[0] * xi[1], 1.0 + e - 2.0 * e * xi[1] * xi[1]};
  };
  p.g = [](double) { return 0.0; };
  p.dg = [](double) { return 0.0; };
  p.d2g = [](double) { return 0.0; };
  p.exact = [](const Point& x) {
    const double r = norm(x);
    return std::pow(r, 2.0 / 3.0) * std::sin(2.0 / 3.0 * polar_angle(x));
  };
  p.exact_grad = [](const Point& x) {
    const double r = norm(x);
    const double phi = polar_angle(x);
    const double c = 2.0 / 3.0 * std::pow(r, -1.0 / 3.0);
    return Point{-c * std::sin(phi / 3.0), c * std::cos(phi / 3.0)};
  };
  // f = -div((1 + exp(-|∇u*|^2)) ∇u*) with u* harmonic.
  p.f = [](const Point& x) {
    const double r = norm(x);
    if (r == 0.0) return 0.0;
    return -16.0 / 81.0 / (r * r) * std::exp(-4.0 / 9.0 * std::pow(r, -2.0 / 3.0)) *
           std::sin(2.0 / 3.0 * polar_angle(x));
  };
  p.dirichlet = p.exact;
  p.norm_exponent = 2.0;
  p.energy_norm = EnergyNormKind::H1;
  p.singular_point = Point{0.0, 0.0};
  p.quadrature_bump = 4;

  // Distance from the origin to the boundary of (-1,1)^2 along a ray.
  auto radius = [](double phi) { return 1.0 / std::max(std::abs(std::cos(phi)), std::abs(std::sin(phi))); };
  auto integrand = [mu = p.mu, f = p.f, u = p.exact, du = p.exact_grad](double r, double phi) {
    const Point x{r * std::cos(phi), r * std::sin(phi)};
    if (r == 0.0) return 0.0;
    return mu(du(x)) - f(x) * u(x);
  };
  p.exact_energy = polar_integral(0.0, 1.5 * kPi, 6, radius, integrand);
  return p;
}

ProblemDef make_p_laplacian(double pexp, double alpha) {
  if (!(pexp > 1.0) || !(alpha > 0.0)) throw ProblemError("p-Laplacian needs p > 1 and alpha > 0");
  constexpr double kDelta = 1e-10;
  ProblemDef p;
  p.name = "ex3";
  p.dim = 2;
  p.mu = [pexp](const Point& xi) { return std::pow(norm(xi), pexp) / pexp; };
  p.dmu = [pexp](const Point& xi) {
    const double n = norm(xi);
    const double c = n == 0.0 ? (pexp >= 2.0 ? 0.0 : std::numeric_limits<double>::infinity()) : std::pow(n, pexp - 2.0);
    return Point{c * xi[0], c * xi[1]};
  };
  p.d2mu = [pexp](const Point& xi) {
    const double n2 = dot(xi, xi) + kDelta * kDelta;
    const double c = std::pow(n2, 0.5 * (pexp - 2.0));
    const double d = (pexp - 2.0) / n2;
    return Sym2{c * (1.0 + d * xi[0] * xi[0]), c * d * xi[0] * xi[1], c * (1.0 + d * xi[1] * xi[1])};
  };
  p.g = [](double) { return 0.0; };
  p.dg = [](double) { return 0.0; };
  p.d2g = [](double) { return 0.0; };
  p.exact = [alpha](const Point& x) { return std::pow(norm(x), alpha); };
  p.exact_grad = [alpha](const Point& x) {
    const double r = norm(x);
    const double c = alpha * std::pow(r, alpha - 2.0);
    return Point{c * x[0], c * x[1]};
  };
  // f = -div(|∇u*|^{p-2} ∇u*) for radial u* = r^alpha.
  const double fc = -std::pow(alpha, pexp - 1.0) * ((alpha - 1.0) * (pexp - 1.0) + 1.0);
  const double fe = (alpha - 1.0) * (pexp - 1.0) - 1.0;
  p.f = [fc, fe](const Point& x) {
    const double r = norm(x);
    return r == 0.0 ? 0.0 : fc * std::pow(r, fe);
  };
  p.dirichlet = p.exact;
  p.norm_exponent = pexp;
  p.energy_norm = EnergyNormKind::W1pSemi;
  p.singular_point = Point{0.0, 0.0};
  p.quadrature_bump = 4;

  auto radius = [](double phi) { return 1.0 / std::max(std::cos(phi), std::sin(phi)); };
  auto integrand = [mu = p.mu, f = p.f, u = p.exact, du = p.exact_grad](double r, double phi) {
    const Point x{r * std::cos(phi), r * std::sin(phi)};
    if (r == 0.0) return 0.0;
    return mu(du(x)) - f(x) * u(x);
  };
  p.exact_energy = polar_integral(0.0, 0.5 * kPi, 2, radius, integrand);
  return p;
}

ProblemDef builtin_problem(const std::string& name) {
  if (name == "ex1") return make_reaction_diffusion_1d(1e-5);
  if (name == "ex2") return make_quasilinear_lshape();
  if (name == "ex3") return make_p_laplacian(3.0, 0.75);
  throw ProblemError("unknown problem '" + name + "' (expected ex1, ex2 or ex3)");
}

Mesh lshape_mesh() {
  std::vector<Point> v = {{-1, -1}, {0, -1}, {-1, 0}, {0, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}};
  std::vector<std::array<int, 3>> cells;
  // Squares as (lower-left, lower-right, upper-right, upper-left).
  const std::array<std::array<int, 4>, 3> squares = {{{0, 1, 3, 2}, {2, 3, 6, 5}, {3, 4, 7, 6}}};
  for (const auto& q : squares) {
    Point c{0.0, 0.0};
    for (int i : q) c = c + 0.25 * v[i];
    v.push_back(c);
    const int ci = static_cast<int>(v.size()) - 1;
    for (int i = 0; i < 4; ++i) cells.push_back({q[i], q[(i + 1) % 4], ci});
  }
  return Mesh::triangles(std::move(v), std::move(cells));
}

Mesh unit_square_mesh() {
  std::vector<Point> v;
  for (int j = 0; j <= 2; ++j)
    for (int i = 0; i <= 2; ++i) v.push_back({0.5 * i, 0.5 * j});
  std::vector<std::array<int, 3>> cells;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) {
      const int a = 3 * j + i, b = a + 1, c = a + 4, d = a + 3;
      cells.push_back({a, b, c});
      cells.push_back({a, c, d});
    }
  return Mesh::triangles(std::move(v), std::move(cells));
}

Mesh builtin_mesh(const std::string& name) {
  if (name == "ex1") return Mesh::interval(0.0, 1.0, 4);
  if (name == "ex2") return lshape_mesh();
  if (name == "ex3") return unit_square_mesh();
  throw ProblemError("no built-in mesh for '" + name + "'");
}

}  // namespace hpe
