#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hpe/forms.hpp"
#include "hpe/problem.hpp"

using hpe::Degrees;
using hpe::Mesh;
using hpe::operator*;
using hpe::operator+;
using hpe::operator-;
using hpe::Point;
using hpe::ProblemDef;
using hpe::Space;
using hpe::operator*;
using hpe::operator+;
using hpe::operator-;

namespace {

ProblemDef dirichlet_energy(int dim) {
  ProblemDef p;
  p.name = "dirichlet";
  p.dim = dim;
  p.mu = [](const Point& xi) { return 0.5 * hpe::dot(xi, xi); };
  p.dmu = [](const Point& xi) { return xi; };
  p.d2mu = [](const Point&) { return hpe::Sym2{1.0, 0.0, 1.0}; };
  p.g = [](double) { return 0.0; };
  p.dg = [](double) { return 0.0; };
  p.d2g = [](double) { return 0.0; };
  p.f = [](const Point&) { return 0.0; };
  p.dirichlet = [](const Point&) { return 0.0; };
  p.linear = true;
  return p;
}

Eigen::VectorXd random_vector(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> U(-scale, scale);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = U(rng);
  return v;
}

// Composite Simpson on [0,1], the oracle for 1D integrals.
template <class F>
double simpson(F&& f, int n = 20000) {
  const double h = 1.0 / n;
  double s = f(0.0) + f(1.0);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

// Second-order central difference of the divergence of a flux field.
double divergence(const std::function<Point(const Point&)>& q, const Point& x, double h = 1e-4) {
  const double dx = (q({x[0] + h, x[1]})[0] - q({x[0] - h, x[1]})[0]) / (2 * h);
  const double dy = (q({x[0], x[1] + h})[1] - q({x[0], x[1] - h})[1]) / (2 * h);
  return dx + dy;
}

}  // namespace

TEST(Energy, HatOnTwoElements) {
  const Mesh m = Mesh::interval(0.0, 1.0, 2);
  const Space s(m, Degrees{1, 1});
  Eigen::VectorXd u = Eigen::VectorXd::Zero(s.num_dofs());
  u[s.vertex_dof(1)] = 1.0;
  // ½∫u_x² with slope ±2 on two halves: ½·4·1 = 2.
  EXPECT_NEAR(hpe::energy(s, dirichlet_energy(1), u), 2.0, 1e-14);
}

TEST(Energy, ZeroFunctionGivesIntegralOfGAtZero) {
  for (const char* name : {"ex1", "ex2", "ex3"}) {
    const ProblemDef pb = hpe::builtin_problem(name);
    const Mesh m = hpe::builtin_mesh(name);
    const Space s(m, Degrees(m.num_elements(), 2));
    const Eigen::VectorXd z = Eigen::VectorXd::Zero(s.num_dofs());
    const double mu0 = pb.mu({0.0, 0.0});
    EXPECT_NEAR(hpe::energy(s, pb, z), (mu0 + pb.g(0.0)) * m.total_measure(), 1e-14) << name;
  }
}

TEST(Energy, ReactionDiffusionExactEnergyClosedForm) {
  const ProblemDef pb = hpe::make_reaction_diffusion_1d(1.0);
  const double closed = -0.5 * (1.0 - 2.0 * (std::exp(1.0) - 1.0) / (std::exp(1.0) + 1.0));
  ASSERT_TRUE(pb.exact_energy);
  EXPECT_NEAR(*pb.exact_energy, closed, 1e-15);
  EXPECT_NEAR(closed, -0.0378835, 5e-6);
  // Independent evaluation of ∫ ½u'² + ½u² − u at u*.
  const double e = simpson([&](double x) {
    const double u = pb.exact({x, 0.0});
    const double du = pb.exact_grad({x, 0.0})[0];
    return 0.5 * du * du + 0.5 * u * u - u;
  });
  EXPECT_NEAR(e, closed, 1e-12);
}

TEST(ElementEnergy, SumsToTotal) {
  std::mt19937_64 rng(5);
  for (const char* name : {"ex1", "ex2", "ex3"}) {
    const ProblemDef pb = hpe::builtin_problem(name);
    const Mesh m = hpe::builtin_mesh(name);
    const Space s(m, Degrees(m.num_elements(), 3));
    const hpe::Assembler A(s, pb);
    const Eigen::VectorXd u = random_vector(s.num_dofs(), rng);
    double sum = 0.0;
    for (int e : s.leaves()) sum += A.element_energy(u, e);
    EXPECT_NEAR(sum, A.energy(u), 1e-12 * std::abs(A.energy(u))) << name;
  }
}

TEST(ElementEnergy, SingleElementEqualsEnergy) {
  const Mesh m = Mesh::triangles({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  const Space s(m, Degrees{4});
  std::mt19937_64 rng(1);
  const Eigen::VectorXd u = random_vector(s.num_dofs(), rng);
  const ProblemDef pb = hpe::builtin_problem("ex3");
  EXPECT_DOUBLE_EQ(hpe::element_energy(s, pb, u, 0), hpe::energy(s, pb, u));
}

TEST(Residual, MatchesEnergyDifferences) {
  std::mt19937_64 rng(9);
  for (const char* name : {"ex1", "ex2", "ex3"}) {
    const ProblemDef pb = hpe::builtin_problem(name);
    const Mesh m = hpe::builtin_mesh(name);
    const Space s(m, Degrees(m.num_elements(), 3));
    const hpe::Assembler A(s, pb);
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::VectorXd u = random_vector(s.num_dofs(), rng);
      const Eigen::VectorXd r = A.residual(u);
      const double t = 1e-5;
      for (int i = 0; i < s.num_dofs(); i += 3) {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(s.num_dofs());
        d[i] = 1.0;
        const double fd = (A.energy(u + t * d) - A.energy(u - t * d)) / (2 * t);
        EXPECT_NEAR(fd, r[i], 1e-6 * std::max(1.0, std::abs(r[i]))) << name << " dof " << i;
      }
    }
  }
}

TEST(Residual, LinearProblemIsStiffnessTimesU) {
  const ProblemDef pb = hpe::builtin_problem("ex1");
  const Mesh m = Mesh::interval(0.0, 1.0, 5);
  const Space s(m, Degrees(5, 3));
  const hpe::Assembler A(s, pb);
  std::mt19937_64 rng(2);
  const Eigen::VectorXd u = random_vector(s.num_dofs(), rng);
  const Eigen::VectorXd F = -A.residual(Eigen::VectorXd::Zero(s.num_dofs()));
  const Eigen::VectorXd Ku = A.jacobian(u) * u;
  EXPECT_LE((A.residual(u) - (Ku - F)).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(Residual, ConstrainedRowsVanish) {
  const ProblemDef pb = hpe::builtin_problem("ex2");
  const Mesh m = hpe::builtin_mesh("ex2");
  const Space s(m, Degrees(m.num_elements(), 2));
  const auto c = hpe::constrain_dirichlet(s, [&](const Point& x, int, int) { return pb.dirichlet(x); });
  std::mt19937_64 rng(4);
  Eigen::VectorXd u = random_vector(s.num_dofs(), rng);
  c.apply(u);
  const Eigen::VectorXd r = hpe::residual(s, pb, u, c);
  for (int i = 0; i < c.size(); ++i)
    if (c.fixed[i]) EXPECT_EQ(r[i], 0.0);
}

TEST(Jacobian, MatchesResidualDifferencesAndIsSymmetric) {
  std::mt19937_64 rng(13);
  for (const char* name : {"ex1", "ex2", "ex3"}) {
    const ProblemDef pb = hpe::builtin_problem(name);
    const Mesh m = hpe::builtin_mesh(name);
    const Space s(m, Degrees(m.num_elements(), 3));
    const hpe::Assembler A(s, pb);
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::VectorXd u = random_vector(s.num_dofs(), rng);
      const Eigen::VectorXd d = random_vector(s.num_dofs(), rng);
      const hpe::SparseMatrix J = A.jacobian(u);
      const double t = 1e-6;
      const Eigen::VectorXd fd = (A.residual(u + t * d) - A.residual(u - t * d)) / (2 * t);
      const Eigen::VectorXd Jd = J * d;
      EXPECT_LE((fd - Jd).norm(), 1e-5 * std::max(1.0, Jd.norm())) << name;
      const Eigen::MatrixXd Jm(J);
      EXPECT_LE((Jm - Jm.transpose()).lpNorm<Eigen::Infinity>(), 1e-12 * Jm.lpNorm<Eigen::Infinity>());
    }
  }
}

TEST(Jacobian, QuadraticEnergyGivesStiffnessPlusMass) {
  const ProblemDef pb = hpe::make_reaction_diffusion_1d(1.0);
  const Mesh m = Mesh::interval(0.0, 1.0, 3);
  const Space s(m, Degrees(3, 1));
  const hpe::Assembler A(s, pb);
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd J1(A.jacobian(random_vector(s.num_dofs(), rng)));
  const Eigen::MatrixXd J2(A.jacobian(random_vector(s.num_dofs(), rng)));
  EXPECT_LE((J1 - J2).norm(), 1e-14);
  // Linear elements, h = 1/3: diagonal of K + M at an interior node is 2/h + 2h/3.
  const double h = 1.0 / 3.0;
  EXPECT_NEAR(J1(s.vertex_dof(1), s.vertex_dof(1)), 2.0 / h + 2.0 * h / 3.0, 1e-13);
  EXPECT_NEAR(J1(s.vertex_dof(1), s.vertex_dof(2)), -1.0 / h + h / 6.0, 1e-13);
}

TEST(Jacobian, ConstrainedRowsAreIdentity) {
  const ProblemDef pb = hpe::builtin_problem("ex3");
  const Mesh m = hpe::builtin_mesh("ex3");
  const Space s(m, Degrees(m.num_elements(), 2));
  const auto c = hpe::constrain_dirichlet(s, [&](const Point& x, int, int) { return pb.dirichlet(x); });
  const Eigen::MatrixXd J(hpe::jacobian(s, pb, Eigen::VectorXd::Ones(s.num_dofs()), &c));
  for (int i = 0; i < c.size(); ++i) {
    if (!c.fixed[i]) continue;
    for (int j = 0; j < c.size(); ++j) {
      EXPECT_EQ(J(i, j), i == j ? 1.0 : 0.0);
      EXPECT_EQ(J(j, i), i == j ? 1.0 : 0.0);
    }
  }
}

TEST(Quadrature, PolynomialEnergyIsExact) {
  // ½∫|∇u|² for u = x³y² on the unit square: ½∫(9x⁴y⁴ + 4x⁶y²) = ½(9/25 + 4/21).
  const Mesh m = hpe::unit_square_mesh();
  const Space s(m, Degrees(m.num_elements(), 5));
  hpe::ProblemDef pb = dirichlet_energy(2);
  // Interpolate through the patch-free route: solve the Poisson problem whose
  // solution is x³y² (in the space, so reproduced exactly).
  pb.f = [](const Point& x) { return -(6 * x[0] * x[1] * x[1] + 2 * x[0] * x[0] * x[0]); };
  pb.dirichlet = [](const Point& x) { return x[0] * x[0] * x[0] * x[1] * x[1]; };
  const auto c = hpe::constrain_dirichlet(s, [&](const Point& x, int, int) { return pb.dirichlet(x); });
  const hpe::Assembler A(s, pb);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(s.num_dofs());
  c.apply(u);
  const Eigen::VectorXd r = A.residual(u, &c);
  Eigen::SimplicialLDLT<hpe::SparseMatrix> ldlt(A.jacobian(u, &c));
  u -= ldlt.solve(r);
  pb.f = [](const Point&) { return 0.0; };
  EXPECT_NEAR(hpe::Assembler(s, pb).energy(u), 0.5 * (9.0 / 25.0 + 4.0 / 21.0), 1e-12);
}

TEST(BuiltinProblem, ReactionDiffusionExactSolution) {
  const ProblemDef pb = hpe::builtin_problem("ex1");
  EXPECT_NEAR(pb.exact({0.0, 0.0}), 0.0, 1e-15);
  EXPECT_NEAR(pb.exact({1.0, 0.0}), 0.0, 1e-15);
  // −εu'' + u = 1 at x = ½ with a wide stencil (the layer is far away).
  const double eps = 1e-5, h = 1e-3;
  const double u0 = pb.exact({0.5, 0.0});
  const double upp = (pb.exact({0.5 + h, 0.0}) - 2 * u0 + pb.exact({0.5 - h, 0.0})) / (h * h);
  EXPECT_NEAR(-eps * upp + u0, 1.0, 1e-9);
  // Also inside the layer, using the analytical derivative for u''.
  const double x = 0.002, k = 1.0 / std::sqrt(eps);
  const double d2 = (pb.exact_grad({x + 1e-7, 0.0})[0] - pb.exact_grad({x - 1e-7, 0.0})[0]) / 2e-7;
  EXPECT_NEAR(-eps * d2 + pb.exact({x, 0.0}), 1.0, 1e-6);
  EXPECT_GT(1.0 - pb.exact({x, 0.0}), std::exp(-k * x) / 2);
}

TEST(BuiltinProblem, LShapeSolutionIsHarmonic) {
  const ProblemDef pb = hpe::builtin_problem("ex2");
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-0.9, 0.9);
  for (int i = 0; i < 50; ++i) {
    Point x{U(rng), U(rng)};
    if (x[0] > -0.1 && x[1] < 0.1) continue;  // outside the domain or near the cut
    if (std::hypot(x[0], x[1]) < 0.1) continue;
    const double h = 1e-4;
    auto u = [&](double a, double b) { return pb.exact({a, b}); };
    const double lap = (u(x[0] + h, x[1]) + u(x[0] - h, x[1]) + u(x[0], x[1] + h) + u(x[0], x[1] - h) -
                        4 * u(x[0], x[1])) / (h * h);
    EXPECT_NEAR(lap, 0.0, 1e-5);
  }
}

TEST(BuiltinProblem, LoadsMatchFluxDivergence) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(0.1, 0.9);
  const ProblemDef ex2 = hpe::builtin_problem("ex2");
  const ProblemDef ex3 = hpe::builtin_problem("ex3");
  // Oracle forms of the loads, written out independently.
  auto f2 = [](const Point& x) {
    const double r = std::hypot(x[0], x[1]);
    double phi = std::atan2(x[1], x[0]);
    if (phi < 0) phi += 2 * M_PI;
    return -(16.0 / 81.0) / (r * r) * std::exp(-(4.0 / 9.0) * std::pow(r, -2.0 / 3.0)) * std::sin(2.0 * phi / 3.0);
  };
  auto f3 = [](const Point& x) { return -(9.0 / 32.0) * std::pow(std::hypot(x[0], x[1]), -1.5); };
  for (int i = 0; i < 40; ++i) {
    const Point x{U(rng), U(rng)};
    const Point y{-x[0], x[1]};
    auto q2 = [&](const Point& z) { return ex2.dmu(ex2.exact_grad(z)); };
    auto q3 = [&](const Point& z) { return ex3.dmu(ex3.exact_grad(z)); };
    EXPECT_NEAR(-divergence(q2, y) - ex2.f(y), 0.0, 1e-4);
    EXPECT_NEAR(ex2.f(y), f2(y), 1e-14);
    EXPECT_NEAR(-divergence(q3, x) - ex3.f(x), 0.0, 1e-4);
    EXPECT_NEAR(ex3.f(x), f3(x), 1e-13);
  }
}

TEST(BuiltinProblem, DerivativesConsistentAndConvex) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-2, 2), T(0.05, 0.95);
  for (const char* name : {"ex1", "ex2", "ex3"}) {
    const ProblemDef pb = hpe::builtin_problem(name);
    for (int i = 0; i < 50; ++i) {
      Point xi{U(rng), pb.dim == 1 ? 0.0 : U(rng)};
      const double h = 1e-5;
      for (int k = 0; k < pb.dim; ++k) {
        Point a = xi, b = xi;
        a[k] += h;
        b[k] -= h;
        EXPECT_NEAR((pb.mu(a) - pb.mu(b)) / (2 * h), pb.dmu(xi)[k], 1e-7 * std::max(1.0, std::abs(pb.dmu(xi)[k])));
        const hpe::Sym2 H = pb.d2mu(xi);
        const double col0 = (pb.dmu(a)[0] - pb.dmu(b)[0]) / (2 * h);
        EXPECT_NEAR(col0, k == 0 ? H.xx : H.xy, 1e-6 * std::max(1.0, std::abs(H.xx)));
      }
      const Point zeta{U(rng), pb.dim == 1 ? 0.0 : U(rng)};
      const double t = T(rng);
      const Point mid = xi + t * (zeta - xi);
      EXPECT_LT(pb.mu(mid), (1 - t) * pb.mu(xi) + t * pb.mu(zeta)) << name;
    }
  }
}

TEST(BuiltinProblem, QuasilinearHessianPositiveDefinite) {
  const ProblemDef pb = hpe::builtin_problem("ex2");
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const hpe::Sym2 H = pb.d2mu({U(rng), U(rng)});
    EXPECT_GT(H.xx, 0.0);
    EXPECT_GT(H.xx * H.yy - H.xy * H.xy, 0.0);
  }
}

TEST(BuiltinProblem, UnknownNameRejected) { EXPECT_THROW(hpe::builtin_problem("ex9"), hpe::ProblemError); }
