#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "hpe/adapt.hpp"
#include "hpe/problem.hpp"

using hpe::Decision;
using hpe::Degrees;
using hpe::Mesh;
using hpe::Point;
using hpe::ProblemDef;
using hpe::Space;

namespace {

ProblemDef quadratic_poisson() {
  ProblemDef p;
  p.name = "quadratic";
  p.dim = 2;
  p.mu = [](const Point& xi) { return 0.5 * hpe::dot(xi, xi); };
  p.dmu = [](const Point& xi) { return xi; };
  p.d2mu = [](const Point&) { return hpe::Sym2{1.0, 0.0, 1.0}; };
  p.g = [](double) { return 0.0; };
  p.dg = [](double) { return 0.0; };
  p.d2g = [](double) { return 0.0; };
  p.exact = [](const Point& x) { return x[0] * x[1] + 0.25 * x[0] * x[0] - x[1]; };
  p.exact_grad = [](const Point& x) { return Point{x[1] + 0.5 * x[0], x[0] - 1.0}; };
  p.f = [](const Point&) { return -0.5; };
  p.dirichlet = p.exact;
  p.linear = true;
  return p;
}

std::vector<int> leaf_children(const Mesh& m, int e) {
  std::vector<int> out;
  for (int c : m.element(e).children)
    if (m.element(c).is_leaf()) out.push_back(c);
  return out;
}

}  // namespace

TEST(Mark, Examples) {
  EXPECT_EQ(hpe::mark({10, 4, 2}, 1.0 / 3.0), (std::vector<int>{0, 1}));
  EXPECT_EQ(hpe::mark({0.7}, 1.0 / 3.0), (std::vector<int>{0}));
  EXPECT_EQ(hpe::mark({1, -5}, 1.0 / 3.0), (std::vector<int>{0}));
  EXPECT_TRUE(hpe::mark({0, -1, -2}, 1.0 / 3.0).empty());
  EXPECT_TRUE(hpe::mark({}, 1.0 / 3.0).empty());
  // Strictly above the threshold.
  EXPECT_EQ(hpe::mark({3, 1}, 1.0 / 3.0), (std::vector<int>{0}));
}

TEST(Mark, ThetaOutsideUnitIntervalRejected) {
  EXPECT_THROW(hpe::mark({1}, 0.0), std::invalid_argument);
  EXPECT_THROW(hpe::mark({1}, 1.0), std::invalid_argument);
  EXPECT_THROW(hpe::mark({1}, -0.2), std::invalid_argument);
}

TEST(Mark, ScaleInvariantAndMonotoneInTheta) {
  const std::vector<double> r{0.3, 1e-4, 2.5, -1.0, 0.9, 0.0, 1.7, 0.05};
  std::vector<double> scaled;
  for (double x : r) scaled.push_back(1e-7 * x);
  std::vector<int> previous = hpe::mark(r, 0.01);
  for (double theta : {0.01, 0.1, 0.2, 1.0 / 3.0, 0.5, 0.7, 0.99}) {
    const auto m = hpe::mark(r, theta);
    EXPECT_EQ(m, hpe::mark(scaled, theta));
    EXPECT_TRUE(std::includes(previous.begin(), previous.end(), m.begin(), m.end()));
    EXPECT_FALSE(m.empty());
    previous = m;
  }
}

TEST(ApplyRefinements, IntervalHp) {
  Mesh m = Mesh::interval(0.0, 1.0, 3);
  Degrees d{3, 3, 3};
  hpe::apply_refinements(m, d, {{1, Decision::hp({2, 2})}});
  const auto kids = m.element(1).children;
  ASSERT_EQ(kids.size(), 2u);
  EXPECT_EQ(d[kids[0]], 2);
  EXPECT_EQ(d[kids[1]], 2);
  EXPECT_EQ(d[0], 3);
  EXPECT_EQ(d[2], 3);
  EXPECT_EQ(m.num_leaves(), 4);
}

TEST(ApplyRefinements, TriangleP) {
  Mesh m = Mesh::triangles({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  Degrees d{1};
  hpe::apply_refinements(m, d, {{0, Decision::p()}});
  EXPECT_EQ(m.num_elements(), 1);
  EXPECT_EQ(d[0], 2);
}

TEST(ApplyRefinements, TriangleHpWithGreenNeighbours) {
  Mesh m = hpe::unit_square_mesh();
  Degrees d(m.num_elements(), 3);
  const int kappa = 2;
  d[kappa] = 1;
  const double area = m.total_measure();
  hpe::apply_refinements(m, d, {{kappa, Decision::hp({2, 2, 1, 1})}});
  const auto& kids = m.element(kappa).children;
  ASSERT_EQ(kids.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(d[kids[i]], (std::vector<int>{2, 2, 1, 1})[i]);
  // Corner child i touches vertex i of κ.
  for (int i = 0; i < 3; ++i) {
    const auto& v = m.element(kids[i]).v;
    EXPECT_NE(std::find(v.begin(), v.end(), m.element(kappa).v[i]), v.end());
  }
  int greens = 0;
  for (int e : m.leaves()) {
    if (m.element(e).kind != hpe::ElementKind::Green) continue;
    ++greens;
    EXPECT_EQ(d[e], 3);
  }
  EXPECT_GT(greens, 0);
  EXPECT_TRUE(m.is_conforming());
  EXPECT_NEAR(m.total_measure(), area, 1e-12 * area);
  EXPECT_NO_THROW(Space(m, d));
}

TEST(ApplyRefinements, HpOnGreenChildRefinesParent) {
  Mesh m = hpe::unit_square_mesh();
  Degrees d(m.num_elements(), 2);
  hpe::apply_refinements(m, d, {{2, Decision::hp({3, 3, 3, 3})}});
  int green = -1;
  for (int e : m.leaves())
    if (m.element(e).kind == hpe::ElementKind::Green) green = e;
  ASSERT_GE(green, 0);
  const int parent = m.element(green).parent;
  const int sibling = leaf_children(m, parent)[0] == green ? leaf_children(m, parent)[1] : leaf_children(m, parent)[0];
  d[green] = 4;
  d[sibling] = 5;
  hpe::apply_refinements(m, d, {{green, Decision::hp({1, 1, 1, 1})}});
  EXPECT_FALSE(m.element(green).alive);
  const auto kids = leaf_children(m, parent);
  EXPECT_EQ(kids.size(), 4u);
  for (int c : kids) {
    EXPECT_EQ(m.element(c).kind, hpe::ElementKind::Red);
    EXPECT_EQ(d[c], 5);
  }
  EXPECT_TRUE(m.is_conforming());
}

TEST(ApplyRefinements, UntouchedDegreesUnchanged) {
  Mesh m = hpe::lshape_mesh();
  Degrees d(m.num_elements());
  for (int e = 0; e < m.num_elements(); ++e) d[e] = 1 + e % 4;
  const Degrees before = d;
  hpe::apply_refinements(m, d, {{0, Decision::p()}, {5, Decision::hp({1, 2, 1, 2})}});
  EXPECT_EQ(d[0], before[0] + 1);
  for (int e = 1; e < static_cast<int>(before.size()); ++e) {
    if (e == 5 || !m.element(e).is_leaf()) continue;
    EXPECT_EQ(d[e], before[e]) << e;
  }
  EXPECT_TRUE(m.is_conforming());
}

TEST(ApplyRefinements, NonLeafRejected) {
  Mesh m = Mesh::interval(0.0, 1.0, 2);
  Degrees d{1, 1};
  hpe::apply_refinements(m, d, {{0, Decision::hp({1, 1})}});
  EXPECT_THROW(hpe::apply_refinements(m, d, {{0, Decision::p()}}), hpe::MeshError);
}

TEST(Estimate, ExactlyRepresentedSolutionPredictsNothing) {
  const ProblemDef pb = quadratic_poisson();
  const Mesh m = hpe::unit_square_mesh();
  const Space s(m, Degrees(m.num_elements(), 2));
  const hpe::FEFunction u = hpe::solve_global(s, pb, hpe::SolverConfig{});
  const hpe::Assembler A(s, pb);
  hpe::AdaptConfig cfg;
  for (const auto& est : hpe::estimate_all(A, u, cfg, 0)) {
    EXPECT_NEAR(est.p_reduction, 0.0, 1e-10);
    // Tuples with a linear child cannot hold u_hp and can only lose energy.
    for (const auto& [t, r] : est.hp_reductions) {
      if (*std::min_element(t.begin(), t.end()) >= 2)
        EXPECT_NEAR(r, 0.0, 1e-10);
      else
        EXPECT_LT(r, 1e-10);
    }
    EXPECT_NEAR(est.reduction, 0.0, 1e-10);
  }
}

TEST(Estimate, NullCandidateIsZero) {
  for (const char* name : {"ex1", "ex2", "ex3"}) {
    const ProblemDef pb = hpe::builtin_problem(name);
    const Mesh m = hpe::builtin_mesh(name);
    const Space s(m, Degrees(m.num_elements(), 2));
    hpe::AdaptConfig cfg;
    cfg.solver.newton_tol = 1e-12;
    const hpe::FEFunction u = hpe::solve_global(s, pb, cfg.solver);
    const hpe::Assembler A(s, pb);
    for (int e : s.leaves()) EXPECT_NEAR(hpe::null_candidate_reduction(A, u, e, cfg), 0.0, 1e-9) << name << " " << e;
  }
}

TEST(Estimate, CandidateListsAreComplete) {
  const ProblemDef pb = hpe::builtin_problem("ex3");
  const Mesh m = hpe::builtin_mesh("ex3");
  const Space s(m, Degrees(m.num_elements(), 2));
  const hpe::FEFunction u = hpe::solve_global(s, pb, hpe::SolverConfig{});
  const hpe::Assembler A(s, pb);
  hpe::AdaptConfig cfg;
  const auto est = hpe::estimate_element(A, u, m.leaves()[0], cfg);
  ASSERT_EQ(est.hp_reductions.size(), hpe::enumerate_candidates(2, 2).size());
  double best = est.p_reduction;
  for (const auto& [t, r] : est.hp_reductions) best = std::max(best, r);
  EXPECT_EQ(est.reduction, best);
  EXPECT_GT(est.reduction, 0.0);
  cfg.n_max = 3;
  EXPECT_EQ(hpe::estimate_element(A, u, m.leaves()[0], cfg).hp_reductions.size(), 3u);
}

TEST(Estimate, BoundaryLayerIsSubdividedAfterFirstEnrichment) {
  // On the initial quarter-width elements a single quadratic fits the layer
  // better than two linears, so the first step enriches; every later step
  // bisects the element touching the boundary.
  const ProblemDef pb = hpe::builtin_problem("ex1");
  hpe::AdaptState st(hpe::builtin_mesh("ex1"), 1);
  const hpe::AdaptConfig cfg;
  for (int it = 0; it < 4; ++it) {
    hpe::solve_and_record(st, pb, cfg);
    const hpe::Assembler A(*st.space, pb);
    for (int e : st.mesh->leaves()) {
      const auto c = st.mesh->corners(e);
      if (c[0][0] != 0.0 && c[1][0] != 1.0) continue;
      const auto est = hpe::estimate_element(A, *st.u, e, cfg, it);
      EXPECT_EQ(est.best.kind, it == 0 ? Decision::Kind::P : Decision::Kind::HP) << "iteration " << it;
      EXPECT_GT(est.reduction, 0.0);
    }
    hpe::refine_step(st, pb, cfg);
  }
}

TEST(Estimate, ThreadCountDoesNotChangeResults) {
  const ProblemDef pb = hpe::builtin_problem("ex2");
  const Mesh m = hpe::builtin_mesh("ex2");
  const Space s(m, Degrees(m.num_elements(), 1));
  const hpe::FEFunction u = hpe::solve_global(s, pb, hpe::SolverConfig{});
  const hpe::Assembler A(s, pb);
  hpe::AdaptConfig one, three;
  three.threads = 3;
  const auto a = hpe::estimate_all(A, u, one, 0);
  const auto b = hpe::estimate_all(A, u, three, 0);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].element, b[i].element);
    EXPECT_EQ(a[i].reduction, b[i].reduction);
    EXPECT_EQ(a[i].best, b[i].best);
  }
}

TEST(AdaptLoop, DofsIncreaseAndEnergyDecreases) {
  const ProblemDef pb = hpe::builtin_problem("ex2");
  hpe::AdaptState st(hpe::builtin_mesh("ex2"), 1);
  hpe::AdaptConfig cfg;
  for (int i = 0; i < 4; ++i) ASSERT_TRUE(hpe::adapt_step(st, pb, cfg));
  hpe::solve_and_record(st, pb, cfg);
  ASSERT_EQ(st.records.size(), 5u);
  for (std::size_t i = 1; i < st.records.size(); ++i) {
    EXPECT_EQ(st.records[i].iteration, st.records[i - 1].iteration + 1);
    EXPECT_GT(st.records[i].ndof, st.records[i - 1].ndof);
    EXPECT_LE(st.records[i].energy, st.records[i - 1].energy + 1e-10);
    EXPECT_TRUE(st.records[i].newton_converged);
  }
  EXPECT_TRUE(st.mesh->is_conforming());
}

TEST(AdaptLoop, SeededRunsAreIdentical) {
  const ProblemDef pb = hpe::builtin_problem("ex3");
  auto history = [&](std::uint64_t seed) {
    hpe::AdaptState st(hpe::builtin_mesh("ex3"), 2);
    hpe::AdaptConfig cfg;
    cfg.n_max = 4;
    cfg.seed = seed;
    for (int i = 0; i < 4; ++i) hpe::adapt_step(st, pb, cfg);
    std::vector<std::pair<long, double>> h;
    for (const auto& r : st.records) h.emplace_back(r.ndof, r.energy);
    return std::pair{h, st.degrees};
  };
  EXPECT_EQ(history(5), history(5));
}

TEST(AdaptLoop, DofBudgetStops) {
  const ProblemDef pb = hpe::builtin_problem("ex3");
  hpe::AdaptState st(hpe::builtin_mesh("ex3"), 1);
  hpe::AdaptConfig cfg;
  cfg.max_dofs = 1;
  EXPECT_FALSE(hpe::adapt_step(st, pb, cfg));
  EXPECT_TRUE(st.converged);
  EXPECT_EQ(st.records.size(), 1u);
}
