#include "hpe/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace hpe {
namespace {

QuadratureRule make_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.degree = 2 * n - 1;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1,1] -> [0,1]; store ascending.
    rule.points[n - 1 - i] = {0.5 * (x + 1.0), 0.0};
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

QuadratureRule make_triangle(int degree, int collapse_vertex) {
  const int ns = (degree + 3) / 2;  // integrand degree + 1 in the collapsed direction
  const int nt = (degree + 2) / 2;
  const QuadratureRule& gs = gauss_legendre(ns);
  const QuadratureRule& gt = gauss_legendre(nt);
  QuadratureRule rule;
  rule.degree = degree;
  for (int i = 0; i < ns; ++i) {
    const double s = gs.points[i][0];
    for (int j = 0; j < nt; ++j) {
      const double t = gt.points[j][0];
      // Barycentrics with vertex 0 at the collapsed point.
      const std::array<double, 3> lam0 = {1.0 - s, s * (1.0 - t), s * t};
      std::array<double, 3> lam{};
      for (int k = 0; k < 3; ++k) lam[(k + collapse_vertex) % 3] = lam0[k];
      rule.points.push_back({lam[1], lam[2]});
      rule.weights.push_back(gs.weights[i] * gt.weights[j] * s);
    }
  }
  return rule;
}

std::mutex cache_mutex;

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(cache_mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

const QuadratureRule& interval_rule(int degree) {
  return gauss_legendre(std::max(1, (degree + 2) / 2));
}

const QuadratureRule& triangle_rule(int degree, int collapse_vertex) {
  if (collapse_vertex < 0 || collapse_vertex > 2)
    throw std::invalid_argument("triangle_rule: collapse vertex out of range");
  degree = std::max(degree, 0);
  static std::map<std::pair<int, int>, QuadratureRule> cache;
  const auto key = std::make_pair(degree, collapse_vertex);
  {
    std::lock_guard lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  QuadratureRule rule = make_triangle(degree, collapse_vertex);
  std::lock_guard lock(cache_mutex);
  return cache.emplace(key, std::move(rule)).first->second;
}

}  // namespace hpe
