#include "hpe/basis.hpp"

#include <map>
#include <tuple>
#include <vector>

namespace hpe {

int num_vertex_modes(const ElementShape& s) { return s.dim + 1; }

int num_edge_modes(const ElementShape& s, int edge) {
  return s.dim == 2 ? std::max(0, s.q[edge] - 1) : 0;
}

int num_interior_modes(const ElementShape& s) {
  if (s.dim == 1) return std::max(0, s.p - 1);
  return s.p >= 3 ? (s.p - 1) * (s.p - 2) / 2 : 0;
}

int num_local_modes(const ElementShape& s) {
  int n = num_vertex_modes(s) + num_interior_modes(s);
  for (int e = 0; e < 3; ++e) n += num_edge_modes(s, e);
  return n;
}

void legendre(int n, double x, std::span<double> value, std::span<double> deriv) {
  value[0] = 1.0;
  deriv[0] = 0.0;
  if (n >= 1) {
    value[1] = x;
    deriv[1] = 1.0;
  }
  for (int k = 2; k <= n; ++k) {
    value[k] = ((2.0 * k - 1.0) * x * value[k - 1] - (k - 1.0) * value[k - 2]) / k;
    deriv[k] = deriv[k - 2] + (2.0 * k - 1.0) * value[k - 1];
  }
}

void eval_basis(const ElementShape& s, const Point& ref, std::span<double> value, std::span<double> dxi,
                std::span<double> deta) {
  const int maxdeg = std::max({s.p, s.q[0], s.q[1], s.q[2], 2});
  std::vector<double> la(maxdeg + 1), da(maxdeg + 1), lb(maxdeg + 1), db(maxdeg + 1);
  int k = 0;

  if (s.dim == 1) {
    const double x = ref[0];
    const double l0 = 1.0 - x, l1 = x;
    value[0] = l0, dxi[0] = -1.0;
    value[1] = l1, dxi[1] = 1.0;
    k = 2;
    legendre(maxdeg, l1 - l0, la, da);
    const double b = l0 * l1, db_dx = l0 - l1;
    for (int m = 2; m <= s.p; ++m, ++k) {
      value[k] = b * la[m - 2];
      dxi[k] = db_dx * la[m - 2] + b * da[m - 2] * 2.0;
    }
    for (int i = 0; i < k; ++i) deta[i] = 0.0;
    return;
  }

  const double x = ref[0], y = ref[1];
  const std::array<double, 3> lam = {1.0 - x - y, x, y};
  const std::array<std::array<double, 2>, 3> glam = {{{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}}};
  for (int i = 0; i < 3; ++i, ++k) {
    value[k] = lam[i];
    dxi[k] = glam[i][0];
    deta[k] = glam[i][1];
  }
  for (int e = 0; e < 3; ++e) {
    if (s.q[e] < 2) continue;
    const int a = (e + 1) % 3, b = (e + 2) % 3;
    legendre(s.q[e] - 2, lam[b] - lam[a], la, da);
    const double w = lam[a] * lam[b];
    const std::array<double, 2> gw = {glam[a][0] * lam[b] + lam[a] * glam[b][0],
                                      glam[a][1] * lam[b] + lam[a] * glam[b][1]};
    const std::array<double, 2> gs = {glam[b][0] - glam[a][0], glam[b][1] - glam[a][1]};
    for (int m = 2; m <= s.q[e]; ++m, ++k) {
      value[k] = w * la[m - 2];
      dxi[k] = gw[0] * la[m - 2] + w * da[m - 2] * gs[0];
      deta[k] = gw[1] * la[m - 2] + w * da[m - 2] * gs[1];
    }
  }
  if (s.p >= 3) {
    const int n = s.p - 3;
    legendre(n, lam[1] - lam[0], la, da);  // d/dx = 2, d/dy = 1
    legendre(n, 2.0 * lam[2] - 1.0, lb, db);  // d/dx = 0, d/dy = 2
    const double w = lam[0] * lam[1] * lam[2];
    const double wx = -lam[1] * lam[2] + lam[0] * lam[2];
    const double wy = -lam[1] * lam[2] + lam[0] * lam[1];
    for (int tot = 0; tot <= n; ++tot) {
      for (int i = tot; i >= 0; --i, ++k) {
        const int j = tot - i;
        const double pp = la[i] * lb[j];
        value[k] = w * pp;
        dxi[k] = wx * pp + w * (2.0 * da[i] * lb[j]);
        deta[k] = wy * pp + w * (da[i] * lb[j] + 2.0 * la[i] * db[j]);
      }
    }
  }
}

const Tabulation& tabulate(const ElementShape& s, const QuadratureRule& rule) {
  using Key = std::tuple<ElementShape, const QuadratureRule*>;
  thread_local std::map<Key, Tabulation> cache;
  const Key key{s, &rule};
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const int n = num_local_modes(s);
  const int nq = static_cast<int>(rule.size());
  Tabulation t;
  t.value.resize(nq, n);
  t.dxi.resize(nq, n);
  t.deta.resize(nq, n);
  std::vector<double> v(n), dx(n), dy(n);
  for (int iq = 0; iq < nq; ++iq) {
    eval_basis(s, rule.points[iq], v, dx, dy);
    for (int j = 0; j < n; ++j) {
      t.value(iq, j) = v[j];
      t.dxi(iq, j) = dx[j];
      t.deta(iq, j) = dy[j];
    }
  }
  return cache.emplace(key, std::move(t)).first->second;
}

}  // namespace hpe
