#include "hpe/patch.hpp"

#include <algorithm>
#include <map>

namespace hpe {

Patch build_patch(const Mesh& mesh, const Topology& topo, int kappa) {
  if (topo.leaf_index(kappa) < 0) throw MeshError("build_patch: element is not a leaf");
  Patch patch;
  patch.global_element.push_back(kappa);
  for (int nb : topo.neighbors(kappa)) patch.global_element.push_back(nb);

  // Local vertex numbering preserves the global order.
  std::vector<int> gverts;
  for (int e : patch.global_element)
    for (int i = 0; i <= mesh.dim(); ++i) gverts.push_back(mesh.element(e).v[i]);
  std::sort(gverts.begin(), gverts.end());
  gverts.erase(std::unique(gverts.begin(), gverts.end()), gverts.end());
  auto local_of = [&](int g) {
    return static_cast<int>(std::lower_bound(gverts.begin(), gverts.end(), g) - gverts.begin());
  };

  std::vector<Point> coords;
  for (int g : gverts) coords.push_back(mesh.vertex(g));
  std::vector<std::array<int, 3>> cells;
  for (int e : patch.global_element) {
    std::array<int, 3> c{-1, -1, -1};
    for (int i = 0; i <= mesh.dim(); ++i) c[i] = local_of(mesh.element(e).v[i]);
    cells.push_back(c);
  }
  patch.mesh = Mesh::from_cells(mesh.dim(), std::move(coords), std::move(cells));

  std::map<std::pair<int, int>, int> count;
  for (int r = 0; r < patch.num_roots(); ++r)
    for (int i = 0; i <= mesh.dim(); ++i) {
      auto f = patch.mesh.face_vertices(r, i);
      ++count[std::minmax(f[0], f[1])];
    }
  for (const auto& [f, n] : count) {
    if (n > 1) continue;
    const int gm = mesh.boundary_marker(gverts[f.first], gverts[f.second]);
    patch.mesh.set_boundary_marker(f.first, f.second, gm == kInterior ? kInterface : gm);
  }
  return patch;
}

Patch build_refined_patch(const Mesh& mesh, const Topology& topo, int kappa) {
  Patch patch = build_patch(mesh, topo, kappa);
  patch.mesh.refine_red(0);
  patch.mesh.close_green();
  return patch;
}

}  // namespace hpe
