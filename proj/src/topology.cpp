#include "hpe/topology.hpp"

#include <map>

namespace hpe {

Topology::Topology(const Mesh& mesh) : leaves_(mesh.leaves()) {
  leaf_index_.assign(mesh.num_elements(), -1);
  for (int i = 0; i < static_cast<int>(leaves_.size()); ++i) leaf_index_[leaves_[i]] = i;
  element_faces_.assign(leaves_.size(), {-1, -1, -1});

  std::map<std::pair<int, int>, int> lookup;
  const int nf = mesh.dim() + 1;
  for (int li = 0; li < static_cast<int>(leaves_.size()); ++li) {
    const int e = leaves_[li];
    for (int i = 0; i < nf; ++i) {
      auto fv = mesh.face_vertices(e, i);
      if (fv[0] > fv[1]) std::swap(fv[0], fv[1]);
      const auto k = std::make_pair(fv[0], fv[1]);
      auto it = lookup.find(k);
      if (it == lookup.end()) {
        Face f;
        f.v = {fv[0], fv[1]};
        f.elem[0] = e;
        f.local[0] = i;
        f.marker = mesh.boundary_marker(fv[0], fv[1]);
        faces_.push_back(f);
        lookup.emplace(k, static_cast<int>(faces_.size()) - 1);
        element_faces_[li][i] = static_cast<int>(faces_.size()) - 1;
      } else {
        Face& f = faces_[it->second];
        if (f.elem[1] >= 0) throw MeshError("face shared by more than two leaves");
        f.elem[1] = e;
        f.local[1] = i;
        element_faces_[li][i] = it->second;
      }
    }
  }
}

int Topology::neighbor(int e, int i) const {
  const Face& f = faces_[element_faces(e)[i]];
  if (f.elem[0] == e) return f.elem[1];
  return f.elem[0];
}

std::vector<int> Topology::neighbors(int e) const {
  std::vector<int> out;
  const int li = leaf_index(e);
  for (int fid : element_faces_[li]) {
    if (fid < 0) continue;
    const Face& f = faces_[fid];
    const int other = f.elem[0] == e ? f.elem[1] : f.elem[0];
    if (other >= 0) out.push_back(other);
  }
  return out;
}

}  // namespace hpe
