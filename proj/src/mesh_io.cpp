#include "hpe/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace hpe {

void write_mesh(std::ostream& out, const Mesh& mesh, const Degrees& degrees) {
  const std::vector<int> leaves = mesh.leaves();
  std::map<int, int> renum;
  for (int e : leaves)
    for (int i = 0; i <= mesh.dim(); ++i) renum.emplace(mesh.element(e).v[i], 0);
  int next = 0;
  for (auto& [v, idx] : renum) idx = next++;

  out << "# hp mesh\n" << mesh.dim() << ' ' << renum.size() << ' ' << leaves.size() << '\n';
  out << std::setprecision(17);
  for (const auto& [v, idx] : renum) {
    out << mesh.vertex(v)[0];
    if (mesh.dim() == 2) out << ' ' << mesh.vertex(v)[1];
    out << '\n';
  }
  for (int e : leaves) {
    for (int i = 0; i <= mesh.dim(); ++i) out << renum[mesh.element(e).v[i]] << ' ';
    out << (e < static_cast<int>(degrees.size()) ? degrees[e] : 1) << '\n';
  }
}

void write_mesh(const std::string& path, const Mesh& mesh, const Degrees& degrees) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  write_mesh(f, mesh, degrees);
}

std::pair<Mesh, Degrees> read_mesh(std::istream& in) {
  std::stringstream body;
  for (std::string line; std::getline(in, line);) body << line.substr(0, line.find('#')) << '\n';

  int dim = 0, nv = 0, ne = 0;
  if (!(body >> dim >> nv >> ne)) throw MeshError("mesh file: missing header");
  if (dim != 1 && dim != 2) throw MeshError("mesh file: dimension must be 1 or 2");
  if (nv < dim + 1 || ne < 1) throw MeshError("mesh file: too few vertices or elements");
  std::vector<Point> verts(nv, Point{0.0, 0.0});
  for (auto& v : verts)
    for (int k = 0; k < dim; ++k)
      if (!(body >> v[k])) throw MeshError("mesh file: truncated vertex list");
  std::vector<std::array<int, 3>> cells(ne, {-1, -1, -1});
  Degrees degrees(ne, 1);
  for (int e = 0; e < ne; ++e) {
    for (int k = 0; k <= dim; ++k)
      if (!(body >> cells[e][k])) throw MeshError("mesh file: truncated element list");
    if (!(body >> degrees[e])) throw MeshError("mesh file: element without degree");
    if (degrees[e] < 1) throw MeshError("mesh file: degree must be >= 1");
    for (int k = 0; k <= dim; ++k)
      if (cells[e][k] < 0 || cells[e][k] >= nv) throw MeshError("mesh file: vertex index out of range");
  }
  if (dim == 2) return {Mesh::triangles(std::move(verts), std::move(cells)), std::move(degrees)};

  for (auto& c : cells)
    if (verts[c[0]][0] > verts[c[1]][0]) std::swap(c[0], c[1]);
  std::map<int, int> uses;
  for (const auto& c : cells) {
    ++uses[c[0]];
    ++uses[c[1]];
  }
  Mesh m = Mesh::from_cells(1, std::move(verts), std::move(cells));
  for (const auto& [v, n] : uses)
    if (n == 1) m.set_boundary_marker(v, v, kDirichlet);
  return {std::move(m), std::move(degrees)};
}

std::pair<Mesh, Degrees> read_mesh(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  return read_mesh(f);
}

}  // namespace hpe
