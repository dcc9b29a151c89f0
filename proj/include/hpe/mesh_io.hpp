#pragma once

#include <iosfwd>
#include <string>
#include <utility>

#include "hpe/mesh.hpp"

namespace hpe {

/// Plain-text mesh: a header "dim nvertices nelements", then one vertex per
/// line (x, or x y), then one element per line (vertex indices followed by
/// its degree). '#' starts a comment. Only leaves are written; vertices are
/// renumbered compactly.
void write_mesh(std::ostream& out, const Mesh& mesh, const Degrees& degrees);
void write_mesh(const std::string& path, const Mesh& mesh, const Degrees& degrees);

/// Reads the format above. Faces with one adjacent element become Dirichlet
/// boundary. Degrees are indexed by element id (file order).
std::pair<Mesh, Degrees> read_mesh(std::istream& in);
std::pair<Mesh, Degrees> read_mesh(const std::string& path);

}  // namespace hpe
