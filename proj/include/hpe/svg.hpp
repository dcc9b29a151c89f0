#pragma once

#include <optional>
#include <string>

#include "hpe/mesh.hpp"

namespace hpe {

/// Region of the domain to draw.
struct ViewBox {
  double xmin, xmax, ymin, ymax;
};

/// SVG picture of the hp mesh: triangles filled by degree (2D), or one bar
/// per interval with its degree as height and label (1D). A legend lists
/// the degrees present. Colours cycle through a fixed 10-entry palette.
std::string render_svg(const Mesh& mesh, const Degrees& degrees, std::optional<ViewBox> zoom = std::nullopt);

/// Writes render_svg to `path`; throws std::runtime_error if it cannot.
void render_mesh(const Mesh& mesh, const Degrees& degrees, const std::string& path,
                 std::optional<ViewBox> zoom = std::nullopt);

/// Fill colour used for degree p.
const char* degree_colour(int p);

}  // namespace hpe
