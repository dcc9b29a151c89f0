#include "hpe/svg.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

namespace hpe {
namespace {

constexpr std::array<const char*, 10> kPalette = {"#313695", "#4575b4", "#74add1", "#abd9e9", "#e0f3f8",
                                                  "#fee090", "#fdae61", "#f46d43", "#d73027", "#a50026"};
constexpr double kSize = 600.0;
constexpr double kMargin = 20.0;
constexpr double kLegend = 90.0;

ViewBox bounds(const Mesh& mesh) {
  ViewBox b{1e300, -1e300, 1e300, -1e300};
  for (int e : mesh.leaves())
    for (int i = 0; i <= mesh.dim(); ++i) {
      const Point& x = mesh.vertex(mesh.element(e).v[i]);
      b.xmin = std::min(b.xmin, x[0]);
      b.xmax = std::max(b.xmax, x[0]);
      b.ymin = std::min(b.ymin, x[1]);
      b.ymax = std::max(b.ymax, x[1]);
    }
  return b;
}

void legend(std::ostringstream& s, const std::set<int>& present, double x0) {
  double y = kMargin;
  s << "<text x=\"" << x0 << "\" y=\"" << y << "\" font-size=\"14\">p</text>\n";
  for (int p : present) {
    y += 20.0;
    s << "<rect x=\"" << x0 << "\" y=\"" << y - 12 << "\" width=\"14\" height=\"14\" fill=\"" << degree_colour(p)
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << x0 + 20 << "\" y=\"" << y << "\" font-size=\"12\">" << p << "</text>\n";
  }
}

}  // namespace

const char* degree_colour(int p) { return kPalette[static_cast<std::size_t>(std::max(p - 1, 0)) % kPalette.size()]; }

std::string render_svg(const Mesh& mesh, const Degrees& degrees, std::optional<ViewBox> zoom) {
  const ViewBox box = zoom.value_or(bounds(mesh));
  const std::vector<int> leaves = mesh.leaves();
  std::set<int> present;
  auto degree = [&](int e) { return e < static_cast<int>(degrees.size()) ? degrees[e] : 1; };
  for (int e : leaves) present.insert(degree(e));

  std::ostringstream s;
  s.precision(8);
  const double width = kSize + 2 * kMargin + kLegend;
  const double sx = kSize / std::max(box.xmax - box.xmin, 1e-300);
  auto px = [&](double x) { return kMargin + (x - box.xmin) * sx; };

  if (mesh.dim() == 1) {
    int pmax = 1;
    for (int p : present) pmax = std::max(pmax, p);
    const double bar = 200.0 / pmax;
    const double base = kMargin + 220.0;
    const double height = base + 40.0;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 "
      << width << ' ' << height << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int e : leaves) {
      const auto c = mesh.corners(e);
      const double x0 = px(c[0][0]), x1 = px(c[1][0]);
      const int p = degree(e);
      s << "<rect x=\"" << x0 << "\" y=\"" << base - p * bar << "\" width=\"" << x1 - x0 << "\" height=\"" << p * bar
        << "\" fill=\"" << degree_colour(p) << "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
      s << "<text x=\"" << 0.5 * (x0 + x1) << "\" y=\"" << base + 16 << "\" font-size=\"10\" text-anchor=\"middle\">"
        << p << "</text>\n";
    }
    s << "<line x1=\"" << px(box.xmin) << "\" y1=\"" << base << "\" x2=\"" << px(box.xmax) << "\" y2=\"" << base
      << "\" stroke=\"black\"/>\n";
    legend(s, present, kSize + 2 * kMargin);
    s << "</svg>\n";
    return s.str();
  }

  const double sy = kSize / std::max(box.ymax - box.ymin, 1e-300);
  const double scale = std::min(sx, sy);
  auto qx = [&](double x) { return kMargin + (x - box.xmin) * scale; };
  auto qy = [&](double y) { return kMargin + (box.ymax - y) * scale; };
  const double height = kSize + 2 * kMargin;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 "
    << width << ' ' << height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<clipPath id=\"view\"><rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kSize
    << "\" height=\"" << kSize << "\"/></clipPath>\n<g clip-path=\"url(#view)\">\n";
  for (int e : leaves) {
    const auto c = mesh.corners(e);
    s << "<polygon points=\"";
    for (int i = 0; i < 3; ++i) s << qx(c[i][0]) << ',' << qy(c[i][1]) << (i < 2 ? " " : "");
    s << "\" fill=\"" << degree_colour(degree(e)) << "\" stroke=\"black\" stroke-width=\"0.3\"/>\n";
  }
  s << "</g>\n";
  legend(s, present, kSize + 2 * kMargin);
  s << "</svg>\n";
  return s.str();
}

void render_mesh(const Mesh& mesh, const Degrees& degrees, const std::string& path, std::optional<ViewBox> zoom) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << render_svg(mesh, degrees, zoom);
  if (!f) throw std::runtime_error("failed writing " + path);
}

}  // namespace hpe
