#include "logpot/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace logpot {

namespace {

Point2 point_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InputError("malformed domain: expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Point2> vertices_from_json(const nlohmann::json& j) {
  if (!j.contains("vertices") || !j["vertices"].is_array()) throw InputError("malformed domain: missing vertices");
  std::vector<Point2> v;
  for (const auto& p : j["vertices"]) v.push_back(point_from_json(p));
  return v;
}

nlohmann::json point_to_json(Point2 p) { return nlohmann::json::array({p.x, p.y}); }

}  // namespace

Domain domain_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw InputError("malformed domain: missing type");
  const auto type = j["type"].get<std::string>();
  if (type == "disc") {
    if (!j.contains("center") || !j.contains("radius") || !j["radius"].is_number())
      throw InputError("malformed domain: disc needs center and radius");
    const double r = j["radius"].get<double>();
    if (!(r > 0.0) || !std::isfinite(r)) throw Error("degenerate domain");
    return Domain::disc(point_from_json(j["center"]), r);
  }
  if (type == "polygon") return Domain::polygon(vertices_from_json(j));
  if (type == "triangle") {
    const auto v = vertices_from_json(j);
    if (v.size() != 3) throw InputError("malformed domain: triangle needs three vertices");
    return Domain::triangle({v[0], v[1], v[2]});
  }
  throw InputError("malformed domain: unknown type '" + type + "'");
}

nlohmann::json domain_to_json(const Domain& d) {
  if (d.is_disc()) {
    const auto& c = d.as_disc();
    return {{"type", "disc"}, {"center", point_to_json(c.center)}, {"radius", c.radius}};
  }
  if (d.is_polygon()) {
    const auto& v = d.as_polygon().vertices;
    auto arr = nlohmann::json::array();
    for (const auto& p : v) arr.push_back(point_to_json(p));
    return {{"type", v.size() == 3 ? "triangle" : "polygon"}, {"vertices", arr}};
  }
  const auto& g = d.as_raster();
  return {{"type", "raster"},
          {"origin", point_to_json(g.origin())},
          {"h", g.cell_size()},
          {"nx", g.nx()},
          {"ny", g.ny()},
          {"active", g.active_count()}};
}

Domain read_domain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open domain file " + path);
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".pgm") == 0) return Domain::raster(read_pgm_mask(in));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
  return domain_from_json(j);
}

void write_pgm_mask(std::ostream& out, const RasterGrid& g) {
  out << "P2\n" << fmt::format("# origin {:.17g} {:.17g} h {:.17g}\n", g.origin().x, g.origin().y, g.cell_size());
  out << g.nx() << ' ' << g.ny() << "\n1\n";
  for (std::size_t r = 0; r < g.ny(); ++r) {
    const std::size_t j = g.ny() - 1 - r;
    for (std::size_t i = 0; i < g.nx(); ++i) out << (i ? " " : "") << (g.active(i, j) ? 1 : 0);
    out << '\n';
  }
}

RasterGrid read_pgm_mask(std::istream& in) {
  std::string magic;
  in >> magic;
  if (magic != "P2") throw InputError("raster mask must be a plain PGM (P2)");
  Point2 origin{0.0, 0.0};
  double h = 1.0;
  std::vector<long> numbers;
  std::string line;
  std::getline(in, line);
  while (numbers.size() < 3 && std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      std::istringstream c(line.substr(1));
      std::string key, hkey;
      if (c >> key && key == "origin" && c >> origin.x >> origin.y >> hkey >> h && hkey == "h") continue;
      throw InputError("malformed PGM comment: expected 'origin x y h value'");
    }
    std::istringstream c(line);
    long v = 0;
    while (c >> v) numbers.push_back(v);
  }
  if (numbers.size() < 3 || numbers[0] <= 0 || numbers[1] <= 0) throw InputError("malformed PGM header");
  if (!(h > 0.0)) throw InputError("PGM cell size must be positive");
  const auto nx = static_cast<std::size_t>(numbers[0]), ny = static_cast<std::size_t>(numbers[1]);
  std::vector<std::uint8_t> mask(nx * ny, 0);
  for (std::size_t r = 0; r < ny; ++r) {
    for (std::size_t i = 0; i < nx; ++i) {
      long v = 0;
      if (!(in >> v)) throw InputError("truncated PGM data");
      mask[(ny - 1 - r) * nx + i] = v > 0 ? 1 : 0;
    }
  }
  return RasterGrid(origin, h, nx, ny, std::move(mask));
}

void write_svg_bars(std::ostream& out, const std::string& title, const std::vector<std::string>& labels,
                    const std::vector<double>& values) {
  if (labels.size() != values.size()) throw Error("label and value counts differ");
  const double top = values.empty() ? 1.0 : std::max(1e-300, *std::max_element(values.begin(), values.end()));
  const int bar = 22, left = 160, width = 360;
  const int height = 40 + bar * static_cast<int>(values.size()) + 10;
  out << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" font-size=\"12\">\n",
                     left + width + 110, height);
  out << fmt::format("<text x=\"10\" y=\"20\" font-size=\"14\">{}</text>\n", title);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const int y = 34 + bar * static_cast<int>(k);
    const double w = std::max(0.0, values[k]) / top * width;
    out << fmt::format("<text x=\"10\" y=\"{}\">{}</text>\n", y + 14, labels[k]);
    out << fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{:.2f}\" height=\"{}\" fill=\"#4a7ab0\"/>\n", left, y, w, bar - 6);
    out << fmt::format("<text x=\"{:.2f}\" y=\"{}\">{:.6g}</text>\n", left + w + 6, y + 14, values[k]);
  }
  out << "</svg>\n";
}

}  // namespace logpot
