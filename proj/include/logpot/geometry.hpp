#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "logpot/common.hpp"

namespace logpot {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double distance(Point2 a, Point2 b);

struct BoundingBox {
  Point2 lo;
  Point2 hi;
};

/// Uniform cell decomposition. Cell (i, j) has center
/// origin + ((i + 1/2) h, (j + 1/2) h); cells are stored row-major, i.e.
/// linear index j * nx + i, so a "row" is a set of cells at fixed y.
class RasterGrid {
 public:
  RasterGrid(Point2 origin, double h, std::size_t nx, std::size_t ny,
             std::vector<std::uint8_t> mask);

  Point2 origin() const { return origin_; }
  double cell_size() const { return h_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }

  bool active(std::size_t i, std::size_t j) const { return mask_[j * nx_ + i] != 0; }
  Point2 cell_center(std::size_t i, std::size_t j) const;
  std::size_t active_count() const { return active_.size(); }
  double area() const;

  /// Linear indices of the active cells in row-major scan order. This is the
  /// row order of every matrix and field built on the grid.
  const std::vector<std::size_t>& active_cells() const { return active_; }

  friend bool operator==(const RasterGrid& a, const RasterGrid& b);

 private:
  Point2 origin_;
  double h_;
  std::size_t nx_;
  std::size_t ny_;
  std::vector<std::uint8_t> mask_;
  std::vector<std::size_t> active_;
};

struct Disc {
  Point2 center;
  double radius = 1.0;
};

/// Simple polygon, stored counter-clockwise.
struct Polygon {
  std::vector<Point2> vertices;
};

struct Triangle {
  Point2 a;
  Point2 b;
  Point2 c;

  Point2 vertex(int k) const;
  /// Side k joins vertex k and vertex (k + 1) mod 3.
  double side_length(int k) const;
  /// Signed area, positive for counter-clockwise vertices.
  double signed_area() const;
  double area() const;
  /// max side length minus min side length
  double side_spread() const;
};

class Domain {
 public:
  using Variant = std::variant<Disc, Polygon, RasterGrid>;

  static Domain disc(Point2 center, double radius);
  /// Validates simplicity and non-zero area; reorders clockwise input.
  static Domain polygon(std::vector<Point2> vertices);
  static Domain triangle(const Triangle& t);
  static Domain raster(RasterGrid grid);

  const Variant& shape() const { return shape_; }
  bool is_disc() const { return std::holds_alternative<Disc>(shape_); }
  bool is_polygon() const { return std::holds_alternative<Polygon>(shape_); }
  bool is_raster() const { return std::holds_alternative<RasterGrid>(shape_); }
  const Disc& as_disc() const { return std::get<Disc>(shape_); }
  const Polygon& as_polygon() const { return std::get<Polygon>(shape_); }
  const RasterGrid& as_raster() const { return std::get<RasterGrid>(shape_); }

 private:
  explicit Domain(Variant v) : shape_(std::move(v)) {}
  Variant shape_;
};

double area(const Domain& d);
bool contains(const Domain& d, Point2 p);
BoundingBox bounding_box(const Domain& d);
double diameter(const Domain& d);
/// Area centroid.
Point2 centroid(const Domain& d);

/// Center-rule rasterization on the bounding box padded by one cell.
RasterGrid rasterize(const Domain& d, double h);

/// n i.i.d. uniform points by rejection from the bounding box. Deterministic
/// for a given (d, n, seed).
std::vector<Point2> sample_uniform(const Domain& d, std::size_t n, std::uint64_t seed);

/// Homothety about the centroid so that area(result) == target.
Domain scale_to_area(const Domain& d, double target);

/// Rigid motion: rotate by angle about the origin, then translate.
Domain rigid_motion(const Domain& d, double angle, Point2 shift);

}  // namespace logpot
