#include "logpot/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "logpot/random.hpp"

namespace logpot {

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// ---------------------------------------------------------------------------
// RasterGrid

RasterGrid::RasterGrid(Point2 origin, double h, std::size_t nx, std::size_t ny,
                       std::vector<std::uint8_t> mask)
    : origin_(origin), h_(h), nx_(nx), ny_(ny), mask_(std::move(mask)) {
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw Error("raster cell size must be positive");
  if (nx_ == 0 || ny_ == 0) throw Error("raster dimensions must be positive");
  if (mask_.size() != nx_ * ny_) throw Error("raster mask size does not match dimensions");
  for (std::size_t k = 0; k < mask_.size(); ++k) {
    if (mask_[k] != 0) {
      mask_[k] = 1;
      active_.push_back(k);
    }
  }
}

Point2 RasterGrid::cell_center(std::size_t i, std::size_t j) const {
  return {origin_.x + (static_cast<double>(i) + 0.5) * h_,
          origin_.y + (static_cast<double>(j) + 0.5) * h_};
}

double RasterGrid::area() const { return h_ * h_ * static_cast<double>(active_count()); }

bool operator==(const RasterGrid& a, const RasterGrid& b) {
  return a.origin_ == b.origin_ && a.h_ == b.h_ && a.nx_ == b.nx_ && a.ny_ == b.ny_ &&
         a.mask_ == b.mask_;
}

// ---------------------------------------------------------------------------
// Triangle

Point2 Triangle::vertex(int k) const {
  switch (((k % 3) + 3) % 3) {
    case 0: return a;
    case 1: return b;
    default: return c;
  }
}

double Triangle::side_length(int k) const { return distance(vertex(k), vertex(k + 1)); }

double Triangle::signed_area() const { return 0.5 * cross(b - a, c - a); }

double Triangle::area() const { return std::abs(signed_area()); }

double Triangle::side_spread() const {
  const double l0 = side_length(0), l1 = side_length(1), l2 = side_length(2);
  return std::max({l0, l1, l2}) - std::min({l0, l1, l2});
}

// ---------------------------------------------------------------------------
// Domain construction

namespace {

double shoelace(const std::vector<Point2>& v) {
  double s = 0.0;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) s += cross(v[j], v[i]);
  return 0.5 * s;
}

int orientation(Point2 a, Point2 b, Point2 c) {
  const double o = cross(b - a, c - a);
  return (o > 0.0) - (o < 0.0);
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const int o1 = orientation(p1, p2, q1), o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1), o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

bool is_simple(const std::vector<Point2>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // adjacent edges share a vertex by construction
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
    }
  }
  return true;
}

void require_finite(Point2 p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error("non-finite coordinate");
}

}  // namespace

Domain Domain::disc(Point2 center, double radius) {
  require_finite(center);
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("degenerate domain");
  return Domain(Disc{center, radius});
}

Domain Domain::polygon(std::vector<Point2> vertices) {
  if (vertices.size() < 3) throw Error("degenerate domain");
  for (auto p : vertices) require_finite(p);
  double a = shoelace(vertices);
  double scale = 0.0;
  for (auto p : vertices) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  if (!is_simple(vertices)) throw Error("polygon is not simple");
  if (!(std::abs(a) > 1e-14 * std::max(1.0, scale * scale))) throw Error("degenerate domain");
  if (a < 0.0) std::reverse(vertices.begin(), vertices.end());
  return Domain(Polygon{std::move(vertices)});
}

Domain Domain::triangle(const Triangle& t) { return polygon({t.a, t.b, t.c}); }

Domain Domain::raster(RasterGrid grid) {
  if (grid.active_count() == 0) throw Error("degenerate domain");
  return Domain(std::move(grid));
}

// ---------------------------------------------------------------------------
// Measure-theoretic primitives

double area(const Domain& d) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disc>) {
          return kPi * s.radius * s.radius;
        } else if constexpr (std::is_same_v<T, Polygon>) {
          return shoelace(s.vertices);
        } else {
          return s.area();
        }
      },
      d.shape());
}

bool contains(const Domain& d, Point2 p) {
  return std::visit(
      [p](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disc>) {
          const double dx = p.x - s.center.x, dy = p.y - s.center.y;
          return dx * dx + dy * dy < s.radius * s.radius;
        } else if constexpr (std::is_same_v<T, Polygon>) {
          // crossing number
          bool inside = false;
          const auto& v = s.vertices;
          for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
            if ((v[i].y > p.y) != (v[j].y > p.y)) {
              const double xi = v[i].x + (p.y - v[i].y) * (v[j].x - v[i].x) / (v[j].y - v[i].y);
              if (p.x < xi) inside = !inside;
            }
          }
          return inside;
        } else {
          const double fx = (p.x - s.origin().x) / s.cell_size();
          const double fy = (p.y - s.origin().y) / s.cell_size();
          if (!(fx >= 0.0) || !(fy >= 0.0)) return false;
          const auto i = static_cast<std::size_t>(fx), j = static_cast<std::size_t>(fy);
          return i < s.nx() && j < s.ny() && s.active(i, j);
        }
      },
      d.shape());
}

BoundingBox bounding_box(const Domain& d) {
  return std::visit(
      [](const auto& s) -> BoundingBox {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disc>) {
          return {{s.center.x - s.radius, s.center.y - s.radius},
                  {s.center.x + s.radius, s.center.y + s.radius}};
        } else if constexpr (std::is_same_v<T, Polygon>) {
          BoundingBox b{s.vertices.front(), s.vertices.front()};
          for (auto p : s.vertices) {
            b.lo = {std::min(b.lo.x, p.x), std::min(b.lo.y, p.y)};
            b.hi = {std::max(b.hi.x, p.x), std::max(b.hi.y, p.y)};
          }
          return b;
        } else {
          const double h = s.cell_size();
          BoundingBox b{{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()},
                        {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()}};
          for (std::size_t k : s.active_cells()) {
            const Point2 c = s.cell_center(k % s.nx(), k / s.nx());
            b.lo = {std::min(b.lo.x, c.x - 0.5 * h), std::min(b.lo.y, c.y - 0.5 * h)};
            b.hi = {std::max(b.hi.x, c.x + 0.5 * h), std::max(b.hi.y, c.y + 0.5 * h)};
          }
          return b;
        }
      },
      d.shape());
}

double diameter(const Domain& d) {
  if (d.is_disc()) return 2.0 * d.as_disc().radius;
  if (d.is_polygon()) {
    const auto& v = d.as_polygon().vertices;
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, distance(v[i], v[j]));
    return best;
  }
  // Raster: diagonal of the occupied bounding box, an upper bound.
  const auto b = bounding_box(d);
  return distance(b.lo, b.hi);
}

Point2 centroid(const Domain& d) {
  return std::visit(
      [](const auto& s) -> Point2 {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disc>) {
          return s.center;
        } else if constexpr (std::is_same_v<T, Polygon>) {
          const auto& v = s.vertices;
          double cx = 0.0, cy = 0.0, a2 = 0.0;
          for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
            const double w = cross(v[j], v[i]);
            a2 += w;
            cx += (v[j].x + v[i].x) * w;
            cy += (v[j].y + v[i].y) * w;
          }
          return {cx / (3.0 * a2), cy / (3.0 * a2)};
        } else {
          double cx = 0.0, cy = 0.0;
          for (std::size_t k : s.active_cells()) {
            const Point2 c = s.cell_center(k % s.nx(), k / s.nx());
            cx += c.x;
            cy += c.y;
          }
          const auto n = static_cast<double>(s.active_count());
          return {cx / n, cy / n};
        }
      },
      d.shape());
}

RasterGrid rasterize(const Domain& d, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error("cell size must be positive");
  if (h >= diameter(d)) throw Error("resolution too coarse");
  const auto box = bounding_box(d);
  const Point2 origin{box.lo.x - h, box.lo.y - h};
  // the 1e-9 slack keeps exact tilings (side = n h) from gaining a spare column
  const auto cells = [h](double extent) {
    return static_cast<std::size_t>(std::ceil(extent / h - 1e-9)) + 2;
  };
  const std::size_t nx = cells(box.hi.x - box.lo.x);
  const std::size_t ny = cells(box.hi.y - box.lo.y);
  std::vector<std::uint8_t> mask(nx * ny, 0);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const Point2 c{origin.x + (static_cast<double>(i) + 0.5) * h,
                     origin.y + (static_cast<double>(j) + 0.5) * h};
      mask[j * nx + i] = contains(d, c) ? 1 : 0;
    }
  }
  RasterGrid grid(origin, h, nx, ny, std::move(mask));
  if (grid.active_count() == 0) throw Error("resolution too coarse");
  return grid;
}

std::vector<Point2> sample_uniform(const Domain& d, std::size_t n, std::uint64_t seed) {
  std::vector<Point2> out;
  if (n == 0) return out;
  out.reserve(n);
  const auto box = bounding_box(d);
  RandomStream rng(seed);
  const std::size_t cap = 100 * n;
  std::size_t attempts = 0;
  while (out.size() < n) {
    if (++attempts > cap) throw Error("rejection sampling exceeded 100 n attempts");
    const Point2 p{rng.uniform(box.lo.x, box.hi.x), rng.uniform(box.lo.y, box.hi.y)};
    if (contains(d, p)) out.push_back(p);
  }
  return out;
}

Domain scale_to_area(const Domain& d, double target) {
  if (!(target > 0.0)) throw Error("target area must be positive");
  if (d.is_raster()) throw Error("scale raster not supported; rescale source domain");
  if (d.is_disc()) return Domain::disc(d.as_disc().center, std::sqrt(target / kPi));
  const double s = std::sqrt(target / area(d));
  const Point2 c = centroid(d);
  std::vector<Point2> v = d.as_polygon().vertices;
  for (auto& p : v) p = c + s * (p - c);
  return Domain::polygon(std::move(v));
}

Domain rigid_motion(const Domain& d, double angle, Point2 shift) {
  const double cs = std::cos(angle), sn = std::sin(angle);
  const auto move = [&](Point2 p) { return Point2{cs * p.x - sn * p.y + shift.x, sn * p.x + cs * p.y + shift.y}; };
  if (d.is_disc()) return Domain::disc(move(d.as_disc().center), d.as_disc().radius);
  if (d.is_raster()) throw Error("rigid motion of a raster is not supported");
  std::vector<Point2> v = d.as_polygon().vertices;
  for (auto& p : v) p = move(p);
  return Domain::polygon(std::move(v));
}

}  // namespace logpot
