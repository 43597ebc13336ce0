#include "logpot/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace logpot {

ScalarField::ScalarField(RasterGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.active_count()) throw Error("field size does not match active cells");
  for (double v : values_)
    if (!std::isfinite(v) || v < 0.0) throw Error("field values must be finite and non-negative");
}

// Both sums run over the values in ascending order, so fields holding the
// same multiset give bit-identical results.
double ScalarField::sum() const {
  std::vector<double> v = values_;
  std::sort(v.begin(), v.end());
  return std::accumulate(v.begin(), v.end(), 0.0);
}

double ScalarField::sum_squares() const {
  std::vector<double> v = values_;
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

Domain domain_rearrange(const Domain& d) {
  const double a = area(d);
  if (!(a > 0.0)) throw Error("degenerate domain");
  return Domain::disc({0.0, 0.0}, std::sqrt(a / kPi));
}

CenteredRaster centered_disc_raster(std::size_t count, double h) {
  if (count == 0) throw Error("empty rearrangement");
  if (!(h > 0.0)) throw Error("cell size must be positive");
  const auto half = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(count) / kPi))) + 2;
  const std::size_t n = 2 * half;
  // centres at ((i - half + 1/2) h, (j - half + 1/2) h); compare in integer
  // units of h/2 so ties are exact
  std::vector<std::pair<long, std::size_t>> order;
  order.reserve(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const long u = 2 * static_cast<long>(i) - 2 * static_cast<long>(half) + 1;
      const long v = 2 * static_cast<long>(j) - 2 * static_cast<long>(half) + 1;
      order.emplace_back(u * u + v * v, j * n + i);
    }
  }
  std::sort(order.begin(), order.end());
  std::vector<std::uint8_t> mask(n * n, 0);
  CenteredRaster out{RasterGrid({0.0, 0.0}, h, 1, 1, {1}), {}};
  out.fill_order.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    mask[order[k].second] = 1;
    out.fill_order.push_back(order[k].second);
  }
  const double o = -static_cast<double>(half) * h;
  out.grid = RasterGrid({o, o}, h, n, n, std::move(mask));
  return out;
}

ScalarField symm_decreasing_rearrange(const ScalarField& f) {
  const std::size_t count = f.values().size();
  auto target = centered_disc_raster(count, f.grid().cell_size());
  std::vector<double> sorted = f.values();
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> by_cell(target.grid.nx() * target.grid.ny(), 0.0);
  for (std::size_t k = 0; k < count; ++k) by_cell[target.fill_order[k]] = sorted[k];
  std::vector<double> values;
  values.reserve(count);
  for (std::size_t cell : target.grid.active_cells()) values.push_back(by_cell[cell]);
  return ScalarField(std::move(target.grid), std::move(values));
}

namespace {

// Offset of the k-th filled cell from the centre slot: 0, +1, -1, +2, -2, ...
long outward_offset(std::size_t k) {
  const auto half = static_cast<long>((k + 1) / 2);
  return k % 2 == 1 ? half : -half;
}

struct SliceLayout {
  RasterGrid grid;
  // For each output cell (linear index) the source position in the input's
  // active order, or npos.
  std::vector<std::size_t> source;
};

// Rearranges every slice of g. The k-th largest key of a slice lands on the
// k-th centre-outward slot; `key` orders cells inside a slice (descending,
// ties by position).
SliceLayout rearrange_slices(const RasterGrid& g, SliceAxis axis,
                             const std::function<double(std::size_t)>& key) {
  const bool rows = axis == SliceAxis::Rows;
  const std::size_t slices = rows ? g.ny() : g.nx();
  const std::size_t along = rows ? g.nx() : g.ny();
  std::vector<std::size_t> position(g.nx() * g.ny(), std::size_t(-1));
  const auto& active = g.active_cells();
  for (std::size_t a = 0; a < active.size(); ++a) position[active[a]] = a;

  std::vector<std::vector<std::size_t>> members(slices);  // active positions
  std::size_t widest = 0;
  for (std::size_t s = 0; s < slices; ++s) {
    for (std::size_t t = 0; t < along; ++t) {
      const std::size_t cell = rows ? s * g.nx() + t : t * g.nx() + s;
      if (position[cell] != std::size_t(-1)) members[s].push_back(position[cell]);
    }
    widest = std::max(widest, members[s].size());
  }

  const std::size_t width = 2 * widest + 1;
  const double h = g.cell_size();
  const double start = -(static_cast<double>(widest) + 0.5) * h;
  const Point2 origin = rows ? Point2{start, g.origin().y} : Point2{g.origin().x, start};
  const std::size_t nx = rows ? width : g.nx();
  const std::size_t ny = rows ? g.ny() : width;
  std::vector<std::uint8_t> mask(nx * ny, 0);
  std::vector<std::size_t> source(nx * ny, std::size_t(-1));
  for (std::size_t s = 0; s < slices; ++s) {
    auto m = members[s];
    std::stable_sort(m.begin(), m.end(), [&key](std::size_t a, std::size_t b) { return key(a) > key(b); });
    for (std::size_t k = 0; k < m.size(); ++k) {
      const auto t = static_cast<std::size_t>(static_cast<long>(widest) + outward_offset(k));
      const std::size_t cell = rows ? s * nx + t : t * nx + s;
      mask[cell] = 1;
      source[cell] = m[k];
    }
  }
  return {RasterGrid(origin, h, nx, ny, std::move(mask)), std::move(source)};
}

}  // namespace

RasterGrid steiner_domain_raster(const RasterGrid& g, SliceAxis axis) {
  if (g.active_count() == 0) throw Error("empty grid");
  return rearrange_slices(g, axis, [](std::size_t) { return 0.0; }).grid;
}

ScalarField steiner_field(const ScalarField& f, SliceAxis axis) {
  const auto& v = f.values();
  auto layout = rearrange_slices(f.grid(), axis, [&v](std::size_t a) { return v[a]; });
  std::vector<double> values;
  values.reserve(v.size());
  for (std::size_t cell : layout.grid.active_cells()) values.push_back(v[layout.source[cell]]);
  return ScalarField(std::move(layout.grid), std::move(values));
}

Triangle steiner_triangle(const Triangle& t, int side) {
  if (side < 0 || side > 2) throw Error("side index must be 0, 1 or 2");
  const double scale = std::max({t.side_length(0), t.side_length(1), t.side_length(2)});
  if (!(t.area() > 1e-14 * scale * scale)) throw Error("degenerate triangle");
  const Point2 p = t.vertex(side), q = t.vertex(side + 1), apex = t.vertex(side + 2);
  const Point2 mid = 0.5 * (p + q);
  const Point2 dir = q - p;
  const double along = dot(apex - mid, dir) / dot(dir, dir);
  const Point2 moved = apex - along * dir;
  Triangle out = t;
  switch ((side + 2) % 3) {
    case 0: out.a = moved; break;
    case 1: out.b = moved; break;
    default: out.c = moved; break;
  }
  return out;
}

EquilateralizeResult equilateralize(const Triangle& t, double tol, int max_sweeps) {
  if (!(tol > 0.0)) throw Error("tolerance must be positive");
  EquilateralizeResult r{t, 0, {t}};
  while (r.triangle.side_spread() >= tol) {
    if (r.sweeps == max_sweeps) throw EquilateralizeError("equilateralize exceeded max sweeps", r.triangle);
    for (int side = 0; side < 3; ++side) r.triangle = steiner_triangle(r.triangle, side);
    ++r.sweeps;
    r.trajectory.push_back(r.triangle);
  }
  return r;
}

}  // namespace logpot
