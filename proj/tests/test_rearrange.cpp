#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "logpot/discretize.hpp"
#include "logpot/rearrange.hpp"

using namespace logpot;

namespace {

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

ScalarField random_field(const RasterGrid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(g.active_count());
  for (auto& x : v) x = std::floor(u(rng) * 8.0) / 4.0;  // coarse values force ties
  return ScalarField(g, v);
}

// Active-cell counts per row (axis Rows) or per column.
std::vector<std::size_t> slice_counts(const RasterGrid& g, SliceAxis axis) {
  const bool rows = axis == SliceAxis::Rows;
  std::vector<std::size_t> c(rows ? g.ny() : g.nx(), 0);
  for (std::size_t k : g.active_cells()) ++c[rows ? k / g.nx() : k % g.nx()];
  return c;
}

double distance_from_origin(const RasterGrid& g, std::size_t cell) {
  const Point2 c = g.cell_center(cell % g.nx(), cell / g.nx());
  return std::hypot(c.x, c.y);
}

}  // namespace

TEST_CASE("domain rearrangement") {
  const Domain sq = Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const Domain d = domain_rearrange(sq);
  CHECK(d.as_disc().radius == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-15));
  CHECK(area(d) == doctest::Approx(area(sq)).epsilon(1e-15));
  const Domain moved = domain_rearrange(Domain::disc({3, -2}, 0.7));
  CHECK(moved.as_disc().center == Point2{0, 0});
  CHECK(moved.as_disc().radius == 0.7);
}

TEST_CASE("symmetric-decreasing rearrangement of fields") {
  const RasterGrid g = rasterize(Domain::polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}), 0.1);
  const ScalarField f = random_field(g, 1);
  const ScalarField r = symm_decreasing_rearrange(f);
  CHECK(sorted(r.values()) == sorted(f.values()));
  CHECK(r.sum_squares() == f.sum_squares());
  CHECK(r.grid().area() == doctest::Approx(g.area()).epsilon(1e-14));

  // radially non-increasing
  const auto& cells = r.grid().active_cells();
  for (std::size_t a = 0; a < cells.size(); ++a)
    for (std::size_t b = 0; b < cells.size(); ++b)
      if (distance_from_origin(r.grid(), cells[a]) < distance_from_origin(r.grid(), cells[b]) - 1e-12)
        REQUIRE(r.values()[a] >= r.values()[b]);

  // idempotent
  const ScalarField again = symm_decreasing_rearrange(r);
  CHECK(again.grid() == r.grid());
  CHECK(again.values() == r.values());
}

TEST_CASE("sums do not depend on the cell order") {
  const RasterGrid g = rasterize(Domain::disc({0.4, -0.2}, 1.1), 0.05);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(g.active_count());
  for (auto& x : v) x = u(rng);
  const ScalarField f(g, v);
  for (const ScalarField& r : {symm_decreasing_rearrange(f), steiner_field(f, SliceAxis::Rows),
                               steiner_field(f, SliceAxis::Columns)}) {
    CHECK(r.sum() == f.sum());
    CHECK(r.sum_squares() == f.sum_squares());
  }
}

TEST_CASE("indicators go to the nearest cells") {
  const RasterGrid g = rasterize(Domain::disc({5, 5}, 1.3), 0.1);
  std::vector<double> v(g.active_count(), 0.0);
  const std::size_t m = 37;
  for (std::size_t k = 0; k < m; ++k) v[k * 3] = 1.0;
  const ScalarField r = symm_decreasing_rearrange(ScalarField(g, v));
  const auto target = centered_disc_raster(g.active_count(), 0.1);
  std::map<std::size_t, double> by_cell;
  for (std::size_t a = 0; a < r.values().size(); ++a) by_cell[r.grid().active_cells()[a]] = r.values()[a];
  for (std::size_t k = 0; k < target.fill_order.size(); ++k) CHECK(by_cell[target.fill_order[k]] == (k < m ? 1.0 : 0.0));
}

TEST_CASE("centred disc raster") {
  const auto c = centered_disc_raster(4, 0.5);
  // the four cells touching the origin
  for (std::size_t cell : c.fill_order) CHECK(distance_from_origin(c.grid, cell) == doctest::Approx(0.5 * std::sqrt(0.5)));
  CHECK_THROWS(centered_disc_raster(0, 0.5));
}

TEST_CASE("Steiner symmetrization of fields") {
  const RasterGrid g = rasterize(Domain::triangle({{0.1, 0}, {2.3, 0.4}, {0.9, 1.7}}), 0.1);
  const ScalarField f = random_field(g, 2);
  for (SliceAxis axis : {SliceAxis::Rows, SliceAxis::Columns}) {
    const ScalarField s = steiner_field(f, axis);
    CHECK(s.sum() == doctest::Approx(f.sum()).epsilon(1e-14));
    CHECK(s.sum_squares() == f.sum_squares());
    CHECK(sorted(s.values()) == sorted(f.values()));
    CHECK(s.grid() == steiner_domain_raster(g, axis));
    const ScalarField twice = steiner_field(s, axis);
    CHECK(twice.grid() == s.grid());
    CHECK(twice.values() == s.values());
  }
  // per-row multisets are preserved
  const ScalarField s = steiner_field(f, SliceAxis::Rows);
  const auto rows_of = [](const ScalarField& x) {
    std::map<long, std::vector<double>> rows;
    const auto& cells = x.grid().active_cells();
    for (std::size_t a = 0; a < cells.size(); ++a) {
      const Point2 c = x.grid().cell_center(cells[a] % x.grid().nx(), cells[a] / x.grid().nx());
      rows[std::lround(c.y * 1000)].push_back(x.values()[a]);
    }
    for (auto& [k, v] : rows) std::sort(v.begin(), v.end());
    return rows;
  };
  CHECK(rows_of(s) == rows_of(f));
}

TEST_CASE("single-row field is the 1-D rearrangement") {
  const RasterGrid g({0, 0}, 1.0, 5, 1, {1, 1, 1, 1, 1});
  const ScalarField s = steiner_field(ScalarField(g, {3, 1, 4, 1, 5}));
  // centre-outward: centre, right, left, right, left
  CHECK(s.values() == std::vector<double>{1, 3, 5, 4, 1});
  // the output row is 2 * 5 + 1 cells wide and centred on x = 0
  REQUIRE(s.grid().nx() == 11);
  CHECK(s.grid().cell_center(5, 0).x == 0.0);
  CHECK(s.grid().active_cells() == std::vector<std::size_t>{3, 4, 5, 6, 7});
}

TEST_CASE("Steiner symmetrization of masks") {
  // row-symmetric about x = 0 with odd rows centred on a cell
  const RasterGrid sym({-1.5, 0}, 1.0, 3, 3, {0, 1, 0, 1, 1, 1, 0, 1, 0});
  const auto centres = [](const RasterGrid& g) {
    std::vector<std::pair<double, double>> c;
    for (std::size_t k : g.active_cells()) {
      const Point2 p = g.cell_center(k % g.nx(), k / g.nx());
      c.emplace_back(p.x, p.y);
    }
    std::sort(c.begin(), c.end());
    return c;
  };
  CHECK(centres(steiner_domain_raster(sym)) == centres(sym));

  const RasterGrid g = rasterize(Domain::disc({0.3, 0.2}, 0.9), 0.07);
  CHECK(steiner_domain_raster(g).active_count() == g.active_count());
  CHECK(steiner_domain_raster(g, SliceAxis::Columns).active_count() == g.active_count());
  CHECK_THROWS(steiner_domain_raster(RasterGrid({0, 0}, 1.0, 2, 2, {0, 0, 0, 0})));
}

TEST_CASE("three symmetrizations turn a parallelogram into a rectangle") {
  const RasterGrid g = rasterize(Domain::polygon({{0, 0}, {2, 0}, {2.8, 1}, {0.8, 1}}), 0.05);
  const RasterGrid r = steiner_domain_raster(
      steiner_domain_raster(steiner_domain_raster(g, SliceAxis::Rows), SliceAxis::Columns), SliceAxis::Rows);
  CHECK(r.active_count() == g.active_count());
  for (SliceAxis axis : {SliceAxis::Rows, SliceAxis::Columns}) {
    std::size_t lo = SIZE_MAX, hi = 0;
    for (std::size_t c : slice_counts(r, axis)) {
      if (c == 0) continue;
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    CHECK(hi - lo <= 1);
  }
}

TEST_CASE("triangle symmetrization") {
  const Triangle t{{0, 0}, {1, 0}, {0.8, 0.6}};
  const Triangle s = steiner_triangle(t, 0);
  CHECK(s.c.x == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.c.y == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(s.a == t.a);
  CHECK(s.b == t.b);
  CHECK(std::abs(s.area() - t.area()) <= 1e-15 * t.area());

  const Triangle iso{{-1, 0}, {1, 0}, {0, 2}};
  const Triangle same = steiner_triangle(iso, 0);
  CHECK(same.c.x == doctest::Approx(0.0).scale(1.0));
  CHECK(same.c.y == 2.0);

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 200; ++k) {
    const Triangle r{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
    if (r.area() < 1e-3) continue;
    for (int side = 0; side < 3; ++side)
      CHECK(std::abs(steiner_triangle(r, side).area() - r.area()) <= 1e-14);
  }
  CHECK_THROWS(steiner_triangle(t, 3));
  CHECK_THROWS(steiner_triangle(Triangle{{0, 0}, {1, 0}, {2, 0}}, 0));
}

TEST_CASE("equilateralize") {
  const double s = 2.0;
  const Triangle eq{{0, 0}, {s, 0}, {s / 2, s * std::sqrt(3.0) / 2}};
  const auto e = equilateralize(eq, 1e-9, 60);
  CHECK(e.sweeps == 0);

  const Triangle right{{0, 0}, {1, 0}, {0, 1}};
  const auto r = equilateralize(right, 1e-9, 60);
  CHECK(r.triangle.side_spread() < 1e-9);
  CHECK(r.sweeps <= 60);
  const double side = std::sqrt(4 * 0.5 / std::sqrt(3.0));
  for (int k = 0; k < 3; ++k) CHECK(r.triangle.side_length(k) == doctest::Approx(side).epsilon(1e-9));
  for (const auto& step : r.trajectory) CHECK(std::abs(step.area() - 0.5) <= 1e-12 * 0.5);

  CHECK_THROWS_AS(equilateralize(right, 1e-9, 2), EquilateralizeError);
  try {
    equilateralize(right, 1e-9, 2);
  } catch (const EquilateralizeError& err) {
    CHECK(err.last_iterate().side_spread() > 1e-9);
  }
}

TEST_CASE("side spread strictly decreases every sweep") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  int tested = 0;
  while (tested < 100) {
    const Triangle t{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
    if (t.area() < 0.05) continue;
    ++tested;
    Triangle cur = t;
    for (int sweep = 0; sweep < 8; ++sweep) {
      Triangle next = cur;
      for (int side = 0; side < 3; ++side) next = steiner_triangle(next, side);
      if (cur.side_spread() < 1e-12) break;
      REQUIRE(next.side_spread() < cur.side_spread());
      cur = next;
    }
  }
}

TEST_CASE("rearrangement does not decrease the iterated-kernel functional") {
  // Sum u(y) k(y,z) k(z,x) u(x) h^6 = u^T A^2 u on the raster, before and
  // after (u, domain) -> (u*, disc), for fields on area-pi rasters.
  const Domain shapes[] = {scale_to_area(Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), kPi),
                           scale_to_area(Domain::triangle({{0, 0}, {1, 0}, {0.5, 0.9}}), kPi)};
  unsigned seed = 10;
  for (const auto& d : shapes) {
    const RasterGrid g = rasterize(d, 0.1);
    const OperatorMatrix a = assemble(g);
    std::mt19937_64 rng(seed++);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(g.active_count());
    for (auto& x : v) x = u(rng);
    const ScalarField f(g, v);
    const ScalarField r = symm_decreasing_rearrange(f);
    const OperatorMatrix ar = assemble(r.grid());
    const Eigen::Map<const Eigen::VectorXd> x(f.values().data(), static_cast<Eigen::Index>(v.size()));
    const Eigen::Map<const Eigen::VectorXd> y(r.values().data(), static_cast<Eigen::Index>(v.size()));
    const double before = (a.entries * x).squaredNorm();
    const double after = (ar.entries * y).squaredNorm();
    INFO("before " << before << " after " << after);
    CHECK(after >= before * (1 - 0.01));
  }
}
