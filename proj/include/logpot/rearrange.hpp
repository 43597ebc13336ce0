#pragma once

#include <cstddef>
#include <vector>

#include "logpot/geometry.hpp"

namespace logpot {

/// Non-negative function on the active cells of a raster, in row-major
/// active-cell order.
class ScalarField {
 public:
  ScalarField(RasterGrid grid, std::vector<double> values);

  const RasterGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

  double sum() const;
  double sum_squares() const;

 private:
  RasterGrid grid_;
  std::vector<double> values_;
};

/// Equal-area disc centred at the origin.
Domain domain_rearrange(const Domain& d);

/// Raster of the `count` cells nearest the origin on the lattice whose cell
/// corners sit at integer multiples of h. Ties in distance go to the smaller
/// row-major index. Cells are returned in the order they were chosen.
struct CenteredRaster {
  RasterGrid grid;
  std::vector<std::size_t> fill_order;  // linear cell indices, nearest first
};
CenteredRaster centered_disc_raster(std::size_t count, double h);

/// Discrete symmetric-decreasing rearrangement: values sorted descending and
/// laid onto centered_disc_raster(N, h) nearest-first.
ScalarField symm_decreasing_rearrange(const ScalarField& f);

/// Direction of the slices being rearranged. Rows: slices at fixed y,
/// symmetrized about the line x = 0. Columns: slices at fixed x, about y = 0.
enum class SliceAxis { Rows, Columns };

/// Per-slice rearrangement of the mask: each slice keeps its cell count,
/// refilled centre-outward (centre, +1, -1, +2, ...) on a grid whose middle
/// column (or row) is centred on the symmetry line.
RasterGrid steiner_domain_raster(const RasterGrid& g, SliceAxis axis = SliceAxis::Rows);

/// Per-slice symmetric-decreasing rearrangement of a field; the output lives
/// on steiner_domain_raster(f.grid(), axis).
ScalarField steiner_field(const ScalarField& f, SliceAxis axis = SliceAxis::Rows);

/// Steiner symmetrization of a triangle about the perpendicular bisector of
/// side k (vertices k, k+1): the opposite vertex slides parallel to the side
/// onto the bisector.
Triangle steiner_triangle(const Triangle& t, int side);

struct EquilateralizeResult {
  Triangle triangle;
  int sweeps = 0;
  /// Iterate after each full sweep; trajectory[0] is the input.
  std::vector<Triangle> trajectory;
};

class EquilateralizeError : public Error {
 public:
  EquilateralizeError(const std::string& what, Triangle last) : Error(what), last_(last) {}
  const Triangle& last_iterate() const { return last_; }

 private:
  Triangle last_;
};

/// Sweeps steiner_triangle over sides 0, 1, 2 until side_spread() < tol.
EquilateralizeResult equilateralize(const Triangle& t, double tol, int max_sweeps);

}  // namespace logpot
