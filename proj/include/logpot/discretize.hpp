#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "logpot/geometry.hpp"

namespace logpot {

/// Integral of the kernel over the disc of area h^2 centred at the
/// singularity: rho^2 (ln(1/rho)/2 + 1/4) with rho = h / sqrt(pi).
double self_weight(double h);

inline constexpr std::size_t kDefaultAssemblyCap = 4096;

/// Dense midpoint Nystrom matrix of the logarithmic potential on the active
/// cells of a raster, in row-major active-cell order.
struct OperatorMatrix {
  RasterGrid grid;
  Eigen::MatrixXd entries;

  std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
  double cell_area() const { return grid.cell_size() * grid.cell_size(); }
};

OperatorMatrix assemble(const RasterGrid& grid, std::size_t cap = kDefaultAssemblyCap);

/// Matrix-free form of the same operator. Entries depend only on the integer
/// cell offset, so one table of size nx * ny replaces the N x N matrix; this
/// is what the refinement studies use beyond the dense cap.
class NystromOperator {
 public:
  explicit NystromOperator(RasterGrid grid);

  const RasterGrid& grid() const { return grid_; }
  std::size_t size() const { return cells_.size(); }

  /// Matrix entry for active cells a and b (positions in active order).
  double entry(std::size_t a, std::size_t b) const;

  /// y = A x; rows are computed in parallel, each by a single worker.
  std::vector<double> apply(std::span<const double> x) const;

  /// Y = A X for a block of column vectors, one pass over the entries.
  Eigen::MatrixXd apply_block(const Eigen::MatrixXd& x) const;
  /// sum_ij A_ij^2 without forming A.
  double frobenius_squared() const;

 private:
  struct Cell {
    long i;
    long j;
  };
  RasterGrid grid_;
  std::vector<Cell> cells_;
  std::vector<double> table_;  // table_[|di| * ny + |dj|]
};

/// Binary dump: "LPOT", u32 N, u32 reserved (0), then N*N little-endian
/// float64 in row-major order.
void write_matrix_dump(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_dump(std::istream& in);

}  // namespace logpot
