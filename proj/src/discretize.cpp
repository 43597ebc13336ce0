#include "logpot/discretize.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

namespace logpot {

double self_weight(double h) {
  if (!(h > 0.0)) throw Error("cell size must be positive");
  const double rho = h / std::sqrt(kPi);
  return rho * rho * (0.5 * std::log(1.0 / rho) + 0.25);
}

namespace {

// Offset table shared by the dense and matrix-free paths, so both produce
// bit-identical entries.
std::vector<double> offset_table(const RasterGrid& grid) {
  const double h = grid.cell_size();
  const std::size_t nx = grid.nx(), ny = grid.ny();
  std::vector<double> table(nx * ny);
  for (std::size_t di = 0; di < nx; ++di) {
    for (std::size_t dj = 0; dj < ny; ++dj) {
      if (di == 0 && dj == 0) {
        table[0] = self_weight(h);
        continue;
      }
      const double r = h * std::hypot(static_cast<double>(di), static_cast<double>(dj));
      table[di * ny + dj] = h * h * (-std::log(r) / kTwoPi);
    }
  }
  return table;
}

}  // namespace

OperatorMatrix assemble(const RasterGrid& grid, std::size_t cap) {
  const auto& active = grid.active_cells();
  const std::size_t n = active.size();
  if (n == 0) throw Error("empty grid");
  if (n > cap) throw Error("grid too fine for dense assembly");
  const auto table = offset_table(grid);
  const std::size_t nx = grid.nx(), ny = grid.ny();
  Eigen::MatrixXd a(n, n);
  parallel_for(n, [&](std::size_t r) {
    const long ir = static_cast<long>(active[r] % nx), jr = static_cast<long>(active[r] / nx);
    for (std::size_t c = 0; c < n; ++c) {
      const long ic = static_cast<long>(active[c] % nx), jc = static_cast<long>(active[c] / nx);
      const auto di = static_cast<std::size_t>(std::labs(ir - ic));
      const auto dj = static_cast<std::size_t>(std::labs(jr - jc));
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = table[di * ny + dj];
    }
  });
  return OperatorMatrix{grid, std::move(a)};
}

NystromOperator::NystromOperator(RasterGrid grid) : grid_(std::move(grid)) {
  if (grid_.active_count() == 0) throw Error("empty grid");
  table_ = offset_table(grid_);
  cells_.reserve(grid_.active_count());
  for (std::size_t k : grid_.active_cells())
    cells_.push_back({static_cast<long>(k % grid_.nx()), static_cast<long>(k / grid_.nx())});
}

double NystromOperator::entry(std::size_t a, std::size_t b) const {
  const auto di = static_cast<std::size_t>(std::labs(cells_[a].i - cells_[b].i));
  const auto dj = static_cast<std::size_t>(std::labs(cells_[a].j - cells_[b].j));
  return table_[di * grid_.ny() + dj];
}

std::vector<double> NystromOperator::apply(std::span<const double> x) const {
  const std::size_t n = cells_.size();
  if (x.size() != n) throw Error("vector length does not match operator size");
  std::vector<double> y(n, 0.0);
  const std::size_t ny = grid_.ny();
  parallel_for(n, [&](std::size_t r) {
    const Cell cr = cells_[r];
    double acc = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      const auto di = static_cast<std::size_t>(std::labs(cr.i - cells_[c].i));
      const auto dj = static_cast<std::size_t>(std::labs(cr.j - cells_[c].j));
      acc += table_[di * ny + dj] * x[c];
    }
    y[r] = acc;
  });
  return y;
}

Eigen::MatrixXd NystromOperator::apply_block(const Eigen::MatrixXd& x) const {
  const std::size_t n = cells_.size();
  if (static_cast<std::size_t>(x.rows()) != n) throw Error("vector length does not match operator size");
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor xr = x;
  RowMajor y = RowMajor::Zero(x.rows(), x.cols());
  const std::size_t ny = grid_.ny();
  parallel_for(n, [&](std::size_t r) {
    const Cell cr = cells_[r];
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(x.cols());
    for (std::size_t c = 0; c < n; ++c) {
      const auto di = static_cast<std::size_t>(std::labs(cr.i - cells_[c].i));
      const auto dj = static_cast<std::size_t>(std::labs(cr.j - cells_[c].j));
      acc.noalias() += table_[di * ny + dj] * xr.row(static_cast<Eigen::Index>(c));
    }
    y.row(static_cast<Eigen::Index>(r)) = acc;
  });
  return y;
}

double NystromOperator::frobenius_squared() const {
  const std::size_t n = cells_.size();
  std::vector<double> rows(n);
  parallel_for(n, [&](std::size_t r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      const double e = entry(r, c);
      acc += e * e;
    }
    rows[r] = acc;
  });
  double total = 0.0;
  for (double v : rows) total += v;
  return total;
}

// ---------------------------------------------------------------------------
// Matrix dump

namespace {

template <typename T>
T to_little_endian(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

template <typename T>
void put(std::ostream& out, T v) {
  v = to_little_endian(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error("truncated matrix dump");
  return to_little_endian(v);
}

}  // namespace

void write_matrix_dump(std::ostream& out, const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error("matrix dump requires a square matrix");
  out.write("LPOT", 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.rows()));
  put<std::uint32_t>(out, 0);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) put<double>(out, m(r, c));
  if (!out) throw Error("failed to write matrix dump");
}

Eigen::MatrixXd read_matrix_dump(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "LPOT", 4) != 0) throw Error("bad matrix dump magic");
  const auto n = static_cast<Eigen::Index>(get<std::uint32_t>(in));
  (void)get<std::uint32_t>(in);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = get<double>(in);
  return m;
}

}  // namespace logpot
