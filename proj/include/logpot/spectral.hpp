#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "logpot/discretize.hpp"

namespace logpot {

/// Eigenvalues sorted by decreasing |lambda| (ties: larger signed value first,
/// then original index), with characteristic numbers mu = 1/lambda in the same
/// order. Column k of eigenvectors belongs to eigenvalues[k].
struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<double> charnums;
  std::optional<Eigen::MatrixXd> eigenvectors;
  /// Absolute eigenvalue accuracy the solver was asked for.
  double solver_tolerance = 0.0;
  int sweeps = 0;
};

enum class EigenMethod { Auto, Jacobi, Tridiagonal };

struct EigenOptions {
  EigenMethod method = EigenMethod::Auto;
  /// Auto uses Jacobi up to this size and tridiagonal QL beyond it.
  std::size_t jacobi_limit = 512;
  int max_sweeps = 100;
  /// Convergence: off-diagonal Frobenius norm < tolerance * ||A||_F.
  double tolerance = 1e-12;
};

struct JacobiResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // empty unless requested
  int sweeps = 0;
};

/// Cyclic (row-by-row) Jacobi rotations. Throws after max_sweeps.
JacobiResult jacobi_eigen(Eigen::MatrixXd a, bool want_vectors, int max_sweeps, double tolerance);

Spectrum eigen_sym(const Eigen::MatrixXd& a, bool want_vectors, const EigenOptions& options = {});
Spectrum eigen_sym(const OperatorMatrix& a, bool want_vectors, const EigenOptions& options = {});

/// Builds a Spectrum from unordered eigenpairs, applying the ordering rule.
Spectrum make_spectrum(const Eigen::VectorXd& values, const Eigen::MatrixXd* vectors = nullptr);

struct SubspaceOptions {
  std::size_t block = 6;
  int max_iterations = 1000;
  /// Stop when every wanted Ritz residual ||A v - theta v|| < tolerance * |theta_1|.
  double tolerance = 1e-10;
  std::uint64_t seed = 1;
};

/// The k eigenpairs of largest |lambda| of the matrix-free operator, by block
/// subspace iteration with Rayleigh-Ritz. The block should exceed k by the
/// size of any cluster straddling position k. sweeps holds the iteration count.
Spectrum leading_eigen(const NystromOperator& a, std::size_t k, const SubspaceOptions& options = {});

/// |lambda_1| = 1 / |mu_1|.
double operator_norm(const Spectrum& s);

enum class SchattenMethod { Eigen, McTrace, DiscOracle };
std::string to_string(SchattenMethod m);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct SchattenEstimate {
  double p = 2.0;
  double value = 0.0;
  SchattenMethod method = SchattenMethod::Eigen;
  double error_bound = 0.0;
  /// Set when p is not an even integer and a negative eigenvalue is present;
  /// the odd-p disc comparison is only proved for positive operators.
  bool requires_positivity = false;
};

/// (sum |lambda|^p)^(1/p); p = kInfinity gives the operator norm.
SchattenEstimate schatten_from_spectrum(const Spectrum& s, double p);

/// Eigenvalues below -tol * |lambda_1|.
std::size_t negative_count(const Spectrum& s, double tol);

struct EigenfunctionDiagnostics {
  bool sign_consistent = false;
  double gap = 0.0;
  double min_entry = 0.0;
  double max_entry = 0.0;
};

/// Sign structure of the top eigenvector and the gap |lambda_1| - |lambda_2|.
EigenfunctionDiagnostics first_eigenfunction_diagnostics(const Spectrum& s);

/// sum lambda^p (signed), i.e. tr(A^p).
double trace_power(const Spectrum& s, int p);

/// index,eigenvalue,charnum with 17 significant digits.
void write_spectrum_csv(std::ostream& out, const Spectrum& s);

}  // namespace logpot
