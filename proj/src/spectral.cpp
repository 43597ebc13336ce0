#include "logpot/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "logpot/random.hpp"

namespace logpot {

JacobiResult jacobi_eigen(Eigen::MatrixXd a, bool want_vectors, int max_sweeps, double tolerance) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw Error("matrix must be square");
  JacobiResult out;
  if (want_vectors) out.vectors = Eigen::MatrixXd::Identity(n, n);
  const double threshold = tolerance * a.norm();

  const auto off_norm = [&a, n] {
    double s = 0.0;
    for (Eigen::Index q = 0; q < n; ++q)
      for (Eigen::Index p = 0; p < q; ++p) s += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > threshold) {
    if (sweep == max_sweeps) throw Error("Jacobi eigensolver did not converge");
    ++sweep;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        // A <- J^T A J with J the rotation in the (p, q) plane; columns first,
        // then rows, so the 2x2 block is handled exactly below.
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        if (want_vectors) {
          for (Eigen::Index k = 0; k < n; ++k) {
            const double vkp = out.vectors(k, p), vkq = out.vectors(k, q);
            out.vectors(k, p) = c * vkp - s * vkq;
            out.vectors(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }
  out.values = a.diagonal();
  out.sweeps = sweep;
  return out;
}

Spectrum make_spectrum(const Eigen::VectorXd& values, const Eigen::MatrixXd* vectors) {
  const auto n = static_cast<std::size_t>(values.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&values](std::size_t i, std::size_t j) {
    const double ai = std::abs(values(static_cast<Eigen::Index>(i)));
    const double aj = std::abs(values(static_cast<Eigen::Index>(j)));
    if (ai != aj) return ai > aj;
    const double si = values(static_cast<Eigen::Index>(i)), sj = values(static_cast<Eigen::Index>(j));
    if (si != sj) return si > sj;
    return i < j;
  });
  Spectrum s;
  s.eigenvalues.reserve(n);
  s.charnums.reserve(n);
  for (std::size_t k : order) {
    const double l = values(static_cast<Eigen::Index>(k));
    s.eigenvalues.push_back(l);
    s.charnums.push_back(l != 0.0 ? 1.0 / l : kInfinity);
  }
  if (vectors != nullptr && vectors->size() > 0) {
    Eigen::MatrixXd v(vectors->rows(), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k)
      v.col(static_cast<Eigen::Index>(k)) = vectors->col(static_cast<Eigen::Index>(order[k]));
    s.eigenvectors = std::move(v);
  }
  return s;
}

Spectrum eigen_sym(const Eigen::MatrixXd& a, bool want_vectors, const EigenOptions& options) {
  if (a.rows() != a.cols() || a.rows() == 0) throw Error("matrix must be square and non-empty");
  const auto n = static_cast<std::size_t>(a.rows());
  const bool use_jacobi = options.method == EigenMethod::Jacobi ||
                          (options.method == EigenMethod::Auto && n <= options.jacobi_limit);
  Spectrum s;
  int sweeps = 0;
  if (use_jacobi) {
    auto r = jacobi_eigen(a, want_vectors, options.max_sweeps, options.tolerance);
    s = make_spectrum(r.values, want_vectors ? &r.vectors : nullptr);
    sweeps = r.sweeps;
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        a, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error("tridiagonal eigensolver did not converge");
    if (want_vectors) {
      const Eigen::MatrixXd v = solver.eigenvectors();
      s = make_spectrum(solver.eigenvalues(), &v);
    } else {
      s = make_spectrum(solver.eigenvalues());
    }
  }
  s.solver_tolerance = options.tolerance * a.norm();
  s.sweeps = sweeps;
  return s;
}

Spectrum eigen_sym(const OperatorMatrix& a, bool want_vectors, const EigenOptions& options) {
  return eigen_sym(a.entries, want_vectors, options);
}

Spectrum leading_eigen(const NystromOperator& a, std::size_t k, const SubspaceOptions& options) {
  const std::size_t n = a.size();
  if (k == 0 || k > options.block || options.block > n) throw Error("subspace block must satisfy 1 <= k <= block <= N");
  const auto b = static_cast<Eigen::Index>(options.block);
  RandomStream rng(options.seed);
  Eigen::MatrixXd q(static_cast<Eigen::Index>(n), b);
  for (Eigen::Index c = 0; c < b; ++c)
    for (Eigen::Index r = 0; r < q.rows(); ++r) q(r, c) = rng.uniform(-1.0, 1.0);
  q = Eigen::HouseholderQR<Eigen::MatrixXd>(q).householderQ() * Eigen::MatrixXd::Identity(q.rows(), b);

  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::MatrixXd z = a.apply_block(q);
    Eigen::MatrixXd h = q.transpose() * z;
    h = 0.5 * (h + h.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(h);
    // Ritz pairs by decreasing |theta|
    std::vector<Eigen::Index> order(static_cast<std::size_t>(b));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
      return std::abs(small.eigenvalues()(x)) > std::abs(small.eigenvalues()(y));
    });
    Eigen::MatrixXd v(b, b);
    Eigen::VectorXd theta(b);
    for (Eigen::Index c = 0; c < b; ++c) {
      v.col(c) = small.eigenvectors().col(order[static_cast<std::size_t>(c)]);
      theta(c) = small.eigenvalues()(order[static_cast<std::size_t>(c)]);
    }
    const Eigen::MatrixXd ritz = q * v;
    const Eigen::MatrixXd az = z * v;
    double worst = 0.0;
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(k); ++c)
      worst = std::max(worst, (az.col(c) - theta(c) * ritz.col(c)).norm());
    if (worst <= options.tolerance * std::abs(theta(0))) {
      Eigen::VectorXd values = theta.head(static_cast<Eigen::Index>(k));
      Eigen::MatrixXd vectors = ritz.leftCols(static_cast<Eigen::Index>(k));
      Spectrum s = make_spectrum(values, &vectors);
      s.solver_tolerance = options.tolerance * std::abs(theta(0));
      s.sweeps = it;
      return s;
    }
    q = Eigen::HouseholderQR<Eigen::MatrixXd>(az).householderQ() * Eigen::MatrixXd::Identity(q.rows(), b);
  }
  throw Error("subspace iteration did not converge");
}

double operator_norm(const Spectrum& s) {
  for (double l : s.eigenvalues)
    if (l != 0.0) return std::abs(l);  // sorted, so the first non-zero is the largest
  throw Error("spectrum has no non-zero eigenvalue");
}

std::string to_string(SchattenMethod m) {
  switch (m) {
    case SchattenMethod::Eigen: return "eigen";
    case SchattenMethod::McTrace: return "mc-trace";
    case SchattenMethod::DiscOracle: return "disc-oracle";
  }
  return "unknown";
}

SchattenEstimate schatten_from_spectrum(const Spectrum& s, double p) {
  if (!(p >= 1.0)) throw Error("Schatten exponent must be >= 1");
  SchattenEstimate est;
  est.p = p;
  est.method = SchattenMethod::Eigen;
  if (s.eigenvalues.empty()) return est;
  const double top = std::abs(s.eigenvalues.front());
  if (std::isinf(p)) {
    est.value = top;
    return est;
  }
  if (top > 0.0) {
    // scale by |lambda_1| so large p cannot underflow
    double sum = 0.0;
    for (auto it = s.eigenvalues.rbegin(); it != s.eigenvalues.rend(); ++it)
      sum += std::pow(std::abs(*it) / top, p);
    est.value = top * std::pow(sum, 1.0 / p);
  }
  const bool even = std::fmod(p, 2.0) == 0.0;
  const bool has_negative = std::any_of(s.eigenvalues.begin(), s.eigenvalues.end(),
                                        [](double l) { return l < 0.0; });
  est.requires_positivity = !even && has_negative;
  return est;
}

std::size_t negative_count(const Spectrum& s, double tol) {
  if (tol < 0.0) throw Error("tolerance must be non-negative");
  if (s.eigenvalues.empty()) return 0;
  const double cut = -tol * std::abs(s.eigenvalues.front());
  return static_cast<std::size_t>(
      std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(), [cut](double l) { return l < cut; }));
}

EigenfunctionDiagnostics first_eigenfunction_diagnostics(const Spectrum& s) {
  if (!s.eigenvectors || s.eigenvectors->cols() == 0) throw Error("eigenvectors not computed");
  Eigen::VectorXd v = s.eigenvectors->col(0);
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0.0) v = -v;
  EigenfunctionDiagnostics d;
  d.max_entry = v.maxCoeff();
  d.min_entry = v.minCoeff();
  d.sign_consistent = d.min_entry >= -1e-6 * d.max_entry;
  d.gap = s.eigenvalues.size() > 1
              ? std::abs(s.eigenvalues[0]) - std::abs(s.eigenvalues[1])
              : std::abs(s.eigenvalues[0]);
  return d;
}

double trace_power(const Spectrum& s, int p) {
  double sum = 0.0;
  for (auto it = s.eigenvalues.rbegin(); it != s.eigenvalues.rend(); ++it) sum += std::pow(*it, p);
  return sum;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "index,eigenvalue,charnum\n";
  for (std::size_t k = 0; k < s.eigenvalues.size(); ++k)
    out << fmt::format("{},{:.17g},{:.17g}\n", k + 1, s.eigenvalues[k], s.charnums[k]);
}

}  // namespace logpot
