#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "logpot/geometry.hpp"
#include "logpot/spectral.hpp"
#include "logpot/trace_mc.hpp"

namespace logpot {

// ---------------------------------------------------------------------------
// Verdicts

enum class Verdict { Pass, Undecided, Fail };
std::string to_string(Verdict v);

/// One-sided: Pass if margin > budget, Fail if margin < -budget.
Verdict judge(double margin, double budget);
/// Fail beats Undecided beats Pass.
Verdict worst(Verdict a, Verdict b);

/// "subject <= reference" with margin = reference - subject.
struct Comparison {
  std::string subject;
  std::string reference;
  double p = 2.0;
  std::string route;
  double subject_value = 0.0;
  double reference_value = 0.0;
  double margin = 0.0;
  double budget = 0.0;
  Verdict verdict = Verdict::Undecided;
  std::string note;
};
nlohmann::json to_json(const Comparison& c);

/// "inf" for the operator norm, the number otherwise.
nlohmann::json p_label(double p);

struct NamedDomain {
  std::string name;
  Domain domain;
};

// ---------------------------------------------------------------------------
// Norm estimates

/// First-order extrapolated discretization error of the fine value:
/// |fine - coarse| * h_fine / (h_coarse - h_fine).
double richardson_budget(double fine, double coarse, double h_fine, double h_coarse);

/// Schatten norms of the discretized operator at two cell sizes. value[k] is
/// the h_fine value of p[k]; budget[k] its Richardson error.
struct EigenNorms {
  double h_fine = 0.0;
  double h_coarse = 0.0;
  std::size_t cells = 0;
  std::vector<double> p;
  std::vector<double> value;
  std::vector<double> coarse_value;
  std::vector<double> budget;
  std::size_t negative = 0;
  double top = 0.0;
  double gap = 0.0;
};
EigenNorms eigen_norms(const Domain& d, const std::vector<double>& ps, double h_fine, double h_coarse);

/// Spectrum of the raster (a raster domain is used as is, otherwise
/// rasterized at h).
Spectrum raster_spectrum(const Domain& d, double h, bool want_vectors, std::size_t cap = kDefaultAssemblyCap);

/// Largest |lambda| of the discretized operator: dense below the assembly
/// cap, matrix-free subspace iteration above it.
double top_eigenvalue(const Domain& d, double h);

/// Schatten norm mean^(1/p) from a cyclic trace estimate; norm_error is its
/// delta-method standard error.
struct McNorm {
  TraceEstimate trace;
  double norm = 0.0;
  double norm_error = 0.0;
};
McNorm mc_norm(const Domain& d, int p, std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentConfig {
  std::vector<NamedDomain> domains;
  std::vector<double> p{2.0, 4.0};
  double h = 0.04;
  double h_coarse = 0.05;
  std::size_t samples = 2'000'000;
  std::uint64_t seed = 1;
  /// Every domain is rescaled to this area before comparison.
  double area = kPi;
  int l_max = 200;
  int m_max = 200;
};
nlohmann::json to_json(const ExperimentConfig& c);

struct Report {
  nlohmann::json body;
  Verdict overall = Verdict::Pass;
  std::vector<Comparison> comparisons;
};

/// Every domain against the equal-area disc: eigen route against the disc
/// raster at the same h, MC route (even p) against the Bessel series, and the
/// operator norm against 1/j01^2.
Report verify_disc_max(const ExperimentConfig& c);

/// Every triangle against the equilateral triangle of the same area, eigen
/// route for each p and the operator norm; also the equilateralize
/// trajectory of each input.
Report verify_triangles(const ExperimentConfig& c);

/// Cyclic trace of the domain against the equal-area disc at the same seed.
/// Pass iff estimate(domain) <= estimate(disc) + 3 * combined stderr.
Report bll_check(const NamedDomain& d, int p, std::size_t n, std::uint64_t seed);

enum class BvpSource { Constant, Gaussian, Zero };
BvpSource parse_bvp_source(const std::string& s);
std::string to_string(BvpSource s);

struct BvpResult {
  double h = 0.0;
  std::size_t cells = 0;
  std::size_t interior = 0;
  /// Potential at the centroid.
  double u_center = 0.0;
  /// max |-Lap_h u - f| / max|f| over interior cells (absolute when f = 0).
  double max_residual = 0.0;
};

/// u = A f on the raster, then the 5-point Laplacian at cells whose +-3 cell
/// neighbourhood is entirely active.
BvpResult bvp_residual(const Domain& d, double h, BvpSource source);

/// Residual study over decreasing h; Pass iff the residual decreases at every
/// refinement (or stays exactly zero).
Report bvp_check(const NamedDomain& d, const std::vector<double>& hs, BvpSource source);

struct DecompOptions {
  std::vector<double> r0{0.5, 1.0, 2.0};
  double r_min = 1e-3;
  double r_max = 1e3;
  std::size_t points = 601;
};

/// Identity h1 + h2 = kernel profile, h1 > 0 strictly decreasing, h2
/// non-increasing, q_R >= 0, f -> f_inf, and f_inf(1) = -ln 2 / (2 pi).
Report decomp_check(const DecompOptions& o);

}  // namespace logpot
