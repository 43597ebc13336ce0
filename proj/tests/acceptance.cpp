// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Every criterion runs even when an earlier one fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "logpot/disc_oracle.hpp"
#include "logpot/discretize.hpp"
#include "logpot/geometry.hpp"
#include "logpot/harness.hpp"
#include "logpot/logkernel.hpp"
#include "logpot/rearrange.hpp"
#include "logpot/spectral.hpp"
#include "logpot/trace_mc.hpp"

using namespace logpot;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "[x] ") + what;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const double kTopDisc = 1.0 / std::pow(bessel_zero(0, 1), 2);

Domain unit_square() { return Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

Domain at_area_pi(const Domain& d) { return scale_to_area(d, kPi); }

std::vector<NamedDomain> desk_domains() {
  return {
      {"square", at_area_pi(unit_square())},
      {"rectangle-2:1", at_area_pi(Domain::polygon({{0, 0}, {2, 0}, {2, 1}, {0, 1}}))},
      {"equilateral", at_area_pi(Domain::triangle({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}))},
      {"right-isosceles", at_area_pi(Domain::triangle({{0, 0}, {1, 0}, {0, 1}}))},
  };
}

std::string verdicts(const Report& r, const std::function<bool(const Comparison&)>& keep, bool& all_pass) {
  std::string s;
  for (const auto& c : r.comparisons) {
    if (!keep(c)) continue;
    if (c.verdict != Verdict::Pass) all_pass = false;
    s += fmt::format("{}{}/{}/p={}: {} (margin {:.3g}, budget {:.3g})", s.empty() ? "" : ", ", c.subject, c.route,
                     std::isinf(c.p) ? std::string("inf") : fmt::format("{:g}", c.p), to_string(c.verdict), c.margin,
                     c.budget);
  }
  return s;
}

// 1. Largest eigenvalue of the unit disc at h = 0.04 and 0.02 against 1/j01^2.
Outcome disc_operator_norm() {
  Outcome o;
  const auto t0 = Clock::now();
  const Domain disc = Domain::disc({0, 0}, 1);
  const double coarse = top_eigenvalue(disc, 0.04);
  const double fine = top_eigenvalue(disc, 0.02);
  const double e_coarse = std::abs(coarse - kTopDisc) / kTopDisc;
  const double e_fine = std::abs(fine - kTopDisc) / kTopDisc;
  const double secs = seconds_since(t0);
  o.require(e_coarse < 0.02, fmt::format("h=0.04 lambda1 {:.6f} vs {:.6f}, rel err {:.3g} < 0.02", coarse, kTopDisc, e_coarse));
  o.require(e_fine < e_coarse, fmt::format("h=0.02 rel err {:.3g} < {:.3g}", e_fine, e_coarse));
  o.require(secs <= 300, fmt::format("{:.0f} s <= 300 s", secs));
  return o;
}

// 2. Disc Hilbert-Schmidt norm: Bessel series, eigenvalue sum, Monte Carlo.
Outcome disc_schatten_two() {
  Outcome o;
  const auto t0 = Clock::now();
  const Domain disc = Domain::disc({0, 0}, 1);
  const double series = disc_schatten(2.0, 200, 200).value;
  const double doubled = disc_schatten(2.0, 400, 400).value;
  const double drift = std::abs(series - doubled) / doubled;
  o.require(drift < 5e-7, fmt::format("series {:.9f}, doubled truncation {:.9f}, rel drift {:.2g} < 5e-7", series,
                                      doubled, drift));
  const double eig = schatten_from_spectrum(raster_spectrum(disc, 0.04, false), 2.0).value;
  const double e_eig = std::abs(eig - series) / series;
  o.require(e_eig < 0.02, fmt::format("eigen h=0.04 {:.6f}, rel diff {:.3g} < 0.02", eig, e_eig));
  const TraceEstimate mc = hs_norm_mc(disc, 2'000'000, 1);
  const double dev = std::abs(mc.mean - series * series);
  o.require(dev <= 3 * mc.std_error,
            fmt::format("MC trace {:.6f} +- {:.2g} vs series^2 {:.6f} ({:.2f} sigma)", mc.mean, mc.std_error,
                        series * series, dev / mc.std_error));
  const double secs = seconds_since(t0);
  o.require(secs <= 300, fmt::format("{:.0f} s <= 300 s", secs));
  return o;
}

// 3. tr(A^p) from the spectrum against the cyclic-trace estimator.
Outcome trace_identity() {
  Outcome o;
  // side sqrt(pi) tiles exactly with 45 cells, so the raster is the square
  const double side = std::sqrt(kPi);
  const RasterGrid g({0, 0}, side / 45, 45, 45, std::vector<std::uint8_t>(45 * 45, 1));
  const Domain sq = Domain::polygon({{0, 0}, {side, 0}, {side, side}, {0, side}});
  const Spectrum s = eigen_sym(assemble(g), false);
  for (int p : {2, 3}) {
    const double eig = trace_power(s, p);
    const TraceEstimate mc = cyclic_trace_mc(sq, p, 2'000'000, 1);
    const double dev = std::abs(eig - mc.mean);
    o.require(dev <= 3 * mc.std_error, fmt::format("p={}: eigen {:.6f}, MC {:.6f} +- {:.2g} ({:.2f} sigma)", p, eig,
                                                    mc.mean, mc.std_error, dev / mc.std_error));
  }
  return o;
}

// 4 and 5 share one run of the disc-maximality experiment.
const Report& disc_max_report() {
  static const Report r = [] {
    ExperimentConfig c;
    c.domains = desk_domains();
    c.domains.push_back({"disc", Domain::disc({0, 0}, 1)});
    c.p = {2.0, 4.0};
    return verify_disc_max(c);
  }();
  return r;
}

Outcome disc_maximality() {
  Outcome o;
  bool all = true;
  const std::string s = verdicts(disc_max_report(), [](const Comparison& c) { return !std::isinf(c.p); }, all);
  o.require(all, s);
  return o;
}

Outcome operator_norm_bound() {
  Outcome o;
  bool all = true;
  const std::string s = verdicts(
      disc_max_report(),
      [](const Comparison& c) { return std::isinf(c.p) && c.route == "eigen-vs-oracle" && c.subject != "disc"; }, all);
  o.require(all, s);
  return o;
}

// 6. The equilateral triangle against the other triangles.
Outcome triangle_maximality() {
  Outcome o;
  ExperimentConfig c;
  c.domains = {
      {"equilateral", at_area_pi(Domain::triangle({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}))},
      {"right-isosceles", at_area_pi(Domain::triangle({{0, 0}, {1, 0}, {0, 1}}))},
      {"thin-1:4", at_area_pi(Domain::triangle({{0, 0}, {1, 0}, {0.5, 4}}))},
  };
  c.p = {2.0, 4.0};
  bool all = true;
  const std::string s = verdicts(verify_triangles(c), [](const Comparison&) { return true; }, all);
  o.require(all, s);
  return o;
}

// 7. Cyclic trace of the square never beats the disc.
Outcome bll_square() {
  Outcome o;
  const NamedDomain sq{"square", at_area_pi(unit_square())};
  for (int p : {2, 3, 4}) {
    const Report r = bll_check(sq, p, 2'000'000, 1);
    const Comparison& c = r.comparisons.at(0);
    o.require(r.overall == Verdict::Pass,
              fmt::format("p={}: {} (square {:.6f}, disc {:.6f}, budget {:.2g})", p, to_string(r.overall),
                          c.subject_value, c.reference_value, c.budget));
  }
  return o;
}

// 8. Kernel decomposition identities on a log grid.
Outcome kernel_decomposition() {
  Outcome o;
  double worst_identity = 0.0;
  bool positive = true, decreasing = true;
  const std::size_t n = 601;
  for (double r0 : {0.5, 1.0, 2.0}) {
    const KernelDecomposition k(r0);
    double previous = kInfinity;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = std::pow(10.0, -3.0 + 6.0 * static_cast<double>(i) / (n - 1));
      const double reference = std::log(1.0 / r) / (2.0 * kPi);
      worst_identity = std::max(worst_identity, std::abs(k.h1(r) + k.h2(r) - reference));
      const double h1 = k.h1(r);
      positive = positive && h1 > 0.0;
      decreasing = decreasing && h1 < previous;
      previous = h1;
    }
  }
  o.require(worst_identity <= 1e-12, fmt::format("max |h1 + h2 - kernel| = {:.2g}", worst_identity));
  o.require(positive && decreasing, "h1 > 0 and strictly decreasing");
  const double finf = f_inf(1.0);
  const double target = -std::log(2.0) / (2.0 * kPi);
  o.require(std::abs(finf - target) <= 1e-12, fmt::format("f_inf(1) = {:.15f}", finf));
  const Report r = decomp_check({});
  o.require(r.overall == Verdict::Pass, "decomp-check " + to_string(r.overall));
  return o;
}

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// 9. Discrete rearrangements.
Outcome rearrangement() {
  Outcome o;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const RasterGrid g = rasterize(at_area_pi(Domain::polygon({{0, 0}, {2, 0}, {2.6, 1.2}, {0.3, 1.5}})), 0.05);
  bool multiset = true, squares = true;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> v(g.active_count());
    for (auto& x : v) x = trial % 2 ? std::floor(u(rng) * 6) : u(rng);
    const ScalarField f(g, v);
    for (const ScalarField& r :
         {symm_decreasing_rearrange(f), steiner_field(f, SliceAxis::Rows), steiner_field(f, SliceAxis::Columns)}) {
      multiset = multiset && sorted(r.values()) == sorted(f.values());
      squares = squares && r.sum_squares() == f.sum_squares();
    }
  }
  o.require(multiset, "value multisets preserved");
  o.require(squares, "sum of squares preserved exactly");

  // indicator of m cells lands on the m cells nearest the origin
  std::vector<double> v(g.active_count(), 0.0);
  const std::size_t m = g.active_count() / 5;
  for (std::size_t k = 0; k < m; ++k) v[(k * 7) % v.size()] = 1.0;
  const ScalarField r = symm_decreasing_rearrange(ScalarField(g, v));
  const CenteredRaster target = centered_disc_raster(g.active_count(), g.cell_size());
  bool nearest = r.grid() == target.grid;
  if (nearest) {
    std::vector<double> by_cell(r.grid().nx() * r.grid().ny(), -1.0);
    for (std::size_t a = 0; a < r.values().size(); ++a) by_cell[r.grid().active_cells()[a]] = r.values()[a];
    for (std::size_t k = 0; k < target.fill_order.size(); ++k)
      nearest = nearest && by_cell[target.fill_order[k]] == (k < m ? 1.0 : 0.0);
  }
  o.require(nearest, fmt::format("indicator of {} cells maps to the nearest-origin cells", m));
  return o;
}

// 10. Triangle Steiner symmetrization and the equilateralizing sweep.
Outcome triangle_symmetrization() {
  Outcome o;
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-3, 3);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Triangle t{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
    if (t.area() < 1e-2) continue;
    for (int side = 0; side < 3; ++side)
      worst = std::max(worst, std::abs(steiner_triangle(t, side).area() - t.area()) / t.area());
  }
  o.require(worst <= 1e-12, fmt::format("max relative area change {:.2g}", worst));

  const auto right = equilateralize({{0, 0}, {1, 0}, {0, 1}}, 1e-9, 60);
  const double s = std::sqrt(4 * 0.5 / std::sqrt(3.0));
  o.require(right.triangle.side_spread() < 1e-9 && right.sweeps <= 60,
            fmt::format("right triangle: spread {:.2g} after {} sweeps, side {:.12f} (target {:.12f})",
                        right.triangle.side_spread(), right.sweeps, right.triangle.side_length(0), s));

  const Triangle eq{{0, 0}, {2, 0}, {1, std::sqrt(3.0)}};
  const auto fixed = equilateralize(eq, 1e-9, 60);
  double moved = 0.0;
  for (int side = 0; side < 3; ++side) {
    const Triangle t = steiner_triangle(eq, side);
    for (auto [a, b] : {std::pair{t.a, eq.a}, {t.b, eq.b}, {t.c, eq.c}}) moved = std::max(moved, distance(a, b));
  }
  o.require(fixed.sweeps == 0 && moved < 1e-12,
            fmt::format("equilateral: {} sweeps, max vertex move {:.2g}", fixed.sweeps, moved));
  return o;
}

// 11. Negative eigenvalues, sign of the top eigenvector, simplicity.
Outcome spectral_structure() {
  Outcome o;
  const double h = 0.04;
  std::vector<NamedDomain> all = desk_domains();
  all.push_back({"thin-1:4", at_area_pi(Domain::triangle({{0, 0}, {1, 0}, {0.5, 4}}))});
  all.push_back({"disc", Domain::disc({0, 0}, 1)});
  all.push_back({"unit-square", unit_square()});
  const std::vector<NamedDomain> inside = {
      {"disc-0.9", Domain::disc({0, 0}, 0.9)},
      {"centred-square", Domain::polygon({{-0.6, -0.6}, {0.6, -0.6}, {0.6, 0.6}, {-0.6, 0.6}})},
      {"triangle-in-disc", Domain::triangle({{-0.8, -0.5}, {0.9, -0.3}, {0.1, 0.95}})},
  };
  std::string counts;
  std::size_t worst_any = 0, worst_inside = 0;
  for (const auto& d : all) {
    const std::size_t n = negative_count(raster_spectrum(d.domain, h, false), 1e-10);
    worst_any = std::max(worst_any, n);
    counts += fmt::format("{}{}:{}", counts.empty() ? "" : " ", d.name, n);
  }
  for (const auto& d : inside) {
    const std::size_t n = negative_count(raster_spectrum(d.domain, h, false), 1e-10);
    worst_inside = std::max(worst_inside, n);
    counts += fmt::format(" {}:{}", d.name, n);
  }
  o.require(worst_any <= 1 && worst_inside == 0, "negative eigenvalues " + counts);

  for (const auto& d : {NamedDomain{"disc", Domain::disc({0, 0}, 1)}, NamedDomain{"unit-square", unit_square()}}) {
    const Spectrum s = raster_spectrum(d.domain, h, true);
    const auto diag = first_eigenfunction_diagnostics(s);
    o.require(diag.sign_consistent, fmt::format("{}: top eigenvector min/max {:.3g}", d.name,
                                                diag.min_entry / diag.max_entry));
    o.require(diag.gap > 10 * s.solver_tolerance,
              fmt::format("{}: gap {:.3g} vs 10 x tolerance {:.3g}", d.name, diag.gap, 10 * s.solver_tolerance));
  }
  return o;
}

// 12. Interior boundary-value check for f = 1 on the unit disc.
Outcome bvp_interior() {
  Outcome o;
  const Domain disc = Domain::disc({0, 0}, 1);
  const BvpResult at04 = bvp_residual(disc, 0.04, BvpSource::Constant);
  const double e = std::abs(at04.u_center - 0.25) / 0.25;
  o.require(e < 0.02, fmt::format("u(0) = {:.6f} at h=0.04, rel err {:.3g}", at04.u_center, e));
  const std::vector<double> hs{0.08, 0.04, 0.02};
  for (BvpSource src : {BvpSource::Constant, BvpSource::Gaussian}) {
    std::string seq;
    std::vector<double> res;
    for (double h : hs) {
      res.push_back(bvp_residual(disc, h, src).max_residual);
      seq += fmt::format("{}{:.3g}", seq.empty() ? "" : " -> ", res.back());
    }
    const bool down = res[1] < res[0] && res[2] < res[1];
    const std::string what = fmt::format("{} residual {}", to_string(src), seq);
    if (src == BvpSource::Constant)
      o.require(down, what);
    else
      o.detail += "; (reported) " + what;
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"disc operator norm", disc_operator_norm},
      {"disc Schatten 2-norm, three oracles", disc_schatten_two},
      {"trace identity on the square", trace_identity},
      {"disc maximizes Schatten norms", disc_maximality},
      {"operator norms bounded by 1/j01^2", operator_norm_bound},
      {"equilateral triangle maximizes", triangle_maximality},
      {"rearrangement inequality, square vs disc", bll_square},
      {"kernel decomposition", kernel_decomposition},
      {"discrete rearrangements", rearrangement},
      {"triangle symmetrization", triangle_symmetrization},
      {"spectral structure", spectral_structure},
      {"interior boundary-value check", bvp_interior},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu (%s) [%.1f s]: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
