#include "logpot/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "logpot/disc_oracle.hpp"
#include "logpot/discretize.hpp"
#include "logpot/io.hpp"
#include "logpot/logkernel.hpp"
#include "logpot/rearrange.hpp"

namespace logpot {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Undecided: return "UNDECIDED";
    case Verdict::Fail: return "FAIL";
  }
  return "?";
}

Verdict judge(double margin, double budget) {
  if (margin > budget) return Verdict::Pass;
  if (margin < -budget) return Verdict::Fail;
  return Verdict::Undecided;
}

Verdict worst(Verdict a, Verdict b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

nlohmann::json p_label(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

nlohmann::json to_json(const Comparison& c) {
  nlohmann::json j{{"subject", c.subject},
                   {"reference", c.reference},
                   {"p", p_label(c.p)},
                   {"route", c.route},
                   {"subject_value", c.subject_value},
                   {"reference_value", c.reference_value},
                   {"margin", c.margin},
                   {"budget", c.budget},
                   {"verdict", to_string(c.verdict)}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool is_even_integer(double p) { return std::isfinite(p) && p == std::floor(p) && static_cast<long>(p) % 2 == 0; }

std::vector<double> with_infinity(std::vector<double> ps) {
  if (std::none_of(ps.begin(), ps.end(), [](double p) { return std::isinf(p); })) ps.push_back(kInfinity);
  return ps;
}

void validate_ps(const std::vector<double>& ps) {
  if (ps.empty()) throw Error("empty p list");
  for (double p : ps)
    if (!(p >= 1.0)) throw Error("Schatten exponent must satisfy p >= 1");
}

// Equality case: the subject is congruent to the reference, so the margin must
// vanish within the budget.
Verdict equality(double margin, double budget) {
  return std::abs(margin) <= budget ? Verdict::Pass : Verdict::Fail;
}

Comparison compare(std::string subject, std::string reference, double p, std::string route, double subject_value,
                   double reference_value, double budget, bool equality_case) {
  Comparison c{std::move(subject), std::move(reference), p, std::move(route), subject_value, reference_value,
               reference_value - subject_value, budget, Verdict::Undecided, {}};
  if (equality_case) {
    c.verdict = equality(c.margin, c.budget);
    c.note = "equality case";
  } else {
    c.verdict = judge(c.margin, c.budget);
  }
  return c;
}

constexpr const char* kPositivityNote =
    "p is not an even integer and a negative eigenvalue is present; the comparison needs a positive operator";

nlohmann::json eigen_json(const EigenNorms& e) {
  auto rows = nlohmann::json::array();
  for (std::size_t k = 0; k < e.p.size(); ++k)
    rows.push_back({{"p", p_label(e.p[k])},
                    {"value", e.value[k]},
                    {"coarse_value", e.coarse_value[k]},
                    {"error_bound", e.budget[k]}});
  return {{"h", e.h_fine},
          {"h_coarse", e.h_coarse},
          {"cells", e.cells},
          {"negative_eigenvalues", e.negative},
          {"top_eigenvalue", e.top},
          {"gap", e.gap},
          {"schatten", rows}};
}

nlohmann::json mc_json(const McNorm& m) {
  auto j = to_json(m.trace);
  j["norm"] = m.norm;
  j["norm_stderr"] = m.norm_error;
  return j;
}

Domain checked_scale(const NamedDomain& nd, double area) {
  if (nd.domain.is_raster()) throw Error("domain '" + nd.name + "' is a raster; comparisons need a vector domain");
  return scale_to_area(nd.domain, area);
}

Report finish(std::string experiment, nlohmann::json config, nlohmann::json results, std::vector<Comparison> cs,
              nlohmann::json timings) {
  Report r;
  auto verdicts = nlohmann::json::array();
  for (const auto& c : cs) {
    r.overall = worst(r.overall, c.verdict);
    verdicts.push_back(to_json(c));
  }
  r.comparisons = std::move(cs);
  r.body = {{"experiment", std::move(experiment)},
            {"config", std::move(config)},
            {"results", std::move(results)},
            {"verdicts", std::move(verdicts)},
            {"overall", to_string(r.overall)},
            {"timings", std::move(timings)}};
  return r;
}

Triangle as_triangle(const Domain& d, const std::string& name) {
  if (!d.is_polygon() || d.as_polygon().vertices.size() != 3)
    throw Error("domain '" + name + "' is not a triangle");
  const auto& v = d.as_polygon().vertices;
  return {v[0], v[1], v[2]};
}

Triangle equilateral_of_area(double a) {
  const double s = std::sqrt(4.0 * a / std::sqrt(3.0));
  const double low = -s / (2.0 * std::sqrt(3.0));
  return {{-0.5 * s, low}, {0.5 * s, low}, {0.0, s / std::sqrt(3.0)}};
}

}  // namespace

// ---------------------------------------------------------------------------
// Norm estimates

double richardson_budget(double fine, double coarse, double h_fine, double h_coarse) {
  if (!(h_coarse > h_fine && h_fine > 0.0)) throw Error("refinement needs 0 < h_fine < h_coarse");
  return std::abs(fine - coarse) * h_fine / (h_coarse - h_fine);
}

Spectrum raster_spectrum(const Domain& d, double h, bool want_vectors, std::size_t cap) {
  const RasterGrid grid = d.is_raster() ? d.as_raster() : rasterize(d, h);
  return eigen_sym(assemble(grid, cap), want_vectors);
}

EigenNorms eigen_norms(const Domain& d, const std::vector<double>& ps, double h_fine, double h_coarse) {
  if (d.is_raster()) throw Error("refinement study requires a vector domain");
  validate_ps(ps);
  EigenNorms e;
  e.h_fine = h_fine;
  e.h_coarse = h_coarse;
  e.p = ps;
  const Spectrum fine = raster_spectrum(d, h_fine, false);
  const Spectrum coarse = raster_spectrum(d, h_coarse, false);
  e.cells = fine.eigenvalues.size();
  for (double p : ps) {
    const double vf = schatten_from_spectrum(fine, p).value;
    const double vc = schatten_from_spectrum(coarse, p).value;
    e.value.push_back(vf);
    e.coarse_value.push_back(vc);
    e.budget.push_back(richardson_budget(vf, vc, h_fine, h_coarse));
  }
  e.negative = negative_count(fine, 1e-10);
  e.top = operator_norm(fine);
  e.gap = fine.eigenvalues.size() > 1 ? std::abs(fine.eigenvalues[0]) - std::abs(fine.eigenvalues[1]) : e.top;
  return e;
}

double top_eigenvalue(const Domain& d, double h) {
  const RasterGrid grid = d.is_raster() ? d.as_raster() : rasterize(d, h);
  if (grid.active_count() <= kDefaultAssemblyCap) return operator_norm(eigen_sym(assemble(grid), false));
  const NystromOperator op(grid);
  return operator_norm(leading_eigen(op, 1));
}

McNorm mc_norm(const Domain& d, int p, std::size_t n, std::uint64_t seed) {
  McNorm m;
  m.trace = cyclic_trace_mc(d, p, n, seed);
  if (m.trace.mean > 0.0) {
    m.norm = std::pow(m.trace.mean, 1.0 / p);
    m.norm_error = m.trace.std_error * m.norm / (p * m.trace.mean);
  } else {
    m.norm = std::nan("");
    m.norm_error = std::nan("");
  }
  return m;
}

// ---------------------------------------------------------------------------
// Experiments

nlohmann::json to_json(const ExperimentConfig& c) {
  auto domains = nlohmann::json::array();
  for (const auto& d : c.domains) domains.push_back({{"name", d.name}, {"domain", domain_to_json(d.domain)}});
  auto ps = nlohmann::json::array();
  for (double p : c.p) ps.push_back(p_label(p));
  return {{"domains", domains},
          {"p", ps},
          {"h", c.h},
          {"h_coarse", c.h_coarse},
          {"samples", c.samples},
          {"seed", c.seed},
          {"area", c.area},
          {"l_max", c.l_max},
          {"m_max", c.m_max},
          {"threads", worker_count()}};
}

Report verify_disc_max(const ExperimentConfig& c) {
  const auto t0 = Clock::now();
  validate_ps(c.p);
  const auto ps = with_infinity(c.p);
  const bool unit_disc = std::abs(c.area - kPi) <= 1e-12 * kPi;
  const Domain disc = Domain::disc({0.0, 0.0}, std::sqrt(c.area / kPi));
  nlohmann::json timings;

  auto t = Clock::now();
  const EigenNorms disc_eigen = eigen_norms(disc, ps, c.h, c.h_coarse);
  timings["disc_eigen_s"] = seconds_since(t);

  // MC-route reference: the Bessel series for the unit disc, otherwise the
  // disc's own MC estimate.
  struct Reference {
    double value;
    double error;
    std::string name;
  };
  std::vector<Reference> mc_reference(ps.size(), {0.0, 0.0, ""});
  nlohmann::json reference_json = {{"eigen", eigen_json(disc_eigen)}};
  t = Clock::now();
  double oracle_opnorm = 0.0;
  if (unit_disc) {
    const BesselZeroTable table(c.l_max, c.m_max);
    const double j01 = table.zero(0, 1);
    oracle_opnorm = 1.0 / (j01 * j01);
    auto rows = nlohmann::json::array();
    for (std::size_t k = 0; k < ps.size(); ++k) {
      if (std::isinf(ps[k])) {
        mc_reference[k] = {oracle_opnorm, 0.0, "disc oracle"};
      } else if (ps[k] > 1.0) {
        const auto s = disc_schatten(table, ps[k]);
        mc_reference[k] = {s.value, s.error_bound, "disc oracle"};
      }
      rows.push_back({{"p", p_label(ps[k])}, {"value", mc_reference[k].value}, {"error_bound", mc_reference[k].error}});
    }
    reference_json["oracle"] = rows;
  } else if (c.samples > 0) {
    auto rows = nlohmann::json::array();
    for (std::size_t k = 0; k < ps.size(); ++k) {
      if (!is_even_integer(ps[k])) continue;
      const McNorm m = mc_norm(disc, static_cast<int>(ps[k]), c.samples, c.seed);
      mc_reference[k] = {m.norm, m.norm_error, "disc mc"};
      rows.push_back(mc_json(m));
    }
    reference_json["mc"] = rows;
  }
  timings["disc_reference_s"] = seconds_since(t);

  std::vector<Comparison> cs;
  auto results = nlohmann::json::array();
  for (const auto& nd : c.domains) {
    t = Clock::now();
    const Domain d = checked_scale(nd, c.area);
    const bool same_as_disc = d.is_disc();
    const EigenNorms e = eigen_norms(d, ps, c.h, c.h_coarse);
    nlohmann::json entry{{"name", nd.name}, {"domain", domain_to_json(d)}, {"eigen", eigen_json(e)}};
    auto mcs = nlohmann::json::array();
    const bool negative = e.negative > 0 || disc_eigen.negative > 0;
    for (std::size_t k = 0; k < ps.size(); ++k) {
      const double p = ps[k];
      auto ce = compare(nd.name, "disc", p, "eigen", e.value[k], disc_eigen.value[k], e.budget[k] + disc_eigen.budget[k],
                        same_as_disc);
      if (!std::isinf(p) && !is_even_integer(p) && negative) {
        ce.verdict = Verdict::Undecided;
        ce.note = kPositivityNote;
      }
      cs.push_back(ce);
      if (std::isinf(p) && unit_disc)
        cs.push_back(compare(nd.name, "1/j01^2", p, "eigen-vs-oracle", e.value[k], oracle_opnorm, e.budget[k], false));
      if (is_even_integer(p) && c.samples > 0 && !mc_reference[k].name.empty()) {
        const McNorm m = mc_norm(d, static_cast<int>(p), c.samples, c.seed);
        mcs.push_back(mc_json(m));
        const double budget = unit_disc ? 3.0 * m.norm_error + mc_reference[k].error
                                        : 3.0 * std::hypot(m.norm_error, mc_reference[k].error);
        cs.push_back(compare(nd.name, mc_reference[k].name, p, "mc", m.norm, mc_reference[k].value, budget, same_as_disc));
      }
    }
    entry["mc"] = mcs;
    entry["seconds"] = seconds_since(t);
    results.push_back(entry);
  }
  timings["total_s"] = seconds_since(t0);
  return finish("verify-disc-max", to_json(c), {{"reference", reference_json}, {"domains", results}}, std::move(cs),
                timings);
}

Report verify_triangles(const ExperimentConfig& c) {
  const auto t0 = Clock::now();
  validate_ps(c.p);
  const auto ps = with_infinity(c.p);
  const Triangle reference = equilateral_of_area(c.area);
  const EigenNorms ref = eigen_norms(Domain::triangle(reference), ps, c.h, c.h_coarse);

  std::vector<Comparison> cs;
  auto results = nlohmann::json::array();
  for (const auto& nd : c.domains) {
    const auto t = Clock::now();
    const Triangle tri = as_triangle(checked_scale(nd, c.area), nd.name);
    const double longest = std::max({tri.side_length(0), tri.side_length(1), tri.side_length(2)});
    const bool equilateral = tri.side_spread() <= 1e-9 * longest;
    const EigenNorms e = eigen_norms(Domain::triangle(tri), ps, c.h, c.h_coarse);
    const bool negative = e.negative > 0 || ref.negative > 0;
    for (std::size_t k = 0; k < ps.size(); ++k) {
      auto ce = compare(nd.name, "equilateral", ps[k], "eigen", e.value[k], ref.value[k], e.budget[k] + ref.budget[k],
                        equilateral);
      if (!std::isinf(ps[k]) && !is_even_integer(ps[k]) && negative) {
        ce.verdict = Verdict::Undecided;
        ce.note = kPositivityNote;
      }
      cs.push_back(ce);
    }

    nlohmann::json traj{{"tolerance", 1e-9}};
    auto spreads = nlohmann::json::array();
    try {
      const auto r = equilateralize(tri, 1e-9, 200);
      for (const auto& step : r.trajectory) spreads.push_back(step.side_spread());
      traj["sweeps"] = r.sweeps;
      traj["converged"] = true;
    } catch (const EquilateralizeError& err) {
      traj["converged"] = false;
      traj["note"] = err.what();
      spreads.push_back(err.last_iterate().side_spread());
    }
    traj["side_spread"] = spreads;
    results.push_back({{"name", nd.name},
                       {"domain", domain_to_json(Domain::triangle(tri))},
                       {"eigen", eigen_json(e)},
                       {"equilateralize", traj},
                       {"seconds", seconds_since(t)}});
  }
  nlohmann::json body{{"reference", {{"domain", domain_to_json(Domain::triangle(reference))}, {"eigen", eigen_json(ref)}}},
                      {"triangles", results}};
  return finish("verify-triangles", to_json(c), std::move(body), std::move(cs), {{"total_s", seconds_since(t0)}});
}

Report bll_check(const NamedDomain& nd, int p, std::size_t n, std::uint64_t seed) {
  const auto t0 = Clock::now();
  const Domain disc = domain_rearrange(nd.domain);
  const TraceEstimate subject = cyclic_trace_mc(nd.domain, p, n, seed);
  const TraceEstimate reference = cyclic_trace_mc(disc, p, n, seed);
  Comparison cmp{nd.name, "equal-area disc", static_cast<double>(p), "mc",
                 subject.mean, reference.mean, reference.mean - subject.mean,
                 3.0 * std::hypot(subject.std_error, reference.std_error), Verdict::Pass, {}};
  cmp.verdict = cmp.margin >= -cmp.budget ? Verdict::Pass : Verdict::Fail;
  nlohmann::json config{{"domain", {{"name", nd.name}, {"domain", domain_to_json(nd.domain)}}},
                        {"p", p},
                        {"samples", n},
                        {"seed", seed},
                        {"threads", worker_count()}};
  nlohmann::json results{{"subject", to_json(subject)}, {"disc", to_json(reference)}, {"disc_domain", domain_to_json(disc)}};
  return finish("verify-bll", std::move(config), std::move(results), {cmp}, {{"total_s", seconds_since(t0)}});
}

// ---------------------------------------------------------------------------
// Boundary-value check

BvpSource parse_bvp_source(const std::string& s) {
  if (s == "constant") return BvpSource::Constant;
  if (s == "gaussian") return BvpSource::Gaussian;
  if (s == "zero") return BvpSource::Zero;
  throw InputError("unknown source '" + s + "' (constant, gaussian, zero)");
}

std::string to_string(BvpSource s) {
  switch (s) {
    case BvpSource::Constant: return "constant";
    case BvpSource::Gaussian: return "gaussian";
    case BvpSource::Zero: return "zero";
  }
  return "?";
}

BvpResult bvp_residual(const Domain& d, double h, BvpSource source) {
  const RasterGrid grid = d.is_raster() ? d.as_raster() : rasterize(d, h);
  const double cell = grid.cell_size();
  const Point2 center = centroid(d);
  const auto& active = grid.active_cells();
  const std::size_t n = active.size(), nx = grid.nx(), ny = grid.ny();

  constexpr double kSigma = 0.15;
  std::vector<double> f(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    const Point2 x = grid.cell_center(active[a] % nx, active[a] / nx);
    if (source == BvpSource::Constant) f[a] = 1.0;
    if (source == BvpSource::Gaussian) {
      const Point2 r = x - center;
      f[a] = std::exp(-dot(r, r) / (2.0 * kSigma * kSigma));
    }
  }
  const NystromOperator op(grid);
  const std::vector<double> u = op.apply(f);

  BvpResult r;
  r.h = cell;
  r.cells = n;
  const double self = self_weight(cell);
  for (std::size_t a = 0; a < n; ++a) {
    const Point2 x = grid.cell_center(active[a] % nx, active[a] / nx);
    r.u_center += (x == center ? self : cell * cell * log_kernel(center, x)) * f[a];
  }

  std::vector<std::size_t> position(nx * ny, n);
  for (std::size_t a = 0; a < n; ++a) position[active[a]] = a;
  const auto at = [&](long i, long j) -> std::size_t {
    if (i < 0 || j < 0 || i >= static_cast<long>(nx) || j >= static_cast<long>(ny)) return n;
    return position[static_cast<std::size_t>(j) * nx + static_cast<std::size_t>(i)];
  };
  const double f_max = *std::max_element(f.begin(), f.end());
  const double scale = f_max > 0.0 ? f_max : 1.0;
  for (std::size_t a = 0; a < n; ++a) {
    const long i = static_cast<long>(active[a] % nx), j = static_cast<long>(active[a] / nx);
    bool inside = true;
    for (long dj = -3; dj <= 3 && inside; ++dj)
      for (long di = -3; di <= 3 && inside; ++di) inside = at(i + di, j + dj) != n;
    if (!inside) continue;
    ++r.interior;
    const double lap = (u[at(i + 1, j)] + u[at(i - 1, j)] + u[at(i, j + 1)] + u[at(i, j - 1)] - 4.0 * u[a]) /
                       (cell * cell);
    r.max_residual = std::max(r.max_residual, std::abs(-lap - f[a]) / scale);
  }
  if (r.interior == 0) throw Error("too few interior stencil cells");
  return r;
}

Report bvp_check(const NamedDomain& nd, const std::vector<double>& hs, BvpSource source) {
  const auto t0 = Clock::now();
  if (hs.empty()) throw Error("empty h list");
  auto rows = nlohmann::json::array();
  std::vector<Comparison> cs;
  std::vector<BvpResult> results;
  for (double h : hs) {
    results.push_back(bvp_residual(nd.domain, h, source));
    const auto& r = results.back();
    rows.push_back({{"h", r.h},
                    {"cells", r.cells},
                    {"interior_cells", r.interior},
                    {"u_center", r.u_center},
                    {"max_residual", r.max_residual}});
  }
  for (std::size_t k = 1; k < results.size(); ++k) {
    const double prev = results[k - 1].max_residual, cur = results[k].max_residual;
    Comparison cmp{nd.name + " h=" + std::to_string(results[k].h), "h=" + std::to_string(results[k - 1].h), 0.0,
                   "residual", cur, prev, prev - cur, 0.0, Verdict::Pass, {}};
    cmp.verdict = (cur < prev || (cur == 0.0 && prev == 0.0)) ? Verdict::Pass : Verdict::Fail;
    cs.push_back(cmp);
  }
  auto hlist = nlohmann::json::array();
  for (double h : hs) hlist.push_back(h);
  nlohmann::json config{{"domain", {{"name", nd.name}, {"domain", domain_to_json(nd.domain)}}},
                        {"h", hlist},
                        {"source", to_string(source)},
                        {"threads", worker_count()}};
  return finish("bvp-check", std::move(config), {{"refinement", rows}}, std::move(cs), {{"total_s", seconds_since(t0)}});
}

// ---------------------------------------------------------------------------
// Kernel decomposition

Report decomp_check(const DecompOptions& o) {
  const auto t0 = Clock::now();
  if (o.points < 2 || !(o.r_min > 0.0) || !(o.r_max > o.r_min)) throw Error("bad radius grid");
  std::vector<double> r(o.points);
  for (std::size_t k = 0; k < o.points; ++k)
    r[k] = o.r_min * std::pow(o.r_max / o.r_min, static_cast<double>(k) / static_cast<double>(o.points - 1));

  std::vector<Comparison> cs;
  // For properties margin = tolerance - violation, so margin >= 0 is a pass.
  const auto property = [&cs](const std::string& subject, const std::string& name, double violation, double tol) {
    Comparison c{subject, name, 0.0, "property", violation, tol, tol - violation, 0.0, Verdict::Pass, {}};
    c.verdict = violation <= tol ? Verdict::Pass : Verdict::Fail;
    cs.push_back(c);
  };

  for (double r0 : o.r0) {
    const KernelDecomposition k(r0);
    const std::string who = "r0=" + std::to_string(r0);
    double identity = 0.0, positivity = 0.0, decreasing = 0.0, h2_rise = 0.0, q_negative = 0.0;
    std::vector<double> h1v(r.size()), h2v(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      h1v[i] = k.h1(r[i]);
      h2v[i] = k.h2(r[i]);
      identity = std::max(identity, std::abs(h1v[i] + h2v[i] - kernel_profile(r[i])));
      if (!(h1v[i] > 0.0)) positivity = std::max(positivity, 1.0);
      q_negative = std::max(q_negative, -k.q(r[i], 10.0 * r0));
    }
    for (std::size_t i = 1; i < r.size(); ++i) {
      if (!(h1v[i] < h1v[i - 1])) decreasing = std::max(decreasing, 1.0);
      h2_rise = std::max(h2_rise, h2v[i] - h2v[i - 1]);
    }
    const double limit_gap = std::abs(k.f(o.r_max) - k.f_inf());
    const double limit_bound = (1.0 + r0 * r0) / (4.0 * kPi * o.r_max * o.r_max);
    property(who, "identity h1+h2=profile", identity, 1e-12);
    property(who, "h1 > 0", positivity, 0.0);
    property(who, "h1 strictly decreasing", decreasing, 0.0);
    property(who, "h2 non-increasing", h2_rise, 1e-15);
    property(who, "q_R >= 0", q_negative, 1e-15);
    property(who, "f -> f_inf", limit_gap, limit_bound * (1.0 + 1e-9) + 1e-15);
  }
  property("r0=1", "f_inf(1) = -ln2/(2pi)", std::abs(f_inf(1.0) + std::log(2.0) / kTwoPi), 1e-12);

  auto r0s = nlohmann::json::array();
  for (double v : o.r0) r0s.push_back(v);
  nlohmann::json config{{"r0", r0s}, {"r_min", o.r_min}, {"r_max", o.r_max}, {"points", o.points}};
  return finish("decomp-check", std::move(config), nlohmann::json::object(), std::move(cs),
                {{"total_s", seconds_since(t0)}});
}

}  // namespace logpot
