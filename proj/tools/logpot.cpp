// logpot: command-line front end for the logarithmic-potential experiments.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "logpot/disc_oracle.hpp"
#include "logpot/discretize.hpp"
#include "logpot/geometry.hpp"
#include "logpot/harness.hpp"
#include "logpot/io.hpp"
#include "logpot/rearrange.hpp"
#include "logpot/spectral.hpp"
#include "logpot/trace_mc.hpp"

namespace {

using namespace logpot;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    if (item == "inf" || item == "infinity") {
      out.push_back(kInfinity);
      continue;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw InputError("bad number '" + item + "' in list '" + s + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InputError("empty list '" + s + "'");
  return out;
}

NamedDomain load(const std::string& path) {
  return {std::filesystem::path(path).stem().string(), read_domain_file(path)};
}

// Writes to --out if given, otherwise stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InputError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void check_format(const std::string& f) {
  if (f != "csv" && f != "json") throw InputError("--format must be csv or json");
}

int report_exit(const Report& r) { return r.overall == Verdict::Fail ? kExitFail : 0; }

void emit_report(const Report& r, const std::string& out, const std::string& format) {
  Output o(out);
  if (format == "csv") {
    o.stream() << "subject,reference,p,route,subject_value,reference_value,margin,budget,verdict\n";
    for (const auto& c : r.comparisons)
      o.stream() << fmt::format("{},{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", c.subject, c.reference,
                                std::isinf(c.p) ? std::string("inf") : fmt::format("{}", c.p), c.route,
                                c.subject_value, c.reference_value, c.margin, c.budget, to_string(c.verdict));
  } else {
    o.stream() << r.body.dump(2) << '\n';
  }
  std::cerr << "overall: " << to_string(r.overall) << '\n';
}

void write_svg_for(const Report& r, const std::string& path, const std::string& route, double p) {
  if (path.empty()) return;
  std::vector<std::string> labels;
  std::vector<double> values;
  bool reference_added = false;
  for (const auto& c : r.comparisons) {
    if (c.route != route || c.p != p) continue;
    if (!reference_added) {
      labels.push_back(c.reference);
      values.push_back(c.reference_value);
      reference_added = true;
    }
    labels.push_back(c.subject);
    values.push_back(c.subject_value);
  }
  std::ofstream f(path);
  if (!f) throw InputError("cannot open " + path);
  const std::string pl = std::isinf(p) ? "inf" : fmt::format("{}", p);
  write_svg_bars(f, fmt::format("Schatten {}-norm ({} route)", pl, route), labels, values);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral experiments for the logarithmic potential operator on planar domains"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  std::vector<std::string> domains;
  std::string p_list = "2,4";
  double h = 0.04, h_coarse = 0.05;
  std::size_t samples = 2'000'000;
  std::uint64_t seed = 1;
  std::string out, format = "json";

  const auto add_domain = [&](CLI::App* c, bool many) {
    auto* opt = c->add_option("--domain", domains, many ? "domain file(s): JSON or .pgm raster" : "domain file")->required();
    if (!many) opt->expected(1);
  };

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and characteristic numbers of the discretized operator");
  std::string dump_matrix, vectors_out;
  std::size_t vector_count = 4;
  std::string spectrum_format = "csv";
  add_domain(spectrum, false);
  spectrum->add_option("--h", h, "cell size");
  spectrum->add_option("--out", out);
  spectrum->add_option("--format", spectrum_format, "csv or json");
  spectrum->add_option("--dump-matrix", dump_matrix, "write the assembled matrix (binary LPOT dump)");
  spectrum->add_option("--vectors", vectors_out, "write the leading eigenvectors as CSV");
  spectrum->add_option("--vector-count", vector_count);

  // schatten
  auto* schatten = app.add_subcommand("schatten", "Schatten norms with refinement error bounds");
  std::size_t schatten_samples = 0;
  std::string schatten_format = "csv";
  add_domain(schatten, true);
  schatten->add_option("--p", p_list, "comma-separated exponents, inf allowed");
  schatten->add_option("--h", h);
  schatten->add_option("--h-coarse", h_coarse);
  schatten->add_option("--samples", schatten_samples, "MC samples for even p (0: eigen route only)");
  schatten->add_option("--seed", seed);
  schatten->add_option("--out", out);
  schatten->add_option("--format", schatten_format);

  // disc-oracle
  auto* oracle = app.add_subcommand("disc-oracle", "unit-disc characteristic numbers and Schatten norms from Bessel zeros");
  int l_max = 200, m_max = 200;
  std::size_t charnum_count = 20;
  std::string oracle_format = "csv";
  oracle->add_option("--lmax", l_max);
  oracle->add_option("--mmax", m_max);
  oracle->add_option("--p", p_list);
  oracle->add_option("--count", charnum_count, "characteristic numbers to print");
  oracle->add_option("--out", out);
  oracle->add_option("--format", oracle_format);

  // trace-mc
  auto* trace = app.add_subcommand("trace-mc", "Monte-Carlo cyclic kernel traces");
  add_domain(trace, false);
  trace->add_option("--p", p_list);
  trace->add_option("--samples", samples);
  trace->add_option("--seed", seed);
  trace->add_option("--out", out);
  trace->add_option("--format", format);

  // verify
  auto* verify = app.add_subcommand("verify", "inequality verification experiments");
  verify->require_subcommand(1);
  double area = kPi;
  std::string svg;
  auto* disc_max = verify->add_subcommand("disc-max", "domains against the equal-area disc");
  auto* triangles = verify->add_subcommand("triangles", "triangles against the equilateral triangle");
  for (auto* c : {disc_max, triangles}) {
    add_domain(c, true);
    c->add_option("--p", p_list);
    c->add_option("--h", h);
    c->add_option("--h-coarse", h_coarse);
    c->add_option("--area", area, "common area the domains are scaled to");
    c->add_option("--out", out);
    c->add_option("--format", format);
    c->add_option("--svg", svg, "bar chart of the eigen-route norms at the first p");
  }
  disc_max->add_option("--samples", samples, "MC samples per domain and p (0 disables the MC route)");
  disc_max->add_option("--seed", seed);
  disc_max->add_option("--lmax", l_max);
  disc_max->add_option("--mmax", m_max);
  auto* bll = verify->add_subcommand("bll", "MC cyclic trace of a domain against its equal-area disc");
  int bll_p = 2;
  add_domain(bll, false);
  bll->add_option("--p", bll_p)->check(CLI::Range(2, 8));
  bll->add_option("--samples", samples);
  bll->add_option("--seed", seed);
  bll->add_option("--out", out);
  bll->add_option("--format", format);

  // bvp-check
  auto* bvp = app.add_subcommand("bvp-check", "finite-difference check that -Lap(A f) = f inside the domain");
  std::string h_list = "0.08,0.04,0.02", source = "constant";
  add_domain(bvp, false);
  bvp->add_option("--h", h_list, "comma-separated cell sizes, coarse to fine");
  bvp->add_option("--source", source, "constant, gaussian or zero");
  bvp->add_option("--out", out);
  bvp->add_option("--format", format);

  // decomp-check
  auto* decomp = app.add_subcommand("decomp-check", "property checks of the kernel splitting");
  std::string r0_list = "0.5,1,2";
  DecompOptions dopt;
  decomp->add_option("--r0", r0_list);
  decomp->add_option("--rmin", dopt.r_min);
  decomp->add_option("--rmax", dopt.r_max);
  decomp->add_option("--points", dopt.points);
  decomp->add_option("--out", out);
  decomp->add_option("--format", format);

  // symmetrize
  auto* symm = app.add_subcommand("symmetrize", "Steiner symmetrization of a triangle or a raster mask");
  std::string axis = "rows";
  double tol = 1e-9;
  int max_sweeps = 60;
  add_domain(symm, false);
  symm->add_option("--axis", axis, "raster mode: rows (about x = 0) or columns (about y = 0)");
  symm->add_option("--h", h, "cell size when a vector domain is rasterized");
  symm->add_option("--tol", tol, "triangle mode: side spread tolerance");
  symm->add_option("--max-sweeps", max_sweeps);
  bool force_raster = false;
  symm->add_flag("--raster", force_raster, "rasterize a triangle instead of symmetrizing it exactly");
  symm->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*spectrum) {
      check_format(spectrum_format);
      const Domain d = read_domain_file(domains.at(0));
      const RasterGrid grid = d.is_raster() ? d.as_raster() : rasterize(d, h);
      const OperatorMatrix a = assemble(grid);
      if (!dump_matrix.empty()) {
        std::ofstream f(dump_matrix, std::ios::binary);
        if (!f) throw InputError("cannot open " + dump_matrix);
        write_matrix_dump(f, a.entries);
      }
      const Spectrum s = eigen_sym(a, !vectors_out.empty());
      Output o(out);
      if (spectrum_format == "csv") {
        write_spectrum_csv(o.stream(), s);
      } else {
        auto ev = nlohmann::json::array();
        for (std::size_t k = 0; k < s.eigenvalues.size() && k < 50; ++k) ev.push_back(s.eigenvalues[k]);
        o.stream() << nlohmann::json{{"cells", a.size()},
                                     {"h", grid.cell_size()},
                                     {"operator_norm", operator_norm(s)},
                                     {"negative_eigenvalues", negative_count(s, 1e-10)},
                                     {"solver_tolerance", s.solver_tolerance},
                                     {"leading_eigenvalues", ev}}
                              .dump(2)
                       << '\n';
      }
      if (!vectors_out.empty()) {
        std::ofstream f(vectors_out);
        if (!f) throw InputError("cannot open " + vectors_out);
        const auto k = static_cast<Eigen::Index>(std::min<std::size_t>(vector_count, a.size()));
        f << "x,y";
        for (Eigen::Index c = 0; c < k; ++c) f << ",v" << c + 1;
        f << '\n';
        const auto& cells = grid.active_cells();
        for (std::size_t r = 0; r < cells.size(); ++r) {
          const Point2 x = grid.cell_center(cells[r] % grid.nx(), cells[r] / grid.nx());
          f << fmt::format("{:.17g},{:.17g}", x.x, x.y);
          for (Eigen::Index c = 0; c < k; ++c)
            f << fmt::format(",{:.17g}", (*s.eigenvectors)(static_cast<Eigen::Index>(r), c));
          f << '\n';
        }
      }
      return 0;
    }

    if (*schatten) {
      check_format(schatten_format);
      const auto ps = parse_list(p_list);
      Output o(out);
      nlohmann::json all = nlohmann::json::array();
      if (schatten_format == "csv") o.stream() << "domain,p,method,value,error_bound,cells\n";
      for (const auto& path : domains) {
        const NamedDomain nd = load(path);
        const EigenNorms e = eigen_norms(nd.domain, ps, h, h_coarse);
        for (std::size_t k = 0; k < ps.size(); ++k) {
          const std::string pl = std::isinf(ps[k]) ? "inf" : fmt::format("{}", ps[k]);
          if (schatten_format == "csv")
            o.stream() << fmt::format("{},{},eigen,{:.17g},{:.17g},{}\n", nd.name, pl, e.value[k], e.budget[k], e.cells);
          else
            all.push_back({{"domain", nd.name}, {"p", p_label(ps[k])}, {"method", "eigen"}, {"value", e.value[k]},
                           {"error_bound", e.budget[k]}, {"cells", e.cells}});
          const bool even = std::isfinite(ps[k]) && ps[k] == std::floor(ps[k]) && static_cast<long>(ps[k]) % 2 == 0;
          if (schatten_samples > 0 && even) {
            const McNorm m = mc_norm(nd.domain, static_cast<int>(ps[k]), schatten_samples, seed);
            if (schatten_format == "csv")
              o.stream() << fmt::format("{},{},mc,{:.17g},{:.17g},\n", nd.name, pl, m.norm, 3.0 * m.norm_error);
            else
              all.push_back({{"domain", nd.name}, {"p", p_label(ps[k])}, {"method", "mc"}, {"value", m.norm},
                             {"error_bound", 3.0 * m.norm_error}, {"trace", to_json(m.trace)}});
          }
        }
      }
      if (schatten_format == "json") o.stream() << all.dump(2) << '\n';
      return 0;
    }

    if (*oracle) {
      check_format(oracle_format);
      const auto ps = parse_list(p_list);
      const BesselZeroTable table(l_max, m_max);
      const auto nums = disc_charnums(table);
      Output o(out);
      if (oracle_format == "csv") {
        o.stream() << "kind,p,l,m,multiplicity,value,error_bound\n";
        for (std::size_t k = 0; k < nums.size() && k < charnum_count; ++k)
          o.stream() << fmt::format("charnum,,{},{},{},{:.17g},\n", nums[k].l, nums[k].m, nums[k].multiplicity,
                                    nums[k].value);
        for (double p : ps) {
          if (std::isinf(p)) {
            o.stream() << fmt::format("schatten,inf,,,,{:.17g},0\n", disc_opnorm());
          } else {
            const auto s = disc_schatten(table, p);
            o.stream() << fmt::format("schatten,{},,,,{:.17g},{:.17g}\n", p, s.value, s.error_bound);
          }
        }
      } else {
        auto cj = nlohmann::json::array();
        for (std::size_t k = 0; k < nums.size() && k < charnum_count; ++k)
          cj.push_back({{"l", nums[k].l}, {"m", nums[k].m}, {"multiplicity", nums[k].multiplicity}, {"value", nums[k].value}});
        auto sj = nlohmann::json::array();
        for (double p : ps) {
          if (std::isinf(p)) {
            sj.push_back({{"p", "inf"}, {"value", disc_opnorm()}, {"error_bound", 0.0}});
          } else {
            const auto s = disc_schatten(table, p);
            sj.push_back({{"p", p}, {"value", s.value}, {"error_bound", s.error_bound}});
          }
        }
        o.stream() << nlohmann::json{{"l_max", l_max}, {"m_max", m_max}, {"charnums", cj}, {"schatten", sj}}.dump(2)
                   << '\n';
      }
      return 0;
    }

    if (*trace) {
      check_format(format);
      const NamedDomain nd = load(domains.at(0));
      Output o(out);
      auto all = nlohmann::json::array();
      if (format == "csv") o.stream() << "p,mean,stderr,n,seed\n";
      for (double p : parse_list(p_list)) {
        if (p != std::floor(p)) throw InputError("trace-mc needs integer p");
        const TraceEstimate t = cyclic_trace_mc(nd.domain, static_cast<int>(p), samples, seed);
        if (format == "csv")
          o.stream() << fmt::format("{},{:.17g},{:.17g},{},{}\n", t.p, t.mean, t.std_error, t.n_samples, t.seed);
        else
          all.push_back(to_json(t));
      }
      if (format == "json") o.stream() << (all.size() == 1 ? all[0] : all).dump(2) << '\n';
      return 0;
    }

    if (*disc_max || *triangles) {
      check_format(format);
      ExperimentConfig c;
      for (const auto& path : domains) c.domains.push_back(load(path));
      c.p = parse_list(p_list);
      c.h = h;
      c.h_coarse = h_coarse;
      c.samples = *disc_max ? samples : 0;
      c.seed = seed;
      c.area = area;
      c.l_max = l_max;
      c.m_max = m_max;
      const Report r = *disc_max ? verify_disc_max(c) : verify_triangles(c);
      emit_report(r, out, format);
      write_svg_for(r, svg, "eigen", c.p.front());
      return report_exit(r);
    }

    if (*bll) {
      check_format(format);
      const Report r = bll_check(load(domains.at(0)), bll_p, samples, seed);
      emit_report(r, out, format);
      return report_exit(r);
    }

    if (*bvp) {
      check_format(format);
      const Report r = bvp_check(load(domains.at(0)), parse_list(h_list), parse_bvp_source(source));
      emit_report(r, out, format);
      return report_exit(r);
    }

    if (*decomp) {
      check_format(format);
      dopt.r0 = parse_list(r0_list);
      const Report r = decomp_check(dopt);
      emit_report(r, out, format);
      return report_exit(r);
    }

    if (*symm) {
      if (axis != "rows" && axis != "columns") throw InputError("--axis must be rows or columns");
      const Domain d = read_domain_file(domains.at(0));
      Output o(out);
      const bool triangle = d.is_polygon() && d.as_polygon().vertices.size() == 3;
      if (triangle && !force_raster) {
        const auto& v = d.as_polygon().vertices;
        std::vector<Triangle> steps;
        int code = 0;
        try {
          steps = equilateralize({v[0], v[1], v[2]}, tol, max_sweeps).trajectory;
        } catch (const EquilateralizeError& e) {
          std::cerr << e.what() << '\n';
          steps = {Triangle{v[0], v[1], v[2]}, e.last_iterate()};
          code = kExitFail;
        }
        o.stream() << "sweep,ax,ay,bx,by,cx,cy,side_spread\n";
        for (std::size_t k = 0; k < steps.size(); ++k) {
          const auto& t = steps[k];
          o.stream() << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", k, t.a.x, t.a.y,
                                    t.b.x, t.b.y, t.c.x, t.c.y, t.side_spread());
        }
        return code;
      }
      const RasterGrid g = d.is_raster() ? d.as_raster() : rasterize(d, h);
      write_pgm_mask(o.stream(), steiner_domain_raster(g, axis == "rows" ? SliceAxis::Rows : SliceAxis::Columns));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
