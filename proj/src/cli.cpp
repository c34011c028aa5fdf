#include "rdc/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdc/bernoulli.hpp"
#include "rdc/error.hpp"
#include "rdc/oracle.hpp"
#include "rdc/problem.hpp"
#include "rdc/rdc_solver.hpp"
#include "rdc/surface.hpp"

namespace rdc::cli {
namespace {

using nlohmann::json;

class UsageError : public Error {
 public:
  using Error::Error;
};

// Printed numbers carry 9 significant digits; non-finite values are spelled out.
json num(double v) {
  if (!std::isfinite(v)) return format_double(v);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

json channel_json(const Channel& k) {
  json rows = json::array();
  for (std::size_t x = 0; x < k.source_size(); ++x) {
    json row = json::array();
    for (double v : k.row(x)) row.push_back(num(v));
    rows.push_back(row);
  }
  return rows;
}

json point_json(const RdcPoint& pt, double d_bound, double e_bound) {
  json j{{"d_bound", num(d_bound)},       {"e_bound", num(e_bound)},
         {"rate_bits", num(pt.rate_bits)}, {"distortion", num(pt.distortion)},
         {"class_error", num(pt.class_error)}, {"lambda_d", num(pt.lambda_d)},
         {"lambda_e", num(pt.lambda_e)},   {"iterations", pt.iterations},
         {"converged", pt.converged}};
  if (pt.channel) j["channel"] = channel_json(*pt.channel);
  return j;
}

struct ConfigFlags {
  SolverConfig cfg;
  void add_to(CLI::App* app) {
    app->add_option("--inner-tol", cfg.inner_tol, "Lagrangian change that ends the inner loop (nats)");
    app->add_option("--max-inner-iters", cfg.max_inner_iters, "Inner iteration cap");
    app->add_option("--constraint-tol", cfg.constraint_tol, "Feasibility slack of the multiplier search");
    app->add_option("--multiplier-max", cfg.multiplier_max, "Upper end of the multiplier bisection");
    app->add_option("--outer-max-iters", cfg.outer_max_iters, "Bisection steps per multiplier");
  }
};

void print(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

}  // namespace

double parse_bound(const std::string& text) {
  double v = 0.0;
  try {
    v = parse_double(text);
  } catch (const ValidationError&) {
    throw UsageError("invalid bound '" + text + "'");
  }
  if (std::isnan(v) || v < 0.0) throw UsageError("bound must be nonnegative or inf, got '" + text + "'");
  return v;
}

std::vector<double> parse_grid(const std::string& spec) {
  if (spec == "inf") return {std::numeric_limits<double>::infinity()};
  const auto first = spec.find(':');
  const auto second = first == std::string::npos ? first : spec.find(':', first + 1);
  if (second == std::string::npos || spec.find(':', second + 1) != std::string::npos) {
    throw UsageError("grid spec must be start:end:count or inf, got '" + spec + "'");
  }
  const double start = parse_bound(spec.substr(0, first));
  const double end = parse_bound(spec.substr(first + 1, second - first - 1));
  const std::string count_text = spec.substr(second + 1);
  char* tail = nullptr;
  const long count = std::strtol(count_text.c_str(), &tail, 10);
  if (count_text.empty() || *tail != '\0' || count < 1) {
    throw UsageError("grid count must be a positive integer, got '" + count_text + "'");
  }
  if (!std::isfinite(start) || !std::isfinite(end)) throw UsageError("grid endpoints must be finite");
  if (count == 1) {
    if (start != end) throw UsageError("a one-point grid needs start == end");
    return {start};
  }
  if (!(end > start)) throw UsageError("grid end must exceed start");
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    grid[static_cast<std::size_t>(i)] =
        i + 1 == count ? end : start + (end - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return grid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rate-distortion-classification solver"};
  app.require_subcommand(1);

  std::string source_path, d_text = "inf", e_text = "inf";
  std::string grid_d, grid_e = "inf", out_path, format, surface_path;
  std::size_t jobs = 0, resolution = 200, pairs = 200, points = 200;
  std::uint64_t seed = 1;
  double p = 0.5;
  double slack = 1e-4;
  bool no_meta = false;

  ConfigFlags solve_cfg, sweep_cfg, bern_cfg, verify_cfg;

  auto* solve = app.add_subcommand("solve", "Solve R(D, E) for one pair of bounds");
  solve->add_option("--source", source_path, "Problem JSON")->required();
  solve->add_option("--d", d_text, "Distortion bound (number or inf)");
  solve->add_option("--e", e_text, "Classification-error bound (number or inf)");
  solve_cfg.add_to(solve);

  auto* sweep = app.add_subcommand("sweep", "Tabulate R(D, E) over a grid");
  sweep->add_option("--source", source_path, "Problem JSON")->required();
  sweep->add_option("--grid-d", grid_d, "start:end:count")->required();
  sweep->add_option("--grid-e", grid_e, "start:end:count or inf");
  sweep->add_option("--out", out_path, "Output file")->required();
  sweep->add_option("--format", format, "csv or json (default: from the file extension)")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--jobs", jobs, "Worker threads (0 = all cores)");
  sweep->add_flag("--no-meta", no_meta, "Leave the timestamp out of JSON output");
  sweep_cfg.add_to(sweep);

  auto* bern = app.add_subcommand("bernoulli", "Regime structure of a binary source along D");
  bern->add_option("--p", p, "P(X = 1) for the class = symbol configuration");
  bern->add_option("--e", e_text, "Classification-error bound (number or inf)");
  bern->add_option("--source", source_path, "Binary problem JSON (overrides --p)");
  bern->add_option("--points", points, "Sweep points");
  bern_cfg.add_to(bern);

  auto* orc = app.add_subcommand("oracle", "Brute-force R(D, E) by channel grid search");
  orc->add_option("--source", source_path, "Problem JSON")->required();
  orc->add_option("--d", d_text, "Distortion bound (number or inf)");
  orc->add_option("--e", e_text, "Classification-error bound (number or inf)");
  orc->add_option("--resolution", resolution, "Grid points per free channel entry");
  orc->add_option("--slack", slack, "Feasibility slack");

  auto* verify = app.add_subcommand("verify", "Check monotonicity and convexity of a surface file");
  verify->add_option("--surface", surface_path, "Surface CSV or JSON")->required();
  verify->add_option("--source", source_path, "Problem JSON, enables on-demand midpoint solves");
  verify->add_option("--pairs", pairs, "Random cell pairs for the convexity check");
  verify->add_option("--seed", seed, "Pair sampling seed");
  verify_cfg.add_to(verify);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve) {
      const double d = parse_bound(d_text), e = parse_bound(e_text);
      const Problem prob = load_problem(source_path);
      const RdcPoint pt = solve_constrained(prob.source, prob.delta, prob.classifier, d, e, solve_cfg.cfg);
      if (!pt.converged) err << "warning: inner iteration hit max_inner_iters\n";
      print(out, point_json(pt, d, e));
    } else if (*sweep) {
      const auto dg = parse_grid(grid_d), eg = parse_grid(grid_e);
      const Problem prob = load_problem(source_path);
      if (format.empty()) format = std::filesystem::path(out_path).extension() == ".json" ? "json" : "csv";
      const RdcSurface s = sweep_surface(prob.source, prob.delta, prob.classifier, dg, eg, sweep_cfg.cfg, jobs);
      export_surface(s, out_path, format == "json" ? SurfaceFormat::json : SurfaceFormat::csv, !no_meta);
      std::size_t infeasible = 0, unconverged = 0;
      for (const auto& pt : s.points) {
        if (!pt.feasible) ++infeasible;
        else if (!pt.converged) ++unconverged;
      }
      print(out, {{"cells", s.points.size()}, {"infeasible", infeasible},
                  {"unconverged", unconverged}, {"out", out_path}});
    } else if (*bern) {
      const double e = parse_bound(e_text);
      RegimeOptions opts;
      opts.sweep_points = points;
      BernoulliRegimes r;
      if (!source_path.empty()) {
        const Problem prob = load_problem(source_path);
        r = locate_regimes(prob.source, prob.classifier, e, bern_cfg.cfg, opts);
      } else {
        if (!(p > 0.0 && p < 1.0)) throw UsageError("--p must lie in (0, 1)");
        r = locate_regimes(MixtureSource::bernoulli_by_symbol(p), BinaryClassifier(2, {0}), e,
                           bern_cfg.cfg, opts);
      }
      json sweep_pts = json::array();
      for (const auto& [d, rate] : r.sweep) sweep_pts.push_back({num(d), num(rate)});
      print(out, {{"p", num(r.p)},
                  {"e_bound", num(r.e_bound)},
                  {"d1", num(r.d1)},
                  {"d2", num(r.d2)},
                  {"plateau_rate_bits", r.plateau_rate_bits ? num(*r.plateau_rate_bits) : json(nullptr)},
                  {"sweep", sweep_pts}});
    } else if (*orc) {
      const double d = parse_bound(d_text), e = parse_bound(e_text);
      const Problem prob = load_problem(source_path);
      OracleConfig oc;
      oc.resolution = resolution;
      oc.slack = slack;
      const OracleResult r = grid_search_rdc(prob.source, prob.delta, prob.classifier, d, e, oc);
      if (!r.feasible) {
        err << "infeasible: no grid channel meets the bounds\n";
        return kInfeasible;
      }
      print(out, {{"d_bound", num(d)},
                  {"e_bound", num(e)},
                  {"rate_bits", num(r.rate_bits)},
                  {"distortion", num(r.distortion)},
                  {"class_error", num(r.class_error)},
                  {"resolution", resolution},
                  {"channel", channel_json(*r.best_channel)}});
    } else if (*verify) {
      const RdcSurface s = import_surface(surface_path);
      MidpointSolver solver;
      std::optional<Problem> prob;
      if (!source_path.empty()) {
        prob = load_problem(source_path);
        solver = [&](double d, double e) -> std::optional<double> {
          try {
            return solve_constrained(prob->source, prob->delta, prob->classifier, d, e, verify_cfg.cfg)
                .rate_bits;
          } catch (const InfeasibleError&) {
            return std::nullopt;
          }
        };
      }
      const MonotoneReport mono = check_monotone(s);
      ConvexityOptions copts;
      copts.pairs = pairs;
      copts.seed = seed;
      const ConvexityReport conv = check_convexity(s, copts, solver);

      json mv = json::array();
      for (const auto& v : mono.violations) {
        mv.push_back({{"from", {v.i_from, v.j_from}},
                      {"to", {v.i_to, v.j_to}},
                      {"direction", std::string(1, v.direction)},
                      {"increase_bits", num(v.increase_bits)}});
      }
      json cv = json::array();
      for (const auto& v : conv.violations) {
        cv.push_back({{"cells", {{v.i1, v.j1}, {v.i2, v.j2}}},
                      {"midpoint", {num(v.mid_d), num(v.mid_e)}},
                      {"mid_rate_bits", num(v.mid_rate_bits)},
                      {"chord_rate_bits", num(v.chord_rate_bits)}});
      }
      print(out, {{"monotonicity",
                   {{"tolerance", mono.tolerance},
                    {"checked_pairs", mono.checked_pairs},
                    {"passed", mono.passed()},
                    {"violations", mv}}},
                  {"convexity",
                   {{"tolerance", conv.tolerance},
                    {"sampled_pairs", conv.sampled_pairs},
                    {"checked_pairs", conv.checked_pairs},
                    {"on_grid", conv.on_grid},
                    {"solved_on_demand", conv.solved_on_demand},
                    {"skipped", conv.skipped},
                    {"passed", conv.passed()},
                    {"violations", cv}}}});
      return mono.passed() && conv.passed() ? kOk : kInfeasible;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const RegimeError& e) {
    err << "regime detection failed: " << e.what() << '\n';
    return kInfeasible;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

}  // namespace rdc::cli
