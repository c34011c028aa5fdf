// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "rdc/bernoulli.hpp"
#include "rdc/classifier.hpp"
#include "rdc/error.hpp"
#include "rdc/info_theory.hpp"
#include "rdc/oracle.hpp"
#include "rdc/rdc_solver.hpp"
#include "rdc/surface.hpp"

using namespace rdc;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= budget_s) {
    o.ok = false;
    o.detail += "; over time budget";
  }
  if (!o.ok) ++failures;
  std::printf("%s %-24s %7.2fs (budget %gs)  %s\n", o.ok ? "PASS" : "FAIL", name, secs, budget_s,
              o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const MixtureSource& overlap_source() {
  static const MixtureSource s(0.5, {0.8, 0.2}, {0.3, 0.7});
  return s;
}

const RdcSurface& overlap_surface() {
  static const RdcSurface surface = [] {
    const auto& s = overlap_source();
    std::vector<double> d(20), e(20);
    for (int i = 0; i < 20; ++i) d[i] = 0.5 * i / 19.0;
    for (int j = 0; j < 20; ++j) e[j] = 0.255 + 0.245 * j / 19.0;
    return sweep_surface(s, DistortionMeasure::hamming(2), bayes_region(s, Channel::identity(2)), d, e);
  }();
  return surface;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main() {
  criterion("closed_form", 10, [] {
    double worst = 0.0, worst_zero = 0.0;
    for (double p : {0.1, 0.2, 0.3, 0.5}) {
      const auto s = MixtureSource::bernoulli_by_symbol(p);
      const auto clf = BinaryClassifier(2, {0});
      const auto hamming = DistortionMeasure::hamming(2);
      for (int k = 0; k < 20; ++k) {
        const double d = p * k / 20.0;
        const double r = solve_constrained(s, hamming, clf, d, kUnbounded).rate_bits;
        worst = std::max(worst, std::abs(r - (binary_entropy(p) - binary_entropy(d))));
      }
      for (double d : {p, p + 0.05, 0.5, 1.0}) {
        worst_zero = std::max(worst_zero, solve_constrained(s, hamming, clf, d, kUnbounded).rate_bits);
      }
    }
    return Outcome{worst <= 1e-3 && worst_zero < 1e-4,
                   fmt("max |err| %.3g bits over 80 points; max rate for D>=p %.3g", worst, worst_zero)};
  });

  criterion("oracle_equivalence", 120, [] {
    testing::Gen gen(2024);
    const auto hamming = DistortionMeasure::hamming(2);
    OracleConfig coarse, fine;
    coarse.resolution = 400;
    fine.resolution = 799;  // every 400-grid channel is also on this grid
    int mismatches = 0, both_infeasible = 0;
    double worst_excess = -1.0;
    for (int t = 0; t < 20; ++t) {
      const auto s = gen.source(2);
      const auto clf = bayes_region(s, Channel::identity(2));
      const double e_min = min_error_rate(s, clf);
      for (int k = 0; k < 5; ++k) {
        const double d = gen.uniform(0.02, 0.5);
        const double e = gen.uniform(e_min + 0.02, e_min + 0.32);
        const auto o = grid_search_rdc(s, hamming, clf, d, e, coarse);
        std::optional<double> solver;
        try {
          solver = solve_constrained(s, hamming, clf, d, e).rate_bits;
        } catch (const InfeasibleError&) {
        }
        if (!o.feasible || !solver) {
          if (o.feasible != solver.has_value()) ++mismatches;
          else ++both_infeasible;
          continue;
        }
        const auto f = grid_search_rdc(s, hamming, clf, d, e, fine);
        const double grid_error = std::abs(o.rate_bits - f.rate_bits);
        const double excess = std::abs(*solver - o.rate_bits) - std::max(1e-2, grid_error);
        worst_excess = std::max(worst_excess, excess);
        if (excess > 0) ++mismatches;
      }
    }
    return Outcome{mismatches == 0,
                   fmt("%g of 100 pairs out of tolerance; %g both infeasible; worst margin %.3g bits",
                       mismatches, both_infeasible, worst_excess)};
  });

  criterion("monotonicity", 60, [] {
    const auto& surface = overlap_surface();
    std::size_t infeasible = 0;
    for (const auto& pt : surface.points) infeasible += !pt.feasible;
    const auto report = check_monotone(surface, 1e-4);
    return Outcome{report.violations.empty(),
                   fmt("%g violations over 20x20 grid (%g infeasible cells)",
                       static_cast<double>(report.violations.size()), static_cast<double>(infeasible))};
  });

  criterion("convexity", 120, [] {
    const auto& s = overlap_source();
    const auto clf = bayes_region(s, Channel::identity(2));
    const auto hamming = DistortionMeasure::hamming(2);
    ConvexityOptions opt;
    opt.pairs = 200;
    opt.tolerance = 1e-3;
    const auto report = check_convexity(overlap_surface(), opt, [&](double d, double e) -> std::optional<double> {
      try {
        return solve_constrained(s, hamming, clf, d, e).rate_bits;
      } catch (const InfeasibleError&) {
        return std::nullopt;
      }
    });
    return Outcome{report.violations.empty() && report.checked_pairs == 200,
                   fmt("%g violations; %g pairs checked", static_cast<double>(report.violations.size()),
                       static_cast<double>(report.checked_pairs)) +
                       fmt(" (%g on grid, %g solved on demand)", static_cast<double>(report.on_grid),
                           static_cast<double>(report.solved_on_demand))};
  });

  criterion("error_rate_linearity", 10, [] {
    testing::Gen gen(99);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 2 + gen.index(5), m = 2 + gen.index(5);
      const auto s = gen.source(n);
      std::vector<std::size_t> region;
      for (std::size_t y = 0; y < m; ++y)
        if (gen.uniform() < 0.5) region.push_back(y);
      const BinaryClassifier clf(m, region);
      const auto a = gen.channel(n, m), b = gen.channel(n, m);
      const double lambda = gen.uniform();
      const double lhs = error_rate(s, Channel::blend(a, b, lambda), clf);
      const double rhs = lambda * error_rate(s, a, clf) + (1 - lambda) * error_rate(s, b, clf);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    return Outcome{worst <= 1e-12, fmt("max deviation %.3g over 100 draws", worst)};
  });

  criterion("constraint_coincidence", 30, [] {
    const double p = 0.3;
    const auto s = MixtureSource::bernoulli_by_symbol(p);
    const BinaryClassifier clf(2, {0});
    const auto hamming = DistortionMeasure::hamming(2);
    if (!(weight_matrix(s, clf).w == hamming.matrix())) return Outcome{false, "weight matrix is not Hamming"};
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        const double d = 0.4 * i / 9.0, e = 0.4 * j / 9.0;
        const double joint = solve_constrained(s, hamming, clf, d, e).rate_bits;
        const double single = solve_constrained(s, hamming, clf, std::min(d, e), kUnbounded).rate_bits;
        worst = std::max(worst, std::abs(joint - single));
      }
    }
    return Outcome{worst <= 1e-3, fmt("max |R(D,E) - R(min,inf)| %.3g bits over 10x10 grid", worst)};
  });

  criterion("bernoulli_regimes", 30, [] {
    const auto s = MixtureSource::bernoulli_by_symbol(0.5);
    const auto r = locate_regimes(s, BinaryClassifier(2, {0}), 0.2);
    if (!r.plateau_rate_bits) return Outcome{false, fmt("no plateau; d1=%.4g", r.d1)};
    const double expected = 1.0 - binary_entropy(0.2);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& [d, rate] : r.sweep) {
      if (d <= r.d1 || d >= r.d2) continue;
      lo = std::min(lo, rate);
      hi = std::max(hi, rate);
    }
    const bool ok = std::abs(r.d1 - 0.2) <= 5e-3 && std::abs(*r.plateau_rate_bits - expected) <= 2e-3 &&
                    hi - lo <= 1e-3;
    return Outcome{ok, fmt("d1=%.5g plateau=%.7g spread=%.3g", r.d1, *r.plateau_rate_bits, hi - lo)};
  });

  criterion("determinism", 60, [] {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "rdc_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string cli = RDC_CLI_PATH;
    const std::string source = std::string(RDC_DATA_DIR) + "/overlap.json";
    bool same = true;
    std::string detail;
    for (const char* ext : {"csv", "json"}) {
      std::string outputs[2];
      for (int run = 0; run < 2; ++run) {
        const fs::path out = dir / ("run" + std::to_string(run) + "." + ext);
        const std::string cmd = "\"" + cli + "\" sweep --source \"" + source +
                                "\" --grid-d 0:0.5:12 --grid-e 0.255:0.5:12 --no-meta --out \"" +
                                out.string() + "\" > \"" + (dir / "stdout.txt").string() + "\"";
        if (std::system(cmd.c_str()) != 0) return Outcome{false, "cli failed: " + cmd};
        outputs[run] = slurp(out);
      }
      const bool eq = !outputs[0].empty() && outputs[0] == outputs[1];
      same = same && eq;
      detail += std::string(ext) + (eq ? " identical " : " differ ") + "(" +
                std::to_string(outputs[0].size()) + " bytes); ";
    }
    fs::remove_all(dir);
    return Outcome{same, detail};
  });

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
