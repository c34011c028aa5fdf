#include "rdc/rdc_solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <optional>
#include <string>
#include <thread>

#include "rdc/error.hpp"
#include "rdc/info_theory.hpp"
#include "rdc/problem.hpp"

namespace rdc {
namespace {

constexpr double kUnderflowFloor = 1e-300;
constexpr double kExactSlack = 1e-12;

void check_dimensions(const MixtureSource& source, const DistortionMeasure& delta,
                      const ErrorWeightMatrix& weights) {
  if (delta.source_size() != source.size()) {
    throw DimensionError("distortion matrix has " + std::to_string(delta.source_size()) +
                         " rows, source has " + std::to_string(source.size()) + " symbols");
  }
  if (weights.w.rows() != source.size() || weights.w.cols() != delta.reconstruction_size()) {
    throw DimensionError("classifier weights do not match the distortion matrix shape");
  }
}

double bilinear(std::span<const double> p, const Matrix& k, const Matrix& cost) {
  double total = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    double row = 0.0;
    for (std::size_t y = 0; y < k.cols(); ++y) row += k(x, y) * cost(x, y);
    total += p[x] * row;
  }
  return total;
}

RdcPoint evaluate_channel(const MixtureSource& source, const DistortionMeasure& delta,
                          const ErrorWeightMatrix& weights, Channel channel) {
  RdcPoint pt;
  const auto p = source.marginal();
  pt.rate_bits = mutual_information(p, channel);
  pt.distortion = bilinear(p, channel.matrix(), delta.matrix());
  pt.class_error = std::clamp(bilinear(p, channel.matrix(), weights.w), 0.0, 1.0);
  pt.channel = std::move(channel);
  return pt;
}

// Expected cost of emitting x_hat regardless of x, for each x_hat.
std::vector<double> column_costs(std::span<const double> p, const Matrix& cost) {
  std::vector<double> out(cost.cols(), 0.0);
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    for (std::size_t y = 0; y < cost.cols(); ++y) out[y] += p[x] * cost(x, y);
  }
  return out;
}

// Feasible t in [0, 1] for t * a + (1 - t) * b <= bound, intersected with [lo, hi].
bool clip_interval(double a, double b, double bound, double& lo, double& hi) {
  if (std::isinf(bound)) return lo <= hi;
  const double slope = a - b;
  const double rhs = bound + kExactSlack - b;
  if (slope > 0.0) {
    hi = std::min(hi, rhs / slope);
  } else if (slope < 0.0) {
    lo = std::max(lo, rhs / slope);
  } else if (rhs < 0.0) {
    return false;
  }
  return lo <= hi;
}

// Rate zero is achievable iff some constant channel meets both bounds. Both
// costs are linear in the output pmf q, so a two-constraint LP over the simplex;
// an optimum sits on a vertex or an edge, which we enumerate.
std::optional<std::vector<double>> zero_rate_output(const std::vector<double>& dbar,
                                                    const std::vector<double>& ebar, double d_bound,
                                                    double e_bound) {
  const std::size_t m = dbar.size();
  for (std::size_t a = 0; a < m; ++a) {
    if (dbar[a] <= d_bound + kExactSlack && ebar[a] <= e_bound + kExactSlack) {
      std::vector<double> q(m, 0.0);
      q[a] = 1.0;
      return q;
    }
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      double lo = 0.0, hi = 1.0;
      if (!clip_interval(dbar[a], dbar[b], d_bound, lo, hi)) continue;
      if (!clip_interval(ebar[a], ebar[b], e_bound, lo, hi)) continue;
      const double t = 0.5 * (lo + hi);
      std::vector<double> q(m, 0.0);
      q[a] = t;
      q[b] = 1.0 - t;
      return q;
    }
  }
  return std::nullopt;
}

struct Search {
  const MixtureSource& source;
  const DistortionMeasure& delta;
  const ErrorWeightMatrix& weights;
  const SolverConfig& cfg;
  double fine_tol;

  RdcPoint eval(double ld, double le) const {
    return solve_lagrangian(source, delta, weights, ld, le, cfg);
  }

  // Best lambda_e for a fixed lambda_d. `met` is false when even
  // lambda_e = multiplier_max leaves the error bound violated.
  RdcPoint inner(double ld, double e_bound, bool& met) const {
    met = true;
    if (std::isinf(e_bound)) return eval(ld, 0.0);
    RdcPoint at_zero = eval(ld, 0.0);
    if (at_zero.class_error <= e_bound) return at_zero;
    RdcPoint best = eval(ld, cfg.multiplier_max);
    if (best.class_error > e_bound + cfg.constraint_tol) {
      met = false;
      return best;
    }
    double lo = 0.0, hi = cfg.multiplier_max;
    for (std::size_t it = 0; it < cfg.outer_max_iters; ++it) {
      const double mid = 0.5 * (lo + hi);
      RdcPoint pt = eval(ld, mid);
      const double gap = pt.class_error - e_bound;
      if (std::abs(gap) <= fine_tol) return pt;
      if (gap > 0.0) {
        lo = mid;
      } else {
        hi = mid;
        best = std::move(pt);
      }
    }
    return best;
  }
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void SolverConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string("solver config: ") + name + " must be positive");
    }
  };
  positive(inner_tol, "inner_tol");
  positive(constraint_tol, "constraint_tol");
  positive(multiplier_max, "multiplier_max");
  if (max_inner_iters == 0) throw ValidationError("solver config: max_inner_iters must be positive");
  if (outer_max_iters == 0) throw ValidationError("solver config: outer_max_iters must be positive");
}

RdcPoint RdcPoint::infeasible() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  RdcPoint pt;
  pt.rate_bits = pt.distortion = pt.class_error = nan;
  pt.lambda_d = pt.lambda_e = nan;
  pt.feasible = false;
  return pt;
}

RdcPoint solve_lagrangian(const MixtureSource& source, const DistortionMeasure& delta,
                          const ErrorWeightMatrix& weights, double lambda_d, double lambda_e,
                          const SolverConfig& cfg, std::vector<double>* trace) {
  cfg.validate();
  check_dimensions(source, delta, weights);
  if (!(lambda_d >= 0.0) || !(lambda_e >= 0.0) || !std::isfinite(lambda_d) ||
      !std::isfinite(lambda_e)) {
    throw ValidationError("multipliers must be finite and nonnegative");
  }

  const std::vector<std::size_t> support = source.support();
  const std::size_t ns = support.size();
  const std::size_t m = delta.reconstruction_size();
  const auto p_full = source.marginal();

  std::vector<double> p(ns);
  Matrix cost(ns, m);
  for (std::size_t i = 0; i < ns; ++i) {
    const std::size_t x = support[i];
    p[i] = p_full[x];
    for (std::size_t y = 0; y < m; ++y) {
      cost(i, y) = lambda_d * delta(x, y) + lambda_e * weights.w(x, y);
    }
  }

  // Row-shifted Gibbs factors; the shift cancels in each row's normalization.
  Matrix gibbs(ns, m);
  std::vector<double> shift(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    const auto row = cost.row(i);
    shift[i] = *std::min_element(row.begin(), row.end());
    for (std::size_t y = 0; y < m; ++y) {
      gibbs(i, y) = std::max(std::exp(-(cost(i, y) - shift[i])), kUnderflowFloor);
    }
  }

  Matrix k(ns, m, 1.0 / static_cast<double>(m));
  std::vector<double> q(m, 1.0 / static_cast<double>(m));
  std::vector<double> q_next(m);

  auto lagrangian = [&] { return mutual_information_nats(p, k) + bilinear(p, k, cost); };
  if (trace) trace->push_back(lagrangian());

  double previous = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  bool converged = false;
  while (iterations < cfg.max_inner_iters) {
    ++iterations;
    double objective = 0.0;
    std::fill(q_next.begin(), q_next.end(), 0.0);
    for (std::size_t i = 0; i < ns; ++i) {
      double z = 0.0;
      for (std::size_t y = 0; y < m; ++y) z += q[y] * gibbs(i, y);
      for (std::size_t y = 0; y < m; ++y) {
        const double kv = q[y] * gibbs(i, y) / z;
        k(i, y) = kv;
        q_next[y] += p[i] * kv;
      }
      // min over k of sum_y k (log(k/q) + cost) equals -log sum_y q e^{-cost}.
      objective += p[i] * (shift[i] - std::log(z));
    }
    if (trace) trace->push_back(lagrangian());
    q.swap(q_next);
    if (previous - objective < cfg.inner_tol) {
      converged = true;
      break;
    }
    previous = objective;
  }

  // Rows of zero-mass symbols are irrelevant; give them the output marginal.
  Matrix full(source.size(), m);
  for (std::size_t x = 0; x < source.size(); ++x) {
    std::copy(q.begin(), q.end(), full.row(x).begin());
  }
  for (std::size_t i = 0; i < ns; ++i) {
    std::copy(k.row(i).begin(), k.row(i).end(), full.row(support[i]).begin());
  }

  RdcPoint pt = evaluate_channel(source, delta, weights, Channel(std::move(full)));
  pt.lambda_d = lambda_d;
  pt.lambda_e = lambda_e;
  pt.iterations = iterations;
  pt.converged = converged;
  return pt;
}

double min_distortion(const MixtureSource& source, const DistortionMeasure& delta) {
  if (delta.source_size() != source.size()) throw DimensionError("distortion matrix rows != source size");
  double total = 0.0;
  const auto p = source.marginal();
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    const auto row = delta.matrix().row(x);
    total += p[x] * *std::min_element(row.begin(), row.end());
  }
  return total;
}

double min_error_rate(const MixtureSource& source, const BinaryClassifier& clf) {
  const ErrorWeightMatrix w = weight_matrix(source, clf);
  double total = 0.0;
  const auto p = source.marginal();
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (!w.retained[x]) continue;
    const auto row = w.w.row(x);
    total += p[x] * *std::min_element(row.begin(), row.end());
  }
  return total;
}

RdcPoint solve_constrained(const MixtureSource& source, const DistortionMeasure& delta,
                           const BinaryClassifier& clf, double d_bound, double e_bound,
                           const SolverConfig& cfg) {
  cfg.validate();
  if (!(d_bound >= 0.0) || !(e_bound >= 0.0)) {
    throw ValidationError("bounds must be nonnegative (or inf)");
  }
  if (clf.alphabet_size() != delta.reconstruction_size()) {
    throw DimensionError("classifier alphabet differs from the reconstruction alphabet");
  }
  const ErrorWeightMatrix weights = weight_matrix(source, clf);
  check_dimensions(source, delta, weights);

  const double d_min = min_distortion(source, delta);
  if (d_bound < d_min - kExactSlack) {
    throw InfeasibleError("distortion bound " + std::to_string(d_bound) +
                          " is below the minimum achievable " + std::to_string(d_min));
  }
  const double e_min = min_error_rate(source, clf);
  if (e_bound < e_min - kExactSlack) {
    throw InfeasibleError("classification bound " + std::to_string(e_bound) +
                          " is below the minimum achievable " + std::to_string(e_min));
  }

  const auto p = source.marginal();
  if (auto q = zero_rate_output(column_costs(p, delta.matrix()), column_costs(p, weights.w),
                                d_bound, e_bound)) {
    RdcPoint pt = evaluate_channel(source, delta, weights, Channel::constant(source.size(), *q));
    pt.rate_bits = 0.0;
    pt.converged = true;
    return pt;
  }

  const Search search{source, delta, weights, cfg, cfg.constraint_tol * 1e-3};
  bool met = true;
  RdcPoint at_zero = search.inner(0.0, e_bound, met);
  if (!met) {
    throw InfeasibleError("classification bound " + std::to_string(e_bound) +
                          " not reachable within multiplier_max");
  }
  if (std::isinf(d_bound) || at_zero.distortion <= d_bound) return at_zero;

  RdcPoint best = search.inner(cfg.multiplier_max, e_bound, met);
  if (!met || best.distortion > d_bound + cfg.constraint_tol) {
    throw InfeasibleError("bounds (D=" + std::to_string(d_bound) + ", E=" + std::to_string(e_bound) +
                          ") not jointly reachable within multiplier_max");
  }
  double lo = 0.0, hi = cfg.multiplier_max;
  for (std::size_t it = 0; it < cfg.outer_max_iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    RdcPoint pt = search.inner(mid, e_bound, met);
    if (!met) {
      hi = mid;
      continue;
    }
    const double gap = pt.distortion - d_bound;
    if (std::abs(gap) <= search.fine_tol) return pt;
    if (gap > 0.0) {
      lo = mid;
    } else {
      hi = mid;
      best = std::move(pt);
    }
  }
  return best;
}

RdcSurface sweep_surface(const MixtureSource& source, const DistortionMeasure& delta,
                         const BinaryClassifier& clf, const std::vector<double>& d_grid,
                         const std::vector<double>& e_grid, const SolverConfig& cfg,
                         std::size_t jobs) {
  cfg.validate();
  validate_grid(d_grid, "d_grid");
  validate_grid(e_grid, "e_grid");

  RdcSurface surface;
  surface.d_grid = d_grid;
  surface.e_grid = e_grid;
  surface.points.resize(d_grid.size() * e_grid.size());
  surface.metadata = SurfaceMetadata{problem_hash(Problem{source, delta, clf}), cfg, utc_timestamp()};

  const std::size_t cells = surface.points.size();
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, std::max<std::size_t>(cells, 1));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < cells; c = next++) {
      const std::size_t i = c / e_grid.size();
      const std::size_t j = c % e_grid.size();
      try {
        surface.points[c] = solve_constrained(source, delta, clf, d_grid[i], e_grid[j], cfg);
      } catch (const Error&) {
        // Infeasible bounds are the expected case; anything else is also confined to the cell.
        surface.points[c] = RdcPoint::infeasible();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  return surface;
}

}  // namespace rdc
