#include "rdc/bernoulli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "rdc/error.hpp"
#include "rdc/info_theory.hpp"
#include "rdc/rdc_solver.hpp"

namespace rdc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shrinks [good, bad] until it is narrower than `width`; `holds(good)` is true
// and `holds(bad)` is false on entry. Returns the last point where it held.
double refine(double good, double bad, double width, const std::function<bool(double)>& holds) {
  while (std::abs(bad - good) > width) {
    const double mid = 0.5 * (good + bad);
    (holds(mid) ? good : bad) = mid;
  }
  return good;
}

}  // namespace

double rd_closed_form(double p, double d) {
  if (!(p > 0.0 && p <= 0.5)) throw ValidationError("rd_closed_form: p must lie in (0, 0.5]");
  if (!(d >= 0.0)) throw ValidationError("rd_closed_form: D must be nonnegative");
  if (d >= p) return 0.0;
  return binary_entropy(p) - binary_entropy(d);
}

BernoulliRegimes locate_regimes(const MixtureSource& source, const BinaryClassifier& clf,
                                double e_bound, const SolverConfig& cfg,
                                const RegimeOptions& options) {
  if (source.size() != 2 || clf.alphabet_size() != 2) {
    throw DimensionError("locate_regimes needs binary source and reconstruction alphabets");
  }
  if (!(e_bound >= 0.0)) throw ValidationError("e_bound must be nonnegative (or inf)");
  if (options.sweep_points < 2) throw ValidationError("sweep needs at least two points");

  const DistortionMeasure hamming = DistortionMeasure::hamming(2);
  BernoulliRegimes out;
  out.p = std::min(source.marginal()[0], source.marginal()[1]);
  out.e_bound = e_bound;
  if (!(out.p > 0.0)) throw ValidationError("locate_regimes: source is deterministic");

  auto rate_at = [&](double d) {
    try {
      return solve_constrained(source, hamming, clf, d, e_bound, cfg).rate_bits;
    } catch (const InfeasibleError&) {
      return kInf;
    }
  };
  auto classical = [&](double d, double r) {
    return std::isfinite(r) && std::abs(r - rd_closed_form(out.p, d)) < options.agreement_tol;
  };

  const double reach = std::isinf(e_bound) ? out.p : std::max(out.p, e_bound);
  const double upper = 1.5 * reach;
  const std::size_t n = options.sweep_points;
  out.sweep.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double d = upper * static_cast<double>(k) / static_cast<double>(n - 1);
    out.sweep.emplace_back(d, rate_at(d));
  }

  // d1: end of the initial run that follows the closed form, capped at p.
  std::size_t first_off = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (!classical(out.sweep[k].first, out.sweep[k].second)) {
      first_off = k;
      break;
    }
  }
  if (first_off == n) {
    out.d1 = out.p;
  } else if (first_off == 0) {
    out.d1 = 0.0;
  } else {
    out.d1 = refine(out.sweep[first_off - 1].first, out.sweep[first_off].first,
                    options.boundary_accuracy,
                    [&](double d) { return classical(d, rate_at(d)); });
    out.d1 = std::min(out.d1, out.p);
  }

  // d2: first D where the rate vanishes.
  out.d2 = kInf;
  for (std::size_t k = 0; k < n; ++k) {
    if (out.sweep[k].second < options.zero_rate_tol) {
      out.d2 = k == 0 ? 0.0
                      : refine(out.sweep[k].first, out.sweep[k - 1].first, options.boundary_accuracy,
                               [&](double d) { return rate_at(d) < options.zero_rate_tol; });
      break;
    }
  }
  out.d2 = std::max(out.d2, out.d1);

  if (out.d2 - out.d1 <= options.boundary_accuracy) return out;

  double lo = kInf, hi = -kInf;
  for (const auto& [d, r] : out.sweep) {
    if (d <= out.d1 || d >= out.d2) continue;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (!(hi >= lo)) return out;  // no sweep sample strictly inside (d1, d2)
  if (hi - lo >= options.flatness_tol) {
    throw RegimeError("no flat middle branch at E=" + std::to_string(e_bound) + ": rate spans [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "] bits on (" +
                      std::to_string(out.d1) + ", " + std::to_string(out.d2) + ")");
  }
  out.plateau_rate_bits = lo;
  return out;
}

}  // namespace rdc
