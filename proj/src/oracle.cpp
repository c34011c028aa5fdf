#include "rdc/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rdc/error.hpp"
#include "rdc/info_theory.hpp"

namespace rdc {
namespace {

// All rows (k_0, ..., k_{m-1}) with k_i = a_i / steps, sum a_i = steps,
// in lexicographic order of (a_0, a_1, ...).
std::vector<std::vector<double>> simplex_grid(std::size_t m, std::size_t steps) {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> a(m, 0);
  auto recurse = [&](auto&& self, std::size_t pos, std::size_t remaining) -> void {
    if (pos + 1 == m) {
      a[pos] = remaining;
      std::vector<double> row(m);
      for (std::size_t i = 0; i < m; ++i) row[i] = static_cast<double>(a[i]) / static_cast<double>(steps);
      rows.push_back(std::move(row));
      return;
    }
    for (std::size_t v = 0; v <= remaining; ++v) {
      a[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  recurse(recurse, 0, steps);
  return rows;
}

double neg_entropy_nats(std::span<const double> row) {
  double s = 0.0;
  for (double v : row) {
    if (v > 0.0) s += v * std::log(v);
  }
  return s;
}

}  // namespace

OracleResult grid_search_rdc(const MixtureSource& source, const DistortionMeasure& delta,
                             const BinaryClassifier& clf, double d_bound, double e_bound,
                             const OracleConfig& cfg) {
  const std::size_t n = source.size();
  const std::size_t m = delta.reconstruction_size();
  if (cfg.resolution < 2) throw ValidationError("oracle resolution must be at least 2");
  if (n * (m - 1) > cfg.max_free_parameters) {
    throw ValidationError("oracle instance too large: " + std::to_string(n * (m - 1)) +
                          " free channel parameters (limit " +
                          std::to_string(cfg.max_free_parameters) + ")");
  }
  if (delta.source_size() != n || clf.alphabet_size() != m) {
    throw DimensionError("oracle: source, distortion and classifier shapes disagree");
  }
  if (!(d_bound >= 0.0) || !(e_bound >= 0.0)) throw ValidationError("bounds must be nonnegative");

  const ErrorWeightMatrix weights = weight_matrix(source, clf);
  const auto p = source.marginal();
  const std::vector<std::size_t> support = source.support();
  const auto candidates = simplex_grid(m, cfg.resolution - 1);
  const std::size_t nc = candidates.size();

  // Per (retained row, candidate): weighted distortion, weighted error, p * sum k log k.
  const std::size_t ns = support.size();
  std::vector<double> d_part(ns * nc), e_part(ns * nc), h_part(ns * nc);
  for (std::size_t i = 0; i < ns; ++i) {
    const std::size_t x = support[i];
    for (std::size_t c = 0; c < nc; ++c) {
      double d = 0.0, e = 0.0;
      for (std::size_t y = 0; y < m; ++y) {
        d += candidates[c][y] * delta(x, y);
        e += candidates[c][y] * weights.w(x, y);
      }
      d_part[i * nc + c] = p[x] * d;
      e_part[i * nc + c] = p[x] * e;
      h_part[i * nc + c] = p[x] * neg_entropy_nats(candidates[c]);
    }
  }

  OracleResult result;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> choice(ns, 0), best_choice;
  std::vector<double> q(m);
  for (;;) {
    double d = 0.0, e = 0.0;
    for (std::size_t i = 0; i < ns; ++i) {
      d += d_part[i * nc + choice[i]];
      e += e_part[i * nc + choice[i]];
    }
    if (d <= d_bound + cfg.slack && e <= e_bound + cfg.slack) {
      std::fill(q.begin(), q.end(), 0.0);
      double cond = 0.0;
      for (std::size_t i = 0; i < ns; ++i) {
        const auto& row = candidates[choice[i]];
        for (std::size_t y = 0; y < m; ++y) q[y] += p[support[i]] * row[y];
        cond += h_part[i * nc + choice[i]];
      }
      // I = H(X_hat) - H(X_hat | X)
      const double info = cond - neg_entropy_nats(q);
      if (info < best) {
        best = info;
        best_choice = choice;
        result.distortion = d;
        result.class_error = e;
      }
    }
    bool wrapped = true;
    for (std::size_t pos = ns; pos-- > 0;) {
      if (++choice[pos] < nc) {
        wrapped = false;
        break;
      }
      choice[pos] = 0;
    }
    if (wrapped) break;
  }

  if (best_choice.empty()) return result;
  result.feasible = true;
  result.rate_bits = std::max(best / kLn2, 0.0);

  Matrix k(n, m, 1.0 / static_cast<double>(m));
  for (std::size_t i = 0; i < ns; ++i) {
    std::copy(candidates[best_choice[i]].begin(), candidates[best_choice[i]].end(),
              k.row(support[i]).begin());
  }
  result.best_channel = Channel(std::move(k));
  return result;
}

}  // namespace rdc
