#pragma once

// Rate-distortion-classification solver.
//
// R(D, E) = min over p(x_hat | x) of I(X; X_hat)
//           subject to E[Delta(X, X_hat)] <= D and eps(X_hat | c0) <= E.
//
// Both constraints are linear in the channel, so the program is convex. We
// scalarize with multipliers (lambda_d, lambda_e), solve each scalarized
// problem with Blahut-Arimoto alternating minimization, and search the
// multipliers by nested bisection (outer on lambda_d, inner on lambda_e).

#include <cstddef>
#include <limits>
#include <vector>

#include "rdc/classifier.hpp"
#include "rdc/solver_types.hpp"
#include "rdc/surface.hpp"

namespace rdc {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Minimizes I + lambda_d * E[Delta] + lambda_e * eps for fixed multipliers.
///
/// Starts from the uniform channel and alternates q <- p K and
/// K(x, .) <- q(.) exp(-lambda_d Delta(x, .) - lambda_e w(x, .)) / Z(x) until the
/// Lagrangian drops by less than cfg.inner_tol nats. If `trace` is non-null it
/// receives the Lagrangian (nats) of the starting channel and of every iterate.
RdcPoint solve_lagrangian(const MixtureSource& source, const DistortionMeasure& delta,
                          const ErrorWeightMatrix& weights, double lambda_d, double lambda_e,
                          const SolverConfig& cfg = {}, std::vector<double>* trace = nullptr);

/// R(D, E) for a single pair of bounds. Either bound may be kUnbounded.
/// Throws InfeasibleError when no channel meets both bounds and
/// ValidationError on negative or NaN bounds.
RdcPoint solve_constrained(const MixtureSource& source, const DistortionMeasure& delta,
                           const BinaryClassifier& clf, double d_bound, double e_bound,
                           const SolverConfig& cfg = {});

/// Smallest expected distortion any channel can reach.
double min_distortion(const MixtureSource& source, const DistortionMeasure& delta);
/// Smallest classification error any channel can reach.
double min_error_rate(const MixtureSource& source, const BinaryClassifier& clf);

/// Solves every (D, E) grid cell. Infeasible cells are marked, never dropped.
/// `jobs` = 0 uses the hardware concurrency; results do not depend on it.
RdcSurface sweep_surface(const MixtureSource& source, const DistortionMeasure& delta,
                         const BinaryClassifier& clf, const std::vector<double>& d_grid,
                         const std::vector<double>& e_grid, const SolverConfig& cfg = {},
                         std::size_t jobs = 0);

}  // namespace rdc
