#pragma once

// Brute-force R(D, E) on tiny alphabets, used to cross-check the solver.

#include <cstddef>
#include <optional>

#include "rdc/classifier.hpp"
#include "rdc/source_model.hpp"

namespace rdc {

struct OracleConfig {
  std::size_t resolution = 200;   ///< grid points per free channel entry (>= 2)
  double slack = 1e-4;            ///< same feasibility slack as SolverConfig::constraint_tol
  std::size_t max_free_parameters = 4;
};

struct OracleResult {
  bool feasible = false;
  double rate_bits = 0.0;
  double distortion = 0.0;
  double class_error = 0.0;
  std::optional<Channel> best_channel;
};

/// Enumerates every channel whose free entries lie on the uniform grid with step
/// 1/(resolution-1) (last entry of each row is the residual), keeps those with
/// E[Delta] <= D + slack and eps <= E + slack, and returns the smallest I.
/// Ties resolve to the lexicographically first channel.
/// Throws ValidationError when n*(m-1) exceeds cfg.max_free_parameters.
OracleResult grid_search_rdc(const MixtureSource& source, const DistortionMeasure& delta,
                             const BinaryClassifier& clf, double d_bound, double e_bound,
                             const OracleConfig& cfg = {});

}  // namespace rdc
