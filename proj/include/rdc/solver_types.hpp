#pragma once

#include <cstddef>
#include <optional>

#include "rdc/source_model.hpp"

namespace rdc {

struct SolverConfig {
  double inner_tol = 1e-9;          ///< stop when the Lagrangian drops by less (nats)
  std::size_t max_inner_iters = 20000;
  double constraint_tol = 1e-4;     ///< feasibility slack of the multiplier search
  double multiplier_max = 1e4;      ///< bisection cap (nats per unit of constraint)
  std::size_t outer_max_iters = 60; ///< bisection steps per multiplier

  /// Throws ValidationError unless every field is positive and finite.
  void validate() const;

  bool operator==(const SolverConfig&) const = default;
};

/// One evaluated point of R(D, E).
struct RdcPoint {
  double rate_bits = 0.0;
  double distortion = 0.0;
  double class_error = 0.0;
  double lambda_d = 0.0;  ///< nats per unit distortion
  double lambda_e = 0.0;  ///< nats per unit error rate
  std::size_t iterations = 0;
  bool converged = false;
  bool feasible = true;   ///< false only for surface cells whose bounds cannot be met
  std::optional<Channel> channel;

  /// Marker for a surface cell with unattainable bounds.
  static RdcPoint infeasible();
};

}  // namespace rdc
