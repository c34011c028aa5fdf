#pragma once

// Binary sources under Hamming distortion: the classical closed form and the
// regime structure of R(D, E) along a D sweep at fixed E.

#include <optional>
#include <utility>
#include <vector>

#include "rdc/classifier.hpp"
#include "rdc/error.hpp"
#include "rdc/solver_types.hpp"

namespace rdc {

/// H_b(p) - H_b(D) for D < p, else 0. Requires 0 < p <= 0.5 and D >= 0.
double rd_closed_form(double p, double d);

struct BernoulliRegimes {
  double p = 0.0;        ///< smaller marginal probability of the binary source
  double e_bound = 0.0;
  double d1 = 0.0;       ///< end of the classical (closed-form) branch
  double d2 = 0.0;       ///< start of the zero-rate branch; inf if never reached
  /// Rate on the flat middle branch; empty when d1 == d2 (no middle branch).
  std::optional<double> plateau_rate_bits;
  std::vector<std::pair<double, double>> sweep;  ///< (D, R(D, E)) in bits, sorted by D
};

struct RegimeOptions {
  std::size_t sweep_points = 200;
  double boundary_accuracy = 1e-4;  ///< bisection width for d1 / d2
  double agreement_tol = 1e-3;      ///< |R - closed form| that counts as "classical"
  double zero_rate_tol = 1e-4;
  double flatness_tol = 1e-3;
};

/// Thrown when the middle branch exists but is not flat.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Sweeps D over [0, 1.5 * max(p, E)] at fixed E and locates the regime
/// boundaries. Requires a binary source and binary reconstruction; Hamming
/// distortion is implied.
BernoulliRegimes locate_regimes(const MixtureSource& source, const BinaryClassifier& clf,
                                double e_bound, const SolverConfig& cfg = {},
                                const RegimeOptions& options = {});

}  // namespace rdc
