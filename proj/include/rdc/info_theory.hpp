#pragma once

#include <span>

#include "rdc/source_model.hpp"

namespace rdc {

/// Throws ValidationError unless p is a pmf within `tolerance`.
void validate_pmf(std::span<const double> p, double tolerance = kInputTolerance);

/// H_b(alpha) in bits; H_b(0) = H_b(1) = 0.
double binary_entropy(double alpha);

/// Shannon entropy in bits.
double entropy(std::span<const double> p);

/// I(X; X_hat) in bits for input law p_x and channel p(x_hat | x).
/// Zero-probability terms contribute nothing; tiny negative round-off is clamped to 0.
double mutual_information(std::span<const double> p_x, const Channel& channel);

/// Same quantity in nats, skipping the clamp. Used by the solver internals.
double mutual_information_nats(std::span<const double> p_x, const Matrix& channel);

inline constexpr double kLn2 = 0.69314718055994530942;

}  // namespace rdc
