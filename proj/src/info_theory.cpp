#include "rdc/info_theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rdc/error.hpp"

namespace rdc {

void validate_pmf(std::span<const double> p, double tolerance) {
  if (p.empty()) throw ValidationError("pmf is empty");
  double total = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError("pmf has a negative or non-finite entry");
    total += v;
  }
  if (std::abs(total - 1.0) > tolerance) {
    throw ValidationError("pmf sums to " + std::to_string(total) + ", not 1");
  }
}

double binary_entropy(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("binary_entropy: alpha outside [0, 1]");
  }
  if (alpha == 0.0 || alpha == 1.0) return 0.0;
  return -alpha * std::log2(alpha) - (1.0 - alpha) * std::log2(1.0 - alpha);
}

double entropy(std::span<const double> p) {
  validate_pmf(p);
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return std::max(h, 0.0);
}

double mutual_information_nats(std::span<const double> p_x, const Matrix& k) {
  const std::size_t m = k.cols();
  std::vector<double> q(m, 0.0);
  for (std::size_t x = 0; x < p_x.size(); ++x) {
    if (p_x[x] == 0.0) continue;
    for (std::size_t y = 0; y < m; ++y) q[y] += p_x[x] * k(x, y);
  }
  double info = 0.0;
  for (std::size_t x = 0; x < p_x.size(); ++x) {
    if (p_x[x] == 0.0) continue;
    double row = 0.0;
    for (std::size_t y = 0; y < m; ++y) {
      const double kv = k(x, y);
      if (kv > 0.0 && q[y] > 0.0) row += kv * std::log(kv / q[y]);
    }
    info += p_x[x] * row;
  }
  return info;
}

double mutual_information(std::span<const double> p_x, const Channel& channel) {
  if (channel.source_size() != p_x.size()) {
    throw DimensionError("mutual_information: channel has " + std::to_string(channel.source_size()) +
                         " rows, pmf has " + std::to_string(p_x.size()) + " entries");
  }
  validate_pmf(p_x);
  return std::max(mutual_information_nats(p_x, channel.matrix()) / kLn2, 0.0);
}

}  // namespace rdc
