#pragma once

// Two-class discrete mixture sources, distortion measures and test channels.

#include <cstddef>
#include <span>
#include <vector>

#include "rdc/matrix.hpp"

namespace rdc {

using Pmf = std::vector<double>;

/// Tolerance applied to user-supplied probabilities.
inline constexpr double kInputTolerance = 1e-10;

/// A source X whose law is P1 * p_x1 + P2 * p_x2 over n symbols.
///
/// Construction validates the priors and both class-conditional pmfs against
/// kInputTolerance and then renormalizes them exactly, so derived quantities
/// (the marginal in particular) sum to one within 1e-12.
class MixtureSource {
 public:
  MixtureSource(double prior1, Pmf p_x1, Pmf p_x2);

  std::size_t size() const noexcept { return p_x1_.size(); }
  double prior1() const noexcept { return prior1_; }
  double prior2() const noexcept { return prior2_; }
  std::span<const double> p_x1() const noexcept { return p_x1_; }
  std::span<const double> p_x2() const noexcept { return p_x2_; }
  /// Induced marginal p_X.
  std::span<const double> marginal() const noexcept { return marginal_; }

  /// Symbols with p_X(x) > 0. Zero-mass symbols take no part in I, D or the
  /// classification error and are skipped by the solvers.
  std::vector<std::size_t> support() const;

  /// Single-class source with the given pmf (prior1 = 1, class 2 mirrors it).
  static MixtureSource single(Pmf p);
  /// Bern(p) with classes equal to symbols: class 1 is symbol 0, class 2 is symbol 1.
  static MixtureSource bernoulli_by_symbol(double p);

 private:
  double prior1_;
  double prior2_;
  Pmf p_x1_;
  Pmf p_x2_;
  Pmf marginal_;
};

/// Pairwise distortion Delta(x, x_hat) on an n x m grid.
class DistortionMeasure {
 public:
  explicit DistortionMeasure(Matrix delta);

  /// 0 on the diagonal, 1 elsewhere.
  static DistortionMeasure hamming(std::size_t n);

  std::size_t source_size() const noexcept { return delta_.rows(); }
  std::size_t reconstruction_size() const noexcept { return delta_.cols(); }
  double operator()(std::size_t x, std::size_t x_hat) const { return delta_(x, x_hat); }
  const Matrix& matrix() const noexcept { return delta_; }

 private:
  Matrix delta_;
};

/// Test channel p(x_hat | x), stored as a row-stochastic n x m matrix.
class Channel {
 public:
  /// Validates rows against 1e-10 and renormalizes them.
  explicit Channel(Matrix k);

  static Channel identity(std::size_t n);
  /// Every row equal to q.
  static Channel constant(std::size_t n, std::span<const double> q);
  static Channel binary_symmetric(double flip);

  std::size_t source_size() const noexcept { return k_.rows(); }
  std::size_t reconstruction_size() const noexcept { return k_.cols(); }
  double operator()(std::size_t x, std::size_t x_hat) const { return k_(x, x_hat); }
  std::span<const double> row(std::size_t x) const { return k_.row(x); }
  const Matrix& matrix() const noexcept { return k_; }

  /// Convex combination weight * a + (1 - weight) * b.
  static Channel blend(const Channel& a, const Channel& b, double weight);

 private:
  Matrix k_;
};

/// P1 * p_x1 + P2 * p_x2.
Pmf marginal(const MixtureSource& source);

struct Propagated {
  Pmf class1;   ///< p_{X_hat 1}
  Pmf class2;   ///< p_{X_hat 2}
  Pmf mixture;  ///< p_{X_hat}
};

/// Pushes both class-conditional pmfs (and the marginal) through the channel.
Propagated propagate(const MixtureSource& source, const Channel& channel);

/// Output pmf of an arbitrary input pmf through the channel.
Pmf push_forward(std::span<const double> p, const Channel& channel);

/// E[Delta(X, X_hat)] under p_X and the channel.
double expected_distortion(const MixtureSource& source, const Channel& channel,
                           const DistortionMeasure& delta);

}  // namespace rdc
