#pragma once

// Fixed binary classifier on the reconstruction alphabet and its error rate.
//
// The classifier says "class 1" on its acceptance region R0 and "class 2"
// elsewhere. Its error on a reconstruction is
//
//   eps = P2 * sum_{x_hat in R0} p_{X_hat 2}(x_hat) + P1 * sum_{x_hat not in R0} p_{X_hat 1}(x_hat),
//
// which is linear in the channel. weight_matrix() rewrites it as
// eps = sum_x p_X(x) sum_x_hat k(x, x_hat) w(x, x_hat) so the solver can treat
// it as a second distortion measure.

#include <cstddef>
#include <vector>

#include "rdc/matrix.hpp"
#include "rdc/source_model.hpp"

namespace rdc {

class BinaryClassifier {
 public:
  /// `region` lists the reconstruction symbols labelled as class 1.
  /// Throws ValidationError on out-of-range indices; duplicates are ignored.
  BinaryClassifier(std::size_t alphabet_size, const std::vector<std::size_t>& region);

  /// Region R0 = all of {0..m-1}.
  static BinaryClassifier always_class1(std::size_t alphabet_size);

  std::size_t alphabet_size() const noexcept { return in_region_.size(); }
  bool accepts(std::size_t x_hat) const { return in_region_.at(x_hat); }
  /// Sorted region indices.
  std::vector<std::size_t> region() const;

  bool operator==(const BinaryClassifier&) const = default;

 private:
  std::vector<bool> in_region_;
};

/// Per-pair error weights. Rows of zero-mass source symbols are all zero and
/// flagged as not retained.
struct ErrorWeightMatrix {
  Matrix w;
  std::vector<bool> retained;
};

/// Error rate of `clf` on the reconstruction produced by `channel`.
double error_rate(const MixtureSource& source, const Channel& channel,
                  const BinaryClassifier& clf);

/// Error rate given the two class-conditional reconstruction pmfs directly.
double error_rate(double prior1, std::span<const double> p_hat1,
                  std::span<const double> p_hat2, const BinaryClassifier& clf);

/// Bayes-optimal region {x_hat : P1 p_hat1(x_hat) >= P2 p_hat2(x_hat)} for the
/// reconstruction produced by `channel`. Ties go to class 1.
BinaryClassifier bayes_region(const MixtureSource& source, const Channel& channel);

ErrorWeightMatrix weight_matrix(const MixtureSource& source, const BinaryClassifier& clf);

}  // namespace rdc
