#include "rdc/classifier.hpp"

#include <algorithm>
#include <string>

#include "rdc/error.hpp"

namespace rdc {

BinaryClassifier::BinaryClassifier(std::size_t alphabet_size, const std::vector<std::size_t>& region)
    : in_region_(alphabet_size, false) {
  if (alphabet_size == 0) throw ValidationError("classifier alphabet must be non-empty");
  for (std::size_t idx : region) {
    if (idx >= alphabet_size) {
      throw ValidationError("classifier region index " + std::to_string(idx) +
                            " outside reconstruction alphabet of size " +
                            std::to_string(alphabet_size));
    }
    in_region_[idx] = true;
  }
}

BinaryClassifier BinaryClassifier::always_class1(std::size_t alphabet_size) {
  std::vector<std::size_t> all(alphabet_size);
  for (std::size_t i = 0; i < alphabet_size; ++i) all[i] = i;
  return BinaryClassifier(alphabet_size, all);
}

std::vector<std::size_t> BinaryClassifier::region() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < in_region_.size(); ++i) {
    if (in_region_[i]) out.push_back(i);
  }
  return out;
}

double error_rate(double prior1, std::span<const double> p_hat1, std::span<const double> p_hat2,
                  const BinaryClassifier& clf) {
  if (p_hat1.size() != clf.alphabet_size() || p_hat2.size() != clf.alphabet_size()) {
    throw DimensionError("error_rate: classifier alphabet does not match the reconstruction pmfs");
  }
  const double prior2 = 1.0 - prior1;
  double err = 0.0;
  for (std::size_t y = 0; y < p_hat1.size(); ++y) {
    err += clf.accepts(y) ? prior2 * p_hat2[y] : prior1 * p_hat1[y];
  }
  return std::clamp(err, 0.0, 1.0);
}

double error_rate(const MixtureSource& source, const Channel& channel, const BinaryClassifier& clf) {
  const Propagated out = propagate(source, channel);
  return error_rate(source.prior1(), out.class1, out.class2, clf);
}

BinaryClassifier bayes_region(const MixtureSource& source, const Channel& channel) {
  const Propagated out = propagate(source, channel);
  std::vector<std::size_t> region;
  for (std::size_t y = 0; y < out.class1.size(); ++y) {
    if (source.prior1() * out.class1[y] >= source.prior2() * out.class2[y]) region.push_back(y);
  }
  return BinaryClassifier(out.class1.size(), region);
}

ErrorWeightMatrix weight_matrix(const MixtureSource& source, const BinaryClassifier& clf) {
  const std::size_t n = source.size();
  const std::size_t m = clf.alphabet_size();
  ErrorWeightMatrix out{Matrix(n, m, 0.0), std::vector<bool>(n, false)};
  const auto p = source.marginal();
  for (std::size_t x = 0; x < n; ++x) {
    if (p[x] <= 0.0) continue;
    out.retained[x] = true;
    const double to_class1 = source.prior2() * source.p_x2()[x] / p[x];  // x_hat in R0
    const double to_class2 = source.prior1() * source.p_x1()[x] / p[x];  // x_hat outside R0
    for (std::size_t y = 0; y < m; ++y) out.w(x, y) = clf.accepts(y) ? to_class1 : to_class2;
  }
  return out;
}

}  // namespace rdc
