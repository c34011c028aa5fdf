#include "rdc/source_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rdc/error.hpp"
#include "rdc/info_theory.hpp"

namespace rdc {
namespace {

Pmf normalized(Pmf p, const char* what) {
  try {
    validate_pmf(p);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(what) + ": " + e.what());
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= total;
  return p;
}

void require_same_rows(std::size_t rows, std::size_t n, const char* what) {
  if (rows != n) {
    throw DimensionError(std::string(what) + " has " + std::to_string(rows) +
                         " rows but the source has " + std::to_string(n) + " symbols");
  }
}

}  // namespace

MixtureSource::MixtureSource(double prior1, Pmf p_x1, Pmf p_x2) {
  if (!(prior1 >= -kInputTolerance && prior1 <= 1.0 + kInputTolerance)) {
    throw ValidationError("prior1 must lie in [0, 1], got " + std::to_string(prior1));
  }
  if (p_x1.empty()) throw ValidationError("source alphabet must be non-empty");
  if (p_x1.size() != p_x2.size()) {
    throw DimensionError("class-conditional pmfs differ in length (" +
                         std::to_string(p_x1.size()) + " vs " + std::to_string(p_x2.size()) + ")");
  }
  prior1_ = std::clamp(prior1, 0.0, 1.0);
  prior2_ = 1.0 - prior1_;
  p_x1_ = normalized(std::move(p_x1), "p_x1");
  p_x2_ = normalized(std::move(p_x2), "p_x2");
  marginal_.resize(p_x1_.size());
  for (std::size_t x = 0; x < marginal_.size(); ++x) {
    marginal_[x] = prior1_ * p_x1_[x] + prior2_ * p_x2_[x];
  }
}

std::vector<std::size_t> MixtureSource::support() const {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < marginal_.size(); ++x) {
    if (marginal_[x] > 0.0) out.push_back(x);
  }
  return out;
}

MixtureSource MixtureSource::single(Pmf p) {
  Pmf copy = p;
  return MixtureSource(1.0, std::move(p), std::move(copy));
}

MixtureSource MixtureSource::bernoulli_by_symbol(double p) {
  return MixtureSource(1.0 - p, {1.0, 0.0}, {0.0, 1.0});
}

DistortionMeasure::DistortionMeasure(Matrix delta) : delta_(std::move(delta)) {
  if (delta_.empty()) throw ValidationError("distortion matrix must be non-empty");
  for (double v : delta_.data()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("distortion entries must be finite and nonnegative");
    }
  }
}

DistortionMeasure DistortionMeasure::hamming(std::size_t n) {
  Matrix m(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 0.0;
  return DistortionMeasure(std::move(m));
}

Channel::Channel(Matrix k) : k_(std::move(k)) {
  if (k_.empty()) throw ValidationError("channel must be non-empty");
  for (std::size_t x = 0; x < k_.rows(); ++x) {
    auto row = k_.row(x);
    double total = 0.0;
    for (double v : row) {
      if (!std::isfinite(v) || v < 0.0) {
        throw ValidationError("channel row " + std::to_string(x) + " has a negative entry");
      }
      total += v;
    }
    if (std::abs(total - 1.0) > kInputTolerance) {
      throw ValidationError("channel row " + std::to_string(x) + " sums to " +
                            std::to_string(total));
    }
    for (double& v : row) v /= total;
  }
}

Channel Channel::identity(std::size_t n) {
  Matrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return Channel(std::move(m));
}

Channel Channel::constant(std::size_t n, std::span<const double> q) {
  Matrix m(n, q.size());
  for (std::size_t x = 0; x < n; ++x) std::copy(q.begin(), q.end(), m.row(x).begin());
  return Channel(std::move(m));
}

Channel Channel::binary_symmetric(double flip) {
  if (!(flip >= 0.0 && flip <= 1.0)) throw ValidationError("flip probability outside [0, 1]");
  return Channel(Matrix::from_rows({{1.0 - flip, flip}, {flip, 1.0 - flip}}));
}

Channel Channel::blend(const Channel& a, const Channel& b, double weight) {
  if (a.source_size() != b.source_size() || a.reconstruction_size() != b.reconstruction_size()) {
    throw DimensionError("cannot blend channels of different shapes");
  }
  Matrix m(a.source_size(), a.reconstruction_size());
  for (std::size_t x = 0; x < m.rows(); ++x) {
    for (std::size_t y = 0; y < m.cols(); ++y) m(x, y) = weight * a(x, y) + (1.0 - weight) * b(x, y);
  }
  return Channel(std::move(m));
}

Pmf marginal(const MixtureSource& source) {
  return Pmf(source.marginal().begin(), source.marginal().end());
}

Pmf push_forward(std::span<const double> p, const Channel& channel) {
  require_same_rows(channel.source_size(), p.size(), "channel");
  Pmf out(channel.reconstruction_size(), 0.0);
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    auto row = channel.row(x);
    for (std::size_t y = 0; y < out.size(); ++y) out[y] += p[x] * row[y];
  }
  return out;
}

Propagated propagate(const MixtureSource& source, const Channel& channel) {
  Propagated out{push_forward(source.p_x1(), channel), push_forward(source.p_x2(), channel), {}};
  out.mixture.resize(out.class1.size());
  for (std::size_t y = 0; y < out.mixture.size(); ++y) {
    out.mixture[y] = source.prior1() * out.class1[y] + source.prior2() * out.class2[y];
  }
  return out;
}

double expected_distortion(const MixtureSource& source, const Channel& channel,
                           const DistortionMeasure& delta) {
  require_same_rows(channel.source_size(), source.size(), "channel");
  require_same_rows(delta.source_size(), source.size(), "distortion matrix");
  if (delta.reconstruction_size() != channel.reconstruction_size()) {
    throw DimensionError("distortion matrix and channel disagree on the reconstruction alphabet");
  }
  const auto p = source.marginal();
  double total = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    double row_cost = 0.0;
    for (std::size_t y = 0; y < channel.reconstruction_size(); ++y) row_cost += channel(x, y) * delta(x, y);
    total += p[x] * row_cost;
  }
  return total;
}

}  // namespace rdc
