#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "lassoscreen/types.hpp"

namespace lassoscreen {

enum class CovKind { identity, ar1 };

/// Synthetic design: rows of X i.i.d. N(0, Sigma), k_signals unit
/// coefficients spread evenly over beta, noise variance beta' Sigma beta / snr.
struct SimSpec {
  Index n = 100;
  Index p = 1000;
  Index k_signals = 5;
  double snr = 1.0;
  CovKind cov = CovKind::identity;
  double rho = 0.0;  // AR(1) correlation, used when cov == ar1
  std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Decorrelates (seed, stream) pairs so repetitions get independent draws.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return detail::mix64(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

/// Standard normals from a seeded mt19937_64 through Box-Muller on the top
/// 53 bits. Both engine and transform are fully pinned down, so draws are
/// identical across platforms, unlike std::normal_distribution.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the log finite; u2 in [0, 1)
    const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
    const double u2 = static_cast<double>(rng_() >> 11) * 0x1p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// k unit coefficients at positions round(i p / k) - 1 for i = 1..k.
inline Vector true_beta(Index p, Index k) {
  if (k < 1 || k > p) throw std::invalid_argument("true_beta: need 1 <= k <= p");
  Vector beta = Vector::Zero(p);
  for (Index i = 1; i <= k; ++i) {
    const double pos =
        std::round(static_cast<double>(i) * static_cast<double>(p) /
                   static_cast<double>(k)) -
        1.0;
    Index idx = static_cast<Index>(pos);
    if (idx < 0) idx = 0;
    if (idx > p - 1) idx = p - 1;
    beta[idx] = 1.0;
  }
  return beta;
}

struct SimData {
  Matrix X;
  Vector y;
  Vector beta;
  double sigma2 = 0.0;
};

inline SimData generate(const SimSpec& spec) {
  if (spec.n < 1 || spec.p < 1) throw std::invalid_argument("generate: n and p must be positive");
  if (spec.k_signals < 1 || spec.k_signals > spec.p) {
    throw std::invalid_argument("generate: need 1 <= k_signals <= p");
  }
  if (!(spec.snr > 0.0)) throw std::invalid_argument("generate: snr must be positive");
  const double rho = spec.cov == CovKind::ar1 ? spec.rho : 0.0;
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw std::invalid_argument("generate: rho must lie in [0, 1)");
  }

  SimData data;
  data.beta = true_beta(spec.p, spec.k_signals);

  // beta' Sigma beta in closed form over the unit signals
  double quad = 0.0;
  if (rho == 0.0) {
    quad = static_cast<double>(spec.k_signals);
  } else {
    std::vector<Index> signals;
    for (Index j = 0; j < spec.p; ++j) {
      if (data.beta[j] != 0.0) signals.push_back(j);
    }
    for (const Index s : signals) {
      for (const Index t : signals) {
        quad += std::pow(rho, std::abs(static_cast<double>(s - t)));
      }
    }
  }
  data.sigma2 = quad / spec.snr;

  NormalSampler normal(stream_seed(spec.seed, 0));

  // each row is an AR(1) path; rho = 0 reduces to i.i.d. N(0, I)
  const double innov = std::sqrt(1.0 - rho * rho);
  data.X.resize(spec.n, spec.p);
  for (Index i = 0; i < spec.n; ++i) {
    double prev = normal();
    data.X(i, 0) = prev;
    for (Index t = 1; t < spec.p; ++t) {
      prev = rho * prev + innov * normal();
      data.X(i, t) = prev;
    }
  }

  // noise drawn only after X so the design is shared across snr values
  const double sigma = std::sqrt(data.sigma2);
  data.y = data.X * data.beta;
  for (Index i = 0; i < spec.n; ++i) data.y[i] += sigma * normal();
  return data;
}

}  // namespace lassoscreen
