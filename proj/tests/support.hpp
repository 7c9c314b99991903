#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "kov/core.hpp"

namespace testing {

inline kov::StateVector uniform_point(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& c : v) c = dist(rng);
  return kov::StateVector(std::move(v));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double max_abs_diff(const kov::StateVector& a, const kov::StateVector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

/// max_i |a_i - b_i| / max(1, |b_i|)
inline double max_rel_diff(const kov::StateVector& a, const kov::StateVector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  }
  return worst;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace testing
