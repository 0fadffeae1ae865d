#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracharm/field.hpp"

namespace testing_support {

using namespace fracharm;
inline constexpr double pi = std::numbers::pi;

inline double rel_diff(const ScalarField& a, const ScalarField& b) {
  const double scale = std::max({a.max_abs(), b.max_abs(), 1e-300});
  return max_abs_difference(a, b) / scale;
}

inline ScalarField cos_mode(const PeriodicGrid& g, int k, int axis = 0) {
  return ScalarField::sample(g, [=](const auto& x) { return std::cos(k * x[axis]); });
}

inline ScalarField sin_mode(const PeriodicGrid& g, int k, int axis = 0) {
  return ScalarField::sample(g, [=](const auto& x) { return std::sin(k * x[axis]); });
}

}  // namespace testing_support
