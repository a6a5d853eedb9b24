#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "donaldson/forms.hpp"

namespace testing_util {

using donaldson::GridPtr;
using donaldson::KForm;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 0-form f(x1) sampled on the grid (x1 is coordinate 0).
inline Eigen::VectorXd of_x1(const GridPtr& g, const std::function<double(double)>& f) {
  return donaldson::sample(*g, [&](const Eigen::Vector4d& x) { return f(x(0)); });
}

// Single-component k-form c * f(x1) on the basis element with the given axes.
inline KForm monomial(const GridPtr& g, std::initializer_list<int> axes,
                      const std::function<double(double)>& f) {
  KForm a(g, int(axes.size()));
  a.component(donaldson::component_index(axes)) = of_x1(g, f);
  return a;
}

inline double sin1(double x) { return std::sin(kTwoPi * x); }
inline double cos1(double x) { return std::cos(kTwoPi * x); }

}  // namespace testing_util
