#pragma once

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "cli/expression_system.hpp"

namespace magcurv {
namespace testing {

inline Vec V(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

inline ChartedSystem sphere_angles(bool analytic) {
  ExpressionSystemSpec s;
  s.dimension = 2;
  s.metric = {"1", "0", "0", "sin(x1)^2"};
  s.two_form = {"0"};
  s.analytic = analytic;
  return make_expression_system(s);
}

// A random smooth 3-dimensional system: g = A(x)^T A(x) + I with trigonometric
// entries and sigma = d theta for a random trigonometric theta, so sigma is closed.
inline ChartedSystem random_system3(std::uint64_t seed, bool analytic) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> c(-0.4, 0.4);
  auto num = [&] {
    char b[32];
    std::snprintf(b, sizeof b, "%.6f", c(rng));
    return std::string(b);
  };
  std::vector<std::string> a(9);
  for (auto& e : a) e = num() + "*sin(" + num() + "*x1 + " + num() + "*x2 + " + num() + "*x3)";
  ExpressionSystemSpec s;
  s.dimension = 3;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      std::string e = i == j ? "1" : "0";
      for (int l = 0; l < 3; ++l) e += " + (" + a[l * 3 + i] + ")*(" + a[l * 3 + j] + ")";
      s.metric.push_back(e);
    }
  std::vector<std::string> th(3);
  for (auto& t : th) t = num() + "*cos(" + num() + "*x1 + " + num() + "*x2) + " + num() + "*x3*x1";
  s.primitive = th;
  // sigma_ij = d_i theta_j - d_j theta_i, differentiated symbolically.
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const Expression e = Expression::parse(th[j]).derivative(i);
      const Expression f = Expression::parse(th[i]).derivative(j);
      s.two_form.push_back("(" + e.to_string() + ") - (" + f.to_string() + ")");
    }
  s.analytic = analytic;
  return make_expression_system(s);
}

inline Vec random_vec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> d;
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

}  // namespace testing

}  // namespace magcurv

using namespace magcurv::testing;
