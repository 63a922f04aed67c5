#pragma once

#include <string>
#include <vector>

#include "cli/expression.hpp"
#include "geom/system.hpp"

namespace magcurv {

// A magnetic system given by expression lists.
//   metric: n*n entries row-major, or the n(n+1)/2 upper-triangle entries
//   two_form: n*n entries row-major, or the n(n-1)/2 strict upper triangle
//   primitive: empty or n entries
// The parameter k inside expressions is bound to `k`.
struct ExpressionSystemSpec {
  int dimension = 2;
  std::vector<std::string> metric;
  std::vector<std::string> two_form;
  std::vector<std::string> primitive;
  std::vector<double> lattice;
  bool analytic = true;
  double fd_step = 1e-5;
  double k = 0.0;
  PrimitiveScope primitive_scope = PrimitiveScope::Global;
  std::string name = "expression";
};

ChartedSystem make_expression_system(const ExpressionSystemSpec& spec);

// Largest |d theta - sigma| entry at the point, with d theta from central
// differences of step h.
double primitive_residual(const ChartedSystem& sys, const Vec& x, double h = 1e-5);

}  // namespace magcurv
