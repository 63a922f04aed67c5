#include "cli/expression_system.hpp"

#include <cmath>
#include <random>

namespace magcurv {
namespace {

using ExprGrid = std::vector<Expression>;  // n*n, row-major

Expression parse_field(const std::string& text, const std::string& field, int n) {
  Expression e;
  try {
    e = Expression::parse(text);
  } catch (const ParseError& p) {
    throw ParseError(p.offset(), std::string(field) + " entry '" + text + "': " + p.what());
  }
  if (e.variable_count() > n)
    fail(ErrorKind::InvalidArgument, field + " entry '" + text + "' uses x" + std::to_string(e.variable_count()) +
                                         " beyond dimension " + std::to_string(n));
  return e;
}

ExprGrid symmetric_grid(const std::vector<std::string>& entries, int n) {
  const std::size_t full = static_cast<std::size_t>(n * n);
  const std::size_t tri = static_cast<std::size_t>(n * (n + 1) / 2);
  ExprGrid g(full);
  if (entries.size() == full) {
    for (std::size_t i = 0; i < full; ++i) g[i] = parse_field(entries[i], "metric", n);
  } else if (entries.size() == tri) {
    std::size_t c = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        g[i * n + j] = parse_field(entries[c++], "metric", n);
        g[j * n + i] = g[i * n + j];
      }
  } else {
    fail(ErrorKind::InvalidArgument, "metric needs " + std::to_string(full) + " or " + std::to_string(tri) +
                                         " entries, got " + std::to_string(entries.size()));
  }
  return g;
}

ExprGrid antisymmetric_grid(const std::vector<std::string>& entries, int n) {
  const std::size_t full = static_cast<std::size_t>(n * n);
  const std::size_t tri = static_cast<std::size_t>(n * (n - 1) / 2);
  ExprGrid s(full);
  if (entries.size() == full) {
    for (std::size_t i = 0; i < full; ++i) s[i] = parse_field(entries[i], "two_form", n);
  } else if (entries.size() == tri) {
    std::size_t c = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        s[i * n + j] = parse_field(entries[c++], "two_form", n);
        s[j * n + i] = Expression::from_tree(std::make_shared<ExprNode>(
            ExprNode{ExprNode::Kind::Negate, 0.0, 0, Func::Sin, s[i * n + j].root(), nullptr}));
      }
  } else {
    fail(ErrorKind::InvalidArgument, "two_form needs " + std::to_string(full) + " or " + std::to_string(tri) +
                                         " entries, got " + std::to_string(entries.size()));
  }
  return s;
}

Mat eval_grid(const ExprGrid& grid, int n, const Vec& x, double k) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = grid[static_cast<std::size_t>(i * n + j)].eval(x, k);
  return m;
}

ExprGrid differentiate(const ExprGrid& grid, int var) {
  ExprGrid out;
  out.reserve(grid.size());
  for (const Expression& e : grid) out.push_back(e.derivative(var));
  return out;
}

}  // namespace

ChartedSystem make_expression_system(const ExpressionSystemSpec& spec) {
  const int n = spec.dimension;
  require(n >= 2, "dimension must be at least 2");
  auto g = std::make_shared<const ExprGrid>(symmetric_grid(spec.metric, n));
  auto s = std::make_shared<const ExprGrid>(antisymmetric_grid(spec.two_form, n));
  const double k = spec.k;

  FieldFunctions f;
  f.metric = [g, n, k](const Vec& x) { return eval_grid(*g, n, x, k); };
  f.two_form = [s, n, k](const Vec& x) { return eval_grid(*s, n, x, k); };

  if (!spec.primitive.empty()) {
    require(static_cast<int>(spec.primitive.size()) == n,
            "primitive needs " + std::to_string(n) + " entries, got " + std::to_string(spec.primitive.size()));
    auto th = std::make_shared<std::vector<Expression>>();
    for (const auto& t : spec.primitive) th->push_back(parse_field(t, "primitive", n));
    f.primitive = [th, n, k](const Vec& x) {
      Vec out(n);
      for (int i = 0; i < n; ++i) out[i] = (*th)[static_cast<std::size_t>(i)].eval(x, k);
      return out;
    };
  }

  SystemOptions opt;
  opt.name = spec.name;
  opt.lattice = spec.lattice;
  opt.primitive_scope = spec.primitive.empty() ? PrimitiveScope::None : spec.primitive_scope;
  if (spec.analytic) {
    opt.scheme = DerivativeScheme::analytic();
    auto dg = std::make_shared<std::vector<ExprGrid>>();
    auto ds = std::make_shared<std::vector<ExprGrid>>();
    auto d2g = std::make_shared<std::vector<ExprGrid>>(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i) {
      dg->push_back(differentiate(*g, i));
      ds->push_back(differentiate(*s, i));
    }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        (*d2g)[static_cast<std::size_t>(i * n + j)] = differentiate((*dg)[static_cast<std::size_t>(i)], j);
        (*d2g)[static_cast<std::size_t>(j * n + i)] = (*d2g)[static_cast<std::size_t>(i * n + j)];
      }
    auto list = [n, k](const std::vector<ExprGrid>& grids, const Vec& x) {
      MatList out;
      out.reserve(grids.size());
      for (const ExprGrid& e : grids) out.push_back(eval_grid(e, n, x, k));
      return out;
    };
    f.metric_d1 = [dg, list](const Vec& x) { return list(*dg, x); };
    f.two_form_d1 = [ds, list](const Vec& x) { return list(*ds, x); };
    f.metric_d2 = [d2g, list](const Vec& x) { return list(*d2g, x); };
  } else {
    opt.scheme = DerivativeScheme::finite_difference(spec.fd_step);
  }
  return ChartedSystem(n, std::move(f), std::move(opt));
}

double primitive_residual(const ChartedSystem& sys, const Vec& x, double h) {
  const int n = sys.dimension();
  Mat dth(n, n);  // dth(i, j) = d_i theta_j
  for (int i = 0; i < n; ++i) {
    Vec xp = x, xm = x;
    const double hi = h * std::max(1.0, std::abs(x[i]));
    xp[i] += hi;
    xm[i] -= hi;
    dth.row(i) = ((sys.primitive(xp) - sys.primitive(xm)) / (2.0 * hi)).transpose();
  }
  const Mat d = dth - dth.transpose();
  return (d - sys.two_form(x)).cwiseAbs().maxCoeff();
}

}  // namespace magcurv
