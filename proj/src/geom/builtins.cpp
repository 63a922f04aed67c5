#include "geom/builtins.hpp"

#include <cmath>

namespace magcurv {
namespace {

Mat area_matrix(double s) {
  Mat m(2, 2);
  m << 0.0, s, -s, 0.0;
  return m;
}

MatList zeros(int count) { return MatList(static_cast<std::size_t>(count), Mat::Zero(2, 2)); }

}  // namespace

ChartedSystem flat_torus(double b0, double modulation) {
  require(std::isfinite(b0) && std::isfinite(modulation), "flat_torus parameters must be finite");
  FieldFunctions f;
  f.metric = [](const Vec&) -> Mat { return Mat::Identity(2, 2); };
  f.two_form = [=](const Vec& x) { return area_matrix(b0 + modulation * std::sin(x[0])); };
  f.metric_d1 = [](const Vec&) { return zeros(2); };
  f.metric_d2 = [](const Vec&) { return zeros(4); };
  f.two_form_d1 = [=](const Vec& x) {
    MatList d = zeros(2);
    d[0] = area_matrix(modulation * std::cos(x[0]));
    return d;
  };
  f.primitive = [=](const Vec& x) {
    Vec th(2);
    th << 0.0, b0 * x[0] - modulation * std::cos(x[0]);
    return th;
  };

  SystemOptions opt;
  opt.name = "flat_torus";
  opt.scheme = DerivativeScheme::analytic();
  opt.lattice = {2.0 * M_PI, 2.0 * M_PI};
  opt.primitive_scope = PrimitiveScope::Cover;
  return ChartedSystem(2, std::move(f), std::move(opt));
}

ChartedSystem round_sphere(double b) {
  require(std::isfinite(b), "round_sphere parameter must be finite");
  auto lambda = [](const Vec& x) { return 2.0 / (1.0 + x.squaredNorm()); };

  FieldFunctions f;
  f.metric = [=](const Vec& x) -> Mat {
    const double l = lambda(x);
    return l * l * Mat::Identity(2, 2);
  };
  f.two_form = [=](const Vec& x) {
    const double l = lambda(x);
    return area_matrix(b * l * l);
  };
  f.metric_d1 = [=](const Vec& x) {
    const double l = lambda(x);
    MatList d(2);
    for (int a = 0; a < 2; ++a) d[a] = -2.0 * l * l * l * x[a] * Mat::Identity(2, 2);
    return d;
  };
  f.metric_d2 = [=](const Vec& x) {
    const double l = lambda(x);
    MatList d(4);
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c)
        d[a * 2 + c] = (6.0 * std::pow(l, 4) * x[a] * x[c] - (a == c ? 2.0 * l * l * l : 0.0)) *
                       Mat::Identity(2, 2);
    return d;
  };
  f.two_form_d1 = [=](const Vec& x) {
    const double l = lambda(x);
    MatList d(2);
    for (int a = 0; a < 2; ++a) d[a] = area_matrix(-2.0 * b * l * l * l * x[a]);
    return d;
  };
  if (b == 0.0) f.primitive = [](const Vec&) -> Vec { return Vec::Zero(2); };

  ChartTransition tr;
  tr.in_safe_region = [](const Vec& x) { return x.norm() <= 1.5; };
  tr.switch_chart = [](Vec& x, Vec& v) {
    const double r2 = x.squaredNorm();
    if (r2 == 0.0) fail(ErrorKind::Domain, "chart switch at the chart origin");
    Vec dy = v / r2 - 2.0 * x * x.dot(v) / (r2 * r2);
    Vec y = x / r2;
    y[1] = -y[1];
    dy[1] = -dy[1];
    x = y;
    v = dy;
  };

  SystemOptions opt;
  opt.name = "round_sphere";
  opt.scheme = DerivativeScheme::analytic();
  opt.transition = tr;
  return ChartedSystem(2, std::move(f), std::move(opt));
}

ChartedSystem hyperbolic_chart(double b) {
  require(std::isfinite(b), "hyperbolic_chart parameter must be finite");
  FieldFunctions f;
  f.metric = [](const Vec& x) -> Mat { return Mat::Identity(2, 2) / (x[1] * x[1]); };
  f.two_form = [=](const Vec& x) { return area_matrix(b / (x[1] * x[1])); };
  f.metric_d1 = [](const Vec& x) {
    MatList d = zeros(2);
    d[1] = -2.0 / std::pow(x[1], 3) * Mat::Identity(2, 2);
    return d;
  };
  f.metric_d2 = [](const Vec& x) {
    MatList d = zeros(4);
    d[3] = 6.0 / std::pow(x[1], 4) * Mat::Identity(2, 2);
    return d;
  };
  f.two_form_d1 = [=](const Vec& x) {
    MatList d = zeros(2);
    d[1] = area_matrix(-2.0 * b / std::pow(x[1], 3));
    return d;
  };
  f.primitive = [=](const Vec& x) {
    Vec th(2);
    th << b / x[1], 0.0;
    return th;
  };

  SystemOptions opt;
  opt.name = "hyperbolic_chart";
  opt.scheme = DerivativeScheme::analytic();
  opt.in_domain = [](const Vec& x) { return x[1] > 0.0; };
  opt.primitive_scope = PrimitiveScope::Global;
  return ChartedSystem(2, std::move(f), std::move(opt));
}

bool is_builtin_name(const std::string& name) {
  return name == "flat_torus" || name == "round_sphere" || name == "hyperbolic_chart";
}

ChartedSystem make_builtin(const std::string& name, double b, double modulation) {
  if (name == "flat_torus") return flat_torus(b, modulation);
  require(modulation == 0.0, "modulation is only supported by flat_torus");
  if (name == "round_sphere") return round_sphere(b);
  if (name == "hyperbolic_chart") return hyperbolic_chart(b);
  fail(ErrorKind::InvalidArgument, "unknown builtin system '" + name + "'");
}

}  // namespace magcurv
