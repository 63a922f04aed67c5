#include "geom/system.hpp"

#include <cmath>
#include <sstream>

namespace magcurv {
namespace {

std::string format_point(const Vec& x) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

// Second-derivative steps are larger than first-derivative ones: the
// truncation/roundoff balance of a second difference sits near eps^(1/4).
constexpr double kSecondStepFactor = 10.0;

}  // namespace

ChartedSystem::ChartedSystem(int dimension, FieldFunctions fields, SystemOptions options) {
  require(dimension >= 2, "dimension must be at least 2");
  require(static_cast<bool>(fields.metric), "metric callback missing");
  require(static_cast<bool>(fields.two_form), "two_form callback missing");
  if (options.scheme.kind == DerivativeScheme::Kind::Analytic) {
    require(fields.metric_d1 && fields.metric_d2 && fields.two_form_d1,
            "analytic derivative scheme requires metric_d1, metric_d2 and two_form_d1");
  } else {
    require(options.scheme.step > 0.0 && std::isfinite(options.scheme.step),
            "finite-difference step must be positive");
  }
  if (!options.lattice.empty()) {
    require(static_cast<int>(options.lattice.size()) == dimension,
            "lattice must list one period per coordinate");
    for (double L : options.lattice) require(L >= 0.0 && std::isfinite(L), "lattice periods must be >= 0");
  }
  if (fields.primitive && options.primitive_scope == PrimitiveScope::None)
    options.primitive_scope = PrimitiveScope::Global;
  if (!fields.primitive) options.primitive_scope = PrimitiveScope::None;
  state_ = std::make_shared<const State>(State{dimension, std::move(fields), std::move(options)});
}

bool ChartedSystem::periodic(int i) const {
  const auto& L = state_->options.lattice;
  return !L.empty() && L[static_cast<std::size_t>(i)] > 0.0;
}

bool ChartedSystem::has_lattice() const {
  for (int i = 0; i < dimension(); ++i)
    if (periodic(i)) return true;
  return false;
}

bool ChartedSystem::in_domain(const Vec& x) const {
  if (!x.allFinite()) return false;
  return !state_->options.in_domain || state_->options.in_domain(x);
}

void ChartedSystem::check_point(const Vec& x) const {
  if (x.size() != dimension()) fail(ErrorKind::InvalidArgument, "coordinate vector has wrong dimension");
  if (!in_domain(x)) fail(ErrorKind::Domain, "left chart domain at x = " + format_point(x));
}

Mat ChartedSystem::metric(const Vec& x) const {
  check_point(x);
  Mat g = state_->fields.metric(x);
  const int n = dimension();
  if (g.rows() != n || g.cols() != n) fail(ErrorKind::InvalidArgument, "metric callback returned wrong shape");
  if (!g.allFinite()) fail(ErrorKind::Degenerate, "degenerate metric at x = " + format_point(x));
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    fail(ErrorKind::Degenerate, "degenerate metric at x = " + format_point(x) + " (not symmetric)");
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success || llt.matrixL().toDenseMatrix().diagonal().minCoeff() <= 0.0)
    fail(ErrorKind::Degenerate, "degenerate metric at x = " + format_point(x));
  return g;
}

Mat ChartedSystem::two_form(const Vec& x) const {
  check_point(x);
  Mat s = state_->fields.two_form(x);
  const int n = dimension();
  if (s.rows() != n || s.cols() != n) fail(ErrorKind::InvalidArgument, "two_form callback returned wrong shape");
  if (!s.allFinite()) fail(ErrorKind::Domain, "two_form not finite at x = " + format_point(x));
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s + s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    fail(ErrorKind::InvalidArgument, "two_form not antisymmetric at x = " + format_point(x));
  return s;
}

Vec ChartedSystem::primitive(const Vec& x) const {
  if (!has_primitive()) fail(ErrorKind::InvalidArgument, "system has no primitive");
  check_point(x);
  Vec th = state_->fields.primitive(x);
  if (th.size() != dimension()) fail(ErrorKind::InvalidArgument, "primitive callback returned wrong shape");
  return th;
}

Vec ChartedSystem::fd_steps(const Vec& x, double base) const {
  Vec h(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    h[i] = base * std::max(1.0, std::abs(x[i]));
    const double up = x[i] + h[i];
    if (!(h[i] > 0.0) || up == x[i] || (up - x[i]) < 0.5 * h[i])
      fail(ErrorKind::InvalidArgument, "derivative step too small");
    h[i] = up - x[i];  // exactly representable step
  }
  return h;
}

MatList ChartedSystem::metric_d1(const Vec& x) const {
  check_point(x);
  if (scheme().kind == DerivativeScheme::Kind::Analytic) return state_->fields.metric_d1(x);
  const Vec h = fd_steps(x, scheme().step);
  MatList out(static_cast<std::size_t>(dimension()));
  for (int i = 0; i < dimension(); ++i) {
    Vec xp = x, xm = x;
    xp[i] += h[i];
    xm[i] -= h[i];
    out[static_cast<std::size_t>(i)] = (metric(xp) - metric(xm)) / (2.0 * h[i]);
  }
  return out;
}

MatList ChartedSystem::metric_d2(const Vec& x) const {
  check_point(x);
  const int n = dimension();
  if (scheme().kind == DerivativeScheme::Kind::Analytic) return state_->fields.metric_d2(x);
  const Vec h = fd_steps(x, kSecondStepFactor * scheme().step);
  MatList out(static_cast<std::size_t>(n * n));
  const Mat g0 = metric(x);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Mat d;
      if (i == j) {
        Vec xp = x, xm = x;
        xp[i] += h[i];
        xm[i] -= h[i];
        d = (metric(xp) - 2.0 * g0 + metric(xm)) / (h[i] * h[i]);
      } else {
        Vec xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[i] += h[i]; xpp[j] += h[j];
        xpm[i] += h[i]; xpm[j] -= h[j];
        xmp[i] -= h[i]; xmp[j] += h[j];
        xmm[i] -= h[i]; xmm[j] -= h[j];
        d = (metric(xpp) - metric(xpm) - metric(xmp) + metric(xmm)) / (4.0 * h[i] * h[j]);
      }
      out[static_cast<std::size_t>(i * n + j)] = d;
      out[static_cast<std::size_t>(j * n + i)] = d;
    }
  }
  return out;
}

MatList ChartedSystem::two_form_d1(const Vec& x) const {
  check_point(x);
  if (scheme().kind == DerivativeScheme::Kind::Analytic) return state_->fields.two_form_d1(x);
  const Vec h = fd_steps(x, scheme().step);
  MatList out(static_cast<std::size_t>(dimension()));
  for (int i = 0; i < dimension(); ++i) {
    Vec xp = x, xm = x;
    xp[i] += h[i];
    xm[i] -= h[i];
    out[static_cast<std::size_t>(i)] = (two_form(xp) - two_form(xm)) / (2.0 * h[i]);
  }
  return out;
}

Vec ChartedSystem::wrap(const Vec& x) const {
  Vec y = x;
  for (int i = 0; i < dimension(); ++i) {
    if (!periodic(i)) continue;
    const double L = lattice()[static_cast<std::size_t>(i)];
    y[i] = x[i] - L * std::floor(x[i] / L);
    if (y[i] >= L) y[i] -= L;
  }
  return y;
}

Vec ChartedSystem::lattice_difference(const Vec& a, const Vec& b) const {
  Vec d = a - b;
  for (int i = 0; i < dimension(); ++i) {
    if (!periodic(i)) continue;
    const double L = lattice()[static_cast<std::size_t>(i)];
    d[i] -= L * std::round(d[i] / L);
  }
  return d;
}

}  // namespace magcurv
