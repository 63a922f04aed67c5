#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "common/error.hpp"
#include "common/types.hpp"

namespace magcurv {

// Field callbacks describing a magnetic system (g, sigma) on one coordinate
// chart. All callbacks must be deterministic.
struct FieldFunctions {
  std::function<Mat(const Vec&)> metric;    // g_ij(x), symmetric positive definite
  std::function<Mat(const Vec&)> two_form;  // sigma_ij(x), antisymmetric

  // Optional primitive covector theta_i(x) with d(theta) = sigma.
  std::function<Vec(const Vec&)> primitive;

  // Analytic derivatives, required when the derivative scheme is analytic.
  std::function<MatList(const Vec&)> metric_d1;    // [i] = d_i g
  std::function<MatList(const Vec&)> metric_d2;    // [i*n + j] = d_i d_j g
  std::function<MatList(const Vec&)> two_form_d1;  // [i] = d_i sigma
};

struct DerivativeScheme {
  enum class Kind { Analytic, FiniteDifference };

  Kind kind = Kind::FiniteDifference;
  double step = 1e-5;  // central-difference step, scaled by max(1, |x_i|)

  static DerivativeScheme analytic() { return {Kind::Analytic, 0.0}; }
  static DerivativeScheme finite_difference(double h = 1e-5) {
    return {Kind::FiniteDifference, h};
  }
};

// Where the primitive is valid: Global means a single-valued 1-form on the
// (periodically identified) chart, Cover means it lives on the unwrapped
// universal-cover chart only, so line integrals need a closed lift.
enum class PrimitiveScope { None, Global, Cover };

// Two-chart atlases: both charts share the same field functions; the
// transition is applied whenever the state leaves the safe region.
struct ChartTransition {
  std::function<bool(const Vec&)> in_safe_region;
  std::function<void(Vec& x, Vec& v)> switch_chart;  // maps (x, v) into the other chart
};

struct SystemOptions {
  std::string name = "custom";
  DerivativeScheme scheme;
  std::vector<double> lattice;  // per-coordinate period; 0 means non-periodic
  PrimitiveScope primitive_scope = PrimitiveScope::None;
  std::function<bool(const Vec&)> in_domain;  // optional chart domain predicate
  std::optional<ChartTransition> transition;
  bool oriented = true;
};

// Immutable magnetic system on a chart. Copies share state and are safe to
// use from several threads.
class ChartedSystem {
 public:
  ChartedSystem(int dimension, FieldFunctions fields, SystemOptions options = {});

  int dimension() const { return state_->dimension; }
  const std::string& name() const { return state_->options.name; }
  const DerivativeScheme& scheme() const { return state_->options.scheme; }
  const std::vector<double>& lattice() const { return state_->options.lattice; }
  bool periodic(int i) const;
  bool has_lattice() const;
  bool oriented() const { return state_->options.oriented; }
  PrimitiveScope primitive_scope() const { return state_->options.primitive_scope; }
  bool has_primitive() const { return static_cast<bool>(state_->fields.primitive); }
  const std::optional<ChartTransition>& transition() const { return state_->options.transition; }
  bool in_domain(const Vec& x) const;

  // Validated field evaluations. metric() rejects non-symmetric or
  // non-positive-definite values with ErrorKind::Degenerate.
  Mat metric(const Vec& x) const;
  Mat two_form(const Vec& x) const;
  Vec primitive(const Vec& x) const;

  // Derivatives through the configured scheme.
  MatList metric_d1(const Vec& x) const;
  MatList metric_d2(const Vec& x) const;
  MatList two_form_d1(const Vec& x) const;

  // Reduces each periodic coordinate into [0, L_i).
  Vec wrap(const Vec& x) const;
  // Minimal-image difference a - b on periodic coordinates.
  Vec lattice_difference(const Vec& a, const Vec& b) const;

  const FieldFunctions& fields() const { return state_->fields; }

 private:
  struct State {
    int dimension;
    FieldFunctions fields;
    SystemOptions options;
  };

  void check_point(const Vec& x) const;
  Vec fd_steps(const Vec& x, double base) const;

  std::shared_ptr<const State> state_;
};

}  // namespace magcurv
