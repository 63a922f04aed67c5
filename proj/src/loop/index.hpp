#pragma once

#include <string>

#include <json.hpp>

#include "loop/loop.hpp"

namespace magcurv {

// Frame fields multiplied by the Fourier modes. Coordinate uses the constant
// coordinate vectors; VelocityAdapted uses (u, J u), u = xdot/|xdot|, on
// surfaces.
enum class IndexFrame { Coordinate, VelocityAdapted };

struct IndexOptions {
  IndexFrame frame = IndexFrame::Coordinate;
  double relative_threshold = 1e-7;  // eps = relative_threshold * max |eigenvalue|
  bool keep_matrices = false;
};

struct IndexReport {
  int mode_count = 0;
  int dimension = 0;  // n (2m + 1) + 1
  int nodes = 0;
  std::string frame;
  Vec eigenvalues;  // ascending, generalized problem Q x = lambda G x
  int negative = 0;
  int near_zero = 0;
  int positive = 0;
  double epsilon = 0.0;
  Mat hessian;  // filled when keep_matrices
  Mat gram;

  int index() const { return negative; }
};

// Morse index of a critical loop from the Hessian restricted to the span of
// {1, cos 2 pi j s, sin 2 pi j s : j <= m} x frame plus the period direction,
// counted in the H^1 metric int <V,W> + <DV/ds, DW/ds> ds + tau sigma.
IndexReport morse_index(const ChartedSystem& sys, const DiscreteLoop& loop, double k, int m,
                        const IndexOptions& opt = {});

nlohmann::json index_json(const IndexReport& r);
std::string spectrum_csv(const IndexReport& r);

}  // namespace magcurv
