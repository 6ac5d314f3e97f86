#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "veinfer/errors.hpp"

namespace veinfer {

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights (QUADPACK dqk15 values).
inline constexpr double gk_nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double gk_weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
// Gauss weights belong to the odd-indexed nodes plus the midpoint.
inline constexpr double g_weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <class F>
std::pair<double, double> gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double kronrod = 0.0, gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = h * gk_nodes[i];
    const double fsum = (i == 7) ? f(c) : f(c - dx) + f(c + dx);
    kronrod += gk_weights[i] * fsum;
    // odd indices are the embedded Gauss-7 nodes (incl. the midpoint at i=7)
    if (i % 2 == 1) gauss += g_weights[i / 2] * fsum;
  }
  return {h * kronrod, h * std::fabs(kronrod - gauss)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod integration: repeatedly bisect the segment
// with the largest error estimate until the summed estimate meets
// max(abs_tol, rel_tol * |integral|).
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10,
                 double abs_tol = 0.0, int max_segments = 2000) {
  struct Segment {
    double a, b, value, error;
  };
  auto eval = [&](double lo, double hi) {
    auto [v, e] = detail::gk15(f, lo, hi);
    return Segment{lo, hi, v, e};
  };
  std::vector<Segment> segs{eval(a, b)};
  for (;;) {
    double total = 0.0, err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      total += segs[i].value;
      err += segs[i].error;
      if (segs[i].error > segs[worst].error) worst = i;
    }
    if (err <= std::max(abs_tol, rel_tol * std::fabs(total))) return total;
    if (static_cast<int>(segs.size()) >= max_segments)
      throw numerical_error("integrate: tolerance not reached within segment budget");
    const Segment s = segs[worst];
    const double mid = 0.5 * (s.a + s.b);
    segs[worst] = eval(s.a, mid);
    segs.push_back(eval(mid, s.b));
  }
}

}  // namespace veinfer
