#pragma once

#include "catflow/geodesic.hpp"

namespace catflow {

// A rigorously bracketed nonnegative quantity.
struct CertifiedLength {
  double lower = 0.0;
  double upper = 0.0;
  bool converged = true;  // false: refinement hit the subdivision cap

  double mid() const { return 0.5 * (lower + upper); }
  double width() const { return upper - lower; }
};

struct FlowMetricConfig {
  double tolerance = 1e-9;
  long max_intervals = 1'000'000;
  bool use_closed_forms = true;  // shortcut exact cases (e.g. two constants)
};

// d_FS(c,d) = integral over R of d_X(c(t), d(t)) / (2 e^|t|) dt, bracketed to
// within cfg.tolerance. The integrand numerator is convex between the
// breakpoints {c_-, c_+, d_-, d_+}, which yields certified chord/secant
// bounds per piece; the tails are bounded via d_X(c(t),d(t)) <= D0 + 2|t|.
CertifiedLength dist_fs(const GeneralizedGeodesic& c, const GeneralizedGeodesic& d,
                        const FlowMetricConfig& cfg = {});

}  // namespace catflow
