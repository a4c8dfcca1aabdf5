#include "catflow/periodic.hpp"

namespace catflow {

double g_period(const GeneralizedGeodesic& c, const GroupAction& action, double tau_max,
                int word_len, double tol) {
  if (c.is_constant()) return 0.0;
  const Space& X = action.space();
  FlowMetricConfig cfg{std::min(tol / 10.0, 1e-7), 400'000, true};
  double best = std::numeric_limits<double>::infinity();
  SpacePoint p0 = c.evaluate(0.0);
  for (const auto& g : action.enumerate(word_len)) {
    if (is_identity(g.iso)) continue;
    double d = X.distance(p0, apply_point(g.iso, p0));
    if (d <= tol || d > tau_max + tol) continue;
    auto gc = apply_fs(g.iso, c);
    for (double tau : {d, -d}) {
      if (tau <= 0.0 || tau > tau_max) continue;
      if (tau >= best) continue;
      if (dist_fs(c.flowed(tau), gc, cfg).upper <= tol) best = tau;
    }
  }
  return best;
}

}  // namespace catflow
