#pragma once

#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace catflow {

// Z(U) = { z : d(z, U) < d(z, A - U) } for a subset U of an invariant
// subspace A, with Z(A) = everything and Z(empty) = nothing. Distances come
// in through evaluators; an empty set has distance +infinity.
template <class P>
class SetExtension {
 public:
  using DistFn = std::function<double(const P&)>;

  SetExtension(DistFn dist_to_set, DistFn dist_to_complement)
      : du_(std::move(dist_to_set)), dc_(std::move(dist_to_complement)) {}

  // positive inside Z(U), negative outside
  double margin(const P& z) const { return dc_(z) - du_(z); }
  bool contains(const P& z) const {
    double du = du_(z), dc = dc_(z);
    return du < dc;
  }

 private:
  DistFn du_, dc_;
};

// Finite-net presentation: U and A - U as point lists with a metric.
template <class P, class Metric>
SetExtension<P> extend_open(std::vector<P> u_net, std::vector<P> complement_net, Metric d) {
  auto dist_to = [d](std::vector<P> net) {
    return [net = std::move(net), d](const P& z) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : net) best = std::min(best, d(z, p));
      return best;
    };
  };
  return SetExtension<P>(dist_to(std::move(u_net)), dist_to(std::move(complement_net)));
}

}  // namespace catflow
