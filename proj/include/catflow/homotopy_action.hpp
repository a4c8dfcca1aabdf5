#pragma once

#include "catflow/flow_metric.hpp"
#include "catflow/group_action.hpp"
#include "catflow/sampling.hpp"

namespace catflow {

// The homotopy S-action on the closed R-ball around the base point:
//   phi_g(x)      = rho_{R,x0}(g x)
//   H_{g,h}(x,t)  = rho_{R,x0} of the point t of the way from
//                   g . rho_{R,x0}(h x) to g h x.
class HomotopySAction {
 public:
  HomotopySAction(const GroupAction& action, double R);

  const GroupAction& action() const { return *action_; }
  const Space& space() const { return action_->space(); }
  const SpacePoint& center() const { return x0_; }
  double radius() const { return R_; }

  bool in_ball(const SpacePoint& x, double slack = 1e-9) const;

  SpacePoint phi(std::size_t gen_index, const SpacePoint& x) const;
  SpacePoint homotopy(std::size_t g_index, std::size_t h_index, const SpacePoint& x,
                      double t) const;

  // A member of F_s: x |-> H_{r,s'}(x, t) for a factorization r s' = s.
  struct FMap {
    std::size_t r_index;
    std::size_t sp_index;
    double t;
  };
  SpacePoint apply_f(const FMap& f, const SpacePoint& x) const;

  // All members of F_s over the factorizations of gens[s_index] and the grid.
  std::vector<FMap> f_set(std::size_t s_index, const std::vector<double>& t_grid) const;

  static const std::vector<double>& default_t_grid();

 private:
  const GroupAction* action_;
  SpacePoint x0_;
  double R_;
};

// iota(g, x) = c_{g x0, g x}
GeneralizedGeodesic iota(const GroupAction& action, const Isometry& g, const SpacePoint& x);

// One link of a chain: f(x_prev) = ftilde(x_next) with f in F_a, ftilde in F_b.
struct ChainLink {
  std::size_t a_index, b_index;
  HomotopySAction::FMap f, ftilde;
  SpacePoint x_prev, x_next;
  SpacePoint matched;  // the common image
};

struct ChainWitness {
  GroupElement h;  // g a1^-1 b1 ... an^-1 bn
  SpacePoint y;    // x_n
  std::vector<ChainLink> links;
};

// Sampled subset of S^n(g, x): the stationary chain plus randomized chains
// whose matching equations could be solved exactly (failed attempts are
// skipped, so this is a lower approximation).
std::vector<ChainWitness> sample_chains(const HomotopySAction& h, const GroupElement& g,
                                        const SpacePoint& x, int n, int budget, Rng& rng);

}  // namespace catflow
