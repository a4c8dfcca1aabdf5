#pragma once

#include "catflow/homotopy_action.hpp"

namespace catflow {

// Constants realizing the flow estimate for geodesics toward a common point:
//   r' from the tail condition (2 + r0) e^{-r0} <= delta/3,
//   delta' <= delta/3 for the middle window,
//   r'' from 2 beta (L + 2 r' + beta) / r'' <= delta',
//   r = 2 r' + r'' + beta, T = r' + r''.
// `window` widens r' so that the certified bounds survive flow shifts up to
// that amount (used by the chain verifier); the tail condition is enforced
// at r' - window.
struct FlowEstimateConstants {
  double beta = 0, L = 0, delta = 0, window = 0;
  double r_prime = 0, delta_prime = 0, r_dprime = 0;
  double T = 0, r = 0;
};

FlowEstimateConstants select_constants_g(double beta, double L, double delta,
                                         double window = 0.0);

// Re-evaluates the three defining conditions; throws on violation.
void validate_constants_g(const FlowEstimateConstants& c);

// Constants for the estimate along the homotopy action: beta/2 bounds the
// displacement of the base point by S, L = beta, and the per-step budget
// delta0 feeds the geodesic estimate; R is the ball radius of the action.
struct HomotopyConstants {
  double beta = 0, L = 0, delta = 0, delta0 = 0, window = 0;
  FlowEstimateConstants g;
  double T = 0, R = 0;
};

HomotopyConstants select_constants_H(const GroupAction& action, double delta,
                                     double window = 0.0);

struct EstimateReport {
  std::string name;
  long samples = 0;
  double bound = 0.0;          // the threshold the deviations are tested against
  double max_deviation = 0.0;  // worst observed left-hand side
  double worst_tau = 0.0;
  std::string worst_witness;
  bool pass = false;
};

// d_FS(Phi_T c_{x1, rho_r(x)}, Phi_{T+tau} c_{x2, rho_r(x)}) <= delta over
// samples with d(x1,x2) <= beta, d(x,x1) <= r + L, tau = d(x2,x) - d(x1,x).
EstimateReport verify_estimate_g(const Space& space, const FlowEstimateConstants& c,
                                 long samples, Rng& rng,
                                 const FlowMetricConfig& cfg = {1e-7, 400'000, true});

// Sampled mid-window bound of the triangle comparison:
// d_X(c_{x1,x}(t), c_{x2,x}(t+tau)) <= 2 beta (L + 2r' + beta)/r'' for
// t in [T - r', T + r'].
EstimateReport verify_triangle_window(const Space& space, double beta, double L,
                                      double r_prime, double r_dprime, long samples, Rng& rng);

// d_FS(Phi_T iota(a,x), Phi_{T+tau} iota(a s^-1, f(x))) <= delta for f in F_s,
// with tau = tau1 + tau2 composed as in the proof of the estimate.
EstimateReport verify_estimate_H(const GroupAction& action, const HomotopyConstants& c,
                                 long samples, Rng& rng,
                                 const FlowMetricConfig& cfg = {1e-7, 400'000, true});

// Chain estimate: for sampled (h,y) in S^n(g,x) the composed shift sigma_n
// satisfies d_FS(Phi_T iota(g,x), Phi_{T+sigma_n} iota(h,y)) <= 2 n eps and
// |sigma_n| <= 2 n beta.
EstimateReport verify_chain(const GroupAction& action, const HomotopyConstants& c, int n,
                            double eps, long samples, Rng& rng,
                            const FlowMetricConfig& cfg = {1e-7, 400'000, true});

// The tau composed for one estimate-H instance (used by the chain verifier).
double compose_tau(const HomotopySAction& h, std::size_t s_index,
                   const HomotopySAction::FMap& f, const SpacePoint& x);

std::string describe_point(const Space& space, const SpacePoint& p);

}  // namespace catflow
