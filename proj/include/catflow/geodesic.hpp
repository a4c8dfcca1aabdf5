#pragma once

#include <limits>

#include "catflow/space.hpp"

namespace catflow {

// Extended real line; +-infinity follow the usual conventions
// (inf - tau = inf, -inf - tau = -inf).
using ExtendedReal = double;
inline constexpr ExtendedReal kPlusInf = std::numeric_limits<double>::infinity();
inline constexpr ExtendedReal kMinusInf = -std::numeric_limits<double>::infinity();
inline bool is_finite(ExtendedReal r) { return std::isfinite(r); }

// A generalized geodesic c : R -> X, unit-speed isometric on (c_-, c_+),
// locally constant outside. Stored as the endpoint data together with one
// anchored interior sample, so structural equality and the embedding
// coordinates come for free.
class GeneralizedGeodesic {
 public:
  static GeneralizedGeodesic constant(const Space& space, SpacePoint point);

  // Segment from x to y (distinct) starting at time c_minus.
  static GeneralizedGeodesic segment(const Space& space, SpacePoint x, SpacePoint y,
                                     double c_minus);

  // Ray from x toward a boundary point, c_- = c_minus.
  static GeneralizedGeodesic ray(const Space& space, SpacePoint x, BoundaryPoint xi,
                                 double c_minus = 0.0);

  // Full line through anchor = c(anchor_time) with the given ideal endpoints.
  // The anchor must lie on the geodesic joining them.
  static GeneralizedGeodesic line(const Space& space, SpacePoint anchor, double anchor_time,
                                  BoundaryPoint backward, BoundaryPoint forward);

  // Full line with the given ideal endpoints, anchored at a canonical point
  // of the joining geodesic at time 0.
  static GeneralizedGeodesic line(const Space& space, BoundaryPoint backward,
                                  BoundaryPoint forward);

  // c_{x,target}: c_- = 0, c(-inf) = x, c(inf) = target. connect(x, x) is
  // the constant geodesic at x.
  static GeneralizedGeodesic connect(const Space& space, const SpacePoint& x,
                                     const Target& target);

  const Space& space() const { return *space_; }
  bool is_constant() const { return constant_; }
  double lower() const { return c_minus_; }
  double upper() const { return c_plus_; }
  bool is_finite_geodesic() const {
    return constant_ || (is_finite(c_minus_) && is_finite(c_plus_));
  }

  SpacePoint evaluate(double t) const;

  // Phi_tau: t |-> c(t + tau).
  GeneralizedGeodesic flowed(double tau) const;

  // c restricted to [-T, T], constant outside; T = +inf returns c itself.
  GeneralizedGeodesic restricted(double T) const;

  // H_tau(c) = c|[ln tau, -ln tau]; tau in [0,1], H_0 = id, tau > 0 lands in
  // the finite part.
  GeneralizedGeodesic pushed_to_finite(double tau) const;

  // (c(-inf), c(+inf)) in the bordification.
  std::pair<Target, Target> endpoints() const;

  struct Embedding {
    ExtendedReal c_minus;
    Target backward;
    SpacePoint at_zero;
    Target forward;
    ExtendedReal c_plus;
  };
  // (c_-, c(-inf), c(0), c(inf), c_+); rejects constant geodesics.
  Embedding embed() const;

  struct FiniteEmbedding {
    double c_minus;
    SpacePoint backward;
    SpacePoint forward;
  };
  // (c_-, c(-inf), c(inf)) for finite non-constant geodesics.
  FiniteEmbedding embed_finite() const;
  static GeneralizedGeodesic from_finite_embedding(const Space& space, double c_minus,
                                                   const SpacePoint& x, const SpacePoint& y);

  // Constant geodesics compare equal iff their points coincide within 1e-12;
  // otherwise compares the stored coordinates.
  bool structurally_equal(const GeneralizedGeodesic& other, double tol = 1e-12) const;

  // Raw constructor for isometric images and deserialization.
  static GeneralizedGeodesic from_parts(const Space& space, bool constant, double c_minus,
                                        double c_plus, double anchor_time, SpacePoint anchor,
                                        Target backward, Target forward);

  const SpacePoint& anchor_point() const { return anchor_; }
  double anchor_time() const { return anchor_time_; }
  const Target& backward_target() const { return backward_; }
  const Target& forward_target() const { return forward_; }

  // An empty value; using it before assignment is undefined. Needed so that
  // aggregates can hold geodesics filled in later.
  GeneralizedGeodesic() = default;

 private:
  const Space* space_ = nullptr;
  bool constant_ = false;
  double c_minus_ = kMinusInf;
  double c_plus_ = kPlusInf;
  double anchor_time_ = 0.0;  // finite, in the closure of (c_-, c_+)
  SpacePoint anchor_;         // c(anchor_time)
  Target backward_;           // c(-inf)
  Target forward_;            // c(+inf)
};

}  // namespace catflow
