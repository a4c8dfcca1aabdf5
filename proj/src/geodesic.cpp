#include "catflow/geodesic.hpp"

#include <cmath>
#include <stdexcept>

namespace catflow {

GeneralizedGeodesic GeneralizedGeodesic::constant(const Space& space, SpacePoint point) {
  GeneralizedGeodesic c;
  c.space_ = &space;
  c.constant_ = true;
  c.c_minus_ = 0.0;
  c.c_plus_ = 0.0;
  c.anchor_time_ = 0.0;
  c.anchor_ = point;
  c.backward_ = Target{point};
  c.forward_ = Target{std::move(point)};
  return c;
}

GeneralizedGeodesic GeneralizedGeodesic::segment(const Space& space, SpacePoint x, SpacePoint y,
                                                 double c_minus) {
  if (space.same_point(x, y)) return constant(space, std::move(x));
  if (!is_finite(c_minus)) throw std::invalid_argument("segment: c_minus must be finite");
  GeneralizedGeodesic c;
  c.space_ = &space;
  c.constant_ = false;
  c.c_minus_ = c_minus;
  c.c_plus_ = c_minus + space.distance(x, y);
  c.anchor_time_ = c_minus;
  c.anchor_ = x;
  c.backward_ = Target{std::move(x)};
  c.forward_ = Target{std::move(y)};
  return c;
}

GeneralizedGeodesic GeneralizedGeodesic::ray(const Space& space, SpacePoint x, BoundaryPoint xi,
                                             double c_minus) {
  if (!is_finite(c_minus)) throw std::invalid_argument("ray: c_minus must be finite");
  GeneralizedGeodesic c;
  c.space_ = &space;
  c.constant_ = false;
  c.c_minus_ = c_minus;
  c.c_plus_ = kPlusInf;
  c.anchor_time_ = c_minus;
  c.anchor_ = x;
  c.backward_ = Target{std::move(x)};
  c.forward_ = Target{std::move(xi)};
  return c;
}

GeneralizedGeodesic GeneralizedGeodesic::line(const Space& space, SpacePoint anchor,
                                              double anchor_time, BoundaryPoint backward,
                                              BoundaryPoint forward) {
  if (!is_finite(anchor_time)) throw std::invalid_argument("line: anchor time must be finite");
  GeneralizedGeodesic c;
  c.space_ = &space;
  c.constant_ = false;
  c.c_minus_ = kMinusInf;
  c.c_plus_ = kPlusInf;
  c.anchor_time_ = anchor_time;
  c.anchor_ = std::move(anchor);
  c.backward_ = Target{std::move(backward)};
  c.forward_ = Target{std::move(forward)};
  return c;
}

GeneralizedGeodesic GeneralizedGeodesic::line(const Space& space, BoundaryPoint backward,
                                              BoundaryPoint forward) {
  SpacePoint anchor = space.line_anchor(backward, forward);
  return line(space, std::move(anchor), 0.0, std::move(backward), std::move(forward));
}

GeneralizedGeodesic GeneralizedGeodesic::connect(const Space& space, const SpacePoint& x,
                                                 const Target& target) {
  if (is_boundary(target)) return ray(space, x, as_boundary(target), 0.0);
  if (space.same_point(x, as_point(target))) return constant(space, x);
  return segment(space, x, as_point(target), 0.0);
}

SpacePoint GeneralizedGeodesic::evaluate(double t) const {
  if (constant_) return anchor_;
  double tc = std::min(std::max(t, c_minus_), c_plus_);
  if (tc >= anchor_time_) {
    if (!is_boundary(forward_) && is_finite(c_plus_) && tc >= c_plus_) {
      return as_point(forward_);
    }
    return space_->ray_point(anchor_, forward_, tc - anchor_time_);
  }
  if (!is_boundary(backward_) && is_finite(c_minus_) && tc <= c_minus_) {
    return as_point(backward_);
  }
  return space_->ray_point(anchor_, backward_, anchor_time_ - tc);
}

GeneralizedGeodesic GeneralizedGeodesic::flowed(double tau) const {
  if (constant_ || tau == 0.0) {
    GeneralizedGeodesic c = *this;
    if (!constant_ || tau == 0.0) {
      c.c_minus_ = c_minus_ - tau;
      c.c_plus_ = c_plus_ - tau;
      c.anchor_time_ = anchor_time_ - tau;
    }
    return c;
  }
  GeneralizedGeodesic c = *this;
  c.c_minus_ = c_minus_ - tau;
  c.c_plus_ = c_plus_ - tau;
  c.anchor_time_ = anchor_time_ - tau;
  return c;
}

GeneralizedGeodesic GeneralizedGeodesic::restricted(double T) const {
  if (T < 0.0) throw std::invalid_argument("restricted: window must be nonnegative");
  if (constant_) return *this;
  if (T == kPlusInf) return *this;
  if (c_minus_ >= T) return constant(*space_, evaluate(T));
  if (c_plus_ <= -T) return constant(*space_, evaluate(-T));
  double lo = std::max(c_minus_, -T);
  double hi = std::min(c_plus_, T);
  if (hi - lo <= 0.0) return constant(*space_, evaluate(lo));
  SpacePoint a = evaluate(lo);
  SpacePoint b = evaluate(hi);
  return segment(*space_, std::move(a), std::move(b), lo);
}

GeneralizedGeodesic GeneralizedGeodesic::pushed_to_finite(double tau) const {
  if (tau < 0.0 || tau > 1.0) {
    throw std::invalid_argument("pushed_to_finite: parameter outside [0,1]");
  }
  if (tau == 0.0) return *this;
  return restricted(-std::log(tau));
}

std::pair<Target, Target> GeneralizedGeodesic::endpoints() const {
  return {backward_, forward_};
}

GeneralizedGeodesic::Embedding GeneralizedGeodesic::embed() const {
  if (constant_) throw std::invalid_argument("embed: constant geodesics are excluded");
  return Embedding{c_minus_, backward_, evaluate(0.0), forward_, c_plus_};
}

GeneralizedGeodesic::FiniteEmbedding GeneralizedGeodesic::embed_finite() const {
  if (constant_ || !is_finite_geodesic()) {
    throw std::invalid_argument("embed_finite: needs a finite non-constant geodesic");
  }
  return FiniteEmbedding{c_minus_, as_point(backward_), as_point(forward_)};
}

GeneralizedGeodesic GeneralizedGeodesic::from_finite_embedding(const Space& space,
                                                               double c_minus,
                                                               const SpacePoint& x,
                                                               const SpacePoint& y) {
  if (space.same_point(x, y)) {
    throw std::invalid_argument("from_finite_embedding: endpoints must differ");
  }
  return segment(space, x, y, c_minus);
}

GeneralizedGeodesic GeneralizedGeodesic::from_parts(const Space& space, bool constant,
                                                    double c_minus, double c_plus,
                                                    double anchor_time, SpacePoint anchor,
                                                    Target backward, Target forward) {
  if (constant) return GeneralizedGeodesic::constant(space, std::move(anchor));
  if (!(c_minus < c_plus) || c_minus == kPlusInf || c_plus == kMinusInf) {
    throw std::invalid_argument("from_parts: invalid support interval");
  }
  if (!is_finite(anchor_time)) throw std::invalid_argument("from_parts: anchor time");
  if (is_finite(c_minus) != !is_boundary(backward) || is_finite(c_plus) != !is_boundary(forward)) {
    throw std::invalid_argument("from_parts: endpoint type mismatch");
  }
  GeneralizedGeodesic c;
  c.space_ = &space;
  c.constant_ = false;
  c.c_minus_ = c_minus;
  c.c_plus_ = c_plus;
  c.anchor_time_ = anchor_time;
  c.anchor_ = std::move(anchor);
  c.backward_ = std::move(backward);
  c.forward_ = std::move(forward);
  return c;
}

bool GeneralizedGeodesic::structurally_equal(const GeneralizedGeodesic& other,
                                             double tol) const {
  if (space_ != other.space_) return false;
  if (constant_ != other.constant_) return false;
  if (constant_) return space_->same_point(anchor_, other.anchor_, tol);
  if (std::abs(c_minus_ - other.c_minus_) > tol &&
      !(c_minus_ == other.c_minus_))  // handles +-inf
    return false;
  if (std::abs(c_plus_ - other.c_plus_) > tol && !(c_plus_ == other.c_plus_)) return false;
  if (!space_->same_target(backward_, other.backward_, tol)) return false;
  if (!space_->same_target(forward_, other.forward_, tol)) return false;
  double t0 = 0.0;
  if (is_finite(c_minus_)) {
    t0 = c_minus_;
  } else if (is_finite(c_plus_)) {
    t0 = c_plus_;
  }
  return space_->same_point(evaluate(t0), other.evaluate(t0), std::max(tol, 1e-9));
}

}  // namespace catflow
