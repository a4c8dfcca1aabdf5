#pragma once

#include <cstdint>
#include <random>

#include "catflow/geodesic.hpp"

namespace catflow {

// Deterministic, platform-independent randomness: mt19937_64 with manual
// conversion to doubles (std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  double uniform() {  // [0, 1)
    return double(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // inclusive bounds
  long uniform_int(long a, long b) {
    return a + long(eng_() % std::uint64_t(b - a + 1));
  }

  double normal() {
    double u1 = uniform(), u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 eng_;
};

// Canonical base point: origin / root / disk center.
SpacePoint base_point(const Space& space);

// Hyperbolic-disk coordinates degenerate near the boundary; distances from
// the center stay trustworthy only inside this radius.
double representable_radius(const Space& space);

// Uniformly-seeded point with d(center, result) <= radius.
SpacePoint random_point_in_ball(const Space& space, const SpacePoint& center, double radius,
                                Rng& rng);

BoundaryPoint random_boundary(const Space& space, Rng& rng);

// Mix of constants, segments, rays and lines around the base point at the
// given scale.
GeneralizedGeodesic random_geodesic(const Space& space, double scale, Rng& rng);

}  // namespace catflow
