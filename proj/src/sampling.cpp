#include "catflow/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace catflow {

namespace {

const char kLetters[4] = {'a', 'A', 'b', 'B'};

}  // namespace

SpacePoint base_point(const Space& space) {
  switch (space.kind()) {
    case SpaceKind::Euclidean: {
      const auto& es = static_cast<const EuclideanSpace&>(space);
      return EuclideanPoint{std::vector<double>(es.dim(), 0.0)};
    }
    case SpaceKind::Tree:
      return make_tree_point("", 0, 0.0);
    case SpaceKind::Hyperbolic:
      return make_disk_point(0.0);
  }
  throw std::logic_error("base_point: unknown space");
}

double representable_radius(const Space& space) {
  if (space.kind() == SpaceKind::Hyperbolic) {
    // 2*atanh(1 - kDiskGuard), with margin
    return 26.0;
  }
  return std::numeric_limits<double>::infinity();
}

SpacePoint random_point_in_ball(const Space& space, const SpacePoint& center, double radius,
                                Rng& rng) {
  double r = radius * rng.uniform();
  switch (space.kind()) {
    case SpaceKind::Euclidean: {
      const auto& c = std::get<EuclideanPoint>(center).x;
      std::vector<double> dir(c.size());
      double n2 = 0.0;
      for (auto& d : dir) {
        d = rng.normal();
        n2 += d * d;
      }
      double n = std::sqrt(n2);
      if (n == 0.0) return center;
      EuclideanPoint out;
      out.x.resize(c.size());
      for (std::size_t i = 0; i < c.size(); ++i) out.x[i] = c[i] + r * dir[i] / n;
      return out;
    }
    case SpaceKind::Tree: {
      // non-backtracking walk from the nearest vertex
      const auto& p = std::get<TreePoint>(center);
      std::string w = p.base;
      long steps = long(std::ceil(r)) + 2 + long(p.base.size() ? 1 : 0);
      char prev = 0;
      for (long i = 0; i < steps; ++i) {
        char c;
        do {
          c = kLetters[rng.uniform_int(0, 3)];
        } while (prev != 0 && c == letter_inverse(prev));
        if (!w.empty() && w.back() == letter_inverse(c)) {
          prev = letter_inverse(w.back());
          w.pop_back();
        } else {
          w.push_back(c);
          prev = c;
        }
      }
      return space.ray_point(center, Target{SpacePoint{make_tree_point(w, 0, 0.0)}}, r);
    }
    case SpaceKind::Hyperbolic: {
      double theta = rng.uniform(0.0, 2.0 * M_PI);
      return space.ray_point(center, Target{BoundaryPoint{HyperbolicIdeal{theta}}}, r);
    }
  }
  throw std::logic_error("random_point_in_ball: unknown space");
}

BoundaryPoint random_boundary(const Space& space, Rng& rng) {
  switch (space.kind()) {
    case SpaceKind::Euclidean: {
      const auto& es = static_cast<const EuclideanSpace&>(space);
      std::vector<double> u(es.dim());
      double n2 = 0.0;
      do {
        n2 = 0.0;
        for (auto& d : u) {
          d = rng.normal();
          n2 += d * d;
        }
      } while (n2 < 1e-12);
      double n = std::sqrt(n2);
      for (auto& d : u) d /= n;
      return make_direction(std::move(u));
    }
    case SpaceKind::Tree: {
      for (int attempt = 0; attempt < 64; ++attempt) {
        std::string head;
        long hl = rng.uniform_int(0, 3);
        char prev = 0;
        for (long i = 0; i < hl; ++i) {
          char c;
          do {
            c = kLetters[rng.uniform_int(0, 3)];
          } while (prev != 0 && c == letter_inverse(prev));
          head.push_back(c);
          prev = c;
        }
        std::string cycle;
        long cl = rng.uniform_int(1, 3);
        for (long i = 0; i < cl; ++i) {
          char c;
          do {
            c = kLetters[rng.uniform_int(0, 3)];
          } while (prev != 0 && c == letter_inverse(prev));
          cycle.push_back(c);
          prev = c;
        }
        try {
          return make_tree_end(head, cycle);
        } catch (const std::invalid_argument&) {
          continue;  // seam not reduced; re-draw
        }
      }
      return make_tree_end("", "a");
    }
    case SpaceKind::Hyperbolic:
      return HyperbolicIdeal{rng.uniform(0.0, 2.0 * M_PI)};
  }
  throw std::logic_error("random_boundary: unknown space");
}

GeneralizedGeodesic random_geodesic(const Space& space, double scale, Rng& rng) {
  SpacePoint o = base_point(space);
  double pick = rng.uniform();
  SpacePoint x = random_point_in_ball(space, o, scale, rng);
  if (pick < 0.15) {
    return GeneralizedGeodesic::constant(space, x);
  }
  if (pick < 0.50) {
    SpacePoint y = random_point_in_ball(space, o, scale, rng);
    double c_minus = rng.uniform(-scale, scale);
    if (space.same_point(x, y)) return GeneralizedGeodesic::constant(space, x);
    return GeneralizedGeodesic::segment(space, x, y, c_minus);
  }
  if (pick < 0.75) {
    BoundaryPoint xi = random_boundary(space, rng);
    return GeneralizedGeodesic::ray(space, x, xi, rng.uniform(-scale, scale));
  }
  // full line: draw distinct ideal endpoints, anchor on the joining geodesic
  for (int attempt = 0; attempt < 64; ++attempt) {
    BoundaryPoint bw = random_boundary(space, rng);
    BoundaryPoint fw = random_boundary(space, rng);
    if (space.kind() == SpaceKind::Euclidean) {
      // lines exist only between opposite directions; re-anchor off origin
      const auto& u = std::get<EuclideanDirection>(fw).u;
      std::vector<double> nu(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) nu[i] = -u[i];
      bw = EuclideanDirection{nu};
      GeneralizedGeodesic base =
          GeneralizedGeodesic::line(space, x, rng.uniform(-scale, scale), bw, fw);
      return base;
    }
    if (space.same_boundary(bw, fw)) continue;
    try {
      GeneralizedGeodesic base = GeneralizedGeodesic::line(space, bw, fw);
      return base.flowed(rng.uniform(-scale, scale));
    } catch (const std::invalid_argument&) {
      continue;
    }
  }
  return GeneralizedGeodesic::constant(space, x);
}

}  // namespace catflow
