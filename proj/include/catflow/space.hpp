#pragma once

#include <complex>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "catflow/words.hpp"

namespace catflow {

enum class SpaceKind { Euclidean, Tree, Hyperbolic };

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

struct EuclideanPoint {
  std::vector<double> x;
};

// A point of the 4-regular tree of F2 with unit edge lengths.
// edge == 0: the vertex named by `base` (a reduced word, "" = root).
// edge != 0: interior point of the edge from `base` toward `base*edge`,
// at offset t in (0,1). Canonical form keeps base*edge reduced; offsets
// 0 and 1 are normalized back to vertices.
struct TreePoint {
  std::string base;
  char edge = 0;
  double t = 0.0;
};

// Poincare disk point, |z| <= 1 - kDiskGuard enforced on construction.
struct HyperbolicPoint {
  std::complex<double> z;
};

using SpacePoint = std::variant<EuclideanPoint, TreePoint, HyperbolicPoint>;

// ---------------------------------------------------------------------------
// Ideal boundary points
// ---------------------------------------------------------------------------

struct EuclideanDirection {
  std::vector<double> u;  // unit vector
};

// Eventually periodic end of the tree: the infinite reduced word
// head * cycle * cycle * ... ; canonical form has a primitive cycle and a
// head that cannot be shortened by rotating the cycle.
struct TreeEnd {
  std::string head;
  std::string cycle;  // nonempty
};

struct HyperbolicIdeal {
  double theta = 0.0;  // in [0, 2*pi)
};

using BoundaryPoint = std::variant<EuclideanDirection, TreeEnd, HyperbolicIdeal>;

// An element of the bordification: interior point or boundary point.
using Target = std::variant<SpacePoint, BoundaryPoint>;

inline bool is_boundary(const Target& t) { return t.index() == 1; }
inline const SpacePoint& as_point(const Target& t) { return std::get<SpacePoint>(t); }
inline const BoundaryPoint& as_boundary(const Target& t) { return std::get<BoundaryPoint>(t); }

constexpr double kDiskGuard = 1e-12;

TreePoint make_tree_point(std::string base, char edge, double t);
TreeEnd make_tree_end(std::string head, std::string cycle);
HyperbolicPoint make_disk_point(std::complex<double> z);
EuclideanDirection make_direction(std::vector<double> u);

// First `len` letters of the infinite word head*cycle*cycle*...
std::string end_prefix(const TreeEnd& e, std::size_t len);

// ---------------------------------------------------------------------------
// Model spaces
// ---------------------------------------------------------------------------

class Space {
 public:
  virtual ~Space() = default;

  virtual SpaceKind kind() const = 0;
  virtual std::string name() const = 0;

  virtual double distance(const SpacePoint& x, const SpacePoint& y) const = 0;

  // Point z on [x,y] with d(x,z) = t*d(x,y); requires t in [0,1].
  SpacePoint interpolate(const SpacePoint& x, const SpacePoint& y, double t) const;

  // Unit-speed evaluation of the geodesic ray from x toward the target,
  // at arclength s >= 0. For an interior target the ray is constant beyond
  // d(x, target); target == x gives the constant ray.
  virtual SpacePoint ray_point(const SpacePoint& x, const Target& target, double s) const = 0;

  // rho_{r,x0}: identity on the closed r-ball around x0, radial projection
  // outside (and for boundary targets).
  SpacePoint project_ball(const SpacePoint& x0, double r, const Target& x) const;

  virtual bool same_point(const SpacePoint& x, const SpacePoint& y, double tol = 1e-12) const = 0;
  virtual bool same_boundary(const BoundaryPoint& x, const BoundaryPoint& y,
                             double tol = 1e-12) const = 0;

  // A point on the bi-infinite geodesic with the given distinct endpoints
  // at infinity. Throws if no such geodesic exists (e.g. non-opposite
  // Euclidean directions).
  virtual SpacePoint line_anchor(const BoundaryPoint& backward,
                                 const BoundaryPoint& forward) const = 0;

  bool same_target(const Target& s, const Target& t, double tol = 1e-12) const;
};

class EuclideanSpace final : public Space {
 public:
  explicit EuclideanSpace(std::size_t dim) : dim_(dim) {}

  SpaceKind kind() const override { return SpaceKind::Euclidean; }
  std::string name() const override { return "euclidean" + std::to_string(dim_); }
  std::size_t dim() const { return dim_; }

  double distance(const SpacePoint& x, const SpacePoint& y) const override;
  SpacePoint ray_point(const SpacePoint& x, const Target& target, double s) const override;
  bool same_point(const SpacePoint& x, const SpacePoint& y, double tol) const override;
  bool same_boundary(const BoundaryPoint& x, const BoundaryPoint& y, double tol) const override;
  SpacePoint line_anchor(const BoundaryPoint& backward,
                         const BoundaryPoint& forward) const override;

 private:
  std::size_t dim_;
};

class TreeSpace final : public Space {
 public:
  SpaceKind kind() const override { return SpaceKind::Tree; }
  std::string name() const override { return "tree"; }

  double distance(const SpacePoint& x, const SpacePoint& y) const override;
  SpacePoint ray_point(const SpacePoint& x, const Target& target, double s) const override;
  bool same_point(const SpacePoint& x, const SpacePoint& y, double tol) const override;
  bool same_boundary(const BoundaryPoint& x, const BoundaryPoint& y, double tol) const override;
  SpacePoint line_anchor(const BoundaryPoint& backward,
                         const BoundaryPoint& forward) const override;

  // Vertex-crossing phase of a point: distance from the point to the two
  // endpoints of its edge is {t, 1-t}; used to seed quadrature breakpoints.
  static double edge_offset(const SpacePoint& p);
};

class HyperbolicSpace final : public Space {
 public:
  SpaceKind kind() const override { return SpaceKind::Hyperbolic; }
  std::string name() const override { return "hyperbolic"; }

  double distance(const SpacePoint& x, const SpacePoint& y) const override;
  SpacePoint ray_point(const SpacePoint& x, const Target& target, double s) const override;
  bool same_point(const SpacePoint& x, const SpacePoint& y, double tol) const override;
  bool same_boundary(const BoundaryPoint& x, const BoundaryPoint& y, double tol) const override;
  SpacePoint line_anchor(const BoundaryPoint& backward,
                         const BoundaryPoint& forward) const override;
};

// Shared singleton-style instances.
const EuclideanSpace& euclidean_space(std::size_t dim);
const TreeSpace& tree_space();
const HyperbolicSpace& hyperbolic_space();
const Space& space_by_name(const std::string& name);

// Max over a grid of the CAT(0) comparison inequality
// d_X(p,q) - d_R2(pbar,qbar) for p,q sampled on the sides [x,y] and [x,z];
// <= 0 (up to tolerance) certifies the inequality on the sample.
double cat0_sample_check(const Space& space, const SpacePoint& x, const SpacePoint& y,
                         const SpacePoint& z, int grid);

}  // namespace catflow
