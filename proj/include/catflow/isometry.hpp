#pragma once

#include <string>
#include <variant>
#include <vector>

#include "catflow/geodesic.hpp"

namespace catflow {

// x |-> Q x + v with Q orthogonal (row-major n x n).
struct EuclideanIsometry {
  std::vector<double> Q;
  std::vector<double> v;
  std::size_t n = 0;
};

// Left multiplication by a reduced word of F2.
struct TreeIsometry {
  std::string word;
};

// Real 2x2 matrix of determinant 1, acting on the upper half plane and
// conjugated to the disk by the Cayley transform.
struct MobiusIsometry {
  double a = 1, b = 0, c = 0, d = 1;
};

using Isometry = std::variant<EuclideanIsometry, TreeIsometry, MobiusIsometry>;

Isometry identity_isometry(const Space& space);
Isometry euclidean_translation(std::vector<double> v);
Isometry euclidean_linear(std::vector<double> Q, std::vector<double> v);
Isometry tree_isometry(const std::string& word);
Isometry mobius_isometry(double a, double b, double c, double d);

bool is_identity(const Isometry& g, double tol = 1e-9);
bool isometry_equal(const Isometry& g, const Isometry& h, double tol = 1e-9);
Isometry compose(const Isometry& g, const Isometry& h);  // g after h
Isometry inverse_of(const Isometry& g);

// Stable dedup key (rounded entries; Mobius normalized up to sign).
std::string isometry_key(const Isometry& g);

SpacePoint apply_point(const Isometry& g, const SpacePoint& x);
BoundaryPoint apply_boundary(const Isometry& g, const BoundaryPoint& xi);
Target apply_target(const Isometry& g, const Target& t);

// Induced isometry of FS(X); commutes with the flow.
GeneralizedGeodesic apply_fs(const Isometry& g, const GeneralizedGeodesic& c);

// d(gx, x)
double displacement(const Space& space, const Isometry& g, const SpacePoint& x);

}  // namespace catflow
