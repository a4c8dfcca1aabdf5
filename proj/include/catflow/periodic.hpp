#pragma once

#include <functional>
#include <optional>

#include "catflow/axes.hpp"
#include "catflow/flow_metric.hpp"
#include "catflow/sampling.hpp"

namespace catflow {

// Smallest tau in (0, tau_max] with Phi_tau(c) = g c over the elements of
// word length <= word_len; infinity if none is found; 0 for constants.
double g_period(const GeneralizedGeodesic& c, const GroupAction& action, double tau_max,
                int word_len, double tol = 1e-6);

// An orbit representative of a parallelism class of hyperbolic elements with
// translation length <= gamma (classes are oriented: a family and its
// reversal are distinct but cross-referenced).
struct AxisClass {
  GroupElement representative;
  double length = 0.0;             // minimal translation length in the class
  std::string descriptor;          // human-readable parallelism datum
  GeneralizedGeodesic reference;   // an axis realizing the datum
  std::vector<GroupElement> stabilizer_gens;  // generators of G_a
  int reversal = -1;               // index of the reversed class in the list

  // Euclidean families: the oriented unit direction and the primitive
  // integer vector; empty otherwise.
  std::vector<double> direction;
  std::vector<long> primitive;
};

std::vector<AxisClass> enumerate_axis_classes(double gamma, const GroupAction& action);

// FS_a as a product Y_a x R. For Euclidean translation families Y_a is the
// orthogonal complement of the direction; for the other example actions the
// family is a single flow line and Y_a is a point.
class FlowLineBundle {
 public:
  FlowLineBundle(const GroupAction& action, const AxisClass& cls);

  bool euclidean_family() const { return euclidean_; }
  const AxisClass& axis_class() const { return *cls_; }

  // transversal coordinates of the line through c(0) (empty for a point)
  std::vector<double> q(const GeneralizedGeodesic& c) const;
  double tau(const GeneralizedGeodesic& c) const;
  SpacePoint p(const GeneralizedGeodesic& c) const { return c.evaluate(0.0); }
  double d_y(const std::vector<double>& a, const std::vector<double>& b) const;

  // the member with the given coordinates
  GeneralizedGeodesic line_at(const std::vector<double>& y, double tau) const;

  // transversal coordinate of a lattice translation (1-d image lattice for
  // planar families)
  double lattice_step() const { return lattice_step_; }

 private:
  const GroupAction* action_;
  const AxisClass* cls_;
  bool euclidean_ = false;
  std::vector<std::vector<double>> transversal_;  // orthonormal basis of u-perp
  double lattice_step_ = 0.0;
};

}  // namespace catflow
