#pragma once

#include "catflow/periodic.hpp"

namespace catflow {

// The orbit of finitely many metric balls around constant geodesics; covers
// an eps_R-neighborhood of every constant over the orbit of the sampled
// compact set.
struct ConstantCover {
  std::vector<SpacePoint> centers;  // orbit representatives
  double radius = 0.0;
  double eps_R = 0.0;
  int dim = 0;  // sampled nerve dimension of the collection
  std::vector<std::vector<GroupElement>> stabilizers;  // per center
};

ConstantCover cover_constants(const GroupAction& action, const std::vector<SpacePoint>& K);

// One orbit representative of a flow-invariant patch Z_a(W) cap U_a: W is the
// preimage under q_a of an interval of the transversal coordinate (the whole
// point when Y_a is trivial).
struct AxisPatchFamily {
  int class_index = 0;
  int interval_index = 0;   // 0 or 1 for planar families
  bool has_interval = false;
  double y_lo = 0.0, y_hi = 0.0;  // base interval; translates shift by the lattice step
  std::vector<GroupElement> stabilizer;
  std::string isotropy_tag;
};

struct Cover {
  std::string action_name;
  double gamma = 0.0;
  double delta_sep = 0.0;  // U_a = B_{delta_sep}(FS_a)
  double eps = 0.0;        // flow-window margin, delta_sep / 4
  double min_separation = 0.0;  // sampled min distance between distinct families
  int dim_x = 0;
  int m_bound = 0;  // 1 + dim(constants part) + dim X
  std::vector<AxisClass> classes;
  std::vector<AxisPatchFamily> axis_patches;
  ConstantCover constants;
  long orbit_count = 0;  // |G \ V|
};

// Theorem-style cover of the gamma-periodic part for the example actions
// (lattice translations in dimension <= 2, dihedral, free group, Mobius).
// delta_sep <= half the sampled class separation is enforced.
Cover build_cover(const GroupAction& action, double gamma, const std::vector<SpacePoint>& K,
                  double delta_sep = 0.0);

// A compact sample set whose orbit reaches everything the cover must see:
// a fundamental cell for the cocompact examples, an axis segment for the
// Mobius action.
std::vector<SpacePoint> default_cover_samples(const GroupAction& action, Rng& rng);

// A concrete patch: an orbit representative together with a translate tag.
// For lattice families the translate is the integer lattice offset of the
// interval; for the other shapes it is a group element index into an
// enumeration.
struct PatchRef {
  bool constant_patch = false;
  int family = 0;       // index into axis_patches or constants.centers
  long lattice_m = 0;   // interval offset in lattice steps
  Isometry translate;   // group translate applied to the family
};

// Membership of a geodesic in a patch, evaluated through the bundle
// coordinates with certified margins where exact and by convex minimization
// otherwise.
bool patch_contains(const Cover& cover, const GroupAction& action, const PatchRef& p,
                    const GeneralizedGeodesic& z, double* margin_out = nullptr);

struct CoverCheckItem {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  std::string detail;
};

struct CoverReport {
  std::vector<CoverCheckItem> items;
  bool pass = false;
};

CoverReport check_cover(const Cover& cover, const GroupAction& action, long samples, Rng& rng);

std::string cover_to_json_text(const Cover& cover);
Cover cover_from_json_text(const std::string& text);

}  // namespace catflow
