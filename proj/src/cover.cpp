#include "catflow/cover.hpp"

#include "catflow/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace catflow {

namespace {

constexpr double kGolden = 0.6180339887498949;

// golden-section minimization of a unimodal(ized) objective
template <class F>
double golden_min(const F& f, double lo, double hi, int iters, double* arg_out = nullptr) {
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    }
  }
  double x = f1 < f2 ? x1 : x2;
  if (arg_out) *arg_out = x;
  return std::min(f1, f2);
}

FlowMetricConfig membership_cfg() { return FlowMetricConfig{1e-4, 100'000, true}; }

// distance from z to { line_at(y, s) : y in [y_lo, y_hi], s in R }, by nested
// golden sections over the jointly convex objective
double dist_to_family_window(const FlowLineBundle& bundle, const GeneralizedGeodesic& z,
                             double y_lo, double y_hi, double s_center, double s_window) {
  auto eval = [&](double y, double s) {
    return dist_fs(z, bundle.line_at({y}, s), membership_cfg()).mid();
  };
  auto inner = [&](double y) {
    return golden_min([&](double s) { return eval(y, s); }, s_center - s_window,
                      s_center + s_window, 26);
  };
  if (y_hi - y_lo < 1e-12) return inner(y_lo);
  return golden_min(inner, y_lo, y_hi, 24);
}

double dist_to_line_family(const GeneralizedGeodesic& ref, const GeneralizedGeodesic& z,
                           double s_center, double s_window) {
  auto f = [&](double s) { return dist_fs(z, ref.flowed(s), membership_cfg()).mid(); };
  return golden_min(f, s_center - s_window, s_center + s_window, 30);
}

// Structural test: is z a line parallel to the family (same oriented
// direction)? If so report its bundle coordinates.
bool parallel_line_of(const FlowLineBundle& bundle, const GeneralizedGeodesic& z, double* y,
                      double* s) {
  if (!bundle.euclidean_family()) return false;
  if (z.is_constant() || is_finite(z.lower()) || is_finite(z.upper())) return false;
  const auto& fw = as_boundary(z.forward_target());
  const auto& u = std::get<EuclideanDirection>(fw).u;
  const auto& dir = bundle.axis_class().direction;
  double dot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * dir[i];
  if (std::abs(dot - 1.0) > 1e-9) return false;
  auto yc = bundle.q(z);
  *y = yc.empty() ? 0.0 : yc[0];
  *s = bundle.tau(z);
  return true;
}

// flow-translate of the single reference line (tree / Mobius / 1d families)
bool flow_translate_of(const Space& X, const GeneralizedGeodesic& ref,
                       const GeneralizedGeodesic& z, double* s) {
  if (z.is_constant() || is_finite(z.lower()) || is_finite(z.upper())) return false;
  if (!X.same_target(z.backward_target(), ref.backward_target(), 1e-9)) return false;
  if (!X.same_target(z.forward_target(), ref.forward_target(), 1e-9)) return false;
  // z(0) = ref(s)
  double d0 = X.distance(ref.evaluate(0.0), z.evaluate(0.0));
  if (X.distance(ref.evaluate(d0), z.evaluate(0.0)) < 1e-9) {
    *s = d0;
  } else {
    *s = -d0;
  }
  return X.distance(ref.evaluate(*s), z.evaluate(0.0)) < 1e-9;
}

int space_dim(const Space& X) {
  switch (X.kind()) {
    case SpaceKind::Euclidean:
      return int(static_cast<const EuclideanSpace&>(X).dim());
    case SpaceKind::Tree:
      return 1;
    case SpaceKind::Hyperbolic:
      return 2;
  }
  return 0;
}

bool lattice_shape(const GroupAction& action) {
  if (action.space().kind() != SpaceKind::Euclidean) return false;
  for (const auto& g : action.gens()) {
    const auto& e = std::get<EuclideanIsometry>(g.iso);
    for (std::size_t i = 0; i < e.n; ++i)
      for (std::size_t j = 0; j < e.n; ++j)
        if (std::abs(e.Q[i * e.n + j] - (i == j ? 1.0 : 0.0)) > 1e-9) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Constants cover
// ---------------------------------------------------------------------------

std::vector<SpacePoint> default_cover_samples(const GroupAction& action, Rng& rng) {
  const Space& X = action.space();
  std::vector<SpacePoint> out;
  if (X.kind() == SpaceKind::Hyperbolic) {
    auto ax = axis(X, action.gens().at(1).iso);
    double l = translation_length(X, action.gens().at(1).iso);
    for (int i = 0; i <= 20; ++i) out.push_back(ax.evaluate(l * double(i) / 20.0));
    return out;
  }
  for (int i = 0; i < 60; ++i) {
    out.push_back(random_point_in_ball(X, action.base(), 0.9, rng));
  }
  return out;
}

ConstantCover cover_constants(const GroupAction& action, const std::vector<SpacePoint>& K) {
  const Space& X = action.space();
  ConstantCover out;
  out.radius = 0.45;
  switch (X.kind()) {
    case SpaceKind::Euclidean: {
      std::size_t n = static_cast<const EuclideanSpace&>(X).dim();
      std::vector<std::vector<double>> cell{{}};
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::vector<double>> next;
        for (auto v : cell) {
          for (double c : {0.0, 0.5}) {
            auto w = v;
            w.push_back(c);
            next.push_back(w);
          }
        }
        cell = std::move(next);
      }
      for (auto& v : cell) out.centers.push_back(EuclideanPoint{v});
      break;
    }
    case SpaceKind::Tree:
      out.centers.push_back(make_tree_point("", 0, 0.0));
      out.centers.push_back(make_tree_point("", 'a', 0.5));
      out.centers.push_back(make_tree_point("", 'b', 0.5));
      break;
    case SpaceKind::Hyperbolic: {
      auto ax = axis(X, action.gens().at(1).iso);
      double l = translation_length(X, action.gens().at(1).iso);
      out.centers.push_back(ax.evaluate(0.0));
      out.centers.push_back(ax.evaluate(l / 2.0));
      break;
    }
  }

  auto translates = action.enumerate(3);
  // covering radius over the sample set
  double cov = 0.0;
  for (const auto& x : K) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : translates) {
      for (const auto& c : out.centers) {
        best = std::min(best, X.distance(x, apply_point(g.iso, c)));
      }
    }
    cov = std::max(cov, best);
  }
  out.eps_R = out.radius - cov;
  if (out.eps_R <= 0.0) {
    throw std::invalid_argument("cover_constants: sample set is not covered at this radius");
  }

  // patch condition: a nontrivial translate either fixes a center or moves it
  // by more than a diameter
  for (const auto& c : out.centers) {
    std::vector<GroupElement> stab;
    for (const auto& g : action.enumerate(4)) {
      double d = X.distance(apply_point(g.iso, c), c);
      if (d < 1e-9) {
        if (!is_identity(g.iso)) stab.push_back(g);
      } else if (d <= 2.0 * out.radius) {
        throw std::logic_error("cover_constants: ball orbit is not disjoint");
      }
    }
    out.stabilizers.push_back(stab);
  }

  // sampled nerve dimension: probe the cell and count overlapping balls
  // (distinct ball centers; several group elements may hit the same ball)
  std::vector<SpacePoint> ball_centers;
  for (const auto& g : translates) {
    for (const auto& c : out.centers) {
      SpacePoint gc = apply_point(g.iso, c);
      bool dup = false;
      for (const auto& seen : ball_centers) {
        if (X.distance(gc, seen) < 1e-9) {
          dup = true;
          break;
        }
      }
      if (!dup) ball_centers.push_back(gc);
    }
  }
  int max_mult = 0;
  Rng rng(12345);
  for (int i = 0; i < 400; ++i) {
    SpacePoint probe = random_point_in_ball(X, base_point(X), 1.5, rng);
    int mult = 0;
    for (const auto& c : ball_centers) {
      if (X.distance(probe, c) < out.radius) ++mult;
    }
    max_mult = std::max(max_mult, mult);
  }
  out.dim = std::max(0, max_mult - 1);
  return out;
}

// ---------------------------------------------------------------------------
// Cover construction
// ---------------------------------------------------------------------------

namespace {

double sampled_family_separation(const GroupAction& action,
                                 const std::vector<AxisClass>& classes) {
  const Space& X = action.space();
  double sep = std::numeric_limits<double>::infinity();
  FlowMetricConfig cfg{3e-4, 100'000, true};
  bool lattice = lattice_shape(action);
  std::vector<GroupElement> translates;
  if (!lattice) translates = action.enumerate(2);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    FlowLineBundle bi(action, classes[i]);
    for (std::size_t j = lattice ? i + 1 : 0; j < classes.size(); ++j) {
      if (i == j) continue;
      FlowLineBundle bj(action, classes[j]);
      if (lattice) {
        // minimize the distance from the base member of family i over the
        // members of family j
        auto f = [&](double y, double s) {
          return dist_fs(classes[i].reference, bj.line_at({y}, s), cfg).mid();
        };
        double best = std::numeric_limits<double>::infinity();
        auto inner = [&](double y) {
          return golden_min([&](double s) { return f(y, s); }, -5.0, 5.0, 18);
        };
        if (bi.q(classes[i].reference).empty() && bj.q(classes[j].reference).empty()) {
          best = inner(0.0);
        } else {
          best = golden_min(inner, -5.0, 5.0, 18);
        }
        sep = std::min(sep, best);
      } else {
        for (const auto& h : translates) {
          auto moved = apply_fs(h.iso, classes[j].reference);
          double s0 = 0.0;
          if (flow_translate_of(X, classes[i].reference, moved, &s0)) continue;  // same patch
          auto f = [&](double s) { return dist_fs(classes[i].reference, moved.flowed(s), cfg).mid(); };
          sep = std::min(sep, golden_min(f, -8.0, 8.0, 30));
        }
      }
    }
    // a family against its own nontrivial translates (single-line shapes)
    if (!lattice) {
      for (const auto& h : translates) {
        if (is_identity(h.iso)) continue;
        auto moved = apply_fs(h.iso, classes[i].reference);
        double s0 = 0.0;
        if (flow_translate_of(X, classes[i].reference, moved, &s0)) continue;  // same patch
        auto f = [&](double s) { return dist_fs(classes[i].reference, moved.flowed(s), cfg).mid(); };
        sep = std::min(sep, golden_min(f, -8.0, 8.0, 30));
      }
    }
  }
  return sep;
}

}  // namespace

Cover build_cover(const GroupAction& action, double gamma, const std::vector<SpacePoint>& K,
                  double delta_sep) {
  const Space& X = action.space();
  Cover cover;
  cover.action_name = action.name();
  cover.gamma = gamma;
  cover.dim_x = space_dim(X);
  cover.classes = enumerate_axis_classes(gamma, action);
  if (cover.classes.empty()) {
    throw std::invalid_argument("build_cover: no hyperbolic classes at this gamma");
  }
  if (lattice_shape(action) && static_cast<const EuclideanSpace&>(X).dim() > 2) {
    throw std::invalid_argument("build_cover: lattice actions supported up to dimension 2");
  }

  cover.min_separation = sampled_family_separation(action, cover.classes);

  double lattice_min_step = std::numeric_limits<double>::infinity();
  for (const auto& cls : cover.classes) {
    FlowLineBundle b(action, cls);
    if (b.euclidean_family() && b.lattice_step() > 0.0) {
      lattice_min_step = std::min(lattice_min_step, b.lattice_step());
    }
  }

  double cap = cover.min_separation / 2.0;
  if (std::isfinite(lattice_min_step)) cap = std::min(cap, 0.25 * lattice_min_step);
  if (delta_sep == 0.0) {
    cover.delta_sep = 0.9 * cap;
  } else {
    if (delta_sep > cover.min_separation / 2.0) {
      throw std::invalid_argument("build_cover: delta_sep exceeds half the class separation");
    }
    if (delta_sep > cap) {
      throw std::invalid_argument("build_cover: delta_sep exceeds the interval margin budget");
    }
    cover.delta_sep = delta_sep;
  }
  cover.eps = cover.delta_sep / 4.0;

  for (std::size_t ci = 0; ci < cover.classes.size(); ++ci) {
    const AxisClass& cls = cover.classes[ci];
    FlowLineBundle b(action, cls);
    if (b.euclidean_family() && b.lattice_step() > 0.0) {
      double l = b.lattice_step();
      for (int k = 0; k < 2; ++k) {
        AxisPatchFamily fam;
        fam.class_index = int(ci);
        fam.interval_index = k;
        fam.has_interval = true;
        fam.y_lo = -0.375 * l + k * 0.5 * l;
        fam.y_hi = 0.375 * l + k * 0.5 * l;
        fam.stabilizer.push_back(cls.representative);
        fam.isotropy_tag = "infinite_cyclic<" + cls.representative.word + ">";
        cover.axis_patches.push_back(fam);
      }
    } else {
      AxisPatchFamily fam;
      fam.class_index = int(ci);
      fam.interval_index = 0;
      fam.has_interval = false;
      for (const auto& s : cls.stabilizer_gens) fam.stabilizer.push_back(s);
      fam.isotropy_tag =
          "infinite_cyclic<" + (cls.stabilizer_gens.empty() ? std::string("e")
                                                            : cls.stabilizer_gens[0].word) +
          ">";
      cover.axis_patches.push_back(fam);
    }
  }

  cover.constants = cover_constants(action, K);
  cover.m_bound = 1 + cover.constants.dim + cover.dim_x;

  // orbit count: families carried onto each other by the group (reflections
  // in the dihedral case) sit in one orbit
  auto enum3 = action.enumerate(3);
  std::vector<int> class_orbit(cover.classes.size());
  for (std::size_t i = 0; i < cover.classes.size(); ++i) class_orbit[i] = int(i);
  for (std::size_t i = 0; i < cover.classes.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      bool same = false;
      for (const auto& g : enum3) {
        double s0 = 0.0;
        if (flow_translate_of(X, cover.classes[j].reference,
                              apply_fs(g.iso, cover.classes[i].reference), &s0)) {
          same = true;
          break;
        }
      }
      if (same) {
        class_orbit[i] = class_orbit[j];
        break;
      }
    }
  }
  std::set<std::pair<int, int>> axis_orbits;
  for (const auto& fam : cover.axis_patches) {
    axis_orbits.insert({class_orbit[fam.class_index], fam.interval_index});
  }
  std::vector<int> center_orbit(cover.constants.centers.size());
  for (std::size_t i = 0; i < cover.constants.centers.size(); ++i) center_orbit[i] = int(i);
  for (std::size_t i = 0; i < cover.constants.centers.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      for (const auto& g : enum3) {
        if (X.distance(apply_point(g.iso, cover.constants.centers[i]),
                       cover.constants.centers[j]) < 1e-9) {
          center_orbit[i] = center_orbit[j];
          break;
        }
      }
      if (center_orbit[i] != int(i)) break;
    }
  }
  std::set<int> ball_orbits(center_orbit.begin(), center_orbit.end());
  cover.orbit_count = long(axis_orbits.size() + ball_orbits.size());
  return cover;
}

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

bool patch_contains(const Cover& cover, const GroupAction& action, const PatchRef& p,
                    const GeneralizedGeodesic& z, double* margin_out) {
  const Space& X = action.space();
  if (margin_out) *margin_out = -std::numeric_limits<double>::infinity();
  if (p.constant_patch) {
    SpacePoint center = apply_point(p.translate, cover.constants.centers.at(p.family));
    double d = dist_fs(z, GeneralizedGeodesic::constant(X, center), membership_cfg()).mid();
    if (margin_out) *margin_out = cover.constants.radius - d;
    return d < cover.constants.radius;
  }

  const AxisPatchFamily& fam = cover.axis_patches.at(p.family);
  const AxisClass& cls = cover.classes.at(fam.class_index);
  FlowLineBundle bundle(action, cls);
  if (z.is_constant()) {
    // the numerator against any full line is at least |t - s|, whose weighted
    // integral is at least 1, so constants never reach a line family
    if (margin_out) *margin_out = cover.delta_sep - 1.0;
    return cover.delta_sep > 1.0;
  }
  GeneralizedGeodesic zz = apply_fs(inverse_of(p.translate), z);

  double y = 0.0, s = 0.0;
  bool exact = bundle.euclidean_family() ? parallel_line_of(bundle, zz, &y, &s)
                                         : flow_translate_of(X, cls.reference, zz, &s);
  if (exact) {
    // distances inside the flat family split as sqrt(dy^2 + ds^2); with s
    // free they reduce to interval distances in the transversal coordinate
    double du_all = 0.0;
    if (margin_out) *margin_out = cover.delta_sep - du_all;
    if (!fam.has_interval) return true;
    double step = bundle.lattice_step();
    double lo = fam.y_lo + double(p.lattice_m) * step;
    double hi = fam.y_hi + double(p.lattice_m) * step;
    double d_w = std::max({0.0, lo - y, y - hi});
    // complement of the interval inside this family
    double d_c = (y < lo || y > hi) ? 0.0 : std::min(y - lo, hi - y);
    if (margin_out) *margin_out = std::min(cover.delta_sep, d_c - d_w);
    return d_w < d_c;
  }

  // numeric route: convex minimization in the bundle coordinates, seeded by
  // the flow position of the evaluation at time zero
  double s_guess = bundle.tau(zz);
  double window = 8.0 + std::abs(cover.gamma);
  if (!bundle.euclidean_family()) {
    double du = dist_to_line_family(cls.reference, zz, s_guess, window);
    if (margin_out) *margin_out = cover.delta_sep - du;
    return du < cover.delta_sep;
  }
  auto yc = bundle.q(zz);
  double y_guess = yc.empty() ? 0.0 : yc[0];
  double du_all = dist_to_family_window(bundle, zz, y_guess - 3.0, y_guess + 3.0, s_guess, window);
  if (du_all >= cover.delta_sep) {
    if (margin_out) *margin_out = cover.delta_sep - du_all;
    return false;
  }
  if (!fam.has_interval) {
    if (margin_out) *margin_out = cover.delta_sep - du_all;
    return true;
  }
  double step = bundle.lattice_step();
  double lo = fam.y_lo + double(p.lattice_m) * step;
  double hi = fam.y_hi + double(p.lattice_m) * step;
  double d_w = dist_to_family_window(bundle, zz, lo, hi, s_guess, window);
  double reach = 2.0 * (d_w + 1.0);
  double d_c = std::min(
      dist_to_family_window(bundle, zz, lo - reach, lo, s_guess, window),
      dist_to_family_window(bundle, zz, hi, hi + reach, s_guess, window));
  if (margin_out) *margin_out = std::min(cover.delta_sep - du_all, d_c - d_w);
  return d_w < d_c;
}

// ---------------------------------------------------------------------------
// Checking
// ---------------------------------------------------------------------------

namespace {

std::vector<double> rotate2(const std::vector<double>& u, double phi) {
  return {u[0] * std::cos(phi) - u[1] * std::sin(phi),
          u[0] * std::sin(phi) + u[1] * std::cos(phi)};
}

// lattice offset of the interval family under a translation: the shift of
// the transversal coordinate in units of the lattice step
bool lattice_patch_shift(const FlowLineBundle& bundle, const Isometry& g, long* shift) {
  const auto* e = std::get_if<EuclideanIsometry>(&g);
  if (!e) return false;
  const auto& dir = bundle.axis_class().direction;
  // reject anything that does not preserve the oriented direction
  auto moved = apply_boundary(g, make_direction(dir));
  const auto& mu = std::get<EuclideanDirection>(moved).u;
  for (std::size_t i = 0; i < dir.size(); ++i) {
    if (std::abs(mu[i] - dir[i]) > 1e-9) return false;
  }
  GeneralizedGeodesic base = bundle.line_at(std::vector<double>(dir.size() > 1 ? 1 : 0, 0.0), 0.0);
  auto y0 = bundle.q(base);
  auto y1 = bundle.q(apply_fs(g, base));
  double dy = (y1.empty() ? 0.0 : y1[0]) - (y0.empty() ? 0.0 : y0[0]);
  double step = bundle.lattice_step();
  if (step <= 0.0) {
    *shift = 0;
    return std::abs(dy) < 1e-9;
  }
  double k = dy / step;
  if (std::abs(k - std::round(k)) > 1e-7) return false;
  *shift = long(std::round(k));
  return true;
}


std::string describe_target_key(const Space& X, const Target& t) {
  char buf[64];
  if (!is_boundary(t)) return "p" + describe_point(X, as_point(t));
  const BoundaryPoint& b = as_boundary(t);
  if (const auto* d = std::get_if<EuclideanDirection>(&b)) {
    std::string out = "d";
    for (double c : d->u) {
      std::snprintf(buf, sizeof(buf), "%.6f,", c);
      out += buf;
    }
    return out;
  }
  if (const auto* e = std::get_if<TreeEnd>(&b)) return "e" + e->head + "|" + e->cycle;
  std::snprintf(buf, sizeof(buf), "a%.7f", std::get<HyperbolicIdeal>(b).theta);
  return buf;
}

std::string patch_key(const Cover& cover, const GroupAction& action, const PatchRef& p) {
  const Space& X = action.space();
  if (p.constant_patch) {
    SpacePoint c = apply_point(p.translate, cover.constants.centers[p.family]);
    return "C" + std::to_string(p.family) + ":" + describe_point(X, c);
  }
  const auto& fam = cover.axis_patches[p.family];
  if (fam.has_interval || lattice_shape(action)) {
    return "A" + std::to_string(p.family) + ":" + std::to_string(p.lattice_m);
  }
  const auto& cls = cover.classes[fam.class_index];
  auto moved = apply_fs(p.translate, cls.reference);
  // the patch set is determined by the oriented line family alone
  return "L:" + describe_target_key(X, moved.backward_target()) + ";" +
         describe_target_key(X, moved.forward_target());
}

struct PeriodicSample {
  GeneralizedGeodesic line;
  int class_index;
  Isometry translate;  // identity for lattice families
  double y = 0.0;      // transversal coordinate relative to the translate
};

PeriodicSample sample_periodic_line(const Cover& cover, const GroupAction& action, Rng& rng,
                                    const std::vector<GroupElement>& translates) {
  PeriodicSample out;
  out.class_index = int(rng.uniform_int(0, long(cover.classes.size()) - 1));
  const AxisClass& cls = cover.classes[out.class_index];
  FlowLineBundle bundle(action, cls);
  out.translate = identity_isometry(action.space());
  if (bundle.euclidean_family() && !bundle.q(cls.reference).empty()) {
    out.y = rng.uniform(-2.0, 2.0);
    out.line = bundle.line_at({out.y}, rng.uniform(-2.0, 2.0));
  } else {
    out.line = cls.reference.flowed(rng.uniform(-2.0, 2.0));
    if (!lattice_shape(action)) {
      const auto& h = translates[std::size_t(rng.uniform_int(0, long(translates.size()) - 1))];
      out.translate = h.iso;
      out.line = apply_fs(h.iso, out.line);
    }
  }
  return out;
}

// the patch of the cover that should swallow the flow window of the sample
PatchRef home_patch(const Cover& cover, const GroupAction& action, const PeriodicSample& s) {
  PatchRef p;
  p.constant_patch = false;
  p.translate = s.translate;
  const AxisClass& cls = cover.classes[s.class_index];
  FlowLineBundle bundle(action, cls);
  double best_depth = -1.0;
  for (std::size_t fi = 0; fi < cover.axis_patches.size(); ++fi) {
    const auto& fam = cover.axis_patches[fi];
    if (fam.class_index != s.class_index) continue;
    if (!fam.has_interval) {
      p.family = int(fi);
      p.lattice_m = 0;
      return p;
    }
    double step = bundle.lattice_step();
    long m = long(std::floor((s.y - fam.y_lo) / step + 0.5));
    for (long mm : {m - 1, m, m + 1}) {
      double lo = fam.y_lo + double(mm) * step;
      double hi = fam.y_hi + double(mm) * step;
      double depth = std::min(s.y - lo, hi - s.y);
      if (depth > best_depth) {
        best_depth = depth;
        p.family = int(fi);
        p.lattice_m = mm;
      }
    }
  }
  return p;
}

// candidate patches possibly containing z, for the multiplicity count
std::vector<PatchRef> candidate_patches(const Cover& cover, const GroupAction& action,
                                        const GeneralizedGeodesic& z,
                                        const std::vector<GroupElement>& translates) {
  std::vector<PatchRef> out;
  const Space& X = action.space();
  bool lattice = lattice_shape(action);
  // a line belonging exactly to one family can only meet that family's
  // patches: all other families stay at least min_separation > delta_sep away
  int own_class = -1;
  if (lattice && !z.is_constant()) {
    for (std::size_t ci = 0; ci < cover.classes.size(); ++ci) {
      FlowLineBundle b(action, cover.classes[ci]);
      double y = 0.0, sv = 0.0;
      if (parallel_line_of(b, z, &y, &sv)) {
        own_class = int(ci);
        break;
      }
    }
  }
  for (std::size_t fi = 0; fi < cover.axis_patches.size(); ++fi) {
    const auto& fam = cover.axis_patches[fi];
    if (own_class >= 0 && fam.class_index != own_class) continue;
    if (z.is_constant()) continue;  // constants never reach a line family
    const AxisClass& cls = cover.classes[fam.class_index];
    FlowLineBundle bundle(action, cls);
    if (lattice) {
      PatchRef p;
      p.family = int(fi);
      p.translate = identity_isometry(X);
      if (fam.has_interval) {
        double y = 0.0, sdummy = 0.0;
        if (!parallel_line_of(bundle, z, &y, &sdummy)) {
          auto yc = bundle.q(z);
          y = yc.empty() ? 0.0 : yc[0];
        }
        double step = bundle.lattice_step();
        long m0 = long(std::floor((y - fam.y_lo) / step + 0.5));
        for (long mm = m0 - 2; mm <= m0 + 2; ++mm) {
          p.lattice_m = mm;
          out.push_back(p);
        }
      } else {
        p.lattice_m = 0;
        out.push_back(p);
      }
    } else {
      for (const auto& h : translates) {
        PatchRef p;
        p.family = int(fi);
        p.translate = h.iso;
        out.push_back(p);
      }
    }
  }
  for (std::size_t ci = 0; ci < cover.constants.centers.size(); ++ci) {
    if (lattice) {
      SpacePoint z0 = z.evaluate(0.0);
      const auto& zp = std::get<EuclideanPoint>(z0).x;
      const auto& cp = std::get<EuclideanPoint>(cover.constants.centers[ci]).x;
      std::vector<long> base(zp.size());
      for (std::size_t i = 0; i < zp.size(); ++i) base[i] = long(std::llround(zp[i] - cp[i]));
      std::vector<std::vector<long>> offsets{{}};
      for (std::size_t i = 0; i < zp.size(); ++i) {
        std::vector<std::vector<long>> next;
        for (auto& v : offsets) {
          for (long d = -1; d <= 1; ++d) {
            auto w = v;
            w.push_back(base[i] + d);
            next.push_back(w);
          }
        }
        offsets = std::move(next);
      }
      for (const auto& off : offsets) {
        std::vector<double> t(off.size());
        for (std::size_t i = 0; i < off.size(); ++i) t[i] = double(off[i]);
        PatchRef p;
        p.constant_patch = true;
        p.family = int(ci);
        p.translate = euclidean_translation(t);
        out.push_back(p);
      }
    } else {
      for (const auto& h : translates) {
        PatchRef p;
        p.constant_patch = true;
        p.family = int(ci);
        p.translate = h.iso;
        out.push_back(p);
      }
    }
  }
  return out;
}

}  // namespace

CoverReport check_cover(const Cover& cover, const GroupAction& action, long samples, Rng& rng) {
  CoverReport report;
  const Space& X = action.space();
  bool lattice = lattice_shape(action);
  auto translates3 = action.enumerate(3);
  FlowMetricConfig certify{1e-7, 200'000, true};

  // --- separation and the delta_sep budget
  {
    CoverCheckItem item;
    item.name = "class_separation";
    double sep = sampled_family_separation(action, cover.classes);
    item.worst = sep;
    item.pass = sep >= 0.99 * cover.min_separation && 2.0 * cover.delta_sep < sep + 1e-12;
    item.detail = "sampled min separation " + std::to_string(sep);
    report.items.push_back(item);
  }

  // --- invariance under the enumerated elements
  {
    CoverCheckItem item;
    item.name = "g_invariance";
    item.pass = true;
    for (const auto& g : action.enumerate(lattice ? 6 : 4)) {
      for (std::size_t fi = 0; fi < cover.axis_patches.size() && item.pass; ++fi) {
        const auto& fam = cover.axis_patches[fi];
        const AxisClass& cls = cover.classes[fam.class_index];
        FlowLineBundle bundle(action, cls);
        // the image family: same class when the oriented direction is
        // preserved, the reversal class when it is flipped
        long shift = 0;
        bool same_family =
            lattice ? lattice_patch_shift(bundle, g.iso, &shift) : true;
        if (lattice && !same_family) {
          // must land on the reversal class (reflections) or another class
          // patch of the collection; for pure translations this cannot happen
          bool is_translation = true;
          const auto& e = std::get<EuclideanIsometry>(g.iso);
          for (std::size_t i = 0; i < e.n && is_translation; ++i)
            for (std::size_t j = 0; j < e.n && is_translation; ++j)
              if (std::abs(e.Q[i * e.n + j] - (i == j ? 1.0 : 0.0)) > 1e-9)
                is_translation = false;
          if (is_translation) {
            item.pass = false;
            item.detail = "translation moved a family off the collection";
          }
          continue;
        }
        // semantic spot check on a member line
        PeriodicSample s;
        s.class_index = fam.class_index;
        s.translate = identity_isometry(X);
        s.y = fam.has_interval ? 0.5 * (fam.y_lo + fam.y_hi) : 0.0;
        if (bundle.euclidean_family() && !bundle.q(cls.reference).empty()) {
          s.line = bundle.line_at({s.y}, 0.3);
        } else {
          s.line = cls.reference.flowed(0.3);
        }
        PatchRef p;
        p.family = int(fi);
        p.lattice_m = 0;
        p.translate = identity_isometry(X);
        PatchRef gp = p;
        if (lattice) {
          gp.lattice_m = p.lattice_m + shift;
        } else {
          gp.translate = g.iso;
        }
        bool in0 = patch_contains(cover, action, p, s.line);
        bool in1 = patch_contains(cover, action, gp, apply_fs(g.iso, s.line));
        if (in0 != in1) {
          item.pass = false;
          item.detail = "membership not equivariant for " + g.word;
        }
      }
      if (!item.pass) break;
    }
    report.items.push_back(item);
  }

  // --- orbit count
  {
    CoverCheckItem item;
    item.name = "orbit_count";
    long families = long(cover.axis_patches.size() + cover.constants.centers.size());
    item.worst = double(cover.orbit_count);
    item.pass = cover.orbit_count > 0 && cover.orbit_count <= families;
    item.detail = std::to_string(cover.orbit_count) + " orbits of " +
                  std::to_string(families) + " families";
    report.items.push_back(item);
  }

  // --- sampled nerve multiplicity
  {
    CoverCheckItem item;
    item.name = "multiplicity";
    int worst = 0;
    long n_samples = std::max(30L, samples / 10);
    for (long i = 0; i < n_samples; ++i) {
      GeneralizedGeodesic z;
      int pick = int(rng.uniform_int(0, 2));
      if (pick == 0) {
        PeriodicSample s = sample_periodic_line(cover, action, rng, translates3);
        z = s.line;
      } else if (pick == 1) {
        z = GeneralizedGeodesic::constant(
            X, random_point_in_ball(X, base_point(X), 2.0, rng));
      } else {
        PeriodicSample s = sample_periodic_line(cover, action, rng, translates3);
        z = s.line.flowed(rng.uniform(-cover.gamma, cover.gamma));
      }
      int mult = 0;
      std::set<std::string> counted;
      for (const auto& p : candidate_patches(cover, action, z, translates3)) {
        if (!patch_contains(cover, action, p, z)) continue;
        if (counted.insert(patch_key(cover, action, p)).second) ++mult;
      }
      worst = std::max(worst, mult);
    }
    item.worst = double(worst);
    item.pass = worst <= cover.m_bound;
    item.detail = "max sampled multiplicity " + std::to_string(worst) + " <= M = " +
                  std::to_string(cover.m_bound);
    report.items.push_back(item);
  }

  // --- flow windows of sampled periodic lines sit deep inside one patch
  {
    CoverCheckItem item;
    item.name = "eps_long";
    item.pass = true;
    double eps = cover.eps;
    long n_samples = std::max(20L, samples / 5);
    long certified = 0;
    for (long i = 0; i < n_samples && item.pass; ++i) {
      PeriodicSample s = sample_periodic_line(cover, action, rng, translates3);
      PatchRef target = home_patch(cover, action, s);
      const AxisClass& cls = cover.classes[s.class_index];
      const AxisPatchFamily& fam = cover.axis_patches[target.family];
      FlowLineBundle bundle(action, cls);
      // interval depth of the witness coordinate inside the home patch
      double depth = std::numeric_limits<double>::infinity();
      if (fam.has_interval) {
        double step = bundle.lattice_step();
        double lo = fam.y_lo + double(target.lattice_m) * step;
        double hi = fam.y_hi + double(target.lattice_m) * step;
        depth = std::min(s.y - lo, hi - s.y);
      }
      for (double t : {-cover.gamma, -0.5 * cover.gamma, 0.0, 0.5 * cover.gamma, cover.gamma}) {
        GeneralizedGeodesic base = s.line.flowed(t);
        std::vector<GeneralizedGeodesic> ball{base};
        if (lattice && bundle.euclidean_family() && !bundle.q(cls.reference).empty()) {
          for (int k = 0; k < 2; ++k) {
            double ang = rng.uniform(0.0, 2.0 * M_PI);
            double rad = 0.9 * eps * rng.uniform();
            ball.push_back(bundle.line_at({s.y + rad * std::cos(ang)},
                                          bundle.tau(base) + rad * std::sin(ang)));
          }
          // a slightly rotated line through the same point
          double phi = 0.8 * eps;
          auto u2 = rotate2(cls.direction, phi);
          std::vector<double> nu2{-u2[0], -u2[1]};
          ball.push_back(GeneralizedGeodesic::line(
              X, base.evaluate(0.0), 0.0, make_direction(nu2), make_direction(u2)));
        }
        for (const auto& z : ball) {
          auto d = dist_fs(z, base, certify);
          if (d.lower > eps) continue;  // outside the ball, not a witness
          if (d.upper < eps) ++certified;
          // membership via the witness: z is within d.upper of a member with
          // transversal depth `depth`, so d(z, W) <= d.upper while the
          // complement stays at least depth - d.upper away
          bool member = d.upper < cover.delta_sep &&
                        (!fam.has_interval || 2.0 * d.upper < depth);
          if (!member) member = patch_contains(cover, action, target, z);
          if (!member) {
            item.pass = false;
            item.detail = "ball sample escaped the home patch (" + cls.descriptor + ")";
            break;
          }
        }
        if (!item.pass) break;
      }
    }
    item.worst = double(certified);
    if (item.pass && certified == 0) {
      item.pass = false;
      item.detail = "no certified ball samples";
    }
    report.items.push_back(item);
  }

  // --- isotropy witnesses
  {
    CoverCheckItem item;
    item.name = "isotropy";
    item.pass = true;
    for (std::size_t fi = 0; fi < cover.axis_patches.size() && item.pass; ++fi) {
      const auto& fam = cover.axis_patches[fi];
      const AxisClass& cls = cover.classes[fam.class_index];
      FlowLineBundle bundle(action, cls);
      const Isometry& witness = fam.stabilizer.empty() ? identity_isometry(X)
                                                       : fam.stabilizer[0].iso;
      for (const auto& g : action.enumerate(lattice ? 8 : 4)) {
        bool stabilizes = false;
        if (lattice) {
          long shift = 0;
          stabilizes = lattice_patch_shift(bundle, g.iso, &shift) && shift == 0;
        } else {
          // g must preserve the reference line with its orientation
          double sshift = 0.0;
          stabilizes = flow_translate_of(X, cls.reference, apply_fs(g.iso, cls.reference), &sshift);
        }
        if (!stabilizes) continue;
        // every stabilizing element must be a power of the witness
        bool is_power = is_identity(g.iso);
        Isometry acc = identity_isometry(X);
        for (int k = 1; k <= 16 && !is_power; ++k) {
          acc = compose(acc, witness);
          if (isometry_equal(acc, g.iso)) is_power = true;
        }
        Isometry winv = inverse_of(witness);
        acc = identity_isometry(X);
        for (int k = 1; k <= 16 && !is_power; ++k) {
          acc = compose(acc, winv);
          if (isometry_equal(acc, g.iso)) is_power = true;
        }
        if (!is_power) {
          item.pass = false;
          item.detail = "stabilizer element " + g.word + " is not a power of the witness";
        }
      }
    }
    // constant balls: finite stabilizers
    for (std::size_t ci = 0; ci < cover.constants.stabilizers.size() && item.pass; ++ci) {
      for (const auto& g : cover.constants.stabilizers[ci]) {
        Isometry acc = g.iso;
        bool finite_order = false;
        for (int k = 1; k <= 8; ++k) {
          if (is_identity(acc)) {
            finite_order = true;
            break;
          }
          acc = compose(acc, g.iso);
        }
        if (!finite_order) {
          item.pass = false;
          item.detail = "infinite-order element stabilizes a constant ball";
        }
      }
    }
    report.items.push_back(item);
  }

  report.pass = true;
  for (const auto& i : report.items) report.pass = report.pass && i.pass;
  return report;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string cover_to_json_text(const Cover& cover) {
  nlohmann::json j;
  j["action"] = cover.action_name;
  j["gamma"] = cover.gamma;
  j["delta_sep"] = cover.delta_sep;
  j["eps"] = cover.eps;
  j["min_separation"] = cover.min_separation;
  j["dim_x"] = cover.dim_x;
  j["m_bound"] = cover.m_bound;
  j["orbit_count"] = cover.orbit_count;
  nlohmann::json cl = nlohmann::json::array();
  for (const auto& c : cover.classes) {
    nlohmann::json cj;
    cj["descriptor"] = c.descriptor;
    cj["length"] = c.length;
    cj["representative"] = c.representative.word;
    cj["reversal"] = c.reversal;
    cl.push_back(cj);
  }
  j["classes"] = cl;
  nlohmann::json pl = nlohmann::json::array();
  for (const auto& f : cover.axis_patches) {
    nlohmann::json fj;
    fj["class"] = f.class_index;
    fj["interval"] = f.interval_index;
    fj["has_interval"] = f.has_interval;
    fj["y_lo"] = f.y_lo;
    fj["y_hi"] = f.y_hi;
    fj["isotropy"] = f.isotropy_tag;
    pl.push_back(fj);
  }
  j["axis_patches"] = pl;
  nlohmann::json cc;
  cc["radius"] = cover.constants.radius;
  cc["eps_R"] = cover.constants.eps_R;
  cc["dim"] = cover.constants.dim;
  cc["count"] = cover.constants.centers.size();
  j["constants"] = cc;
  return j.dump(2);
}

Cover cover_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  GroupAction action = action_by_name(j.at("action").get<std::string>());
  // rebuild the construction at the stored parameters, then verify the
  // stored shape matches
  std::vector<SpacePoint> K;
  Rng rng(2);
  for (int i = 0; i < 60; ++i) {
    K.push_back(random_point_in_ball(action.space(), action.base(), 1.0, rng));
  }
  Cover cover = build_cover(action, j.at("gamma").get<double>(), K,
                            j.at("delta_sep").get<double>());
  if (long(cover.axis_patches.size()) != long(j.at("axis_patches").size()) ||
      cover.orbit_count != j.at("orbit_count").get<long>()) {
    throw std::runtime_error("cover json: stored patch counts do not match the construction");
  }
  return cover;
}

}  // namespace catflow
