#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "catflow/periodic.hpp"

namespace catflow {

namespace {

enum class ActionShape { LatticeTranslations, Dihedral, FreeGroup, MobiusCyclic };

ActionShape detect_shape(const GroupAction& action) {
  switch (action.space().kind()) {
    case SpaceKind::Tree:
      return ActionShape::FreeGroup;
    case SpaceKind::Hyperbolic:
      return ActionShape::MobiusCyclic;
    case SpaceKind::Euclidean: {
      for (const auto& g : action.gens()) {
        const auto& e = std::get<EuclideanIsometry>(g.iso);
        for (std::size_t i = 0; i < e.n; ++i)
          for (std::size_t j = 0; j < e.n; ++j) {
            if (std::abs(e.Q[i * e.n + j] - (i == j ? 1.0 : 0.0)) > 1e-9) {
              return ActionShape::Dihedral;
            }
          }
      }
      return ActionShape::LatticeTranslations;
    }
  }
  throw std::logic_error("detect_shape");
}

long vec_gcd(const std::vector<long>& v) {
  long g = 0;
  for (long c : v) g = std::gcd(g, std::abs(c));
  return g;
}

std::string int_vec_str(const std::vector<long>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

bool word_primitive(const std::string& w) {
  for (std::size_t d = 1; d <= w.size() / 2; ++d) {
    if (w.size() % d != 0) continue;
    bool period = true;
    for (std::size_t i = d; i < w.size() && period; ++i)
      if (w[i] != w[i - d]) period = false;
    if (period) return false;
  }
  return true;
}

std::vector<AxisClass> lattice_classes(double gamma, const GroupAction& action) {
  std::size_t n = static_cast<const EuclideanSpace&>(action.space()).dim();
  long cap = long(std::floor(gamma + 1e-9));
  std::vector<std::vector<long>> prim;
  std::vector<long> v(n, 0);
  // enumerate integer vectors with |coords| <= cap
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      double norm2 = 0;
      for (long c : v) norm2 += double(c) * double(c);
      if (norm2 == 0 || norm2 > gamma * gamma + 1e-9) return;
      if (vec_gcd(v) != 1) return;
      prim.push_back(v);
      return;
    }
    for (long c = -cap; c <= cap; ++c) {
      v[i] = c;
      rec(i + 1);
    }
  };
  rec(0);
  std::sort(prim.begin(), prim.end());

  std::vector<AxisClass> out;
  const Space& X = action.space();
  for (const auto& p : prim) {
    AxisClass cls;
    cls.primitive = p;
    double norm = 0;
    for (long c : p) norm += double(c) * double(c);
    norm = std::sqrt(norm);
    cls.length = norm;
    std::vector<double> u(n), tv(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = double(p[i]) / norm;
      tv[i] = double(p[i]);
    }
    cls.direction = u;
    cls.representative = GroupElement{euclidean_translation(tv), "p" + int_vec_str(p)};
    cls.descriptor = "translations along " + int_vec_str(p);
    std::vector<double> nu(n);
    for (std::size_t i = 0; i < n; ++i) nu[i] = -u[i];
    cls.reference = GeneralizedGeodesic::line(X, EuclideanPoint{std::vector<double>(n, 0.0)},
                                              0.0, make_direction(nu), make_direction(u));
    for (std::size_t k = 1; k < action.gens().size(); ++k) {
      cls.stabilizer_gens.push_back(action.gens()[k]);
    }
    out.push_back(std::move(cls));
  }
  // cross-reference reversals
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::vector<long> neg = out[i].primitive;
    for (long& c : neg) c = -c;
    for (std::size_t j = 0; j < out.size(); ++j) {
      if (out[j].primitive == neg) out[i].reversal = int(j);
    }
  }
  return out;
}

std::vector<AxisClass> dihedral_classes(double gamma, const GroupAction& action) {
  std::vector<AxisClass> out;
  if (gamma < 1.0) return out;
  const Space& X = action.space();
  for (int sign : {1, -1}) {
    AxisClass cls;
    cls.length = 1.0;
    cls.direction = {double(sign)};
    cls.primitive = {sign};
    cls.representative =
        GroupElement{euclidean_translation({double(sign)}), sign > 0 ? "t" : "t'"};
    cls.descriptor = std::string("translations along ") + (sign > 0 ? "(+1)" : "(-1)");
    cls.reference =
        GeneralizedGeodesic::line(X, EuclideanPoint{{0.0}}, 0.0,
                                  make_direction({double(-sign)}), make_direction({double(sign)}));
    // reflections reverse the orientation, so only the translations stabilize
    cls.stabilizer_gens.push_back(GroupElement{euclidean_translation({1.0}), "t"});
    out.push_back(std::move(cls));
  }
  out[0].reversal = 1;
  out[1].reversal = 0;
  return out;
}

std::vector<AxisClass> free_group_classes(double gamma, const GroupAction& action) {
  const Space& X = action.space();
  long cap = long(std::floor(gamma + 1e-9));
  std::set<std::string> keys;
  std::vector<AxisClass> out;
  // enumerate cyclically reduced words up to cyclic rotation
  std::vector<std::string> stack{""};
  std::vector<std::string> words;
  while (!stack.empty()) {
    std::string w = stack.back();
    stack.pop_back();
    if (!w.empty()) words.push_back(w);
    if (long(w.size()) >= cap) continue;
    for (char c : {'a', 'A', 'b', 'B'}) {
      if (!w.empty() && w.back() == letter_inverse(c)) continue;
      stack.push_back(w + c);
    }
  }
  std::sort(words.begin(), words.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  for (const auto& w : words) {
    if (w.front() == letter_inverse(w.back())) continue;  // not cyclically reduced
    if (!word_primitive(w)) continue;
    std::string key = least_cyclic_rotation(w);
    if (!keys.insert(key).second) continue;
    AxisClass cls;
    cls.length = double(key.size());
    cls.representative = GroupElement{tree_isometry(key), key};
    cls.descriptor = "axis of the cyclic word " + key;
    cls.reference = axis(X, cls.representative.iso);
    cls.stabilizer_gens.push_back(cls.representative);
    out.push_back(std::move(cls));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::string inv_key = least_cyclic_rotation(invert_word(out[i].representative.word));
    for (std::size_t j = 0; j < out.size(); ++j) {
      if (out[j].representative.word == inv_key) out[i].reversal = int(j);
    }
  }
  return out;
}

std::vector<AxisClass> mobius_classes(double gamma, const GroupAction& action) {
  std::vector<AxisClass> out;
  const Space& X = action.space();
  const auto& g0 = action.gens().at(1);
  double l0 = translation_length(X, g0.iso);
  if (l0 <= 0 || l0 > gamma) return out;
  for (int sign : {1, -1}) {
    const GroupElement& rep = sign > 0 ? action.gens()[1] : action.gens()[2];
    AxisClass cls;
    cls.length = l0;
    cls.representative = rep;
    cls.descriptor = std::string("mobius axis, ") + (sign > 0 ? "forward" : "backward");
    cls.reference = axis(X, rep.iso);
    cls.stabilizer_gens.push_back(action.gens()[1]);
    out.push_back(std::move(cls));
  }
  out[0].reversal = 1;
  out[1].reversal = 0;
  return out;
}

}  // namespace

std::vector<AxisClass> enumerate_axis_classes(double gamma, const GroupAction& action) {
  if (gamma <= 0) throw std::invalid_argument("enumerate_axis_classes: gamma must be positive");
  switch (detect_shape(action)) {
    case ActionShape::LatticeTranslations:
      return lattice_classes(gamma, action);
    case ActionShape::Dihedral:
      return dihedral_classes(gamma, action);
    case ActionShape::FreeGroup:
      return free_group_classes(gamma, action);
    case ActionShape::MobiusCyclic:
      return mobius_classes(gamma, action);
  }
  throw std::logic_error("enumerate_axis_classes");
}

FlowLineBundle::FlowLineBundle(const GroupAction& action, const AxisClass& cls)
    : action_(&action), cls_(&cls) {
  euclidean_ = !cls.direction.empty() && action.space().kind() == SpaceKind::Euclidean;
  if (euclidean_) {
    std::size_t n = cls.direction.size();
    // orthonormal basis of the complement by Gram-Schmidt over the
    // coordinate vectors
    std::vector<std::vector<double>> basis{cls.direction};
    for (std::size_t i = 0; i < n && basis.size() < n; ++i) {
      std::vector<double> e(n, 0.0);
      e[i] = 1.0;
      for (const auto& b : basis) {
        double dot = 0;
        for (std::size_t k = 0; k < n; ++k) dot += e[k] * b[k];
        for (std::size_t k = 0; k < n; ++k) e[k] -= dot * b[k];
      }
      double norm = 0;
      for (double c : e) norm += c * c;
      norm = std::sqrt(norm);
      if (norm > 1e-9) {
        for (double& c : e) c /= norm;
        basis.push_back(e);
      }
    }
    transversal_.assign(basis.begin() + 1, basis.end());
    // image lattice of the integer translations in the first transversal
    // coordinate: spacing 1/|p| for a primitive direction p
    if (!cls.primitive.empty() && !transversal_.empty()) {
      double norm = cls.length;
      lattice_step_ = norm > 0 ? 1.0 / norm : 0.0;
    }
  }
}

std::vector<double> FlowLineBundle::q(const GeneralizedGeodesic& c) const {
  std::vector<double> out;
  if (!euclidean_) return out;
  SpacePoint at0 = c.evaluate(0.0);
  const auto& p0 = std::get<EuclideanPoint>(at0).x;
  for (const auto& b : transversal_) {
    double dot = 0;
    for (std::size_t i = 0; i < p0.size(); ++i) dot += p0[i] * b[i];
    out.push_back(dot);
  }
  return out;
}

double FlowLineBundle::tau(const GeneralizedGeodesic& c) const {
  const Space& X = action_->space();
  SpacePoint p0 = c.evaluate(0.0);
  if (euclidean_) {
    const auto& v = std::get<EuclideanPoint>(p0).x;
    double dot = 0;
    for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * cls_->direction[i];
    return dot;
  }
  // signed position along the reference line
  double d0 = X.distance(cls_->reference.evaluate(0.0), p0);
  if (d0 < 1e-12) return 0.0;
  if (X.distance(cls_->reference.evaluate(d0), p0) < 1e-6) return d0;
  return -d0;
}

double FlowLineBundle::d_y(const std::vector<double>& a, const std::vector<double>& b) const {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

GeneralizedGeodesic FlowLineBundle::line_at(const std::vector<double>& y, double t) const {
  if (!euclidean_) return cls_->reference.flowed(t);
  std::size_t n = cls_->direction.size();
  std::vector<double> anchor(n, 0.0);
  for (std::size_t k = 0; k < transversal_.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) anchor[i] += y[k] * transversal_[k][i];
  }
  for (std::size_t i = 0; i < n; ++i) anchor[i] += t * cls_->direction[i];
  std::vector<double> nu(n);
  for (std::size_t i = 0; i < n; ++i) nu[i] = -cls_->direction[i];
  return GeneralizedGeodesic::line(action_->space(), EuclideanPoint{anchor}, 0.0,
                                   make_direction(nu), make_direction(cls_->direction));
}

}  // namespace catflow
