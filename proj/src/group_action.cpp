#include "catflow/group_action.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace catflow {

namespace {

std::string join_word(const std::string& a, const std::string& b) {
  if (a == "e") return b;
  if (b == "e") return a;
  return a + "." + b;
}

}  // namespace

GroupAction::GroupAction(const Space& space, SpacePoint base,
                         std::vector<GroupElement> generators, std::string name)
    : space_(&space), base_(std::move(base)), name_(std::move(name)) {
  gens_.push_back(GroupElement{identity_isometry(space), "e"});
  for (auto& g : generators) {
    if (is_identity(g.iso)) continue;
    if (!find_in_gens(g.iso)) gens_.push_back(g);
  }
  // close under inverses
  std::size_t fixed = gens_.size();
  for (std::size_t i = 1; i < fixed; ++i) {
    Isometry inv = inverse_of(gens_[i].iso);
    if (!find_in_gens(inv)) {
      gens_.push_back(GroupElement{std::move(inv), gens_[i].word + "'"});
    }
  }
}

std::optional<std::size_t> GroupAction::find_in_gens(const Isometry& g) const {
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (isometry_equal(gens_[i].iso, g)) return i;
  }
  return std::nullopt;
}

std::vector<std::pair<std::size_t, std::size_t>> GroupAction::factorizations(
    const Isometry& s) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    for (std::size_t j = 0; j < gens_.size(); ++j) {
      if (isometry_equal(compose(gens_[i].iso, gens_[j].iso), s)) out.emplace_back(i, j);
    }
  }
  return out;
}

std::vector<GroupElement> GroupAction::enumerate(int max_len) const {
  std::map<std::string, GroupElement> seen;
  std::vector<GroupElement> frontier{identity()};
  seen[isometry_key(frontier[0].iso)] = frontier[0];
  for (int len = 1; len <= max_len; ++len) {
    std::vector<GroupElement> next;
    for (const auto& g : frontier) {
      for (std::size_t i = 1; i < gens_.size(); ++i) {
        GroupElement h = compose_elements(g, gens_[i]);
        std::string key = isometry_key(h.iso);
        if (seen.emplace(key, h).second) next.push_back(std::move(h));
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  std::vector<GroupElement> out;
  out.reserve(seen.size());
  for (auto& [k, v] : seen) out.push_back(std::move(v));
  return out;
}

GroupElement GroupAction::compose_elements(const GroupElement& g, const GroupElement& h) const {
  GroupElement out;
  out.iso = compose(g.iso, h.iso);
  if (is_identity(out.iso)) {
    out.word = "e";
  } else {
    out.word = join_word(g.word, h.word);
  }
  return out;
}

GroupElement GroupAction::inverse_element(const GroupElement& g) const {
  GroupElement out;
  out.iso = inverse_of(g.iso);
  if (auto i = find_in_gens(out.iso)) {
    out.word = gens_[*i].word;
  } else if (g.word == "e") {
    out.word = "e";
  } else {
    out.word = "(" + g.word + ")'";
  }
  return out;
}

GroupElement GroupAction::identity() const {
  return GroupElement{identity_isometry(*space_), "e"};
}

GroupAction zn_action(std::size_t n) {
  const Space& X = euclidean_space(n);
  std::vector<GroupElement> gens;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(n, 0.0);
    v[i] = 1.0;
    gens.push_back(GroupElement{euclidean_translation(v), "t" + std::to_string(i + 1)});
  }
  return GroupAction(X, EuclideanPoint{std::vector<double>(n, 0.0)}, std::move(gens),
                     "z" + std::to_string(n));
}

GroupAction dihedral_action() {
  const Space& X = euclidean_space(1);
  std::vector<GroupElement> gens;
  gens.push_back(GroupElement{euclidean_translation({1.0}), "t"});
  gens.push_back(GroupElement{euclidean_linear({-1.0}, {0.0}), "s"});
  return GroupAction(X, EuclideanPoint{{0.0}}, std::move(gens), "dihedral");
}

GroupAction f2_action() {
  const Space& X = tree_space();
  std::vector<GroupElement> gens;
  gens.push_back(GroupElement{tree_isometry("a"), "a"});
  gens.push_back(GroupElement{tree_isometry("b"), "b"});
  return GroupAction(X, make_tree_point("", 0, 0.0), std::move(gens), "f2");
}

GroupAction mobius_cyclic_action(double l) {
  if (l <= 1.0) throw std::invalid_argument("mobius_cyclic_action: need l > 1");
  const Space& X = hyperbolic_space();
  std::vector<GroupElement> gens;
  gens.push_back(GroupElement{mobius_isometry(l, 0, 0, 1.0 / l), "g"});
  return GroupAction(X, make_disk_point(0.0), std::move(gens), "mobius");
}

namespace {

SpacePoint base_point_from_json(const nlohmann::json& j, const Space& X) {
  if (!j.contains("base_point")) {
    switch (X.kind()) {
      case SpaceKind::Euclidean:
        return EuclideanPoint{
            std::vector<double>(static_cast<const EuclideanSpace&>(X).dim(), 0.0)};
      case SpaceKind::Tree:
        return make_tree_point("", 0, 0.0);
      case SpaceKind::Hyperbolic:
        return make_disk_point(0.0);
    }
  }
  const auto& bj = j["base_point"];
  switch (X.kind()) {
    case SpaceKind::Euclidean:
      return EuclideanPoint{bj.get<std::vector<double>>()};
    case SpaceKind::Tree:
      return make_tree_point(bj.get<std::string>(), 0, 0.0);
    case SpaceKind::Hyperbolic: {
      auto v = bj.get<std::vector<double>>();
      return make_disk_point({v[0], v[1]});
    }
  }
  throw std::invalid_argument("action json: bad base_point");
}

GroupAction action_from_json(const nlohmann::json& j) {
  std::string space_name = j.at("space").get<std::string>();
  const Space& X = space_by_name(space_name);
  SpacePoint base = base_point_from_json(j, X);
  std::vector<GroupElement> gens;
  int idx = 0;
  for (const auto& gj : j.at("generators")) {
    ++idx;
    std::string nm = gj.contains("name") ? gj["name"].get<std::string>()
                                         : "g" + std::to_string(idx);
    if (gj.contains("translation")) {
      gens.push_back(
          GroupElement{euclidean_translation(gj["translation"].get<std::vector<double>>()), nm});
    } else if (gj.contains("matrix") && X.kind() == SpaceKind::Hyperbolic) {
      auto m = gj["matrix"].get<std::vector<double>>();
      gens.push_back(GroupElement{mobius_isometry(m[0], m[1], m[2], m[3]), nm});
    } else if (gj.contains("linear")) {
      auto Q = gj["linear"].get<std::vector<double>>();
      std::size_t n = std::size_t(std::lround(std::sqrt(double(Q.size()))));
      std::vector<double> off(n, 0.0);
      if (gj.contains("offset")) off = gj["offset"].get<std::vector<double>>();
      gens.push_back(GroupElement{euclidean_linear(std::move(Q), std::move(off)), nm});
    } else if (gj.contains("word")) {
      gens.push_back(GroupElement{tree_isometry(gj["word"].get<std::string>()), nm});
    } else {
      throw std::invalid_argument("action json: unknown generator form");
    }
  }
  std::string name = j.value("name", "custom");
  return GroupAction(X, std::move(base), std::move(gens), name);
}

}  // namespace

GroupAction action_by_name(const std::string& name) {
  if (!name.empty() && name[0] == '@') {
    std::ifstream in(name.substr(1));
    if (!in) throw std::invalid_argument("cannot open action file: " + name.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    return action_from_json_text(ss.str());
  }
  if (name == "z1") return zn_action(1);
  if (name == "z2") return zn_action(2);
  if (name == "z3") return zn_action(3);
  if (name == "dihedral") return dihedral_action();
  if (name == "f2") return f2_action();
  if (name == "mobius" || name == "mobius2") return mobius_cyclic_action(2.0);
  throw std::invalid_argument("unknown action: " + name);
}

GroupAction action_from_json_text(const std::string& text) {
  return action_from_json(nlohmann::json::parse(text));
}

std::string action_to_json_text(const GroupAction& action) {
  nlohmann::json j;
  j["name"] = action.name();
  j["space"] = action.space().name();
  switch (action.space().kind()) {
    case SpaceKind::Euclidean:
      j["base_point"] = std::get<EuclideanPoint>(action.base()).x;
      break;
    case SpaceKind::Tree:
      j["base_point"] = std::get<TreePoint>(action.base()).base;
      break;
    case SpaceKind::Hyperbolic: {
      auto z = std::get<HyperbolicPoint>(action.base()).z;
      j["base_point"] = {z.real(), z.imag()};
      break;
    }
  }
  nlohmann::json gens = nlohmann::json::array();
  for (std::size_t i = 1; i < action.gens().size(); ++i) {
    const auto& g = action.gens()[i];
    nlohmann::json gj;
    gj["name"] = g.word;
    if (const auto* e = std::get_if<EuclideanIsometry>(&g.iso)) {
      bool pure = true;
      for (std::size_t r = 0; r < e->n && pure; ++r)
        for (std::size_t c = 0; c < e->n && pure; ++c)
          if (std::abs(e->Q[r * e->n + c] - (r == c ? 1.0 : 0.0)) > 1e-12) pure = false;
      if (pure) {
        gj["translation"] = e->v;
      } else {
        gj["linear"] = e->Q;
        gj["offset"] = e->v;
      }
    } else if (const auto* t = std::get_if<TreeIsometry>(&g.iso)) {
      gj["word"] = t->word;
    } else {
      const auto& m = std::get<MobiusIsometry>(g.iso);
      gj["matrix"] = {m.a, m.b, m.c, m.d};
    }
    gens.push_back(gj);
  }
  j["generators"] = gens;
  return j.dump(2);
}

}  // namespace catflow
