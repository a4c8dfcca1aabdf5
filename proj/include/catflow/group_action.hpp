#pragma once

#include <optional>
#include <string>
#include <vector>

#include "catflow/isometry.hpp"

namespace catflow {

struct GroupElement {
  Isometry iso;
  std::string word;  // over generator names, '.'-separated; "e" = identity
};

// A finitely generated group acting by isometries, given by a symmetrized
// generating set that contains the identity.
class GroupAction {
 public:
  GroupAction(const Space& space, SpacePoint base, std::vector<GroupElement> generators,
              std::string name);

  const Space& space() const { return *space_; }
  const SpacePoint& base() const { return base_; }
  const std::string& name() const { return name_; }

  // S = generators, identity first.
  const std::vector<GroupElement>& gens() const { return gens_; }

  // index of an element of S equal to g, if any
  std::optional<std::size_t> find_in_gens(const Isometry& g) const;

  // all (i, j) with gens[i] * gens[j] == s
  std::vector<std::pair<std::size_t, std::size_t>> factorizations(const Isometry& s) const;

  // All distinct elements written as products of at most max_len generators.
  std::vector<GroupElement> enumerate(int max_len) const;

  GroupElement compose_elements(const GroupElement& g, const GroupElement& h) const;
  GroupElement inverse_element(const GroupElement& g) const;
  GroupElement identity() const;

 private:
  const Space* space_;
  SpacePoint base_;
  std::vector<GroupElement> gens_;
  std::string name_;
};

// Bundled example actions.
GroupAction zn_action(std::size_t n);        // Z^n on R^n by unit translations
GroupAction dihedral_action();               // infinite dihedral on R
GroupAction f2_action();                     // F2 on its tree
GroupAction mobius_cyclic_action(double l);  // <diag(l, 1/l)> on H^2

// Presets by name: z1, z2, z3, dihedral, f2, mobius2; or "@file.json".
GroupAction action_by_name(const std::string& name);

// {"space": "...", "base_point": ..., "generators": [...]}
GroupAction action_from_json_text(const std::string& text);
std::string action_to_json_text(const GroupAction& action);

}  // namespace catflow
