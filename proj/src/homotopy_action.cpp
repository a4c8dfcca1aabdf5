#include "catflow/homotopy_action.hpp"

#include <stdexcept>

namespace catflow {

HomotopySAction::HomotopySAction(const GroupAction& action, double R)
    : action_(&action), x0_(action.base()), R_(R) {
  if (R <= 0.0) throw std::invalid_argument("homotopy action: radius must be positive");
}

bool HomotopySAction::in_ball(const SpacePoint& x, double slack) const {
  return space().distance(x0_, x) <= R_ + slack;
}

SpacePoint HomotopySAction::phi(std::size_t gen_index, const SpacePoint& x) const {
  if (!in_ball(x)) throw std::invalid_argument("phi: point outside the ball");
  const auto& g = action_->gens().at(gen_index);
  return space().project_ball(x0_, R_, Target{apply_point(g.iso, x)});
}

SpacePoint HomotopySAction::homotopy(std::size_t g_index, std::size_t h_index,
                                     const SpacePoint& x, double t) const {
  if (!in_ball(x)) throw std::invalid_argument("homotopy: point outside the ball");
  const auto& g = action_->gens().at(g_index);
  const auto& h = action_->gens().at(h_index);
  Isometry gh = compose(g.iso, h.iso);
  if (!action_->find_in_gens(gh)) {
    throw std::invalid_argument("homotopy: product of the factors is not in S");
  }
  SpacePoint hx = apply_point(h.iso, x);
  SpacePoint inner = space().project_ball(x0_, R_, Target{hx});
  SpacePoint from = apply_point(g.iso, inner);  // g rho(h x)
  SpacePoint to = apply_point(g.iso, hx);       // g h x
  SpacePoint z = space().interpolate(from, to, t);
  return space().project_ball(x0_, R_, Target{z});
}

SpacePoint HomotopySAction::apply_f(const FMap& f, const SpacePoint& x) const {
  return homotopy(f.r_index, f.sp_index, x, f.t);
}

std::vector<HomotopySAction::FMap> HomotopySAction::f_set(
    std::size_t s_index, const std::vector<double>& t_grid) const {
  std::vector<FMap> out;
  const auto& s = action_->gens().at(s_index);
  for (auto [i, j] : action_->factorizations(s.iso)) {
    for (double t : t_grid) out.push_back(FMap{i, j, t});
  }
  return out;
}

const std::vector<double>& HomotopySAction::default_t_grid() {
  static const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  return grid;
}

GeneralizedGeodesic iota(const GroupAction& action, const Isometry& g, const SpacePoint& x) {
  SpacePoint gx0 = apply_point(g, action.base());
  SpacePoint gx = apply_point(g, x);
  return GeneralizedGeodesic::connect(action.space(), gx0, Target{gx});
}

namespace {

// Try to solve ftilde(x) = y exactly: when no projection clamps, ftilde acts
// as the isometry b = r s', so x = b^-1 y is a candidate; verify and reject
// otherwise.
bool solve_link(const HomotopySAction& h, const HomotopySAction::FMap& ftilde,
                const SpacePoint& y, SpacePoint& x_out) {
  const auto& gens = h.action().gens();
  Isometry b = compose(gens[ftilde.r_index].iso, gens[ftilde.sp_index].iso);
  SpacePoint candidate = apply_point(inverse_of(b), y);
  if (!h.in_ball(candidate)) return false;
  SpacePoint image = h.apply_f(ftilde, candidate);
  if (h.space().distance(image, y) > 1e-9) return false;
  x_out = candidate;
  return true;
}

}  // namespace

std::vector<ChainWitness> sample_chains(const HomotopySAction& h, const GroupElement& g,
                                        const SpacePoint& x, int n, int budget, Rng& rng) {
  const GroupAction& A = h.action();
  const auto& gens = A.gens();
  const auto& grid = HomotopySAction::default_t_grid();
  std::vector<ChainWitness> out;

  // the stationary chain (a_i = b_i, f_i = ftilde_i, x_i constant) always
  // certifies (g, x) itself
  {
    ChainWitness w;
    w.h = g;
    w.y = x;
    for (int i = 0; i < n; ++i) {
      ChainLink link;
      link.a_index = link.b_index = 0;
      link.f = link.ftilde = HomotopySAction::FMap{0, 0, 1.0};
      link.x_prev = link.x_next = x;
      link.matched = x;
      w.links.push_back(link);
    }
    out.push_back(std::move(w));
  }

  for (int attempt = 0; attempt < budget; ++attempt) {
    ChainWitness w;
    w.h = g;
    SpacePoint cur = x;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      ChainLink link;
      link.a_index = std::size_t(rng.uniform_int(0, long(gens.size()) - 1));
      link.b_index = std::size_t(rng.uniform_int(0, long(gens.size()) - 1));
      auto fs_a = h.f_set(link.a_index, grid);
      auto fs_b = h.f_set(link.b_index, grid);
      if (fs_a.empty() || fs_b.empty()) {
        ok = false;
        break;
      }
      link.f = fs_a[std::size_t(rng.uniform_int(0, long(fs_a.size()) - 1))];
      link.ftilde = fs_b[std::size_t(rng.uniform_int(0, long(fs_b.size()) - 1))];
      link.x_prev = cur;
      link.matched = h.apply_f(link.f, cur);
      if (!solve_link(h, link.ftilde, link.matched, link.x_next)) {
        ok = false;
        break;
      }
      cur = link.x_next;
      GroupElement ai = gens[link.a_index];
      GroupElement bi = gens[link.b_index];
      w.h = A.compose_elements(A.compose_elements(w.h, A.inverse_element(ai)), bi);
      w.links.push_back(link);
    }
    if (ok) {
      w.y = cur;
      out.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace catflow
