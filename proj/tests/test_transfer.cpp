#include <doctest.h>

#include <cmath>

#include "catflow/estimates.hpp"

using namespace catflow;

namespace {

SpacePoint e2(double x, double y) { return EuclideanPoint{{x, y}}; }
SpacePoint e1(double x) { return EuclideanPoint{{x}}; }

// quadrature cross-check for the tail integral of (1+t)e^{-t}
double tail_quadrature(double a, double upto = 60.0, double step = 1e-4) {
  double s = 0.0;
  auto f = [](double t) { return (1.0 + t) * std::exp(-t); };
  for (double t = a; t + step <= upto; t += step) {
    s += 0.5 * (f(t) + f(t + step)) * step;
  }
  return s;
}

}  // namespace

TEST_CASE("homotopy action identities") {
  GroupAction Z1 = action_by_name("z1");
  HomotopySAction h(Z1, 10.0);
  Rng rng(71);
  // H_{e,e}(-, t) = phi_e = id
  for (int i = 0; i < 200; ++i) {
    SpacePoint x = e1(rng.uniform(-10.0, 10.0));
    double t = rng.uniform();
    CHECK(Z1.space().distance(h.homotopy(0, 0, x, t), x) < 1e-9);
    CHECK(Z1.space().distance(h.phi(0, x), x) < 1e-12);
  }
  // radial clamp: g = +3 applied at x = 9 with R = 10
  auto plus = Z1.find_in_gens(euclidean_translation({3.0}));
  if (!plus) {
    // +3 is not a generator; build the action value by hand through phi of
    // the generator applied three times instead
    SpacePoint x = e1(9.0);
    auto t1 = Z1.find_in_gens(euclidean_translation({1.0}));
    REQUIRE(t1);
    SpacePoint y = x;
    for (int k = 0; k < 3; ++k) y = h.phi(*t1, y);
    CHECK(Z1.space().distance(y, e1(10.0)) < 1e-9);
  }
  // interior points just move
  auto t1 = Z1.find_in_gens(euclidean_translation({1.0}));
  REQUIRE(t1);
  CHECK(Z1.space().distance(h.phi(*t1, e1(2.0)), e1(3.0)) < 1e-12);
  CHECK_THROWS(h.phi(*t1, e1(25.0)));
}

TEST_CASE("homotopy endpoints match the composed projections") {
  Rng rng(73);
  for (const char* name : {"z2", "dihedral", "f2"}) {
    GroupAction A = action_by_name(name);
    const Space& X = A.space();
    HomotopySAction h(A, 6.0);
    const auto& gens = A.gens();
    int checked = 0;
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      for (std::size_t hi = 0; hi < gens.size(); ++hi) {
        if (!A.find_in_gens(compose(gens[gi].iso, gens[hi].iso))) continue;
        for (int i = 0; i < 25; ++i) {
          SpacePoint x = random_point_in_ball(X, A.base(), 6.0, rng);
          SpacePoint h0 = h.homotopy(gi, hi, x, 0.0);
          SpacePoint want0 = h.phi(gi, h.phi(hi, x));
          CHECK(X.distance(h0, want0) < 1e-9);
          SpacePoint h1 = h.homotopy(gi, hi, x, 1.0);
          auto ghi = A.find_in_gens(compose(gens[gi].iso, gens[hi].iso));
          SpacePoint want1 = h.phi(*ghi, x);
          CHECK(X.distance(h1, want1) < 1e-9);
          ++checked;
        }
      }
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("F_s enumerates factorizations times the grid") {
  GroupAction Z2 = action_by_name("z2");
  HomotopySAction h(Z2, 8.0);
  const auto& grid = HomotopySAction::default_t_grid();
  // s = e factors as (g, g^-1) for every generator: 5 ways for Z^2
  auto fs_e = h.f_set(0, grid);
  CHECK(fs_e.size() == Z2.factorizations(Z2.gens()[0].iso).size() * grid.size());
  // with t = 1 every member acts as phi_s
  Rng rng(79);
  for (std::size_t s = 0; s < Z2.gens().size(); ++s) {
    auto fs = h.f_set(s, {1.0});
    for (const auto& f : fs) {
      for (int i = 0; i < 10; ++i) {
        SpacePoint x = random_point_in_ball(Z2.space(), Z2.base(), 8.0, rng);
        CHECK(Z2.space().distance(h.apply_f(f, x), h.phi(s, x)) < 1e-9);
      }
    }
  }
  // the identity factorization of e acts as the identity
  for (double t : grid) {
    SpacePoint x = e2(1.0, -2.0);
    CHECK(Z2.space().distance(h.homotopy(0, 0, x, t), x) < 1e-12);
  }
}

TEST_CASE("sampled chains satisfy the matching equations") {
  Rng rng(83);
  GroupAction Z1 = action_by_name("z1");
  HomotopySAction h(Z1, 12.0);
  GroupElement g = Z1.gens()[1];  // a unit translation
  SpacePoint x = e1(0.5);
  auto chains = sample_chains(h, g, x, 3, 40, rng);
  CHECK(chains.size() > 1);  // stationary plus solved random chains
  // stationary chain certifies (g, x)
  CHECK(chains[0].y.index() == x.index());
  CHECK(Z1.space().distance(chains[0].y, x) < 1e-12);
  CHECK(isometry_equal(chains[0].h.iso, g.iso));
  for (const auto& w : chains) {
    SpacePoint cur = x;
    for (const auto& link : w.links) {
      CHECK(Z1.space().distance(link.x_prev, cur) < 1e-9);
      SpacePoint lhs = h.apply_f(link.f, link.x_prev);
      SpacePoint rhs = h.apply_f(link.ftilde, link.x_next);
      CHECK(Z1.space().distance(lhs, rhs) < 1e-8);
      cur = link.x_next;
    }
    CHECK(Z1.space().distance(w.y, cur) < 1e-12);
  }
}

TEST_CASE("iota is the equivariant segment map") {
  GroupAction Z2 = action_by_name("z2");
  const Space& X = Z2.space();
  auto c = iota(Z2, identity_isometry(X), e2(5, 0));
  CHECK(c.lower() == 0.0);
  CHECK(c.upper() == doctest::Approx(5.0));
  auto k = iota(Z2, euclidean_translation({2.0, 1.0}), Z2.base());
  CHECK(k.is_constant());
  CHECK(X.distance(k.evaluate(0), e2(2, 1)) < 1e-12);
  Rng rng(89);
  auto elems = Z2.enumerate(2);
  for (int i = 0; i < 30; ++i) {
    SpacePoint x = random_point_in_ball(X, Z2.base(), 4.0, rng);
    const auto& hE = elems[std::size_t(rng.uniform_int(0, long(elems.size()) - 1))];
    const auto& gE = elems[std::size_t(rng.uniform_int(0, long(elems.size()) - 1))];
    auto lhs = iota(Z2, compose(hE.iso, gE.iso), x);
    auto rhs = apply_fs(hE.iso, iota(Z2, gE.iso, x));
    CHECK(dist_fs(lhs, rhs).upper < 1e-9);
  }
}

TEST_CASE("constant selection solves the three conditions") {
  // delta = 3: the tail equation (2 + r')e^{-r'} = 1 has root near 1.146
  auto c = select_constants_g(1.0, 1.0, 3.0);
  CHECK((2.0 + c.r_prime) * std::exp(-c.r_prime) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(c.r_prime == doctest::Approx(1.1462).epsilon(1e-3));
  // closed form of the tail vs quadrature
  CHECK(tail_quadrature(c.r_prime) == doctest::Approx(1.0).epsilon(1e-4));
  validate_constants_g(c);

  // monotone: smaller delta gives larger T and r
  auto c1 = select_constants_g(1.0, 1.0, 0.5);
  auto c2 = select_constants_g(1.0, 1.0, 0.1);
  auto c3 = select_constants_g(1.0, 1.0, 0.01);
  CHECK(c1.T < c2.T);
  CHECK(c2.T < c3.T);
  CHECK(c1.r < c2.r);
  CHECK(c2.r < c3.r);
  validate_constants_g(c1);
  validate_constants_g(c2);
  validate_constants_g(c3);

  // windowed variant keeps the conditions at the shrunk window
  auto cw = select_constants_g(1.0, 1.0, 0.5, 6.0);
  validate_constants_g(cw);
  CHECK(cw.r_prime == doctest::Approx(c1.r_prime + 6.0));
}

TEST_CASE("flow estimate holds on samples (small smoke runs)") {
  Rng rng(97);
  auto c = select_constants_g(1.0, 1.0, 0.5);
  for (const Space* X : {(const Space*)&euclidean_space(2), (const Space*)&tree_space(),
                         (const Space*)&hyperbolic_space()}) {
    auto rep = verify_estimate_g(*X, c, 120, rng);
    CHECK(rep.pass);
    CHECK(rep.max_deviation <= 0.5);
  }
  // equal starting points give deviation ~ 0
  const Space& E = euclidean_space(2);
  SpacePoint x1 = e2(0, 0);
  SpacePoint x = e2(7, 3);
  auto g1 = GeneralizedGeodesic::connect(E, x1, Target{E.project_ball(x1, c.r, Target{x})});
  CHECK(dist_fs(g1.flowed(c.T), g1.flowed(c.T)).upper < 1e-9);
  // 1D collinear: the shifted geodesics coincide
  const Space& R1 = euclidean_space(1);
  SpacePoint y1 = e1(0.0), y2 = e1(0.7), y = e1(40.0);
  double tau = R1.distance(y2, y) - R1.distance(y1, y);
  auto d1 = GeneralizedGeodesic::connect(R1, y1, Target{R1.project_ball(y1, c.r, Target{y})});
  auto d2 = GeneralizedGeodesic::connect(R1, y2, Target{R1.project_ball(y2, c.r, Target{y})});
  CHECK(dist_fs(d1.flowed(c.T), d2.flowed(c.T + tau)).upper < 1e-6);
}

TEST_CASE("triangle window bound on samples") {
  Rng rng(101);
  for (const Space* X : {(const Space*)&euclidean_space(2), (const Space*)&tree_space(),
                         (const Space*)&hyperbolic_space()}) {
    auto rep = verify_triangle_window(*X, 1.0, 1.0, 2.0, 5.0, 150, rng);
    CHECK(rep.pass);
  }
}

TEST_CASE("homotopy estimate holds on samples (smoke)") {
  Rng rng(103);
  for (const char* name : {"z2", "dihedral"}) {
    GroupAction A = action_by_name(name);
    auto c = select_constants_H(A, 0.5);
    auto rep = verify_estimate_H(A, c, 60, rng);
    CHECK(rep.pass);
    CHECK(std::abs(rep.worst_tau) <= c.beta + 1e-9);
  }
}

TEST_CASE("chain estimate composes the shifts (smoke)") {
  Rng rng(107);
  GroupAction A = action_by_name("z1");
  double eps = 0.3;
  int n = 2;
  auto c = select_constants_H(A, eps, 2.0 * n * 2.0);
  auto rep = verify_chain(A, c, n, eps, 60, rng);
  CHECK(rep.pass);
}
