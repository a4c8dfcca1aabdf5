#include <doctest.h>

#include <cmath>

#include "catflow/flow_metric.hpp"
#include "catflow/sampling.hpp"

using namespace catflow;

namespace {

SpacePoint e2(double x, double y) { return EuclideanPoint{{x, y}}; }
SpacePoint vtx(const std::string& w) { return make_tree_point(w, 0, 0.0); }

GeneralizedGeodesic x_axis_line(const Space& E) {
  return GeneralizedGeodesic::line(E, e2(0, 0), 0.0, make_direction({-1.0, 0.0}),
                                   make_direction({1.0, 0.0}));
}

// Brute-force reference for the weighted integral, trapezoid rule.
double brute_dist_fs(const GeneralizedGeodesic& c, const GeneralizedGeodesic& d,
                     double window = 40.0, double step = 1e-4) {
  const Space& X = c.space();
  auto f = [&](double t) {
    return X.distance(c.evaluate(t), d.evaluate(t)) / (2.0 * std::exp(std::abs(t)));
  };
  long n = long(2.0 * window / step);
  double s = 0.0;
  double prev = f(-window);
  for (long i = 1; i <= n; ++i) {
    double t = -window + i * step;
    double cur = f(t);
    s += 0.5 * (prev + cur) * step;
    prev = cur;
  }
  return s;
}

}  // namespace

TEST_CASE("evaluation clamps outside the support") {
  const Space& E = euclidean_space(2);
  auto c = GeneralizedGeodesic::segment(E, e2(0, 0), e2(5, 0), 0.0);
  CHECK(E.distance(c.evaluate(-3.0), e2(0, 0)) < 1e-12);
  CHECK(E.distance(c.evaluate(2.0), e2(2, 0)) < 1e-12);
  CHECK(E.distance(c.evaluate(7.0), e2(5, 0)) < 1e-12);
  auto k = GeneralizedGeodesic::constant(E, e2(1, 1));
  CHECK(E.distance(k.evaluate(-9.0), e2(1, 1)) < 1e-12);
  CHECK(E.distance(k.evaluate(3.0), e2(1, 1)) < 1e-12);
}

TEST_CASE("flow shifts the parametrization") {
  const Space& E = euclidean_space(2);
  auto c = GeneralizedGeodesic::segment(E, e2(0, 0), e2(5, 0), 0.0);
  auto c2 = c.flowed(2.0);
  CHECK(c2.lower() == doctest::Approx(-2.0));
  CHECK(c2.upper() == doctest::Approx(3.0));
  for (double t : {-4.0, -2.0, 0.0, 1.5, 3.0, 8.0}) {
    CHECK(E.distance(c2.evaluate(t), c.evaluate(t + 2.0)) < 1e-12);
  }
  auto line = x_axis_line(E);
  auto back = line.flowed(1.7).flowed(-1.7);
  CHECK(dist_fs(back, line).upper < 1e-9);
  CHECK(line.flowed(0.0).structurally_equal(line));
}

TEST_CASE("restriction and the finite-geodesic homotopy") {
  const Space& E = euclidean_space(2);
  auto line = x_axis_line(E);
  auto seg = line.restricted(1.0);
  CHECK(seg.lower() == doctest::Approx(-1.0));
  CHECK(seg.upper() == doctest::Approx(1.0));
  CHECK(E.distance(seg.evaluate(-5.0), e2(-1, 0)) < 1e-12);

  auto s = GeneralizedGeodesic::segment(E, e2(-5, 0), e2(5, 0), -5.0);
  auto unchanged = s.restricted(10.0);
  CHECK(unchanged.structurally_equal(s));

  auto k = GeneralizedGeodesic::constant(E, e2(2, 2));
  CHECK(k.restricted(3.0).structurally_equal(k));

  CHECK(line.pushed_to_finite(0.0).structurally_equal(line));
  auto h1 = line.pushed_to_finite(1.0);
  CHECK(h1.is_constant());
  CHECK(E.distance(h1.evaluate(0.0), line.evaluate(0.0)) < 1e-12);
  auto h = line.pushed_to_finite(std::exp(-2.0));
  CHECK(h.lower() == doctest::Approx(-2.0));
  CHECK(h.upper() == doctest::Approx(2.0));
}

TEST_CASE("endpoints and embeddings") {
  const Space& E = euclidean_space(2);
  auto ray = GeneralizedGeodesic::ray(E, e2(0, 0), make_direction({1.0, 0.0}), 0.0);
  auto [bw, fw] = ray.endpoints();
  CHECK(!is_boundary(bw));
  CHECK(is_boundary(fw));
  auto emb = ray.embed();
  CHECK(emb.c_minus == 0.0);
  CHECK(emb.c_plus == kPlusInf);
  CHECK(E.distance(emb.at_zero, e2(0, 0)) < 1e-12);

  auto seg = GeneralizedGeodesic::segment(E, e2(0, 0), e2(5, 0), 0.0);
  auto fe = seg.embed_finite();
  CHECK(fe.c_minus == 0.0);
  CHECK(E.distance(fe.forward, e2(5, 0)) < 1e-12);
  auto back = GeneralizedGeodesic::from_finite_embedding(E, fe.c_minus, fe.backward, fe.forward);
  CHECK(dist_fs(back, seg).upper < 1e-9);

  auto inv = GeneralizedGeodesic::from_finite_embedding(E, 0.0, e2(0, 0), e2(3, 4));
  CHECK(inv.upper() == doctest::Approx(5.0));

  auto k = GeneralizedGeodesic::constant(E, e2(0, 0));
  CHECK_THROWS(k.embed());
  CHECK_THROWS(GeneralizedGeodesic::from_finite_embedding(E, 0.0, e2(1, 1), e2(1, 1)));
}

TEST_CASE("finite embedding round-trips on random geodesics") {
  Rng rng(23);
  for (const Space* X : {(const Space*)&euclidean_space(2), (const Space*)&tree_space(),
                         (const Space*)&hyperbolic_space()}) {
    SpacePoint o = base_point(*X);
    for (int i = 0; i < 120; ++i) {
      SpacePoint x = random_point_in_ball(*X, o, 4.0, rng);
      SpacePoint y = random_point_in_ball(*X, o, 4.0, rng);
      if (X->same_point(x, y, 1e-6)) continue;
      double r = rng.uniform(-3.0, 3.0);
      auto c = GeneralizedGeodesic::segment(*X, x, y, r);
      auto fe = c.embed_finite();
      auto back = GeneralizedGeodesic::from_finite_embedding(*X, fe.c_minus, fe.backward, fe.forward);
      CHECK(dist_fs(back, c, {1e-10, 1'000'000, true}).upper < 1e-9);
    }
  }
}

TEST_CASE("connect builds rays and segments from the convention") {
  const Space& E = euclidean_space(2);
  auto k = GeneralizedGeodesic::connect(E, e2(1, 1), Target{e2(1, 1)});
  CHECK(k.is_constant());
  auto seg = GeneralizedGeodesic::connect(E, e2(0, 0), Target{e2(0, 7)});
  CHECK(seg.lower() == 0.0);
  CHECK(seg.upper() == doctest::Approx(7.0));
}

TEST_CASE("flow metric closed forms") {
  const Space& E = euclidean_space(2);
  // two constants: the weight integrates to 1
  auto cx = GeneralizedGeodesic::constant(E, e2(0, 0));
  auto cy = GeneralizedGeodesic::constant(E, e2(3, 4));
  auto b = dist_fs(cx, cy);
  CHECK(b.lower <= 5.0);
  CHECK(b.upper >= 5.0 - 1e-12);
  CHECK(b.width() < 1e-9);
  // the adaptive integrator agrees with the shortcut
  FlowMetricConfig no_shortcut{1e-10, 1'000'000, false};
  auto bq = dist_fs(cx, cy, no_shortcut);
  CHECK(bq.lower <= 5.0 + 1e-12);
  CHECK(bq.upper >= 5.0 - 1e-12);
  CHECK(bq.width() < 1e-9);

  // full line against its flow: the numerator is constantly |tau|
  auto line = x_axis_line(E);
  for (double tau : {0.3, -1.2, 2.5}) {
    auto s = dist_fs(line, line.flowed(tau));
    CHECK(s.lower <= std::abs(tau) + 1e-12);
    CHECK(s.upper >= std::abs(tau) - 1e-12);
    CHECK(s.width() < 1e-9);
    double brute = brute_dist_fs(line, line.flowed(tau));
    CHECK(std::abs(s.mid() - brute) < 1e-6);
  }

  auto self = dist_fs(line, line);
  CHECK(self.upper < 1e-9);
}

TEST_CASE("flow metric brackets generic pairs against the brute-force rule") {
  Rng rng(29);
  for (const Space* X : {(const Space*)&euclidean_space(2), (const Space*)&tree_space(),
                         (const Space*)&hyperbolic_space()}) {
    for (int i = 0; i < 12; ++i) {
      auto c = random_geodesic(*X, 2.5, rng);
      auto d = random_geodesic(*X, 2.5, rng);
      auto b = dist_fs(c, d, {1e-8, 1'000'000, true});
      CHECK(b.converged);
      CHECK(b.width() <= 1e-8 + 1e-12);
      double brute = brute_dist_fs(c, d, 35.0, 2e-4);
      CHECK(brute <= b.upper + 1e-5);
      CHECK(brute >= b.lower - 1e-5);
    }
  }
}

TEST_CASE("flow metric axioms on random geodesics") {
  Rng rng(31);
  FlowMetricConfig cfg{1e-7, 400'000, true};
  for (const Space* X : {(const Space*)&euclidean_space(2), (const Space*)&tree_space(),
                         (const Space*)&hyperbolic_space()}) {
    for (int i = 0; i < 60; ++i) {
      auto c = random_geodesic(*X, 2.0, rng);
      auto d = random_geodesic(*X, 2.0, rng);
      auto e = random_geodesic(*X, 2.0, rng);
      auto cd = dist_fs(c, d, cfg);
      auto dc = dist_fs(d, c, cfg);
      CHECK(std::abs(cd.mid() - dc.mid()) < 3e-7);
      auto ce = dist_fs(c, e, cfg);
      auto ed = dist_fs(e, d, cfg);
      CHECK(cd.lower <= ce.upper + ed.upper + 3e-7);
      auto cc = dist_fs(c, c, cfg);
      CHECK(cc.upper < 1e-7);
    }
  }
}

TEST_CASE("flow is Lipschitz in the metric (spot checks)") {
  Rng rng(37);
  FlowMetricConfig cfg{1e-8, 400'000, true};
  const Space& E = euclidean_space(2);
  for (int i = 0; i < 40; ++i) {
    auto c = random_geodesic(E, 2.0, rng);
    auto d = random_geodesic(E, 2.0, rng);
    double tau = rng.uniform(-3.0, 3.0);
    double sigma = rng.uniform(-3.0, 3.0);
    auto lhs = dist_fs(c.flowed(tau), d.flowed(sigma), cfg);
    auto rhs = dist_fs(c, d, cfg);
    CHECK(lhs.upper <=
          std::exp(std::abs(tau)) * rhs.lower + std::abs(sigma - tau) + 1e-6);
  }
}

TEST_CASE("evaluation against metric bounds (spot checks)") {
  Rng rng(41);
  FlowMetricConfig cfg{1e-8, 400'000, true};
  const Space& T = tree_space();
  for (int i = 0; i < 40; ++i) {
    auto c = random_geodesic(T, 2.0, rng);
    auto d = random_geodesic(T, 2.0, rng);
    double t0 = rng.uniform(-3.0, 3.0);
    double D = T.distance(c.evaluate(t0), d.evaluate(t0));
    auto fsb = dist_fs(c, d, cfg);
    CHECK(D <= std::exp(std::abs(t0)) * fsb.upper + 2.0 + 1e-6);
    // lower bound from the comparison argument
    double lower = std::exp(-std::abs(t0)) * (2.0 * std::exp(-D / 2.0) + D - 2.0);
    CHECK(fsb.upper >= lower - 1e-6);
  }
}
