#include <doctest.h>

#include <cmath>

#include "catflow/sampling.hpp"
#include "catflow/space.hpp"

using namespace catflow;

namespace {

SpacePoint e2(double x, double y) { return EuclideanPoint{{x, y}}; }
SpacePoint disk(double re, double im = 0.0) { return make_disk_point({re, im}); }
SpacePoint vtx(const std::string& w) { return make_tree_point(w, 0, 0.0); }

// Independent oracle: hyperbolic distance from 0 to r on the real axis by
// integrating the disk line element 2/(1-t^2) with a fine trapezoid rule.
double disk_radial_length(double r, double step = 1e-6) {
  double s = 0.0;
  long n = long(r / step);
  auto f = [](double t) { return 2.0 / (1.0 - t * t); };
  for (long i = 0; i < n; ++i) {
    double a = i * step, b = a + step;
    s += 0.5 * (f(a) + f(b)) * step;
  }
  double a = n * step;
  s += 0.5 * (f(a) + f(r)) * (r - a);
  return s;
}

// Independent oracle: walk the tree path between two vertices step by step.
double brute_tree_vertex_distance(const std::string& u, const std::string& v) {
  std::string cur = u;
  double steps = 0;
  while (common_prefix_len(cur, v) < cur.size()) {  // descend
    cur.pop_back();
    ++steps;
  }
  steps += double(v.size() - cur.size());
  return steps;
}

}  // namespace

TEST_CASE("word reduction and cyclic forms") {
  CHECK(reduce_word("aA") == "");
  CHECK(reduce_word("abBA") == "");
  CHECK(reduce_word("abA") == "abA");
  CHECK(invert_word("ab") == "BA");
  CHECK(concat_words("ab", "BA") == "");
  CHECK(concat_words("ab", "Ba") == "aa");
  CHECK(vertex_distance("a", "B") == 2);
  auto cf = cyclically_reduce("abA");
  CHECK(cf.core == "b");
  CHECK(cf.conjugator == "a");
  CHECK(least_cyclic_rotation("ba") == "ab");
}

TEST_CASE("tree end canonical form") {
  TreeEnd e1 = make_tree_end("a", "ba");
  CHECK(e1.head == "");
  CHECK(e1.cycle == "ab");
  TreeEnd e2 = make_tree_end("", "abab");
  CHECK(e2.cycle == "ab");  // primitive
  CHECK_THROWS(make_tree_end("a", "Ab"));  // head*cycle seam not reduced
  CHECK_THROWS(make_tree_end("", "aA"));
}

TEST_CASE("euclidean distance and interpolation") {
  const Space& X = euclidean_space(2);
  CHECK(X.distance(e2(0, 0), e2(3, 4)) == doctest::Approx(5.0).epsilon(1e-12));
  SpacePoint m = X.interpolate(e2(0, 0), e2(2, 0), 0.5);
  CHECK(X.distance(m, e2(1, 0)) < 1e-12);
  CHECK(X.distance(X.interpolate(e2(1, 2), e2(3, -1), 0.0), e2(1, 2)) < 1e-12);
  CHECK(X.distance(X.interpolate(e2(1, 2), e2(3, -1), 1.0), e2(3, -1)) < 1e-12);
  CHECK_THROWS(X.interpolate(e2(0, 0), e2(1, 0), 1.5));
}

TEST_CASE("tree distance matches brute-force walks") {
  const Space& X = tree_space();
  CHECK(X.distance(vtx("a"), vtx("B")) == doctest::Approx(2.0));
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    SpacePoint u = random_point_in_ball(X, vtx(""), 6.0, rng);
    SpacePoint v = random_point_in_ball(X, vtx(""), 6.0, rng);
    const TreePoint& tu = std::get<TreePoint>(u);
    const TreePoint& tv = std::get<TreePoint>(v);
    if (tu.edge != 0 || tv.edge != 0) continue;
    CHECK(X.distance(u, v) ==
          doctest::Approx(brute_tree_vertex_distance(tu.base, tv.base)).epsilon(1e-12));
  }
}

TEST_CASE("tree interpolation walks the path") {
  const Space& X = tree_space();
  // quarter of the way from aa to bb passes exactly through the vertex a
  SpacePoint p = X.interpolate(vtx("aa"), vtx("bb"), 0.25);
  CHECK(X.distance(p, vtx("a")) < 1e-12);
  SpacePoint mid = X.interpolate(vtx("aa"), vtx("bb"), 0.5);
  CHECK(X.distance(mid, vtx("")) < 1e-12);
  // postcondition on random pairs
  Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    SpacePoint x = random_point_in_ball(X, vtx(""), 5.0, rng);
    SpacePoint y = random_point_in_ball(X, vtx(""), 5.0, rng);
    double t = rng.uniform();
    double d = X.distance(x, y);
    SpacePoint z = X.interpolate(x, y, t);
    CHECK(std::abs(X.distance(x, z) - t * d) < 1e-9);
    CHECK(std::abs(X.distance(z, y) - (1 - t) * d) < 1e-9);
  }
}

TEST_CASE("hyperbolic distance against the line-element oracle") {
  const Space& X = hyperbolic_space();
  double oracle = disk_radial_length(0.5);
  CHECK(X.distance(disk(0), disk(0.5)) == doctest::Approx(oracle).epsilon(1e-9));
  // and the closed form 2 atanh(1/2)
  CHECK(oracle == doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-8));
}

TEST_CASE("hyperbolic rays invert the distance formula") {
  const Space& X = hyperbolic_space();
  for (double s : {0.25, 1.0, 2.0, 5.0}) {
    SpacePoint p = X.ray_point(disk(0), Target{BoundaryPoint{HyperbolicIdeal{0.0}}}, s);
    CHECK(std::abs(std::get<HyperbolicPoint>(p).z.real() - std::tanh(s / 2.0)) < 1e-12);
    CHECK(std::abs(X.distance(disk(0), p) - s) < 1e-10);
  }
}

TEST_CASE("tree rays walk toward an end") {
  const Space& X = tree_space();
  TreeEnd abab = make_tree_end("", "ab");
  SpacePoint r1 = X.ray_point(vtx(""), Target{BoundaryPoint{abab}}, 1.0);
  CHECK(X.distance(r1, vtx("a")) < 1e-12);
  SpacePoint r2 = X.ray_point(vtx(""), Target{BoundaryPoint{abab}}, 2.0);
  CHECK(X.distance(r2, vtx("ab")) < 1e-12);
  SpacePoint r25 = X.ray_point(vtx(""), Target{BoundaryPoint{abab}}, 2.5);
  CHECK(X.distance(r25, vtx("ab")) == doctest::Approx(0.5));
  CHECK(X.distance(r25, vtx("aba")) == doctest::Approx(0.5));
}

TEST_CASE("ball projection clamps radially") {
  const Space& E = euclidean_space(2);
  SpacePoint p = E.project_ball(e2(0, 0), 2.0, Target{e2(10, 0)});
  CHECK(E.distance(p, e2(2, 0)) < 1e-12);
  CHECK(E.distance(E.project_ball(e2(0, 0), 2.0, Target{e2(1, 0)}), e2(1, 0)) < 1e-12);

  const Space& T = tree_space();
  SpacePoint q = T.project_ball(vtx(""), 1.5, Target{BoundaryPoint{make_tree_end("", "a")}});
  CHECK(T.distance(q, make_tree_point("a", 'a', 0.5)) < 1e-12);
}

TEST_CASE("ball projection is idempotent and 1-Lipschitz") {
  Rng rng(7);
  for (const Space* X : {(const Space*)&euclidean_space(2), (const Space*)&tree_space(),
                         (const Space*)&hyperbolic_space()}) {
    SpacePoint o = base_point(*X);
    for (int i = 0; i < 300; ++i) {
      double r = rng.uniform(0.5, 3.0);
      SpacePoint x = random_point_in_ball(*X, o, 6.0, rng);
      SpacePoint y = random_point_in_ball(*X, o, 6.0, rng);
      SpacePoint px = X->project_ball(o, r, Target{x});
      SpacePoint ppx = X->project_ball(o, r, Target{px});
      CHECK(X->distance(px, ppx) < 1e-9);
      SpacePoint py = X->project_ball(o, r, Target{y});
      CHECK(X->distance(px, py) <= X->distance(x, y) + 1e-9);
    }
  }
}

TEST_CASE("metric axioms on random triples") {
  Rng rng(11);
  for (const Space* X : {(const Space*)&euclidean_space(2), (const Space*)&tree_space(),
                         (const Space*)&hyperbolic_space()}) {
    SpacePoint o = base_point(*X);
    for (int i = 0; i < 1000; ++i) {
      SpacePoint x = random_point_in_ball(*X, o, 4.0, rng);
      SpacePoint y = random_point_in_ball(*X, o, 4.0, rng);
      SpacePoint z = random_point_in_ball(*X, o, 4.0, rng);
      double dxy = X->distance(x, y);
      double dyx = X->distance(y, x);
      CHECK(std::abs(dxy - dyx) < 1e-9);
      CHECK(dxy >= 0.0);
      CHECK(X->distance(x, x) < 1e-12);
      CHECK(dxy <= X->distance(x, z) + X->distance(z, y) + 1e-9);
    }
  }
}

TEST_CASE("comparison triangles certify the curvature sign") {
  const Space& E = euclidean_space(2);
  Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    SpacePoint x = random_point_in_ball(E, e2(0, 0), 3.0, rng);
    SpacePoint y = random_point_in_ball(E, e2(0, 0), 3.0, rng);
    SpacePoint z = random_point_in_ball(E, e2(0, 0), 3.0, rng);
    CHECK(std::abs(cat0_sample_check(E, x, y, z, 6)) < 1e-9);
  }
  const Space& T = tree_space();
  CHECK(cat0_sample_check(T, vtx(""), vtx("aa"), vtx("bb"), 8) <= 1e-9);
  const Space& H = hyperbolic_space();
  CHECK(cat0_sample_check(H, disk(0), disk(0.5), disk(0, 0.5), 8) <= 1e-9);
  // degenerate triangle
  SpacePoint deg = e2(1, 1);
  CHECK(cat0_sample_check(E, deg, deg, e2(2, 2), 4) == 0.0);
}

TEST_CASE("random triangles stay CAT(0) on the sample grid") {
  Rng rng(17);
  for (const Space* X : {(const Space*)&tree_space(), (const Space*)&hyperbolic_space()}) {
    SpacePoint o = base_point(*X);
    for (int i = 0; i < 120; ++i) {
      SpacePoint x = random_point_in_ball(*X, o, 3.0, rng);
      SpacePoint y = random_point_in_ball(*X, o, 3.0, rng);
      SpacePoint z = random_point_in_ball(*X, o, 3.0, rng);
      CHECK(cat0_sample_check(*X, x, y, z, 5) <= 1e-9);
    }
  }
}
