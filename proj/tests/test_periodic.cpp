#include <doctest.h>

#include <cmath>
#include <set>

#include "catflow/cover.hpp"
#include "catflow/set_extension.hpp"

using namespace catflow;

namespace {

SpacePoint e2(double x, double y) { return EuclideanPoint{{x, y}}; }

GeneralizedGeodesic line2(const Space& E, SpacePoint anchor, std::vector<double> u) {
  std::vector<double> nu{-u[0], -u[1]};
  return GeneralizedGeodesic::line(E, std::move(anchor), 0.0, make_direction(nu),
                                   make_direction(u));
}

std::vector<SpacePoint> unit_cell_samples(const GroupAction& A, Rng& rng, int n) {
  std::vector<SpacePoint> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(random_point_in_ball(A.space(), A.base(), 0.9, rng));
  }
  return out;
}

}  // namespace

TEST_CASE("periods of flow lines") {
  GroupAction Z2 = action_by_name("z2");
  const Space& E = Z2.space();
  auto cx = GeneralizedGeodesic::constant(E, e2(0.3, 0.7));
  CHECK(g_period(cx, Z2, 4.0, 4) == 0.0);

  auto ax = axis(E, euclidean_translation({1.0, 0.0}));
  CHECK(g_period(ax, Z2, 4.0, 4) == doctest::Approx(1.0));

  auto diag = axis(E, euclidean_translation({1.0, 1.0}));
  CHECK(g_period(diag, Z2, 4.0, 4) == doctest::Approx(std::sqrt(2.0)));

  // an irrational direction admits no period in the searched range
  double s2 = std::sqrt(2.0);
  auto irr = line2(E, e2(0, 0), {1.0 / std::sqrt(1 + 2.0), s2 / std::sqrt(1 + 2.0)});
  CHECK(std::isinf(g_period(irr, Z2, 4.0, 4)));

  // conjugation invariance on samples
  Rng rng(113);
  auto elems = Z2.enumerate(2);
  for (int i = 0; i < 10; ++i) {
    const auto& g = elems[std::size_t(rng.uniform_int(0, long(elems.size()) - 1))];
    CHECK(g_period(apply_fs(g.iso, ax), Z2, 4.0, 4) == doctest::Approx(1.0));
  }
}

TEST_CASE("axis classes for the lattice actions") {
  GroupAction Z2 = action_by_name("z2");
  auto cl1 = enumerate_axis_classes(1.0, Z2);
  CHECK(cl1.size() == 4);  // oriented: +-e1, +-e2
  std::set<int> merged;
  for (std::size_t i = 0; i < cl1.size(); ++i) {
    CHECK(cl1[i].reversal >= 0);
    merged.insert(int(std::min(i, std::size_t(cl1[i].reversal))));
  }
  CHECK(merged.size() == 2);

  auto cl = enumerate_axis_classes(2.3, Z2);
  CHECK(cl.size() == 16);
  std::set<std::vector<long>> expected;
  for (std::vector<long> p : {std::vector<long>{1, 0}, {0, 1}, {1, 1}, {1, -1},
                              {1, 2}, {2, 1}, {1, -2}, {2, -1}}) {
    expected.insert(p);
    expected.insert({-p[0], -p[1]});
  }
  std::set<std::vector<long>> got;
  for (const auto& c : cl) got.insert(c.primitive);
  CHECK(got == expected);
  // merged count: 8 direction pairs
  std::set<int> merged23;
  for (std::size_t i = 0; i < cl.size(); ++i)
    merged23.insert(int(std::min(i, std::size_t(cl[i].reversal))));
  CHECK(merged23.size() == 8);
}

TEST_CASE("axis classes for the free group") {
  GroupAction F2 = action_by_name("f2");
  auto cl = enumerate_axis_classes(1.0, F2);
  CHECK(cl.size() == 4);  // a, A, b, B as oriented families
  std::set<int> merged;
  for (std::size_t i = 0; i < cl.size(); ++i) {
    CHECK(cl[i].reversal >= 0);
    merged.insert(int(std::min(i, std::size_t(cl[i].reversal))));
  }
  CHECK(merged.size() == 2);

  auto cl2 = enumerate_axis_classes(2.0, F2);
  // length-2 cyclic words up to rotation: ab, aB, Ab, AB, aa, AA, bb, BB
  // of which the primitive ones are the 4 mixed ones; plus the 4 length-1
  CHECK(cl2.size() == 8);
  for (const auto& c : cl2) {
    auto cls = classify(F2.space(), c.representative.iso);
    CHECK(cls == IsometryClass::Hyperbolic);
    CHECK(translation_length(F2.space(), c.representative.iso) == doctest::Approx(c.length));
  }
}

TEST_CASE("flow line bundles decompose lattice families") {
  GroupAction Z2 = action_by_name("z2");
  const Space& E = Z2.space();
  auto cl = enumerate_axis_classes(1.0, Z2);
  // find the +e1 class
  const AxisClass* e1cls = nullptr;
  for (const auto& c : cl)
    if (c.primitive == std::vector<long>{1, 0}) e1cls = &c;
  REQUIRE(e1cls);
  FlowLineBundle b(Z2, *e1cls);
  CHECK(b.euclidean_family());
  CHECK(b.lattice_step() == doctest::Approx(1.0));

  auto line = line2(E, e2(0, 5), {1.0, 0.0});
  auto q = b.q(line);
  REQUIRE(q.size() == 1);
  CHECK(std::abs(std::abs(q[0]) - 5.0) < 1e-12);
  CHECK(b.tau(line) == doctest::Approx(0.0));
  CHECK(b.tau(line.flowed(2.5)) == doctest::Approx(2.5));

  // product metric: parallel lines at transversal distance h and shift s
  Rng rng(127);
  for (int i = 0; i < 60; ++i) {
    double y1 = rng.uniform(-2, 2), y2 = rng.uniform(-2, 2);
    double s1 = rng.uniform(-2, 2), s2 = rng.uniform(-2, 2);
    auto c1 = b.line_at({y1}, s1);
    auto c2 = b.line_at({y2}, s2);
    double want = std::hypot(y1 - y2, s1 - s2);
    auto d = dist_fs(c1, c2, {1e-8, 400'000, true});
    CHECK(std::abs(d.mid() - want) < 1e-6);
    // cocycle is exact
    double t = rng.uniform(-3, 3);
    CHECK(b.tau(c1.flowed(t)) == doctest::Approx(b.tau(c1) + t).epsilon(1e-12));
  }
}

TEST_CASE("set extension laws on finite nets") {
  Rng rng(131);
  for (const Space* X : {(const Space*)&euclidean_space(2), (const Space*)&tree_space(),
                         (const Space*)&hyperbolic_space()}) {
    auto metric = [X](const SpacePoint& a, const SpacePoint& b) { return X->distance(a, b); };
    for (int rep = 0; rep < 20; ++rep) {
      // a finite invariant-free ambient sample: A as a point list
      std::vector<SpacePoint> A;
      for (int i = 0; i < 40; ++i)
        A.push_back(random_point_in_ball(*X, base_point(*X), 3.0, rng));
      std::vector<bool> inU(A.size()), inV(A.size());
      for (std::size_t i = 0; i < A.size(); ++i) {
        inU[i] = rng.uniform() < 0.5;
        inV[i] = rng.uniform() < 0.5;
      }
      auto split = [&](const std::vector<bool>& flag) {
        std::vector<SpacePoint> yes, no;
        for (std::size_t i = 0; i < A.size(); ++i) (flag[i] ? yes : no).push_back(A[i]);
        return std::pair{yes, no};
      };
      auto [U, Uc] = split(inU);
      auto [V, Vc] = split(inV);
      std::vector<bool> inUV(A.size());
      for (std::size_t i = 0; i < A.size(); ++i) inUV[i] = inU[i] && inV[i];
      auto [UV, UVc] = split(inUV);

      auto zU = extend_open(U, Uc, metric);
      auto zV = extend_open(V, Vc, metric);
      auto zUV = extend_open(UV, UVc, metric);

      for (int k = 0; k < 50; ++k) {
        SpacePoint z = random_point_in_ball(*X, base_point(*X), 3.5, rng);
        // intersection law
        CHECK(zUV.contains(z) == (zU.contains(z) && zV.contains(z)));
      }
      // restriction law: on the finite subspace every subset is open
      for (std::size_t i = 0; i < A.size(); ++i) {
        CHECK(zU.contains(A[i]) == inU[i]);
      }
    }
  }
}

TEST_CASE("set extension commutes with isometries") {
  Rng rng(137);
  GroupAction D = action_by_name("dihedral");
  const Space& X = D.space();
  auto metric = [&X](const SpacePoint& a, const SpacePoint& b) { return X.distance(a, b); };
  // an invariant finite A: a symmetric net around the fixed point of s
  std::vector<SpacePoint> A;
  for (int i = 1; i <= 10; ++i) {
    A.push_back(EuclideanPoint{{0.3 * i}});
    A.push_back(EuclideanPoint{{-0.3 * i}});
  }
  Isometry s = euclidean_linear({-1.0}, {0.0});
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<bool> inU(A.size());
    for (std::size_t i = 0; i < A.size(); ++i) inU[i] = rng.uniform() < 0.5;
    std::vector<SpacePoint> U, Uc, gU, gUc;
    for (std::size_t i = 0; i < A.size(); ++i) {
      (inU[i] ? U : Uc).push_back(A[i]);
      (inU[i] ? gU : gUc).push_back(apply_point(s, A[i]));
    }
    auto zU = extend_open(U, Uc, metric);
    auto zgU = extend_open(gU, gUc, metric);
    for (int k = 0; k < 60; ++k) {
      SpacePoint z = random_point_in_ball(X, base_point(X), 4.0, rng);
      CHECK(zU.contains(z) == zgU.contains(apply_point(s, z)));
    }
  }
}

TEST_CASE("constant covers") {
  Rng rng(139);
  GroupAction Z2 = action_by_name("z2");
  auto cc = cover_constants(Z2, unit_cell_samples(Z2, rng, 80));
  CHECK(cc.centers.size() == 4);
  CHECK(cc.radius == doctest::Approx(0.45));
  CHECK(cc.eps_R > 0.05);
  CHECK(cc.dim == 3);
  for (const auto& st : cc.stabilizers) CHECK(st.empty());  // free translation action

  GroupAction D = action_by_name("dihedral");
  auto cd = cover_constants(D, unit_cell_samples(D, rng, 60));
  CHECK(cd.centers.size() == 2);
  bool found_reflection = false;
  for (const auto& st : cd.stabilizers) {
    for (const auto& g : st) {
      found_reflection = true;
      Isometry sq = compose(g.iso, g.iso);
      CHECK(is_identity(sq));  // order two
    }
  }
  CHECK(found_reflection);

  GroupAction F2 = action_by_name("f2");
  auto cf = cover_constants(F2, unit_cell_samples(F2, rng, 60));
  CHECK(cf.centers.size() == 3);
  CHECK(cf.eps_R > 0.05);
}

TEST_CASE("cover construction and checking for Z on R") {
  Rng rng(149);
  GroupAction Z1 = action_by_name("z1");
  auto cover = build_cover(Z1, 1.0, unit_cell_samples(Z1, rng, 50));
  CHECK(cover.classes.size() == 2);
  CHECK(cover.axis_patches.size() == 2);
  CHECK(cover.orbit_count == 4);
  CHECK(cover.m_bound == 3);
  CHECK(cover.min_separation > 1.0);
  auto report = check_cover(cover, Z1, 100, rng);
  for (const auto& item : report.items) {
    INFO(item.name, ": ", item.detail);
    CHECK(item.pass);
  }
  CHECK(report.pass);
}

TEST_CASE("cover construction and checking for Z^2 on R^2") {
  Rng rng(151);
  GroupAction Z2 = action_by_name("z2");
  auto cover = build_cover(Z2, 1.0, unit_cell_samples(Z2, rng, 60));
  CHECK(cover.classes.size() == 4);
  CHECK(cover.axis_patches.size() == 8);  // two intervals per class
  CHECK(cover.orbit_count == 12);
  CHECK(cover.m_bound == 6);
  auto report = check_cover(cover, Z2, 60, rng);
  for (const auto& item : report.items) {
    INFO(item.name, ": ", item.detail);
    CHECK(item.pass);
  }
  CHECK(report.pass);

  // delta_sep beyond half the separation is a usage error
  CHECK_THROWS(build_cover(Z2, 1.0, unit_cell_samples(Z2, rng, 10), 2.0));
}

TEST_CASE("cover serialization round trip") {
  Rng rng(157);
  GroupAction Z1 = action_by_name("z1");
  auto cover = build_cover(Z1, 1.0, unit_cell_samples(Z1, rng, 40));
  std::string text = cover_to_json_text(cover);
  auto back = cover_from_json_text(text);
  CHECK(back.orbit_count == cover.orbit_count);
  CHECK(back.delta_sep == doctest::Approx(cover.delta_sep));
  CHECK(back.classes.size() == cover.classes.size());
}
