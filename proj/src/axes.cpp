#include "catflow/axes.hpp"

#include <cmath>
#include <stdexcept>

namespace catflow {

namespace {

// Orthonormal basis of ker(Q - I) by Gaussian elimination (n <= 3 in the
// bundled actions, but written generically).
std::vector<std::vector<double>> fixed_space_basis(const std::vector<double>& Q, std::size_t n) {
  std::vector<std::vector<double>> M(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M[i][j] = Q[i * n + j] - (i == j ? 1.0 : 0.0);

  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t best = row;
    for (std::size_t r = row + 1; r < n; ++r)
      if (std::abs(M[r][col]) > std::abs(M[best][col])) best = r;
    if (std::abs(M[best][col]) < 1e-9) continue;
    std::swap(M[row], M[best]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row) continue;
      double f = M[r][col] / M[row][col];
      for (std::size_t c2 = 0; c2 < n; ++c2) M[r][c2] -= f * M[row][c2];
    }
    pivot_col.push_back(col);
    ++row;
  }
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivot_col) is_pivot[c] = true;

  std::vector<std::vector<double>> basis;
  for (std::size_t free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<double> b(n, 0.0);
    b[free_col] = 1.0;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) {
      b[pivot_col[r]] = -M[r][free_col] / M[r][pivot_col[r]];
    }
    // Gram-Schmidt against earlier basis vectors
    for (const auto& prev : basis) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += b[i] * prev[i];
      for (std::size_t i = 0; i < n; ++i) b[i] -= dot * prev[i];
    }
    double nn = 0.0;
    for (double x : b) nn += x * x;
    nn = std::sqrt(nn);
    if (nn > 1e-12) {
      for (double& x : b) x /= nn;
      basis.push_back(std::move(b));
    }
  }
  return basis;
}

double euclidean_translation_length(const EuclideanIsometry& e) {
  auto basis = fixed_space_basis(e.Q, e.n);
  double s = 0.0;
  for (const auto& b : basis) {
    double dot = 0.0;
    for (std::size_t i = 0; i < e.n; ++i) dot += e.v[i] * b[i];
    s += dot * dot;
  }
  return std::sqrt(s);
}

// Any minimizer of |Qx + v - x| (solves the normal equations of (Q-I)x = -v).
std::vector<double> euclidean_min_point(const EuclideanIsometry& e) {
  std::size_t n = e.n;
  // A = Q - I; solve A^T A x = -A^T v by Gaussian elimination with
  // pivot-threshold dropping (consistent system).
  std::vector<std::vector<double>> A(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A[i][j] = e.Q[i * n + j] - (i == j ? 1.0 : 0.0);
  std::vector<std::vector<double>> G(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) G[i][j] += A[k][i] * A[k][j];
    for (std::size_t k = 0; k < n; ++k) G[i][n] -= A[k][i] * e.v[k];
  }
  std::vector<double> x(n, 0.0);
  std::vector<int> where(n, -1);
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t best = row;
    for (std::size_t r = row + 1; r < n; ++r)
      if (std::abs(G[r][col]) > std::abs(G[best][col])) best = r;
    if (std::abs(G[best][col]) < 1e-9) continue;
    std::swap(G[row], G[best]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row) continue;
      double f = G[r][col] / G[row][col];
      for (std::size_t c2 = 0; c2 <= n; ++c2) G[r][c2] -= f * G[row][c2];
    }
    where[col] = int(row);
    ++row;
  }
  for (std::size_t col = 0; col < n; ++col) {
    if (where[col] >= 0) x[col] = G[where[col]][n] / G[where[col]][col];
  }
  return x;
}

}  // namespace

double translation_length(const Space& space, const Isometry& g) {
  switch (space.kind()) {
    case SpaceKind::Euclidean:
      return euclidean_translation_length(std::get<EuclideanIsometry>(g));
    case SpaceKind::Tree:
      return double(cyclically_reduce(std::get<TreeIsometry>(g).word).core.size());
    case SpaceKind::Hyperbolic: {
      const auto& m = std::get<MobiusIsometry>(g);
      double tr = std::abs(m.a + m.d);
      if (tr <= 2.0) return 0.0;
      return 2.0 * std::acosh(tr / 2.0);
    }
  }
  throw std::logic_error("translation_length");
}

IsometryClass classify(const Space& space, const Isometry& g, double tol) {
  switch (space.kind()) {
    case SpaceKind::Euclidean:
      // displacement is attained in Euclidean space
      return translation_length(space, g) > tol ? IsometryClass::Hyperbolic
                                                : IsometryClass::Elliptic;
    case SpaceKind::Tree:
      return std::get<TreeIsometry>(g).word.empty() ? IsometryClass::Elliptic
                                                    : IsometryClass::Hyperbolic;
    case SpaceKind::Hyperbolic: {
      const auto& m = std::get<MobiusIsometry>(g);
      double tr = std::abs(m.a + m.d);
      if (tr > 2.0 + tol) return IsometryClass::Hyperbolic;
      if (tr < 2.0 - tol) return IsometryClass::Elliptic;
      if (is_identity(g, tol)) return IsometryClass::Elliptic;
      return IsometryClass::Unresolved;  // parabolic boundary case
    }
  }
  throw std::logic_error("classify");
}

GeneralizedGeodesic axis(const Space& space, const Isometry& g) {
  if (classify(space, g) != IsometryClass::Hyperbolic) {
    throw std::invalid_argument("axis: isometry is not hyperbolic");
  }
  double l = translation_length(space, g);
  switch (space.kind()) {
    case SpaceKind::Euclidean: {
      const auto& e = std::get<EuclideanIsometry>(g);
      std::vector<double> p = euclidean_min_point(e);
      SpacePoint anchor = EuclideanPoint{p};
      SpacePoint image = apply_point(g, anchor);
      const auto& a = std::get<EuclideanPoint>(anchor).x;
      const auto& b = std::get<EuclideanPoint>(image).x;
      std::vector<double> u(e.n);
      for (std::size_t i = 0; i < e.n; ++i) u[i] = (b[i] - a[i]) / l;
      std::vector<double> nu(e.n);
      for (std::size_t i = 0; i < e.n; ++i) nu[i] = -u[i];
      return GeneralizedGeodesic::line(space, anchor, 0.0, make_direction(nu),
                                       make_direction(u));
    }
    case SpaceKind::Tree: {
      auto cf = cyclically_reduce(std::get<TreeIsometry>(g).word);
      TreeEnd fw = make_tree_end(cf.conjugator, cf.core);
      TreeEnd bw = make_tree_end(cf.conjugator, invert_word(cf.core));
      SpacePoint anchor = make_tree_point(cf.conjugator, 0, 0.0);
      return GeneralizedGeodesic::line(space, anchor, 0.0, bw, fw);
    }
    case SpaceKind::Hyperbolic: {
      const auto& m = std::get<MobiusIsometry>(g);
      double tr = m.a + m.d;
      double disc = std::sqrt(tr * tr - 4.0);
      // fixed points on R u {inf}: eigenvector (u,1) has multiplier c u + d
      double u_att, u_rep;
      if (std::abs(m.c) > 1e-12) {
        double r1 = ((m.a - m.d) + disc) / (2.0 * m.c);
        double r2 = ((m.a - m.d) - disc) / (2.0 * m.c);
        double mult1 = std::abs(m.c * r1 + m.d);
        u_att = mult1 > 1.0 ? r1 : r2;
        u_rep = mult1 > 1.0 ? r2 : r1;
      } else {
        // fixed points: inf (multiplier a) and b/(d-a)
        double finite = m.b / (m.d - m.a);
        bool inf_attracting = std::abs(m.a) > 1.0;
        u_att = inf_attracting ? std::numeric_limits<double>::infinity() : finite;
        u_rep = inf_attracting ? finite : std::numeric_limits<double>::infinity();
      }
      auto to_angle = [](double u) {
        if (std::isinf(u)) return 0.0;
        std::complex<double> w(u, 0.0);
        std::complex<double> z = (w - std::complex<double>(0, 1)) / (w + std::complex<double>(0, 1));
        double t = std::arg(z);
        if (t < 0) t += 2.0 * M_PI;
        return t;
      };
      BoundaryPoint fw = HyperbolicIdeal{to_angle(u_att)};
      BoundaryPoint bw = HyperbolicIdeal{to_angle(u_rep)};
      return GeneralizedGeodesic::line(space, bw, fw);
    }
  }
  throw std::logic_error("axis");
}

bool min_set_test(const Space& space, const Isometry& g, const SpacePoint& x, double tol) {
  return displacement(space, g, x) <= translation_length(space, g) + tol;
}

}  // namespace catflow
