#include "catflow/isometry.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>

namespace catflow {

namespace {

using cplx = std::complex<double>;

std::vector<double> mat_mul(const std::vector<double>& A, const std::vector<double>& B,
                            std::size_t n) {
  std::vector<double> C(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) C[i * n + j] += A[i * n + k] * B[k * n + j];
  return C;
}

std::vector<double> mat_vec(const std::vector<double>& A, const std::vector<double>& x,
                            std::size_t n) {
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) y[i] += A[i * n + j] * x[j];
  return y;
}

std::vector<double> mat_transpose(const std::vector<double>& A, std::size_t n) {
  std::vector<double> T(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) T[j * n + i] = A[i * n + j];
  return T;
}

cplx disk_to_half(cplx z) { return cplx(0, 1) * (1.0 + z) / (1.0 - z); }
cplx half_to_disk(cplx w) { return (w - cplx(0, 1)) / (w + cplx(0, 1)); }

double wrap_angle(double t) {
  double two_pi = 2.0 * M_PI;
  t = std::fmod(t, two_pi);
  if (t < 0) t += two_pi;
  return t;
}

}  // namespace

Isometry identity_isometry(const Space& space) {
  switch (space.kind()) {
    case SpaceKind::Euclidean: {
      std::size_t n = static_cast<const EuclideanSpace&>(space).dim();
      std::vector<double> Q(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i) Q[i * n + i] = 1.0;
      return EuclideanIsometry{std::move(Q), std::vector<double>(n, 0.0), n};
    }
    case SpaceKind::Tree:
      return TreeIsometry{""};
    case SpaceKind::Hyperbolic:
      return MobiusIsometry{1, 0, 0, 1};
  }
  throw std::logic_error("identity_isometry");
}

Isometry euclidean_translation(std::vector<double> v) {
  std::size_t n = v.size();
  std::vector<double> Q(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) Q[i * n + i] = 1.0;
  return EuclideanIsometry{std::move(Q), std::move(v), n};
}

Isometry euclidean_linear(std::vector<double> Q, std::vector<double> v) {
  std::size_t n = v.size();
  if (Q.size() != n * n) throw std::invalid_argument("euclidean_linear: shape mismatch");
  // orthogonality check
  auto Qt = mat_transpose(Q, n);
  auto P = mat_mul(Qt, Q, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double want = i == j ? 1.0 : 0.0;
      if (std::abs(P[i * n + j] - want) > 1e-9) {
        throw std::invalid_argument("euclidean_linear: matrix not orthogonal");
      }
    }
  return EuclideanIsometry{std::move(Q), std::move(v), n};
}

Isometry tree_isometry(const std::string& word) {
  std::string w = reduce_word(word);
  if (!is_word(w)) throw std::invalid_argument("tree_isometry: bad letters");
  return TreeIsometry{std::move(w)};
}

Isometry mobius_isometry(double a, double b, double c, double d) {
  double det = a * d - b * c;
  if (std::abs(det - 1.0) > 1e-9) {
    if (det <= 0) throw std::invalid_argument("mobius_isometry: determinant must be 1");
    double s = std::sqrt(det);
    a /= s; b /= s; c /= s; d /= s;
  }
  return MobiusIsometry{a, b, c, d};
}

bool is_identity(const Isometry& g, double tol) {
  if (const auto* e = std::get_if<EuclideanIsometry>(&g)) {
    std::size_t n = e->n;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(e->v[i]) > tol) return false;
      for (std::size_t j = 0; j < n; ++j) {
        double want = i == j ? 1.0 : 0.0;
        if (std::abs(e->Q[i * n + j] - want) > tol) return false;
      }
    }
    return true;
  }
  if (const auto* t = std::get_if<TreeIsometry>(&g)) return t->word.empty();
  const auto& m = std::get<MobiusIsometry>(g);
  double s = m.a < 0 || (m.a == 0 && m.b < 0) ? -1.0 : 1.0;
  return std::abs(s * m.a - 1) <= tol && std::abs(s * m.b) <= tol &&
         std::abs(s * m.c) <= tol && std::abs(s * m.d - 1) <= tol;
}

bool isometry_equal(const Isometry& g, const Isometry& h, double tol) {
  if (g.index() != h.index()) return false;
  if (const auto* a = std::get_if<EuclideanIsometry>(&g)) {
    const auto& b = std::get<EuclideanIsometry>(h);
    if (a->n != b.n) return false;
    for (std::size_t i = 0; i < a->Q.size(); ++i)
      if (std::abs(a->Q[i] - b.Q[i]) > tol) return false;
    for (std::size_t i = 0; i < a->v.size(); ++i)
      if (std::abs(a->v[i] - b.v[i]) > tol) return false;
    return true;
  }
  if (const auto* a = std::get_if<TreeIsometry>(&g)) {
    return a->word == std::get<TreeIsometry>(h).word;
  }
  const auto& a = std::get<MobiusIsometry>(g);
  const auto& b = std::get<MobiusIsometry>(h);
  auto close = [&](double s) {
    return std::abs(a.a - s * b.a) <= tol && std::abs(a.b - s * b.b) <= tol &&
           std::abs(a.c - s * b.c) <= tol && std::abs(a.d - s * b.d) <= tol;
  };
  return close(1.0) || close(-1.0);
}

Isometry compose(const Isometry& g, const Isometry& h) {
  if (g.index() != h.index()) throw std::invalid_argument("compose: mixed isometry kinds");
  if (const auto* a = std::get_if<EuclideanIsometry>(&g)) {
    const auto& b = std::get<EuclideanIsometry>(h);
    std::size_t n = a->n;
    EuclideanIsometry out;
    out.n = n;
    out.Q = mat_mul(a->Q, b.Q, n);
    out.v = mat_vec(a->Q, b.v, n);
    for (std::size_t i = 0; i < n; ++i) out.v[i] += a->v[i];
    return out;
  }
  if (const auto* a = std::get_if<TreeIsometry>(&g)) {
    return TreeIsometry{concat_words(a->word, std::get<TreeIsometry>(h).word)};
  }
  const auto& a = std::get<MobiusIsometry>(g);
  const auto& b = std::get<MobiusIsometry>(h);
  return MobiusIsometry{a.a * b.a + a.b * b.c, a.a * b.b + a.b * b.d,
                        a.c * b.a + a.d * b.c, a.c * b.b + a.d * b.d};
}

Isometry inverse_of(const Isometry& g) {
  if (const auto* a = std::get_if<EuclideanIsometry>(&g)) {
    std::size_t n = a->n;
    EuclideanIsometry out;
    out.n = n;
    out.Q = mat_transpose(a->Q, n);
    out.v = mat_vec(out.Q, a->v, n);
    for (auto& c : out.v) c = -c;
    return out;
  }
  if (const auto* a = std::get_if<TreeIsometry>(&g)) return TreeIsometry{invert_word(a->word)};
  const auto& m = std::get<MobiusIsometry>(g);
  return MobiusIsometry{m.d, -m.b, -m.c, m.a};
}

std::string isometry_key(const Isometry& g) {
  char buf[64];
  std::string key;
  auto push = [&](double x) {
    if (std::abs(x) < 5e-10) x = 0.0;  // avoid -0.000000000
    std::snprintf(buf, sizeof(buf), "%.9f,", x);
    key += buf;
  };
  if (const auto* a = std::get_if<EuclideanIsometry>(&g)) {
    key = "E:";
    for (double q : a->Q) push(q);
    key += ";";
    for (double v : a->v) push(v);
    return key;
  }
  if (const auto* a = std::get_if<TreeIsometry>(&g)) return "T:" + a->word;
  auto m = std::get<MobiusIsometry>(g);
  double lead = m.a;
  if (std::abs(lead) < 1e-9) lead = std::abs(m.b) >= 1e-9 ? m.b : (std::abs(m.c) >= 1e-9 ? m.c : m.d);
  if (lead < 0) {
    m.a = -m.a; m.b = -m.b; m.c = -m.c; m.d = -m.d;
  }
  key = "M:";
  push(m.a); push(m.b); push(m.c); push(m.d);
  return key;
}

SpacePoint apply_point(const Isometry& g, const SpacePoint& x) {
  if (const auto* e = std::get_if<EuclideanIsometry>(&g)) {
    const auto& p = std::get<EuclideanPoint>(x).x;
    auto y = mat_vec(e->Q, p, e->n);
    for (std::size_t i = 0; i < e->n; ++i) y[i] += e->v[i];
    return EuclideanPoint{std::move(y)};
  }
  if (const auto* t = std::get_if<TreeIsometry>(&g)) {
    const auto& p = std::get<TreePoint>(x);
    if (p.edge == 0) return make_tree_point(concat_words(t->word, p.base), 0, 0.0);
    return make_tree_point(concat_words(t->word, p.base), p.edge, p.t);
  }
  const auto& m = std::get<MobiusIsometry>(g);
  cplx w = disk_to_half(std::get<HyperbolicPoint>(x).z);
  cplx w2 = (m.a * w + m.b) / (m.c * w + m.d);
  return make_disk_point(half_to_disk(w2));
}

BoundaryPoint apply_boundary(const Isometry& g, const BoundaryPoint& xi) {
  if (const auto* e = std::get_if<EuclideanIsometry>(&g)) {
    const auto& u = std::get<EuclideanDirection>(xi).u;
    return make_direction(mat_vec(e->Q, u, e->n));
  }
  if (const auto* t = std::get_if<TreeIsometry>(&g)) {
    const auto& end = std::get<TreeEnd>(xi);
    std::size_t copies = (t->word.size() + end.head.size()) / end.cycle.size() + 2;
    std::string tail = end.head;
    for (std::size_t i = 0; i < copies; ++i) tail += end.cycle;
    return make_tree_end(concat_words(t->word, tail), end.cycle);
  }
  const auto& m = std::get<MobiusIsometry>(g);
  double theta = std::get<HyperbolicIdeal>(xi).theta;
  // boundary circle -> R u {inf} -> Mobius -> back
  double half = 0.5 * theta;
  bool at_inf = std::abs(std::sin(half)) < 1e-300;
  double u = at_inf ? 0.0 : -std::cos(half) / std::sin(half);
  double nu_num, nu_den;
  if (at_inf) {
    nu_num = m.a;
    nu_den = m.c;
  } else {
    nu_num = m.a * u + m.b;
    nu_den = m.c * u + m.d;
  }
  // theta' = arg((u' - i)/(u' + i)) with u' = nu_num/nu_den (projective)
  cplx num(nu_num, -nu_den);
  cplx den(nu_num, nu_den);
  double t2 = std::arg(num / den);
  return HyperbolicIdeal{wrap_angle(t2)};
}

Target apply_target(const Isometry& g, const Target& t) {
  if (is_boundary(t)) return Target{apply_boundary(g, as_boundary(t))};
  return Target{apply_point(g, as_point(t))};
}

GeneralizedGeodesic apply_fs(const Isometry& g, const GeneralizedGeodesic& c) {
  if (c.is_constant()) {
    return GeneralizedGeodesic::constant(c.space(), apply_point(g, c.anchor_point()));
  }
  return GeneralizedGeodesic::from_parts(
      c.space(), false, c.lower(), c.upper(), c.anchor_time(), apply_point(g, c.anchor_point()),
      apply_target(g, c.backward_target()), apply_target(g, c.forward_target()));
}

double displacement(const Space& space, const Isometry& g, const SpacePoint& x) {
  return space.distance(apply_point(g, x), x);
}

}  // namespace catflow
