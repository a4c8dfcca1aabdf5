#include "catflow/space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace catflow {

namespace {

double clamp01(double t) { return std::min(1.0, std::max(0.0, t)); }

const EuclideanPoint& ep(const SpacePoint& p) { return std::get<EuclideanPoint>(p); }
const TreePoint& tp(const SpacePoint& p) { return std::get<TreePoint>(p); }
const HyperbolicPoint& hp(const SpacePoint& p) { return std::get<HyperbolicPoint>(p); }

}  // namespace

// ---------------------------------------------------------------------------
// Constructors / normalizers
// ---------------------------------------------------------------------------

TreePoint make_tree_point(std::string base, char edge, double t) {
  if (!is_word(base) || !is_reduced(base)) {
    throw std::invalid_argument("tree point: base must be a reduced word");
  }
  if (edge == 0) return TreePoint{std::move(base), 0, 0.0};
  if (letter_inverse(edge) == 0) throw std::invalid_argument("tree point: bad edge letter");
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("tree point: offset outside [0,1]");
  if (!base.empty() && base.back() == letter_inverse(edge)) {
    // flip to the shorter endpoint so that base*edge is reduced
    char down = base.back();
    base.pop_back();
    return make_tree_point(std::move(base), down, 1.0 - t);
  }
  if (t == 0.0) return TreePoint{std::move(base), 0, 0.0};
  if (t == 1.0) {
    base.push_back(edge);
    return TreePoint{std::move(base), 0, 0.0};
  }
  return TreePoint{std::move(base), edge, t};
}

TreeEnd make_tree_end(std::string head, std::string cycle) {
  if (cycle.empty()) throw std::invalid_argument("tree end: empty cycle");
  if (!is_word(head) || !is_word(cycle)) throw std::invalid_argument("tree end: bad letters");
  if (!is_reduced(head) || !is_reduced(cycle)) {
    throw std::invalid_argument("tree end: words must be reduced");
  }
  if (!head.empty() && cycle.front() == letter_inverse(head.back())) {
    throw std::invalid_argument("tree end: head*cycle not reduced");
  }
  if (cycle.front() == letter_inverse(cycle.back())) {
    throw std::invalid_argument("tree end: cycle*cycle not reduced");
  }
  // primitive cycle
  for (std::size_t d = 1; d <= cycle.size() / 2; ++d) {
    if (cycle.size() % d != 0) continue;
    bool period = true;
    for (std::size_t i = d; i < cycle.size() && period; ++i) {
      if (cycle[i] != cycle[i - d]) period = false;
    }
    if (period) {
      cycle = cycle.substr(0, d);
      break;
    }
  }
  // minimal head: absorb trailing head letters into the cycle
  while (!head.empty() && head.back() == cycle.back()) {
    cycle = std::string(1, cycle.back()) + cycle.substr(0, cycle.size() - 1);
    head.pop_back();
  }
  return TreeEnd{std::move(head), std::move(cycle)};
}

HyperbolicPoint make_disk_point(std::complex<double> z) {
  double a = std::abs(z);
  double cap = 1.0 - kDiskGuard;
  if (a > cap) z *= cap / a;
  return HyperbolicPoint{z};
}

EuclideanDirection make_direction(std::vector<double> u) {
  double n2 = 0.0;
  for (double c : u) n2 += c * c;
  double n = std::sqrt(n2);
  if (std::abs(n - 1.0) > 1e-12) {
    if (n == 0.0) throw std::invalid_argument("direction: zero vector");
    for (double& c : u) c /= n;
  }
  return EuclideanDirection{std::move(u)};
}

std::string end_prefix(const TreeEnd& e, std::size_t len) {
  std::string out = e.head;
  while (out.size() < len) out += e.cycle;
  out.resize(len);
  return out;
}

// ---------------------------------------------------------------------------
// Generic Space methods
// ---------------------------------------------------------------------------

SpacePoint Space::interpolate(const SpacePoint& x, const SpacePoint& y, double t) const {
  if (t < -1e-15 || t > 1.0 + 1e-15) {
    throw std::invalid_argument("interpolate: parameter outside [0,1]");
  }
  t = clamp01(t);
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  double d = distance(x, y);
  if (d == 0.0) return x;
  return ray_point(x, Target{y}, t * d);
}

SpacePoint Space::project_ball(const SpacePoint& x0, double r, const Target& x) const {
  if (r <= 0.0) throw std::invalid_argument("project_ball: radius must be positive");
  if (!is_boundary(x)) {
    double d = distance(x0, as_point(x));
    if (d <= r) return as_point(x);
  }
  return ray_point(x0, x, r);
}

bool Space::same_target(const Target& s, const Target& t, double tol) const {
  if (is_boundary(s) != is_boundary(t)) return false;
  if (is_boundary(s)) return same_boundary(as_boundary(s), as_boundary(t), tol);
  return same_point(as_point(s), as_point(t), tol);
}

// ---------------------------------------------------------------------------
// Euclidean
// ---------------------------------------------------------------------------

double EuclideanSpace::distance(const SpacePoint& x, const SpacePoint& y) const {
  const auto& a = ep(x).x;
  const auto& b = ep(y).x;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

SpacePoint EuclideanSpace::ray_point(const SpacePoint& x, const Target& target, double s) const {
  const auto& a = ep(x).x;
  if (s < 0.0) s = 0.0;
  if (!is_boundary(target)) {
    const auto& b = ep(as_point(target)).x;
    double d = distance(x, as_point(target));
    if (s >= d) return as_point(target);
    if (d == 0.0) return x;
    EuclideanPoint out;
    out.x.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.x[i] = a[i] + (s / d) * (b[i] - a[i]);
    return out;
  }
  const auto& u = std::get<EuclideanDirection>(as_boundary(target)).u;
  EuclideanPoint out;
  out.x.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.x[i] = a[i] + s * u[i];
  return out;
}

bool EuclideanSpace::same_point(const SpacePoint& x, const SpacePoint& y, double tol) const {
  return distance(x, y) <= tol;
}

bool EuclideanSpace::same_boundary(const BoundaryPoint& x, const BoundaryPoint& y,
                                   double tol) const {
  const auto& u = std::get<EuclideanDirection>(x).u;
  const auto& v = std::get<EuclideanDirection>(y).u;
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += (u[i] - v[i]) * (u[i] - v[i]);
  return std::sqrt(s) <= tol;
}

SpacePoint EuclideanSpace::line_anchor(const BoundaryPoint& backward,
                                       const BoundaryPoint& forward) const {
  const auto& u = std::get<EuclideanDirection>(backward).u;
  const auto& v = std::get<EuclideanDirection>(forward).u;
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += (u[i] + v[i]) * (u[i] + v[i]);
  if (std::sqrt(s) > 1e-9) {
    throw std::invalid_argument("euclidean line: directions must be opposite");
  }
  // representative of the parallel pencil through the origin
  return EuclideanPoint{std::vector<double>(u.size(), 0.0)};
}

// ---------------------------------------------------------------------------
// Tree
// ---------------------------------------------------------------------------

namespace {

// Incident vertices of a point with the cost of reaching them.
struct VertexCosts {
  std::string v[2];
  double cost[2];
  int n = 0;
};

VertexCosts incident_vertices(const TreePoint& p) {
  VertexCosts vc;
  if (p.edge == 0) {
    vc.v[0] = p.base;
    vc.cost[0] = 0.0;
    vc.n = 1;
  } else {
    vc.v[0] = p.base;
    vc.cost[0] = p.t;
    vc.v[1] = p.base + p.edge;
    vc.cost[1] = 1.0 - p.t;
    vc.n = 2;
  }
  return vc;
}

bool same_edge(const TreePoint& p, const TreePoint& q) {
  return p.edge != 0 && p.edge == q.edge && p.base == q.base;
}

}  // namespace

double TreeSpace::distance(const SpacePoint& x, const SpacePoint& y) const {
  const TreePoint& p = tp(x);
  const TreePoint& q = tp(y);
  if (same_edge(p, q)) return std::abs(p.t - q.t);
  if (p.edge == 0 && q.edge == 0) return double(vertex_distance(p.base, q.base));
  VertexCosts a = incident_vertices(p);
  VertexCosts b = incident_vertices(q);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < a.n; ++i) {
    for (int j = 0; j < b.n; ++j) {
      double d = a.cost[i] + double(vertex_distance(a.v[i], b.v[j])) + b.cost[j];
      best = std::min(best, d);
    }
  }
  return best;
}

namespace {

// Geodesic from p through the vertex chain exit -> ... -> entry and on to q.
// Vertices of the chain are prefixes of `exit_w` (descending) followed by
// prefixes of `entry_w` (ascending past the common prefix); they are never
// materialized as a list.
struct TreeGeodesicPath {
  TreePoint p, q;
  double length = 0.0;
  bool direct = false;  // same edge, no vertex in between
  std::string exit_w, entry_w;
  std::size_t cpl = 0;
  double s_exit = 0.0;   // arclength at the exit vertex
  double s_entry = 0.0;  // arclength at the entry vertex

  TreePoint eval(double s) const;
};

TreePoint chain_vertex_point(const TreeGeodesicPath& g, double s) {
  // position strictly between exit and entry vertices (or at one of them)
  double rel = s - g.s_exit;
  std::size_t down = g.exit_w.size() - g.cpl;
  std::size_t k = std::min<std::size_t>(std::size_t(std::floor(rel)),
                                        down + (g.entry_w.size() - g.cpl));
  double frac = rel - double(k);
  auto vertex_at = [&](std::size_t i) -> std::string {
    if (i <= down) return g.exit_w.substr(0, g.exit_w.size() - i);
    return g.entry_w.substr(0, g.cpl + (i - down));
  };
  if (frac <= 0.0) return make_tree_point(vertex_at(k), 0, 0.0);
  if (k < down) {
    // descending: deeper prefix of exit_w toward shorter one
    std::string shallow = g.exit_w.substr(0, g.exit_w.size() - k - 1);
    char c = g.exit_w[g.exit_w.size() - k - 1];
    return make_tree_point(std::move(shallow), c, 1.0 - frac);
  }
  std::string base = vertex_at(k);
  char c = g.entry_w[base.size()];
  return make_tree_point(std::move(base), c, frac);
}

TreePoint TreeGeodesicPath::eval(double s) const {
  if (s <= 0.0) return p;
  if (s >= length) return q;
  if (direct) {
    double t = p.t + (q.t > p.t ? s : -s);
    return make_tree_point(p.base, p.edge, t);
  }
  if (s <= s_exit) {
    // on p's edge moving toward the exit vertex
    bool toward_base = (exit_w == p.base);
    double t = toward_base ? p.t - s : p.t + s;
    return make_tree_point(p.base, p.edge, t);
  }
  if (s >= s_entry) {
    // on q's edge moving from the entry vertex toward q
    double rem = s - s_entry;
    bool from_base = (entry_w == q.base);
    double t = from_base ? rem : 1.0 - rem;
    return make_tree_point(q.base, q.edge, t);
  }
  return chain_vertex_point(*this, s);
}

TreeGeodesicPath build_tree_path(const TreePoint& p, const TreePoint& q) {
  TreeGeodesicPath g;
  g.p = p;
  g.q = q;
  if (same_edge(p, q)) {
    g.direct = true;
    g.length = std::abs(p.t - q.t);
    return g;
  }
  VertexCosts a = incident_vertices(p);
  VertexCosts b = incident_vertices(q);
  double best = std::numeric_limits<double>::infinity();
  int bi = 0, bj = 0;
  for (int i = 0; i < a.n; ++i) {
    for (int j = 0; j < b.n; ++j) {
      double d = a.cost[i] + double(vertex_distance(a.v[i], b.v[j])) + b.cost[j];
      if (d < best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  }
  g.exit_w = a.v[bi];
  g.entry_w = b.v[bj];
  g.cpl = common_prefix_len(g.exit_w, g.entry_w);
  g.s_exit = a.cost[bi];
  g.s_entry = g.s_exit + double(vertex_distance(g.exit_w, g.entry_w));
  g.length = g.s_entry + b.cost[bj];
  return g;
}

// Ray from p toward the end xi, valid for arclength parameters up to `horizon`.
TreeGeodesicPath build_tree_ray(const TreePoint& p, const TreeEnd& xi, double horizon) {
  std::size_t depth =
      p.base.size() + xi.head.size() + 2 * xi.cycle.size() + std::size_t(std::max(0.0, horizon)) + 8;
  std::string far = end_prefix(xi, depth);
  TreePoint fq = make_tree_point(far, 0, 0.0);
  return build_tree_path(p, fq);
}

}  // namespace

SpacePoint TreeSpace::ray_point(const SpacePoint& x, const Target& target, double s) const {
  const TreePoint& p = tp(x);
  if (s < 0.0) s = 0.0;
  if (!is_boundary(target)) {
    TreeGeodesicPath g = build_tree_path(p, tp(as_point(target)));
    return g.eval(std::min(s, g.length));
  }
  const TreeEnd& xi = std::get<TreeEnd>(as_boundary(target));
  TreeGeodesicPath g = build_tree_ray(p, xi, s + 2.0);
  return g.eval(s);
}

bool TreeSpace::same_point(const SpacePoint& x, const SpacePoint& y, double tol) const {
  return distance(x, y) <= tol;
}

bool TreeSpace::same_boundary(const BoundaryPoint& x, const BoundaryPoint& y, double) const {
  const auto& a = std::get<TreeEnd>(x);
  const auto& b = std::get<TreeEnd>(y);
  return a.head == b.head && a.cycle == b.cycle;
}

SpacePoint TreeSpace::line_anchor(const BoundaryPoint& backward,
                                  const BoundaryPoint& forward) const {
  const auto& bw = std::get<TreeEnd>(backward);
  const auto& fw = std::get<TreeEnd>(forward);
  if (same_boundary(backward, forward, 0.0)) {
    throw std::invalid_argument("tree line: ends must be distinct");
  }
  std::size_t depth = bw.head.size() + fw.head.size() +
                      2 * (bw.cycle.size() + fw.cycle.size()) +
                      2 * std::max(bw.cycle.size(), fw.cycle.size()) + 8;
  std::string u = end_prefix(bw, depth);
  std::string v = end_prefix(fw, depth);
  std::size_t c = common_prefix_len(u, v);
  return make_tree_point(u.substr(0, c), 0, 0.0);
}

double TreeSpace::edge_offset(const SpacePoint& p) { return tp(p).t; }

// ---------------------------------------------------------------------------
// Hyperbolic (Poincare disk)
// ---------------------------------------------------------------------------

namespace {

using cplx = std::complex<double>;

// Disk automorphism moving a to the origin, and its inverse.
cplx to_origin(cplx a, cplx z) { return (z - a) / (1.0 - std::conj(a) * z); }
cplx from_origin(cplx a, cplx z) { return (z + a) / (1.0 + std::conj(a) * z); }

}  // namespace

double HyperbolicSpace::distance(const SpacePoint& x, const SpacePoint& y) const {
  cplx z = hp(x).z, w = hp(y).z;
  double num = std::abs(z - w);
  double den = std::abs(1.0 - std::conj(z) * w);
  if (num == 0.0) return 0.0;
  double q = num / den;
  if (q >= 1.0) q = 1.0 - 1e-16;
  return 2.0 * std::atanh(q);
}

SpacePoint HyperbolicSpace::ray_point(const SpacePoint& x, const Target& target,
                                      double s) const {
  cplx a = hp(x).z;
  if (s < 0.0) s = 0.0;
  if (!is_boundary(target)) {
    cplx b = hp(as_point(target)).z;
    double d = distance(x, as_point(target));
    if (s >= d) return as_point(target);
    if (d == 0.0) return x;
    cplx w = to_origin(a, b);
    cplx dir = w / std::abs(w);
    return make_disk_point(from_origin(a, std::tanh(s / 2.0) * dir));
  }
  double theta = std::get<HyperbolicIdeal>(as_boundary(target)).theta;
  cplx e = std::polar(1.0, theta);
  cplx dir = to_origin(a, e);
  dir /= std::abs(dir);
  return make_disk_point(from_origin(a, std::tanh(s / 2.0) * dir));
}

bool HyperbolicSpace::same_point(const SpacePoint& x, const SpacePoint& y, double tol) const {
  return distance(x, y) <= tol;
}

bool HyperbolicSpace::same_boundary(const BoundaryPoint& x, const BoundaryPoint& y,
                                    double tol) const {
  double a = std::get<HyperbolicIdeal>(x).theta;
  double b = std::get<HyperbolicIdeal>(y).theta;
  double d = std::fmod(std::abs(a - b), 2.0 * M_PI);
  d = std::min(d, 2.0 * M_PI - d);
  return d <= tol;
}

SpacePoint HyperbolicSpace::line_anchor(const BoundaryPoint& backward,
                                        const BoundaryPoint& forward) const {
  cplx u = std::polar(1.0, std::get<HyperbolicIdeal>(backward).theta);
  cplx v = std::polar(1.0, std::get<HyperbolicIdeal>(forward).theta);
  double denom = 1.0 + (u * std::conj(v)).real();
  if (std::abs(u - v) < 1e-12) {
    throw std::invalid_argument("hyperbolic line: ideal endpoints must be distinct");
  }
  if (denom < 1e-12) return make_disk_point(0.0);  // diameter
  cplx c = (u + v) / denom;
  double ac = std::abs(c);
  double r = std::sqrt(std::max(0.0, ac * ac - 1.0));
  // nearest point of the orthogonal circle to the origin, in a form stable
  // for near-antipodal endpoints
  cplx m = c / (ac * (ac + r));
  return make_disk_point(m);
}

// ---------------------------------------------------------------------------
// Singletons and the comparison-triangle check
// ---------------------------------------------------------------------------

const EuclideanSpace& euclidean_space(std::size_t dim) {
  static std::map<std::size_t, EuclideanSpace> cache;
  auto it = cache.find(dim);
  if (it == cache.end()) it = cache.emplace(dim, EuclideanSpace(dim)).first;
  return it->second;
}

const TreeSpace& tree_space() {
  static TreeSpace s;
  return s;
}

const HyperbolicSpace& hyperbolic_space() {
  static HyperbolicSpace s;
  return s;
}

const Space& space_by_name(const std::string& name) {
  if (name == "tree") return tree_space();
  if (name == "hyperbolic") return hyperbolic_space();
  if (name.rfind("euclidean", 0) == 0) {
    std::size_t d = std::stoul(name.substr(9));
    return euclidean_space(d);
  }
  throw std::invalid_argument("unknown space: " + name);
}

double cat0_sample_check(const Space& space, const SpacePoint& x, const SpacePoint& y,
                         const SpacePoint& z, int grid) {
  if (grid < 2) throw std::invalid_argument("cat0_sample_check: grid must be >= 2");
  double a = space.distance(x, y);
  double b = space.distance(x, z);
  double c = space.distance(y, z);
  if (a == 0.0 || b == 0.0 || c == 0.0) return 0.0;
  double cosg = (a * a + b * b - c * c) / (2.0 * a * b);
  cosg = std::min(1.0, std::max(-1.0, cosg));
  double sing = std::sqrt(std::max(0.0, 1.0 - cosg * cosg));
  // comparison triangle: xbar = origin, ybar = (a,0), zbar = b*(cos,sin)
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid; ++i) {
    double s = double(i) / grid;
    SpacePoint p = space.interpolate(x, y, s);
    double px = s * a, py = 0.0;
    for (int j = 0; j <= grid; ++j) {
      double u = double(j) / grid;
      SpacePoint q = space.interpolate(x, z, u);
      double qx = u * b * cosg, qy = u * b * sing;
      double comparison = std::hypot(px - qx, py - qy);
      double actual = space.distance(p, q);
      worst = std::max(worst, actual - comparison);
    }
  }
  return worst;
}

}  // namespace catflow
