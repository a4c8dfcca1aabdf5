#include "catflow/flow_metric.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace catflow {

namespace {

// integral of (a + b t) e^{-t} / 2 over [p, q], 0 <= p <= q
double weighted_linear_pos(double a, double b, double p, double q) {
  auto F = [&](double t) { return (a + b + b * t) * std::exp(-t); };
  return 0.5 * (F(p) - F(q));
}

// integral of (a + b t) e^{-|t|} / 2 over [p, q], where p,q do not straddle 0
double weighted_linear(double a, double b, double p, double q) {
  if (p >= 0.0) return weighted_linear_pos(a, b, p, q);
  return weighted_linear_pos(a, -b, -q, -p);
}

double weight_mass(double p, double q) { return weighted_linear(1.0, 0.0, p, q); }

// integral of max(0, c0 + s t) e^{-|t|} / 2 over [p, q]
double weighted_linear_clipped(double c0, double s, double p, double q) {
  double lp = c0 + s * p, lq = c0 + s * q;
  if (lp >= 0.0 && lq >= 0.0) return weighted_linear(c0, s, p, q);
  if (lp <= 0.0 && lq <= 0.0) return 0.0;
  double r = -c0 / s;
  r = std::min(std::max(r, p), q);
  if (lp > 0.0) return weighted_linear(c0, s, p, r);
  return weighted_linear(c0, s, r, q);
}

struct Node {
  double p, q;
  double fp, fm, fq;
  double upper, lower;

  double gap() const { return upper - lower; }
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const { return a.gap() < b.gap(); }
};

constexpr double kEvalSlack = 1e-13;

template <typename F>
Node make_node(const F& f, double p, double q, double fp, double fq) {
  Node n;
  n.p = p;
  n.q = q;
  n.fp = fp;
  n.fq = fq;
  double h = q - p;
  if (h < 1e-12) {
    // interval too small to subdivide; use the 2-Lipschitz bound directly
    n.fm = 0.5 * (fp + fq);
    double mass = weight_mass(p, q);
    double top = std::max(fp, fq) + 2.0 * h;
    double bot = std::max(0.0, std::min(fp, fq) - 2.0 * h);
    n.upper = top * mass + kEvalSlack * mass;
    n.lower = bot * mass;
    return n;
  }
  double m = 0.5 * (p + q);
  n.fm = f(m);
  double spm = (n.fm - fp) / (m - p);
  double smq = (fq - n.fm) / (q - m);
  // convex: chords bound from above
  double up = weighted_linear(fp - spm * p, spm, p, m) +
              weighted_linear(n.fm - smq * m, smq, m, q);
  // secants through the midpoint extended across the other half bound from
  // below, as does 0
  double lo = weighted_linear_clipped(n.fm - smq * m, smq, p, m) +
              weighted_linear_clipped(n.fm - spm * m, spm, m, q);
  double slack = kEvalSlack * (1.0 + std::abs(n.fm)) * weight_mass(p, q);
  n.upper = up + slack;
  n.lower = std::max(0.0, lo - slack);
  if (n.lower > n.upper) std::swap(n.lower, n.upper);
  return n;
}

void add_tree_phase_seeds(const GeneralizedGeodesic& c, double lo, double hi,
                          std::vector<double>& knots) {
  if (c.is_constant()) return;
  double a = std::max(lo, c.lower());
  double b = std::min(hi, c.upper());
  if (a >= b) return;
  double u0 = TreeSpace::edge_offset(c.evaluate(c.anchor_time()));
  double t0 = c.anchor_time();
  for (double phase : {u0, -u0}) {
    double first = t0 + phase + std::ceil((a - t0 - phase) - 1e-12);
    for (double t = first; t <= b + 1e-12; t += 1.0) {
      if (t > a && t < b) knots.push_back(t);
    }
  }
}

}  // namespace

CertifiedLength dist_fs(const GeneralizedGeodesic& c, const GeneralizedGeodesic& d,
                        const FlowMetricConfig& cfg) {
  if (&c.space() != &d.space()) {
    throw std::invalid_argument("dist_fs: geodesics over different spaces");
  }
  if (cfg.tolerance <= 0.0) throw std::invalid_argument("dist_fs: tolerance must be positive");
  const Space& X = c.space();

  if (cfg.use_closed_forms && c.is_constant() && d.is_constant()) {
    // numerator is constant; the weight integrates to 1
    double v = X.distance(c.evaluate(0.0), d.evaluate(0.0));
    return CertifiedLength{v, v + kEvalSlack * (1.0 + v), true};
  }

  auto f = [&](double t) { return X.distance(c.evaluate(t), d.evaluate(t)); };

  double d0 = f(0.0);

  // truncation: per-side tail bound e^{-A}(D0 + 2A + 2)/2 <= tolerance/4
  double A = 5.0;
  for (int i = 0; i < 64; ++i) {
    double need = std::log(2.0 * (d0 + 2.0 * A + 2.0) / cfg.tolerance);
    if (need <= A) break;
    A = need;
  }
  A += 1.0;
  double tail = std::exp(-A) * (d0 + 2.0 * A + 2.0) / 2.0;

  std::vector<double> knots{-A, 0.0, A};
  for (double b : {c.lower(), c.upper(), d.lower(), d.upper()}) {
    if (is_finite(b) && b > -A && b < A) knots.push_back(b);
  }
  if (X.kind() == SpaceKind::Tree) {
    // between vertex-crossing times the numerator is piecewise affine
    add_tree_phase_seeds(c, -A, A, knots);
    add_tree_phase_seeds(d, -A, A, knots);
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end(),
                          [](double a, double b) { return b - a < 1e-12; }),
              knots.end());

  std::vector<double> fv(knots.size());
  for (std::size_t i = 0; i < knots.size(); ++i) fv[i] = f(knots[i]);

  std::priority_queue<Node, std::vector<Node>, NodeOrder> heap;
  double total_upper = 0.0, total_lower = 0.0;
  long nodes = 0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    Node n = make_node(f, knots[i], knots[i + 1], fv[i], fv[i + 1]);
    total_upper += n.upper;
    total_lower += n.lower;
    heap.push(n);
    ++nodes;
  }

  double budget = cfg.tolerance / 2.0;
  bool converged = true;
  while (total_upper - total_lower > budget) {
    if (nodes >= cfg.max_intervals || heap.empty()) {
      converged = false;
      break;
    }
    Node top = heap.top();
    if (top.gap() <= 0.0) break;
    heap.pop();
    total_upper -= top.upper;
    total_lower -= top.lower;
    double m = 0.5 * (top.p + top.q);
    Node left = make_node(f, top.p, m, top.fp, top.fm);
    Node right = make_node(f, m, top.q, top.fm, top.fq);
    total_upper += left.upper + right.upper;
    total_lower += left.lower + right.lower;
    heap.push(left);
    heap.push(right);
    nodes += 2;
  }

  CertifiedLength out;
  out.lower = std::max(0.0, total_lower);
  out.upper = total_upper + 2.0 * tail;
  out.converged = converged;
  if (out.lower > out.upper) out.lower = out.upper;
  return out;
}

}  // namespace catflow
