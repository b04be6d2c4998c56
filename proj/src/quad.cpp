#include "polyweight/quad.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <map>
#include <mutex>

#include "polyweight/errors.hpp"
#include "polyweight/parallel.hpp"

namespace polyweight::quad {

// ---------------------------------------------------------------------------
// Gauss-Legendre rule (Newton on the recurrence), cached per order
// ---------------------------------------------------------------------------

void gauss_legendre(int order, std::vector<double>& x, std::vector<double>& w) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(order);
    if (it != cache.end()) {
      x = it->second.first;
      w = it->second.second;
      return;
    }
  }
  x.assign(order, 0.0);
  w.assign(order, 0.0);
  int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < order; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = order * (z * p1 - p2) / (z * z - 1.0);
      double dz = p1 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[order - 1 - i] = z;
    w[i] = w[order - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  std::lock_guard<std::mutex> lk(mu);
  cache.emplace(order, std::make_pair(x, w));
}

// ---------------------------------------------------------------------------
// Weight views
// ---------------------------------------------------------------------------

WeightFn make_weight_fn(const weights::CompositeWeight& w) {
  WeightFn fn;
  auto wc = std::make_shared<weights::CompositeWeight>(w);
  fn.log_w = [wc](double t) { return wc->log_weight(t); };
  for (double s : w.singular_points()) {
    double mg = 0.0;
    for (const auto& j : w.jacobi_factors())
      if (std::fabs(wrap_angle(j.theta - s)) < 1e-14) mg = std::min(mg, j.gamma);
    fn.anchors.push_back({s, mg});
  }
  return fn;
}

WeightFn unit_weight_fn() { return WeightFn{}; }

// ---------------------------------------------------------------------------
// Panel construction
// ---------------------------------------------------------------------------

namespace {

struct Panel {
  double lo, hi;
};

struct GapBound {
  double edge_t;      // evaluation point bounding the omitted zone
  double log_width;   // log of omitted width
  double extra_log;   // 1/(1+gamma) factor for blowing-up jacobi factors
};

struct PanelSet {
  std::vector<Panel> panels;
  std::vector<GapBound> gaps;
};

// Geometric ladder depth near an anchor; negative-gamma factors converge
// like gap^(1+gamma), so the depth is stretched accordingly.
int effective_depth(const QuadConfig& cfg, double min_gamma) {
  if (min_gamma >= 0.0) return cfg.grading_depth;
  return static_cast<int>(std::ceil(cfg.grading_depth / (1.0 + min_gamma)));
}

void build_arc_panels(const WeightFn& w, double lo, double hi, long long degree,
                      const QuadConfig& cfg, int level, PanelSet& out) {
  double len = hi - lo;
  if (!(len > 0)) return;

  // Uniform budget: resolve the oscillation of |T|^p w (phase <= ~4 rad per
  // panel at base level) and at least base_panels per arc.
  long long deg_eff = std::max<long long>(1, degree + w.osc_degree);
  double m_d = std::max(static_cast<double>(cfg.base_panels) * len / kTwoPi + 1.0,
                        static_cast<double>(deg_eff) * len / 4.0);
  long long m = static_cast<long long>(std::ceil(m_d)) << level;
  m = std::min<long long>(m, 80000000LL);
  double width = len / static_cast<double>(m);

  // Anchors touching this arc (including across the seam).
  struct LocalAnchor {
    double t;
    int depth;
  };
  std::vector<LocalAnchor> anchors;
  for (const auto& a : w.anchors) {
    for (double s : {a.t, a.t - kTwoPi, a.t + kTwoPi}) {
      if (s >= lo - 1e-13 && s <= hi + 1e-13)
        anchors.push_back({std::min(std::max(s, lo), hi),
                           effective_depth(cfg, a.min_gamma) + level});
    }
  }
  std::sort(anchors.begin(), anchors.end(),
            [](const LocalAnchor& x, const LocalAnchor& y) { return x.t < y.t; });

  // Grading radius per anchor: half the gap to the neighbour, capped by the
  // arc and by a handful of uniform cells.
  std::vector<double> radius(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    double r = std::max(len / 8.0, 4.0 * width);
    r = std::min(r, len);
    if (i > 0) r = std::min(r, (anchors[i].t - anchors[i - 1].t) / 2.0);
    if (i + 1 < anchors.size()) r = std::min(r, (anchors[i + 1].t - anchors[i].t) / 2.0);
    radius[i] = r;
  }

  auto in_grading_zone = [&](double t) {
    for (std::size_t i = 0; i < anchors.size(); ++i)
      if (std::fabs(t - anchors[i].t) < radius[i] * (1.0 - 1e-12)) return true;
    return false;
  };

  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(std::min<long long>(m + 1, 1 << 22)));
  for (long long i = 0; i <= m; ++i) {
    double e = (i == m) ? hi : lo + width * static_cast<double>(i);
    if (!in_grading_zone(e)) edges.push_back(e);
  }

  struct MinGamma {
    double g = 0.0;
  };
  // Ladder edges on each side of each anchor; the innermost gap is omitted
  // and certified into `gaps`.
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    double s = anchors[i].t;
    double r = radius[i];
    int depth = anchors[i].depth;
    double gfloor = 1e-300;
    double min_gamma = 0.0;
    for (const auto& a : w.anchors)
      if (std::fabs(wrap_angle(a.t - s)) < 1e-13) min_gamma = a.min_gamma;
    for (int side = -1; side <= 1; side += 2) {
      double end = s + side * r;
      if (side < 0 && end < lo - 1e-13) end = lo;
      if (side > 0 && end > hi + 1e-13) end = hi;
      double span = std::fabs(end - s);
      if (span <= 0) continue;
      // skip sides pointing outside the arc
      if ((side < 0 && s <= lo + 1e-15) || (side > 0 && s >= hi - 1e-15)) continue;
      double d = span;
      edges.push_back(end);
      int j = 0;
      for (; j < depth; ++j) {
        d *= 0.5;
        if (d < gfloor) break;
        edges.push_back(s + side * d);
      }
      GapBound gb;
      gb.edge_t = s + side * d;
      gb.log_width = std::log(d);
      gb.extra_log = min_gamma < 0 ? -std::log1p(min_gamma) : 0.0;
      out.gaps.push_back(gb);
    }
    if (anchors[i].t > lo + 1e-15 && anchors[i].t < hi - 1e-15) {
      // the anchor itself separates the two ladders; no panel crosses it
    }
  }

  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double a = edges[i], b = edges[i + 1];
    if (!(b > a)) continue;
    // drop panels that contain an anchor in their interior closure: these are
    // exactly the omitted gaps around each anchor
    bool is_gap = false;
    for (std::size_t q = 0; q < anchors.size(); ++q) {
      if (anchors[q].t >= a - 1e-300 && anchors[q].t <= b + 1e-300 &&
          b - a <= radius[q] * std::pow(0.5, anchors[q].depth) * 2.000001) {
        is_gap = true;
        break;
      }
    }
    if (!is_gap) out.panels.push_back({a, b});
  }
}

PanelSet build_panels(const WeightFn& w, const IntervalSet& domain,
                      long long degree, const QuadConfig& cfg, int level) {
  PanelSet ps;
  for (const auto& arc : domain.pieces())
    build_arc_panels(w, arc.lo, arc.hi, degree, cfg, level, ps);
  return ps;
}

}  // namespace

NodeSet build_node_set(const WeightFn& w, const IntervalSet& domain,
                       long long degree, const QuadConfig& cfg, int level) {
  PanelSet ps = build_panels(w, domain, degree, cfg, level);
  std::vector<double> gx, gw;
  gauss_legendre(cfg.nodes, gx, gw);

  NodeSet ns;
  std::size_t total = ps.panels.size() * gx.size();
  ns.t.resize(total);
  ns.log_qw.resize(total);
  ns.log_gw.resize(total);

  const std::size_t npanels = ps.panels.size();
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (long long pi = 0; pi < static_cast<long long>(npanels); ++pi) {
    const Panel& p = ps.panels[pi];
    double mid = 0.5 * (p.lo + p.hi);
    double half = 0.5 * (p.hi - p.lo);
    double lhalf = std::log(half);
    for (std::size_t q = 0; q < gx.size(); ++q) {
      std::size_t idx = pi * gx.size() + q;
      double t = mid + half * gx[q];
      ns.t[idx] = t;
      double lg = std::log(gw[q]) + lhalf;
      ns.log_gw[idx] = lg;
      ns.log_qw[idx] = lg + w.log_w(t);
    }
  }

  LogAccumulator gapacc;
  for (const auto& g : ps.gaps)
    gapacc.add_log(w.log_w(g.edge_t) + g.log_width + g.extra_log + std::log(2.0));
  ns.discard_log = gapacc.log_total();
  return ns;
}

// ---------------------------------------------------------------------------
// L_p norms
// ---------------------------------------------------------------------------

namespace {

// log of int |T|^p w over the node set, with per-panel max-factoring and a
// deterministic panel-ordered reduction. Contributions more than
// cfg.discard_nats below the running max are dropped with a certified bound.
struct IntegralResult {
  double log_integral;
  double discard_log;
};

IntegralResult integrate_nodes(const trig::PointEvaluator& T, double p,
                               const NodeSet& ns, const QuadConfig& cfg,
                               double gap_p_scale_log) {
  const std::size_t n = ns.t.size();
  const std::size_t per_panel = static_cast<std::size_t>(cfg.nodes);
  const std::size_t npanels = n / per_panel;
  std::vector<double> panel_log(npanels, kNegInf);

#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (long long pi = 0; pi < static_cast<long long>(npanels); ++pi) {
    LogAccumulator acc;
    for (std::size_t q = 0; q < per_panel; ++q) {
      std::size_t idx = pi * per_panel + q;
      double lw = ns.log_qw[idx];
      if (lw == kNegInf) continue;
      SignedLog tv = T.value(ns.t[idx]);
      if (tv.sign == 0) continue;
      acc.add_log(p * tv.log_abs + lw);
    }
    panel_log[pi] = acc.log_total();
  }

  double run_max = kNegInf;
  double sum = 0.0;
  LogAccumulator dropped;
  for (std::size_t pi = 0; pi < npanels; ++pi) {
    double v = panel_log[pi];
    if (v == kNegInf) continue;
    if (v < run_max - cfg.discard_nats) {
      dropped.add_log(v);
      continue;
    }
    if (v <= run_max) {
      sum += std::exp(v - run_max);
    } else {
      sum = (run_max == kNegInf) ? 1.0 : sum * std::exp(run_max - v) + 1.0;
      run_max = v;
    }
  }
  IntegralResult r;
  r.log_integral = run_max == kNegInf ? kNegInf : run_max + std::log(sum);
  LogAccumulator disc;
  disc.add_log(dropped.log_total());
  disc.add_log(ns.discard_log + gap_p_scale_log);
  r.discard_log = disc.log_total();
  return r;
}

}  // namespace

LogNorm weighted_lp_norm(const trig::PointEvaluator& T, const WeightFn& w,
                         double p, const IntervalSet& domain,
                         const QuadConfig& cfg) {
  if (!(p > 0) || std::isinf(p))
    throw DomainError("weighted_lp_norm: p in (0, inf); use weighted_sup_norm");
  if (domain.is_empty()) throw DomainError("weighted_lp_norm: empty domain");

  // |T|^p over the omitted gaps enters the certified discard through a crude
  // sup estimate (gap-edge weight value is in the node-set bound already).
  double tmax = kNegInf;
  for (int i = 0; i < 32; ++i) {
    SignedLog v = T.value(-kPi + kTwoPi * i / 32.0);
    if (v.sign != 0) tmax = std::max(tmax, v.log_abs);
  }
  if (tmax == kNegInf) tmax = 0.0;
  double gap_scale = p * (tmax + 2.0);  // margin: |T| can exceed coarse scan

  double prev = kNegInf, delta = kPosInf;
  IntegralResult cur{kNegInf, kNegInf};
  bool converged = false;
  // |T|^p oscillates p times faster than T; widen the panel budget with p
  long long deg_for_panels = static_cast<long long>(
      std::ceil(static_cast<double>(T.degree) * std::max(1.0, p)));
  for (int level = 0; level <= cfg.max_refine_levels; ++level) {
    NodeSet ns = build_node_set(w, domain, deg_for_panels, cfg, level);
    cur = integrate_nodes(T, p, ns, cfg, gap_scale);
    if (level > 0) {
      delta = std::fabs(cur.log_integral - prev);
      if (cur.log_integral == kNegInf && prev == kNegInf) delta = 0.0;
      if (delta <= cfg.tol * p) {
        converged = true;
        break;
      }
    }
    prev = cur.log_integral;
  }

  LogNorm out;
  out.p = p;
  out.converged = converged;
  out.log_value = cur.log_integral / p + T.log_scale;
  double delta_log =
      cur.log_integral + std::log(std::max(converged ? delta : cfg.tol * p, 1e-300));
  out.error_log = log_add(delta_log, cur.discard_log);
  if (out.error_log != kNegInf)
    out.error_log = out.error_log - std::log(p) + T.log_scale;
  return out;
}

// ---------------------------------------------------------------------------
// Sup norm: dense scan + golden-section polish
// ---------------------------------------------------------------------------

namespace {

double golden_refine(const std::function<double(double)>& f, double a, double b,
                     double& argmax) {
  const double gr = 0.6180339887498949;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-12) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  argmax = 0.5 * (a + b);
  return std::max(f1, f2);
}

}  // namespace

LogNorm weighted_sup_norm(const trig::PointEvaluator& T, const WeightFn& w,
                          const IntervalSet& domain, const QuadConfig& cfg) {
  if (domain.is_empty()) throw DomainError("weighted_sup_norm: empty domain");
  auto f = [&](double t) {
    SignedLog v = T.value(t);
    if (v.sign == 0) return kNegInf;
    double lw = w.log_w(t);
    return v.log_abs + lw;
  };

  long long deg_eff = std::max<long long>(1, T.degree + w.osc_degree);
  LogNorm out;
  out.p = kPosInf;
  double best = kNegInf, best_t = 0.0;

  for (const auto& arc : domain.pieces()) {
    double len = arc.length();
    long long n = std::max<long long>(
        8, static_cast<long long>(std::ceil(static_cast<double>(cfg.sup_density) *
                                            static_cast<double>(deg_eff) * len / kTwoPi)));
    n = std::min<long long>(n, 400000000LL);
    std::vector<double> ts;  // graded samples only; the dense scan streams
    ts.reserve(w.anchors.size() * (4 * cfg.grading_depth + 8) + 8);
    for (const auto& a : w.anchors) {
      for (double s : {a.t, a.t - kTwoPi, a.t + kTwoPi}) {
        if (s < arc.lo - 0.5 || s > arc.hi + 0.5) continue;
        double r = std::min(len, 0.5);
        for (int j = 0; j <= 2 * cfg.grading_depth; ++j) {
          double d = r * std::pow(0.7, j);
          for (int side = -1; side <= 1; side += 2) {
            double t = s + side * d;
            if (t > arc.lo && t < arc.hi) ts.push_back(t);
          }
        }
      }
    }
    std::sort(ts.begin(), ts.end());

    // dense scan with local-max bracketing; graded points checked directly
    double h = len / static_cast<double>(n);
    double fprev = f(arc.lo + 1e-15), fcur = f(arc.lo + h);
    if (fprev > best) {
      best = fprev;
      best_t = arc.lo + 1e-15;
    }
    struct Cand {
      double a, b, v;
    };
    std::vector<Cand> cands;
    for (long long i = 1; i < n; ++i) {
      double tn = arc.lo + h * static_cast<double>(i + 1);
      if (i + 1 == n) tn = arc.hi - 1e-15;
      double fnext = f(tn);
      if (fcur >= fprev && fcur >= fnext && fcur != kNegInf)
        cands.push_back({arc.lo + h * static_cast<double>(i - 1), tn, fcur});
      if (fcur > best) {
        best = fcur;
        best_t = arc.lo + h * static_cast<double>(i);
      }
      fprev = fcur;
      fcur = fnext;
    }
    if (fcur > best) {
      best = fcur;
      best_t = arc.hi - 1e-15;
    }
    for (double t : ts) {
      double v = f(t);
      if (v > best) {
        best = v;
        best_t = t;
      }
    }
    std::sort(cands.begin(), cands.end(),
              [](const Cand& x, const Cand& y) { return x.v > y.v; });
    for (std::size_t i = 0; i < cands.size() && i < 8; ++i) {
      double am;
      double v = golden_refine(f, cands[i].a, cands[i].b, am);
      if (v > best) {
        best = v;
        best_t = am;
      }
    }
  }
  out.log_value = best == kNegInf ? kNegInf : best + T.log_scale;
  out.argmax = best_t;
  out.error_log =
      best == kNegInf ? kNegInf : out.log_value - 20.0;  // scan-resolution heuristic
  return out;
}

// ---------------------------------------------------------------------------
// Serial reference (midpoint rule, doubled until stable)
// ---------------------------------------------------------------------------

LogNorm reference_lp_norm(const trig::PointEvaluator& T, const WeightFn& w,
                          double p, const IntervalSet& domain, double tol,
                          long long max_points) {
  if (!(p > 0) || std::isinf(p)) throw DomainError("reference_lp_norm: finite p");
  double prev = kNegInf;
  LogNorm out;
  out.p = p;
  out.converged = false;
  for (long long n = 4096; n <= max_points; n *= 2) {
    LogAccumulator acc;
    for (const auto& arc : domain.pieces()) {
      long long m = std::max<long long>(
          16, static_cast<long long>(std::ceil(static_cast<double>(n) * arc.length() / kTwoPi)));
      double h = arc.length() / static_cast<double>(m);
      double lh = std::log(h);
      for (long long i = 0; i < m; ++i) {
        double t = arc.lo + h * (static_cast<double>(i) + 0.5);
        double lw = w.log_w(t);
        if (lw == kNegInf) continue;
        SignedLog tv = T.value(t);
        if (tv.sign == 0) continue;
        acc.add_log(p * tv.log_abs + lw + lh);
      }
    }
    double cur = acc.log_total();
    if (n > 4096 || cur == kNegInf) {
      double delta = std::fabs(cur - prev);
      if (cur == kNegInf && prev == kNegInf) delta = 0.0;
      if (delta <= tol * p) {
        out.converged = true;
        out.log_value = cur / p + T.log_scale;
        out.error_log = cur == kNegInf
                            ? kNegInf
                            : cur + std::log(std::max(delta, 1e-300)) - std::log(p);
        return out;
      }
    }
    prev = cur;
  }
  out.log_value = prev / p + T.log_scale;
  out.error_log = prev;
  return out;
}

double fourier_coefficient(const weights::CompositeWeight& w, long long k,
                           const QuadConfig& cfg) {
  FourierCoeff c = fourier_coefficient_log(w, k, cfg);
  if (c.sign == 0) return 0.0;
  return static_cast<double>(c.sign) * std::exp(c.log_abs);
}

}  // namespace polyweight::quad
