#include "polyweight/approx.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "polyweight/errors.hpp"
#include "polyweight/parallel.hpp"

namespace polyweight::approx {

DecayReport fourier_decay_report(const weights::OmegaWeight& w, long long n_min,
                                 long long n_max, const quad::QuadConfig& cfg) {
  if (n_min < 16 || n_max > 4096 || n_min > n_max)
    throw DomainError("fourier_decay_report: need 16 <= n_min <= n_max <= 4096");
  std::vector<long long> grid;
  for (double x = static_cast<double>(n_min); x < static_cast<double>(n_max) * 0.999;
       x *= std::sqrt(2.0)) {
    long long n = static_cast<long long>(std::llround(x));
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  if (grid.empty() || grid.back() != n_max) grid.push_back(n_max);

  weights::CompositeWeight cw = weights::CompositeWeight::from_omega(w);
  DecayReport rep;
  rep.rows.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    long long n = grid[i];
    quad::FourierCoeff c = quad::fourier_coefficient_log(cw, n, cfg);
    DecayRow row;
    row.n = n;
    row.sign = c.sign;
    row.coeff_log = c.log_abs;
    row.censored = c.censored || c.log_abs < -700.0;
    row.n_x1 = static_cast<double>(n) * weights::solve_x1(w.f, static_cast<double>(n));
    rep.rows[i] = row;
  }

  // fit window: upper geometric half of the uncensored rows
  std::vector<std::size_t> ok;
  for (std::size_t i = 0; i < rep.rows.size(); ++i)
    if (!rep.rows[i].censored) ok.push_back(i);
  if (ok.size() < 2) {
    rep.pass = false;
    return rep;
  }
  std::size_t wstart = ok[ok.size() / 2];
  rep.window_begin = wstart;
  double c_fit = kPosInf;
  for (std::size_t i : ok)
    if (i >= wstart) c_fit = std::min(c_fit, -rep.rows[i].coeff_log / rep.rows[i].n_x1);
  rep.fitted_c = c_fit;
  rep.pass = c_fit > 0.0;
  return rep;
}

PartialSumError partial_sum_error(const weights::OmegaWeight& w, int n) {
  if (n < 8) throw DomainError("partial_sum_error: n >= 8");
  int two_m = 1 << 16;
  trig::PartialSumResult ps;
  while (true) {
    auto samples = trig::sample_periodic(
        [&](double t) { return std::exp(w.log_weight(t)); }, two_m);
    ps = trig::fourier_partial_sum(samples, n);
    if (!ps.aliasing_warning || two_m >= (1 << 22)) break;
    two_m *= 2;
  }
  trig::TrigPoly wn = ps.poly;
  trig::TrigPoly wnd = wn.derivative();

  // grid: 16n dense plus graded stacks toward each zero of g
  std::vector<double> ts;
  long long dense = 16LL * n;
  ts.reserve(static_cast<std::size_t>(dense) + w.zeros().size() * 120 + 8);
  for (long long i = 0; i < dense; ++i)
    ts.push_back(-kPi + kTwoPi * (static_cast<double>(i) + 0.5) / static_cast<double>(dense));
  for (double z : w.zeros())
    for (int j = 1; j <= 60; ++j) {
      double d = 0.5 * std::pow(0.7, j);
      ts.push_back(wrap_angle(z + d));
      ts.push_back(wrap_angle(z - d));
    }

  double e0 = kNegInf, e1 = kNegInf;
  for (double t : ts) {
    double lw = w.log_weight(t);
    double wv = lw == kNegInf ? 0.0 : std::exp(lw);
    double diff0 = std::fabs(wv - wn.eval(t));
    if (diff0 > 0) e0 = std::max(e0, std::log(diff0));
    double wd;
    if (lw == kNegInf) {
      wd = 0.0;  // omega' vanishes with omega at the essential zeros
    } else {
      double dl = w.log_weight_deriv(t);
      wd = std::isfinite(dl) ? wv * dl : 0.0;
    }
    double diff1 = std::fabs(wd - wnd.eval(t));
    if (diff1 > 0) e1 = std::max(e1, std::log(diff1));
  }
  PartialSumError r;
  r.e0_log = e0;
  r.e1_log = e1;
  r.samples_used = two_m;
  r.aliasing_clean = !ps.aliasing_warning;
  return r;
}

namespace {

// log (sum qw-geometry |T|^p extra-weight) ^ (1/p) over a fixed node set with
// a precomputed log-weight channel; used so the degree-Kn partial-sum weight
// is evaluated once per node set rather than once per test polynomial.
double nodes_lp(const quad::NodeSet& ns, const std::vector<double>& log_w_extra,
                const trig::PointEvaluator& T, double p) {
  LogAccumulator acc;
  for (std::size_t i = 0; i < ns.t.size(); ++i) {
    if (ns.log_gw[i] == kNegInf || log_w_extra[i] == kNegInf) continue;
    SignedLog v = T.value(ns.t[i]);
    if (v.sign == 0) continue;
    acc.add_log(p * (v.log_abs + T.log_scale) + log_w_extra[i] + ns.log_gw[i]);
  }
  return acc.log_total() / p;
}

}  // namespace

EquivalenceResult norm_equivalence_K(const weights::OmegaWeight& w,
                                     const weights::CompositeWeight& u, double p,
                                     int n, int k_max,
                                     const std::vector<trig::PointEvaluator>& test_polys,
                                     const quad::QuadConfig& cfg) {
  const bool sup_mode = std::isinf(p);
  weights::CompositeWeight wu = u;
  wu.add_omega(w);
  quad::WeightFn wu_fn = quad::make_weight_fn(wu);
  quad::WeightFn u_fn = quad::make_weight_fn(u);

  // reference norms N_w(T) once per polynomial
  std::vector<double> ref(test_polys.size());
  long long maxdeg = 1;
  for (std::size_t i = 0; i < test_polys.size(); ++i) {
    maxdeg = std::max(maxdeg, test_polys[i].degree);
    ref[i] = sup_mode
                 ? quad::weighted_sup_norm(test_polys[i], wu_fn,
                                           IntervalSet::full_circle(), cfg).log_value
                 : quad::weighted_lp_norm(test_polys[i], wu_fn, p,
                                          IntervalSet::full_circle(), cfg).log_value;
  }

  EquivalenceResult out;
  const double bound = std::log(2.0);
  for (int K = 1; K <= k_max; K *= 2) {
    out.tried.push_back(K);
    long long kn = static_cast<long long>(K) * n;
    int two_m = 1 << 16;
    trig::PartialSumResult ps;
    while (true) {
      auto samples = trig::sample_periodic(
          [&](double t) {
            double lw = w.log_weight(t);
            return lw == kNegInf ? 0.0
                                 : std::exp(sup_mode ? lw : lw / p);
          },
          two_m);
      ps = trig::fourier_partial_sum(samples, static_cast<int>(kn));
      if (!ps.aliasing_warning || two_m >= (1 << 22)) break;
      two_m *= 2;
    }
    trig::TrigPoly vkn = ps.poly;

    double worst = 0.0;
    bool all_ok = true;
    if (sup_mode) {
      // ||T v_Kn u||_inf vs ||T w u||_inf
      quad::WeightFn vw;
      auto vk = std::make_shared<trig::TrigPoly>(vkn);
      auto uw = std::make_shared<weights::CompositeWeight>(u);
      vw.log_w = [vk, uw](double t) {
        double v = vk->eval(t);
        if (v == 0.0) return kNegInf;
        return std::log(std::fabs(v)) + uw->log_weight(t);
      };
      vw.anchors = u_fn.anchors;
      vw.osc_degree = kn;
      for (std::size_t i = 0; i < test_polys.size(); ++i) {
        double nk = quad::weighted_sup_norm(test_polys[i], vw,
                                            IntervalSet::full_circle(), cfg).log_value;
        double dev = std::fabs(ref[i] - nk);
        worst = std::max(worst, dev);
        if (dev > bound) all_ok = false;
      }
    } else {
      // node sets at two refinement levels with the |v_Kn|^p u channel baked in
      quad::WeightFn geom;
      geom.anchors = u_fn.anchors;
      geom.osc_degree = static_cast<long long>(std::ceil(static_cast<double>(kn) * std::max(1.0, p)));
      for (std::size_t i = 0; i < test_polys.size() && all_ok; ++i) {
        double prev = 0.0;
        bool have = false;
        double nk = 0.0;
        for (int level = 1; level <= 2; ++level) {
          quad::NodeSet ns = quad::build_node_set(
              geom, IntervalSet::full_circle(),
              static_cast<long long>(std::ceil(test_polys[i].degree * std::max(1.0, p))),
              cfg, level);
          std::vector<double> extra(ns.t.size());
          for (std::size_t j = 0; j < ns.t.size(); ++j) {
            double v = vkn.eval(ns.t[j]);
            extra[j] = v == 0.0 ? kNegInf
                                : p * std::log(std::fabs(v)) + u.log_weight(ns.t[j]);
          }
          nk = nodes_lp(ns, extra, test_polys[i], p);
          if (have && std::fabs(nk - prev) < 1e-6) break;
          prev = nk;
          have = true;
        }
        double dev = std::fabs(ref[i] - nk);
        worst = std::max(worst, dev);
        if (dev > bound) all_ok = false;
      }
    }
    out.worst_violation_log = worst;
    if (all_ok) {
      out.K = K;
      out.found = true;
      return out;
    }
  }
  out.found = false;
  return out;
}

}  // namespace polyweight::approx
