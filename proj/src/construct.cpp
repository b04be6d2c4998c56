#include "polyweight/construct.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <memory>
#include <random>

#include "polyweight/errors.hpp"

namespace polyweight::construct {

// ---------------------------------------------------------------------------
// XiFunction and Lemma-M solver
// ---------------------------------------------------------------------------

XiFunction XiFunction::from_weight(const weights::OmegaWeight& w) {
  bool zero_at_origin = false;
  for (double z : w.zeros())
    if (std::fabs(z) < 1e-14) zero_at_origin = true;
  if (!zero_at_origin)
    throw DomainError("XiFunction: g must vanish at t = 0");
  XiFunction x;
  x.w = w;
  x.eps = w.g.kind == weights::GKind::ProductSinCos ? kPi / 4 : kPi / 2;
  return x;
}

bool XiFunction::limit_condition_holds(double r, double threshold) const {
  double t = eps * 0.5;
  double best = 0.0;
  for (int j = 0; j < 48; ++j) {
    double num = xi(r * t), den = xi(t);
    if (den == kNegInf || num == kNegInf) break;
    best = std::max(best, num / den);
    if (best > threshold) return true;
    t *= 0.5;
  }
  return best > threshold;
}

double solve_lemma_m(const XiFunction& xif, double m_slope) {
  double hi = xif.eps * (1.0 - 1e-12);
  if (!(xif.xi(hi) + m_slope * hi > 0))
    throw NoBracketError("solve_lemma_m: M too small, -M eps < xi(eps)");
  double lo = 1e-300;
  auto h = [&](double y) { return xif.xi(y) + m_slope * y; };
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (h(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Schedules
// ---------------------------------------------------------------------------

Schedule neg_schedule(const weights::OmegaWeight& w, const std::vector<long long>& n_list,
                      double p) {
  XiFunction xif = XiFunction::from_weight(w);
  if (!xif.limit_condition_holds())
    throw DomainError("neg_schedule: weight fails the log-ratio growth condition");
  const bool pinf = std::isinf(p);
  Schedule s;
  s.p = p;
  for (long long n : n_list) {
    double nf = static_cast<double>(n);
    double root1ml = std::pow(nf, -0.25);         // sqrt(1 - lambda^2)
    double lambda = std::sqrt(1.0 - std::sqrt(1.0 / nf));
    ScheduleRow row{};
    row.n = n;
    row.lambda = lambda;
    if (pinf) {
      double m_slope = 0.5 * nf * root1ml;
      double z = solve_lemma_m(xif, m_slope);
      row.aux = z;
      row.a = z / lambda;
      row.residual = std::fabs(xif.xi(z) + m_slope * z) /
                     std::max(1e-300, m_slope * z);
      double hn = solve_lemma_m(xif, std::sqrt(nf));
      row.hn_ordered = z < hn;
    } else {
      // xi((2 lambda - 1) a) = -p n lambda a (1 - lambda^2), solved through
      // the same bisection with the slope rescaled onto s = (2 lambda - 1) a
      double twol1 = 2.0 * lambda - 1.0;
      if (!(twol1 > 0)) throw DomainError("neg_schedule: 2 lambda - 1 <= 0");
      double m_slope = p * nf * lambda * (1.0 - lambda * lambda) / twol1;
      double sroot = solve_lemma_m(xif, m_slope);
      row.aux = sroot;
      row.a = sroot / twol1;
      row.residual = std::fabs(xif.xi(sroot) + m_slope * sroot) /
                     std::max(1e-300, m_slope * sroot);
      double hn = solve_lemma_m(xif, std::sqrt(nf));
      row.hn_ordered = sroot < hn;
    }
    row.k_deg = n;
    row.k_log = std::log(nf);
    row.feasible = true;
    double la = lambda * row.a;
    double mult = pinf ? 1.0 : p;
    row.p13 = mult * nf * la * root1ml + xif.xi(la);
    row.p14_r05 = 2.0 * mult * nf * row.a + xif.xi(0.5 * row.a);
    row.p14_r09 = 2.0 * mult * nf * row.a + xif.xi(0.9 * row.a);
    s.rows.push_back(row);
  }
  return s;
}

Schedule neg11_schedule(const weights::OmegaWeight& w, const std::vector<long long>& n_list,
                        long long k_cap) {
  XiFunction xif = XiFunction::from_weight(w);
  Schedule s;
  s.p = kPosInf;
  double c_prev = xif.eps / 2;
  std::vector<long long> ns = n_list;
  std::sort(ns.begin(), ns.end());
  for (long long n : ns) {
    if (n < 2) throw DomainError("neg11_schedule: n >= 2 (lambda_n = 1 - 1/n)");
    double nf = static_cast<double>(n);
    double lambda = 1.0 - 1.0 / nf;
    double target = std::log(2.0 * nf * nf);  // margin-2 form of the ratio bound
    // ratio(c) = xi((1-1/n) c) / xi(c) decreasing in c; find the largest
    // admissible c by bisection
    auto ratio_ok = [&](double c) {
      double num = xif.xi((1.0 - 1.0 / nf) * c);
      double den = xif.xi(c);
      if (den == kNegInf || num == kNegInf) return true;  // both huge: holds
      // both negative; work with log(|num|/|den|)
      return std::log(num / den) >= target;
    };
    double c;
    if (ratio_ok(c_prev)) {
      c = c_prev;
    } else {
      double lo = 1e-12, hi = c_prev;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (ratio_ok(mid) ? lo : hi) = mid;
      }
      c = lo;
    }
    c = std::min(c, c_prev);
    c_prev = c;

    ScheduleRow row{};
    row.n = n;
    row.lambda = lambda;
    row.aux = c;
    row.a = c / lambda;
    double root1ml = std::sqrt(1.0 - lambda * lambda);
    double xi_c = xif.xi(c);
    row.k_log = std::log(-xi_c) - std::log(c * root1ml) + std::log(2.0);
    double k_real = -xi_c / (c * root1ml);
    if (std::isfinite(k_real) && 2.0 * k_real < 9.2e18) {
      row.k_deg = 2 * static_cast<long long>(std::floor(k_real));
    } else {
      row.k_deg = std::numeric_limits<long long>::max();
    }
    row.feasible = row.k_deg <= k_cap && row.k_deg >= 2;
    row.residual = std::log(xif.xi((1.0 - 1.0 / nf) * c) / xi_c) - target;
    row.p13 = -xi_c;  // K lambda a sqrt(1-lambda^2) + xi(lambda a) ~ -xi(c)
    double kf = std::exp(row.k_log);
    row.p14_r05 = 2.0 * kf * row.a + xif.xi(0.5 * row.a);
    row.p14_r09 = 2.0 * kf * row.a + xif.xi(0.9 * row.a);
    row.hn_ordered = true;
    s.rows.push_back(row);
  }
  return s;
}

std::vector<DivergenceRow> divergence_report(const weights::CompositeWeight& w,
                                             const Schedule& s, double p,
                                             const quad::QuadConfig& cfg) {
  quad::WeightFn wf = quad::make_weight_fn(w);
  std::vector<DivergenceRow> out;
  for (const ScheduleRow& row : s.rows) {
    if (!row.feasible) continue;
    long long K = row.k_deg;
    auto Q = trig::counterexample_evaluator(K, row.a);
    trig::PointEvaluator Qd;
    Qd.degree = Q.degree;
    Qd.value = Q.deriv;
    Qd.deriv = Q.deriv;

    DivergenceRow d{};
    d.n = row.n;
    d.k_deg = K;
    if (std::isinf(p)) {
      quad::LogNorm nq = quad::weighted_sup_norm(Q, wf, IntervalSet::full_circle(), cfg);
      quad::LogNorm nd = quad::weighted_sup_norm(Qd, wf, IntervalSet::full_circle(), cfg);
      d.ratio = std::exp(nd.log_value - std::log(static_cast<double>(K)) - nq.log_value);
      double b = nq.argmax ? std::fabs(*nq.argmax) : 0.0;
      if (b > kPi / 2) b = kPi - b;  // even, pi-symmetric construction
      d.b_over_a = b / row.a;
      double st = std::sin(b);
      double y = 1.0 + (row.a - st) * (row.a + st);
      double kf = static_cast<double>(K);
      if (y > 1.0 + 1.0 / (kf * kf)) {
        d.lower_bound = std::fabs(std::sin(2.0 * b)) /
                        (4.0 * std::sqrt((y - 1.0) * (y + 1.0)));
      } else {
        d.lower_bound = 0.0;
      }
    } else {
      quad::LogNorm nq = quad::weighted_lp_norm(Q, wf, p, IntervalSet::full_circle(), cfg);
      quad::LogNorm nd = quad::weighted_lp_norm(Qd, wf, p, IntervalSet::full_circle(), cfg);
      d.ratio = std::exp(nd.log_value - std::log(static_cast<double>(K)) - nq.log_value);
      d.lower_bound = std::numeric_limits<double>::quiet_NaN();
      d.b_over_a = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(d);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Staircase weight
// ---------------------------------------------------------------------------

namespace {

// log int_0^{u} exp(-1/sin^2 s) ds for u in (0, pi], graded toward s = 0.
double log_bridge_integral(double u) {
  std::vector<double> gx, gw;
  quad::gauss_legendre(16, gx, gw);
  LogAccumulator acc;
  // geometric panels from u down toward 0; the integrand dies like
  // exp(-1/s^2), so 60 levels place the truncation far below everything
  double hi = u;
  for (int j = 0; j < 400 && hi > 1e-280; ++j) {
    double lo = hi * 0.5;
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double lhalf = std::log(half);
    for (std::size_t q = 0; q < gx.size(); ++q) {
      double sample = mid + half * gx[q];
      double sv = std::sin(sample);
      double lw = -1.0 / (sv * sv);
      acc.add_log(lw + std::log(gw[q]) + lhalf);
    }
    double tail_bound = -1.0 / (lo * lo) + std::log(lo);
    if (tail_bound < acc.log_total() - 60.0) break;
    hi = lo;
  }
  return acc.log_total();
}

}  // namespace

StaircaseWeight::StaircaseWeight(double gamma, int n_max)
    : gamma_(gamma), n_max_(n_max) {
  if (!(gamma > 0) || n_max < 2) throw DomainError("StaircaseWeight: gamma > 0, n_max >= 2");
  log_bridge_norm_ = log_bridge_integral(kPi);
}

double StaircaseWeight::bridge_log(double x) const {
  if (x <= 0.0) return kNegInf;
  if (x >= 1.0) return 0.0;
  static std::map<double, double> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(x);
    if (it != cache.end()) return it->second;
  }
  double v = log_bridge_integral(kPi * x) - log_bridge_norm_;
  std::lock_guard<std::mutex> lk(mu);
  if (cache.size() > 400000) cache.clear();
  cache.emplace(x, v);
  return v;
}

double StaircaseWeight::log_eval(double t) const {
  double at = std::fabs(wrap_angle(t));
  if (at == 0.0) return kNegInf;
  return log_eval_logt(std::log(at));
}

double StaircaseWeight::log_eval_logt(double log_t) const {
  const double log2v = std::log(2.0);
  // outermost plateau is d_1 (not 1): the n = 1 bridge ends at d_1, and a
  // unit top level would break the smooth join there; a constant rescale
  // changes none of the ratios this weight exists to exhibit
  if (log_t >= log_alpha(1)) return log_d(1);
  for (int n = 1; n <= n_max_; ++n) {
    double la_n = log_alpha(n);
    double la_half = la_n - log2v;
    if (log_t >= la_half) {
      // bridge zone [alpha_n / 2, alpha_n]:
      //   d_{n+1} + (d_n - d_{n+1}) W(2 t / alpha_n - 1)
      double x = 2.0 * std::exp(log_t - la_n) - 1.0;
      double lw = bridge_log(x);
      double l_hi = log_d(n), l_lo = log_d(n + 1);
      if (lw == kNegInf) return l_lo;
      // log( e^{l_lo} + (e^{l_hi} - e^{l_lo}) W )
      double main = l_hi + lw + std::log1p(-std::exp(std::min(0.0, l_lo - l_hi)));
      return log_add(l_lo, main);
    }
    double la_next = (n + 1 <= n_max_) ? log_alpha(n + 1) : -kPosInf;
    if (log_t >= la_next) {
      if (n + 1 > n_max_) break;
      return log_d(n + 1);  // plateau [alpha_{n+1}, alpha_n / 2]
    }
  }
  return log_d(n_max_ + 1);  // representable-range clamp below alpha_{n_max}
}

quad::WeightFn StaircaseWeight::to_weight_fn() const {
  quad::WeightFn fn;
  auto self = std::make_shared<StaircaseWeight>(*this);
  fn.log_w = [self](double t) { return self->log_eval(t); };
  fn.anchors.push_back({0.0, 0.0});
  return fn;
}

long long StaircaseWeight::k_of(int n) const {
  double la = log_alpha(n);
  if (la < -700.0) return -1;
  return static_cast<long long>(std::floor(0.01 * std::exp(-la)));
}

std::vector<StaircaseRow> staircase_bernstein_check(const StaircaseWeight& sw,
                                                    const std::vector<int>& n_rows,
                                                    int trials, std::uint64_t seed,
                                                    const quad::QuadConfig& cfg) {
  quad::WeightFn wf = sw.to_weight_fn();
  std::vector<StaircaseRow> out;
  for (int n : n_rows) {
    long long K = sw.k_of(n);
    if (sw.log_alpha(n) < -700.0 || K < 1 || K > 10000) continue;
    StaircaseRow row{};
    row.n = n;
    row.k_deg = K;
    row.log_alpha = sw.log_alpha(n);
    double best = 0.0;
    std::mt19937_64 rng(seed * 0x2545f4914f6cdd1dULL + n);
    std::normal_distribution<double> g;
    int kd = static_cast<int>(K);
    for (int trial = 0; trial < trials; ++trial) {
      trig::TrigPoly tp(kd);
      tp.a[0] = g(rng);
      for (int k = 1; k <= kd; ++k) {
        tp.a[k] = g(rng);
        tp.b[k] = g(rng);
      }
      auto T = trig::PointEvaluator::from_trigpoly(tp);
      auto Td = trig::PointEvaluator::from_trigpoly(tp.derivative());
      double num = quad::weighted_sup_norm(Td, wf, IntervalSet::full_circle(), cfg).log_value;
      double den = quad::weighted_sup_norm(T, wf, IntervalSet::full_circle(), cfg).log_value;
      best = std::max(best, std::exp(num - std::log(static_cast<double>(K)) - den));
    }
    // adversarial seeds concentrated at the alpha_n scale
    for (double mult : {0.5, 1.0, 4.0}) {
      double a = std::exp(row.log_alpha) * mult;
      if (!(a > 0) || a >= 1) continue;
      long long kq = K / 2;
      if (kq < 1) continue;
      auto Q = trig::counterexample_evaluator(kq, a);
      trig::PointEvaluator Qd;
      Qd.degree = Q.degree;
      Qd.value = Q.deriv;
      Qd.deriv = Q.deriv;
      double num = quad::weighted_sup_norm(Qd, wf, IntervalSet::full_circle(), cfg).log_value;
      double den = quad::weighted_sup_norm(Q, wf, IntervalSet::full_circle(), cfg).log_value;
      best = std::max(best, std::exp(num - std::log(static_cast<double>(K)) - den));
    }
    row.empirical_c = best;
    row.scale_probe = best * 100.0;  // identical trials against K' = K/100
    out.push_back(row);
  }
  return out;
}

}  // namespace polyweight::construct
