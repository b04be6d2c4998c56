#include "polyweight/weights.hpp"

#include <algorithm>
#include <cmath>

#include "polyweight/errors.hpp"
#include "polyweight/quad.hpp"

namespace polyweight::weights {

// ---------------------------------------------------------------------------
// FSpec
// ---------------------------------------------------------------------------

double FSpec::dlog_f(double x) const {
  switch (family) {
    case FFamily::Power:
      return -alpha / x;
    case FFamily::PowerLog: {
      // F = x^-a |log x|^xi; on (0,1): d log F = -a/x + xi/(x log x)
      double lx = std::log(x);
      return -alpha / x + xi1 / (x * lx);
    }
    case FFamily::ExpPower:
      // log F = x^-a, d log F = -a x^{-a-1}
      return -alpha * std::exp(-(alpha + 1.0) * std::log(x));
  }
  return 0;
}

F4Bounds FSpec::empirical_f4(int samples) const {
  double lo = std::log(1e-12), hi = std::log(verify_cap());
  F4Bounds b{0.0, kPosInf};
  for (int i = 0; i < samples; ++i) {
    double x = std::exp(lo + (hi - lo) * i / (samples - 1));
    double r = f4_ratio(x);
    b.a1 = std::max(b.a1, r);
    b.a2 = std::min(b.a2, r);
  }
  return b;
}

namespace {

// Bisection on log x for a monotone-decreasing criterion h(log x) with a
// sign change over [1e-300, A]. 200 iterations pins the root to 1 ulp.
double bisect_log_x(const std::function<double(double)>& h, double cap,
                    const char* what) {
  double llo = std::log(1e-300), lhi = std::log(cap);
  double flo = h(llo), fhi = h(lhi);
  if (!(flo > 0.0) || fhi > 0.0)
    throw NoBracketError(std::string("no-bracket: ") + what);
  for (int it = 0; it < 200 && lhi - llo > 1e-16; ++it) {
    double mid = 0.5 * (llo + lhi);
    (h(mid) > 0.0 ? llo : lhi) = mid;
  }
  return std::exp(0.5 * (llo + lhi));
}

}  // namespace

// Roots are sought on (0, verify_cap()]: power-log with negative xi is only
// decreasing away from x = A, matching the relaxed form of the definition.
double solve_x0(const FSpec& f, double n) {
  if (!(n > 0)) throw NoBracketError("solve_x0: n must be positive");
  double ln = std::log(n);
  auto h = [&](double lx) {
    double lf = f.log_f(std::exp(lx));
    return lf - ln;  // decreasing in x
  };
  return bisect_log_x(h, f.monotone_cap(), "solve_x0 requires n >= F(A)");
}

double solve_x1(const FSpec& f, double n) {
  if (!(n > 0)) throw NoBracketError("solve_x1: n must be positive");
  double ln = std::log(n);
  auto h = [&](double lx) { return f.log_f(std::exp(lx)) - ln - lx; };
  return bisect_log_x(h, f.monotone_cap(), "solve_x1 requires n >= F(A)/A");
}

// ---------------------------------------------------------------------------
// GSpec
// ---------------------------------------------------------------------------

double GSpec::deriv(double t) const {
  switch (kind) {
    case GKind::Sin: return std::cos(t);
    case GKind::Cos: return -std::sin(t);
    case GKind::SinShift: return std::cos(t - theta);
    case GKind::ProductSinCos: return std::cos(2 * t);
  }
  return 0;
}

std::vector<double> GSpec::zeros() const {
  std::vector<double> z;
  switch (kind) {
    case GKind::Sin: z = {0.0, -kPi}; break;
    case GKind::Cos: z = {-kPi / 2, kPi / 2}; break;
    case GKind::SinShift: z = {wrap_angle(theta), wrap_angle(theta + kPi)}; break;
    case GKind::ProductSinCos: z = {0.0, kPi / 2, -kPi / 2, -kPi}; break;
  }
  std::sort(z.begin(), z.end());
  return z;
}

IntervalSet singular_set(const GSpec& g, double eps) {
  if (eps >= g.bound()) return IntervalSet::full_circle();
  // half-width of |g| < eps around each simple zero
  double hw;
  if (g.kind == GKind::ProductSinCos)
    hw = 0.5 * std::asin(2.0 * eps);  // |sin 2t|/2 < eps
  else
    hw = std::asin(eps);
  std::vector<std::pair<double, double>> arcs;
  for (double z : g.zeros()) arcs.emplace_back(z - hw, z + hw);
  return IntervalSet::from_arcs(arcs);
}

double singular_set_constant(const GSpec& g) {
  // sup_eps |B_eps| / eps from the closed forms: arcsin(c eps) <= (pi/2) c eps
  // on the admissible range.
  if (g.kind == GKind::ProductSinCos) return 4 * kPi;
  return kTwoPi;
}

IntervalSet widened_singular_set(const GSpec& g, long long n, double eps) {
  if (n < 1) throw DomainError("widened_singular_set: n >= 1 required");
  double hw_sing;
  if (eps >= g.bound())
    hw_sing = kPi;  // already everything
  else if (g.kind == GKind::ProductSinCos)
    hw_sing = 0.5 * std::asin(2.0 * eps);
  else
    hw_sing = std::asin(eps);
  double hw = std::max(hw_sing, 0.5 / static_cast<double>(n));
  std::vector<std::pair<double, double>> arcs;
  for (double z : g.zeros()) arcs.emplace_back(z - hw, z + hw);
  return IntervalSet::from_arcs(arcs);
}

// ---------------------------------------------------------------------------
// OmegaWeight / CompositeWeight
// ---------------------------------------------------------------------------

double OmegaWeight::log_weight_deriv(double t) const {
  for (double z : zeros_)
    if (std::fabs(wrap_angle(t - z)) < 1e-15)
      throw AtSingularityError("log_weight_deriv at a zero of g");
  double gv = g.eval(t);
  double ax = std::fabs(gv);
  // -F'(g) g' = -(F/x' ...) sign-aware: F even, F'(x) odd extension:
  // d/dt -F(|g|)*... use chain rule with F'(g) = sign(g) F'(|g|).
  double lf = f.log_f(ax);
  double dlf = f.dlog_f(ax);  // F'(|g|)/F(|g|), negative
  double fprime_over_f = dlf;
  double fprime = (lf > 700.0) ? kPosInf : fprime_over_f * std::exp(lf);
  double sign = gv >= 0 ? 1.0 : -1.0;
  double r = -sign * fprime * g.deriv(t);
  if (!std::isfinite(r)) {
    // F(g) overflowed double but log omega is -inf there anyway; report the
    // signed infinity consistent with the direction of decay.
    return r;
  }
  return r;
}

double CompositeWeight::log_weight(double t) const {
  double acc = log_scale_;
  for (const auto& w : factors_) {
    double lw = w.log_weight(t);
    if (lw == kNegInf) return power_ > 0 ? kNegInf : kPosInf;
    acc += lw;
  }
  for (const auto& j : jacobi_) {
    double s = std::fabs(std::sin((t - j.theta) / 2));
    if (s == 0.0) {
      if (j.gamma > 0) return power_ > 0 ? kNegInf : kPosInf;
      if (j.gamma < 0) return power_ > 0 ? kPosInf : kNegInf;
      continue;
    }
    acc += j.gamma * std::log(s);
  }
  return power_ * acc;
}

double CompositeWeight::log_weight_deriv(double t) const {
  double acc = 0;
  for (const auto& w : factors_) acc += w.log_weight_deriv(t);
  for (const auto& j : jacobi_) {
    double u = (t - j.theta) / 2;
    acc += j.gamma * 0.5 / std::tan(u);
  }
  return power_ * acc;
}

std::vector<double> CompositeWeight::singular_points() const {
  std::vector<double> pts;
  for (const auto& w : factors_)
    pts.insert(pts.end(), w.zeros().begin(), w.zeros().end());
  for (const auto& j : jacobi_)
    if (j.gamma != 0.0) pts.push_back(wrap_angle(j.theta));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) { return std::fabs(a - b) < 1e-14; }),
            pts.end());
  return pts;
}

// ---------------------------------------------------------------------------
// Lemma-0 combinatorics
// ---------------------------------------------------------------------------

namespace {

using u128 = unsigned __int128;

u128 factorial128(int n) {
  u128 r = 1;
  for (int i = 2; i <= n; ++i) r *= static_cast<unsigned>(i);
  return r;
}

void enumerate_terms(int k, int part, int remaining, u128 denom, int m_total,
                     u128 kfact, std::uint64_t& acc) {
  if (part > k || remaining == 0) {
    if (remaining != 0) return;
    u128 term = kfact / (denom * factorial128(k - m_total));
    acc += static_cast<std::uint64_t>(term);
    return;
  }
  // m_part copies of weight `part`
  for (int m = 0; m * part <= remaining; ++m) {
    enumerate_terms(k, part + 1, remaining - m * part,
                    denom * factorial128(m), m_total + m, kfact, acc);
  }
}

}  // namespace

std::uint64_t lemma0_sum(int k) {
  if (k < 1) throw DomainError("lemma0_sum: k >= 1");
  if (k > 25) throw OverflowError("lemma0_sum: exact enumeration capped at k = 25");
  std::uint64_t acc = 0;
  enumerate_terms(k, 1, k, 1, 0, factorial128(k), acc);
  return acc;
}

std::uint64_t half_central_binomial(int k) {
  u128 num = 1, den = 1;
  for (int i = 1; i <= k; ++i) {
    num *= static_cast<unsigned>(k + i);
    den *= static_cast<unsigned>(i);
  }
  return static_cast<std::uint64_t>(num / den / 2);
}

// ---------------------------------------------------------------------------
// optimal_fourier_k / tail_sum_check
// ---------------------------------------------------------------------------

long long optimal_fourier_k(const FSpec& f, long long n, double c_big) {
  if (!(c_big > std::exp(1.0)))
    throw DomainError("optimal_fourier_k: C > e required");
  const double target = -1.0;  // log(1/e)
  auto crit = [&](long long k) {
    double x0 = solve_x0(f, static_cast<double>(k));
    return std::log(c_big * static_cast<double>(k)) -
           std::log(static_cast<double>(n)) - std::log(x0) - target;
  };
  const long long cap = 1000000000LL;
  long long kmin = std::max<long long>(1, static_cast<long long>(std::ceil(f.f(f.cap))));
  long long lo = kmin, hi = kmin;
  while (crit(hi) <= 0.0) {
    lo = hi;
    hi *= 2;
    if (hi > cap) throw NotFoundError("optimal_fourier_k: scan cap exceeded");
  }
  while (hi - lo > 1) {
    long long mid = lo + (hi - lo) / 2;
    (crit(mid) <= 0.0 ? lo : hi) = mid;
  }
  long long k = (crit(lo) > 0.0) ? lo : hi;
  double x1 = solve_x1(f, static_cast<double>(n));
  if (static_cast<double>(k) < static_cast<double>(n) * x1 / (c_big * c_big))
    throw DomainError("optimal_fourier_k: consequence check k >= n x1(n)/C^2 failed");
  return k;
}

TailSumResult tail_sum_check(const FSpec& f, long long n, double c) {
  LogAccumulator acc;
  double peak = kNegInf;
  for (long long v = n;; ++v) {
    double term = -c * static_cast<double>(v) * solve_x1(f, static_cast<double>(v));
    acc.add_log(term);
    peak = std::max(peak, term);
    if (term < acc.log_total() - 50.0) break;
    if (v > n + 20000000) break;  // terms decay for every catalog F
  }
  TailSumResult r;
  r.lhs_log = acc.log_total();
  r.rhs_log = -0.5 * c * static_cast<double>(n) * solve_x1(f, static_cast<double>(n));
  r.pass = r.lhs_log <= r.rhs_log;
  return r;
}

// ---------------------------------------------------------------------------
// Doubling and A* testers
// ---------------------------------------------------------------------------

namespace {

double log_mass(const CompositeWeight& w, double lo, double hi,
                const quad::QuadConfig& cfg) {
  IntervalSet dom = IntervalSet::from_arcs({{lo, hi}});
  auto nrm = quad::weighted_lp_norm(trig::PointEvaluator::constant_one(),
                                    quad::make_weight_fn(w), 1.0, dom, cfg);
  return nrm.log_value;
}

}  // namespace

double doubling_ratio(const CompositeWeight& w, int resolution) {
  if (resolution < 8) throw DomainError("doubling_ratio: resolution >= 8");
  quad::QuadConfig cfg;
  cfg.base_panels = 16;
  cfg.tol = 1e-10;
  int jmax = static_cast<int>(std::floor(std::log2(static_cast<double>(resolution))));
  double best = 0.0;
  for (int j = 1; j <= jmax; ++j) {
    long long cells = 1LL << j;
    double width = kTwoPi / static_cast<double>(cells);
    for (long long i = 0; i < cells; ++i) {
      double lo = -kPi + width * static_cast<double>(i);
      double hi = lo + width;
      double mid = 0.5 * (lo + hi);
      double l1 = log_mass(w, lo, hi, cfg);
      double l2 = log_mass(w, mid - width, mid + width, cfg);
      if (l1 == kNegInf) return kPosInf;  // degenerate cell
      double ratio = std::exp(l2 - l1);
      best = std::max(best, ratio);
      if (std::isinf(best)) return best;
    }
  }
  return best;
}

double astar_constant(const CompositeWeight& w, int resolution) {
  if (resolution < 8) throw DomainError("astar_constant: resolution >= 8");
  quad::QuadConfig cfg;
  cfg.base_panels = 16;
  cfg.tol = 1e-10;
  int jmax = static_cast<int>(std::floor(std::log2(static_cast<double>(resolution))));
  double best = 0.0;
  const int samples = 9;
  for (int j = 1; j <= jmax; ++j) {
    long long cells = 1LL << j;
    double width = kTwoPi / static_cast<double>(cells);
    for (long long i = 0; i < cells; ++i) {
      double lo = -kPi + width * static_cast<double>(i);
      double lmass = log_mass(w, lo, lo + width, cfg);
      if (lmass == kNegInf) return kPosInf;
      // endpoints matter: near an essential zero the sup inside I sits at
      // the interval edge
      for (int s = -2; s < samples + 2; ++s) {
        double t;
        if (s == -2)
          t = lo + width * 1e-9;
        else if (s == -1)
          t = lo + width * (1 - 1e-9);
        else
          t = lo + width * (s + 0.5) / samples;
        double v = w.log_weight(t) + std::log(width) - lmass;
        best = std::max(best, std::exp(v));
      }
      if (std::isinf(best)) return best;
    }
  }
  return best;
}

}  // namespace polyweight::weights
