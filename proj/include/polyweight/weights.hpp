#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "polyweight/interval_set.hpp"
#include "polyweight/logdomain.hpp"

namespace polyweight::weights {

// ---------------------------------------------------------------------------
// F catalog: positive, strictly decreasing on (0, A], blowing up at 0+.
// ---------------------------------------------------------------------------

enum class FFamily { Power, PowerLog, ExpPower };

struct F4Bounds {
  double a1 = 0;  // upper bound of |F'(x)| x / F(x)
  double a2 = 0;  // lower bound
};

struct FSpec {
  FFamily family = FFamily::Power;
  double alpha = 1.0;
  double xi1 = 0.0;   // power-log only
  double cap = 1.0;   // A, the maximum of |g|

  /// log F(x); +inf is allowed (exp-power at tiny x).
  template <class Real>
  Real log_f(Real x) const {
    using std::exp;
    using std::log;
    using std::abs;
    Real lx = log(x);
    switch (family) {
      case FFamily::Power:
        return Real(-alpha) * lx;
      case FFamily::PowerLog:
        return Real(-alpha) * lx + Real(xi1) * log(abs(lx));
      case FFamily::ExpPower:
        return exp(Real(-alpha) * lx);
    }
    return Real(0);
  }

  double f(double x) const { return std::exp(log_f(x)); }

  /// d/dx log F(x) = F'(x)/F(x). Negative on (0, A) for admissible params.
  double dlog_f(double x) const;

  /// |F'(x)| x / F(x), the condition-(F4) functional.
  double f4_ratio(double x) const { return std::fabs(dlog_f(x)) * x; }

  /// Upper end of the grid on which (F1)-(F4) are verified empirically.
  /// power-log is checked only up to A/2: its ratio degenerates near x = A.
  double verify_cap() const {
    return family == FFamily::PowerLog ? cap / 2 : cap;
  }

  /// Upper end of the interval where F is strictly decreasing. power-log
  /// with negative xi turns around at x = exp(xi/alpha); root solving is
  /// confined to the monotone branch.
  double monotone_cap() const {
    if (family == FFamily::PowerLog && xi1 < 0)
      return std::min(cap, std::exp(xi1 / alpha));
    return cap;
  }

  bool omega_admissible() const {
    return family == FFamily::Power || family == FFamily::PowerLog;
  }

  /// min/max of |F'(x)| x / F(x) over `samples` log-spaced points in
  /// [1e-12, verify_cap()]. The class definition posits these constants
  /// exist; we only ever estimate them by sampling.
  F4Bounds empirical_f4(int samples = 512) const;
};

/// Unique positive root of F(x) = n, for n >= F(A). Bisection on log x over
/// [1e-300, A]; relative residual 1e-12. Throws NoBracketError below range.
double solve_x0(const FSpec& f, double n);

/// Unique positive root of F(x) = n x, for n >= F(A)/A.
double solve_x1(const FSpec& f, double n);

// ---------------------------------------------------------------------------
// g catalog: analytic, all zeros simple, closed-form inverses.
// ---------------------------------------------------------------------------

enum class GKind { Sin, Cos, SinShift, ProductSinCos };

struct GSpec {
  GKind kind = GKind::Sin;
  double theta = 0.0;  // sin-shift only

  template <class Real>
  Real eval(Real t) const {
    using std::sin;
    using std::cos;
    switch (kind) {
      case GKind::Sin: return sin(t);
      case GKind::Cos: return cos(t);
      case GKind::SinShift: return sin(t - Real(theta));
      case GKind::ProductSinCos: return sin(Real(2) * t) / Real(2);
    }
    return Real(0);
  }

  double deriv(double t) const;
  double bound() const {  // A = max |g|
    return kind == GKind::ProductSinCos ? 0.5 : 1.0;
  }
  double deriv_bound() const { return 1.0; }  // D for the whole catalog
  std::vector<double> zeros() const;          // wrapped to [-pi, pi)
};

/// B_eps = { t : |g(t)| < eps }, assembled from the catalog's closed-form
/// inverses. eps >= max|g| yields the full circle.
IntervalSet singular_set(const GSpec& g, double eps);

/// Linear-measure constant: |B_eps| <= C(g) * eps for every eps > 0.
double singular_set_constant(const GSpec& g);

/// B-hat: one arc per zero of g, each of length >= 1/n, containing B_eps.
IntervalSet widened_singular_set(const GSpec& g, long long n, double eps);

// ---------------------------------------------------------------------------
// Weights
// ---------------------------------------------------------------------------

/// omega(t) = exp(-F(g(t))), evaluated in the log domain; log omega reaches
/// -inf exactly at the zeros of g.
struct OmegaWeight {
  FSpec f;
  GSpec g;

  OmegaWeight() = default;
  OmegaWeight(FSpec fs, GSpec gs) : f(fs), g(gs), zeros_(gs.zeros()) {}

  template <class Real>
  Real log_weight_t(Real t) const {
    using std::abs;
    using std::exp;
    Real gv = abs(g.eval(t));
    if (gv == Real(0)) return Real(kNegInf);
    return -exp(f.log_f(gv));
  }

  double log_weight(double t) const {
    double gv = std::fabs(g.eval(t));
    if (gv == 0.0) return kNegInf;
    double lf = f.log_f(gv);
    if (lf > 709.0) return kNegInf;  // F(g) overflows double: weight is 0
    return -std::exp(lf);
  }

  /// d/dt log omega = -F'(g(t)) g'(t). Throws AtSingularityError within
  /// 1e-15 of a zero of g.
  double log_weight_deriv(double t) const;

  const std::vector<double>& zeros() const { return zeros_; }
  const F4Bounds& f4() const {
    if (!f4_) f4_ = f.empirical_f4();
    return *f4_;
  }

 private:
  std::vector<double> zeros_;
  mutable std::optional<F4Bounds> f4_;
};

struct JacobiFactor {
  double gamma = 0.0;  // exponent, > -1
  double theta = 0.0;  // location of the zero (gamma > 0) / pole (gamma < 0)
};

/// Product omega_1 ... omega_s * u where u is 1 or a jacobi factor, plus an
/// optional overall power and constant used by the norm machinery
/// ((omega u)^{p/q} is formed by scaling logs). Empty product == weight 1.
class CompositeWeight {
 public:
  CompositeWeight() = default;

  static CompositeWeight one() { return CompositeWeight(); }
  static CompositeWeight from_omega(OmegaWeight w) {
    CompositeWeight c;
    c.factors_.push_back(std::move(w));
    return c;
  }

  CompositeWeight& add_omega(OmegaWeight w) {
    factors_.push_back(std::move(w));
    return *this;
  }
  CompositeWeight& add_jacobi(JacobiFactor j) {
    jacobi_.push_back(j);
    return *this;
  }
  /// Multiplies by |sin t|^q (the x = cos t pullback Jacobian), kept as the
  /// pair of half-angle factors |sin(t/2)|^q |sin((t-pi)/2)|^q 2^q.
  CompositeWeight& add_sin_jacobian(double q) {
    jacobi_.push_back({q, 0.0});
    jacobi_.push_back({q, kPi});
    log_scale_ += q * std::log(2.0);
    return *this;
  }

  /// (this)^s in log domain: scales every log term.
  CompositeWeight power(double s) const {
    CompositeWeight c = *this;
    c.power_ *= s;
    return c;
  }

  double log_weight(double t) const;
  double log_weight_deriv(double t) const;

  template <class Real>
  Real log_weight_t(Real t) const {
    using std::sin;
    using std::log;
    using std::abs;
    Real acc(log_scale_);
    for (const auto& w : factors_) acc += w.log_weight_t(t);
    for (const auto& j : jacobi_) {
      Real s = abs(sin((t - Real(j.theta)) / Real(2)));
      acc += Real(j.gamma) * log(s);
    }
    return Real(power_) * acc;
  }

  /// Points where some factor vanishes or blows up; panel grading anchors.
  std::vector<double> singular_points() const;

  bool is_unity() const {
    return factors_.empty() && jacobi_.empty() && log_scale_ == 0.0;
  }
  const std::vector<OmegaWeight>& omega_factors() const { return factors_; }
  const std::vector<JacobiFactor>& jacobi_factors() const { return jacobi_; }
  double power_exponent() const { return power_; }
  double log_scale() const { return log_scale_; }

 private:
  std::vector<OmegaWeight> factors_;
  std::vector<JacobiFactor> jacobi_;
  double power_ = 1.0;
  double log_scale_ = 0.0;
};

// ---------------------------------------------------------------------------
// Combinatorics and scale-function utilities
// ---------------------------------------------------------------------------

/// Sum of k!/(m_1! ... m_k! (k - sum m_i)!) over m_1 + 2 m_2 + ... + k m_k = k
/// by direct enumeration in 128-bit arithmetic; equals binomial(2k, k)/2.
/// Throws OverflowError for k > 25.
std::uint64_t lemma0_sum(int k);

std::uint64_t half_central_binomial(int k);  // binomial(2k,k)/2, exact

/// Minimal integer k with C k / (n x0(k)) > 1/e; doubling bracket + bisection
/// (the target is increasing in k). Also checks k >= n x1(n) / C^2.
/// Throws NotFoundError beyond the 1e9 scan cap.
long long optimal_fourier_k(const FSpec& f, long long n, double c_big);

struct TailSumResult {
  double lhs_log;  // log sum_{v>=n} exp(-c v x1(v)), truncated 50 nats down
  double rhs_log;  // -c n x1(n) / 2
  bool pass;       // lhs <= rhs
};
TailSumResult tail_sum_check(const FSpec& f, long long n, double c);

// ---------------------------------------------------------------------------
// Finite-resolution doubling / A* testers (heuristic verifiers, not deciders)
// ---------------------------------------------------------------------------

/// max over dyadic intervals I at scales 2pi/2^j, j <= log2(resolution), of
/// W(2I)/W(I). +inf when some W(I) underflows at working precision.
double doubling_ratio(const CompositeWeight& w, int resolution);

/// sup over sampled (I, t in I) of omega(t) |I| / W(I).
double astar_constant(const CompositeWeight& w, int resolution);

// ---------------------------------------------------------------------------
// Weight-spec mini-language
//   product of omega(<family>:<params>,<g>) terms and at most one
//   jacobi(gamma,theta) or one, e.g.
//   "omega(pow:2,sin) * omega(pow:4,cos) * jacobi(0.5,0)"
//   families: pow:a | powlog:a:xi | exppow:a
//   g:        sin | cos | sinshift:theta | sincos
// ---------------------------------------------------------------------------

CompositeWeight parse_weight_spec(const std::string& spec);
std::string format_weight_spec(const CompositeWeight& w);

}  // namespace polyweight::weights
