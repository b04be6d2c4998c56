#pragma once

#include <functional>
#include <span>
#include <vector>

#include "polyweight/logdomain.hpp"

namespace polyweight::trig {

/// Trigonometric polynomial a0 + sum_{k=1..n} (a_k cos kt + b_k sin kt).
/// The classical a0/2 convention is absorbed at construction time.
struct TrigPoly {
  int degree = 0;
  std::vector<double> a;  // a[0..degree]
  std::vector<double> b;  // b[0..degree], b[0] unused (kept 0)

  TrigPoly() : a(1, 0.0), b(1, 0.0) {}
  explicit TrigPoly(int n) : degree(n), a(n + 1, 0.0), b(n + 1, 0.0) {}

  static TrigPoly constant(double c) {
    TrigPoly p;
    p.a[0] = c;
    return p;
  }
  static TrigPoly cosine(int k, double amp = 1.0) {
    TrigPoly p(k);
    p.a[k] = amp;
    return p;
  }
  static TrigPoly sine(int k, double amp = 1.0) {
    TrigPoly p(k);
    p.b[k] = amp;
    return p;
  }

  double eval(double t) const;
  TrigPoly derivative() const;

  /// Coefficient vector (a0, a1, b1, a2, b2, ...), the optimizer layout.
  std::vector<double> packed() const;
  static TrigPoly from_packed(std::span<const double> coeffs);
};

/// High-degree evaluator in log-sign form; products of huge/tiny factors
/// stay representable. `degree` drives oscillation budgets downstream.
/// `log_scale` multiplies the evaluator by a constant purely additively in
/// the log domain, so norm scaling is exact bit-for-bit.
struct PointEvaluator {
  long long degree = 0;
  double log_scale = 0.0;
  std::function<SignedLog(double)> value;
  std::function<SignedLog(double)> deriv;

  PointEvaluator scaled(double log_c) const {
    PointEvaluator e = *this;
    e.log_scale += log_c;
    return e;
  }

  static PointEvaluator from_trigpoly(const TrigPoly& p);
  static PointEvaluator constant_one();
};

/// T_n(x) by three-term recurrence for |x| <= 1, the closed (x+sqrt(x^2-1))^n
/// form on (1, 2]. Throws OverflowError when the closed form exceeds the
/// floating range (switch to chebyshev_log_eval) and DomainError for |x| > 2
/// or n > 1e4.
double chebyshev_eval(int n, double x);

struct ChebLog {
  double log_t;       // log T_n(x)
  double log_tprime;  // log T_n'(x)
};

/// Log-domain T_n and T_n' for x > 1. Near x = 1 (x-1 < 1e-8) the
/// arccosh series sqrt(2d)(1 - d/12) is used inside the cosh/sinh forms.
/// Postcondition (checked for x > 1 + 1/n^2): T'/T >= n / (4 sqrt(x^2-1)).
ChebLog chebyshev_log_eval(long long n, double x);

/// Q(t) = T_K(1 + a^2 - sin^2 t) with Q'(t) = -T_K'(1+a^2-sin^2 t) sin 2t.
/// Signs tracked exactly; inside [-1,1] the cos(K acos y) closed form is
/// used so the cost per point is O(1) for any K. Trig degree is 2K.
PointEvaluator counterexample_evaluator(long long K, double a);

struct PartialSumResult {
  TrigPoly poly;
  bool aliasing_warning = false;
  double top_band_energy = 0.0;  // relative energy in the top quarter
};

/// Degree-n Fourier partial sum from 2M equispaced samples on [-pi, pi),
/// t_j = -pi + pi j / M. Needs M > n. The a0/2 constant convention is
/// absorbed into the returned polynomial.
PartialSumResult fourier_partial_sum(std::span<const double> samples, int n);

/// Samples fn at 2M points t_j = -pi + pi j / M.
std::vector<double> sample_periodic(const std::function<double(double)>& fn,
                                    int two_m);

}  // namespace polyweight::trig
