#include "polyweight/trigpoly.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>

#include "polyweight/errors.hpp"

namespace polyweight::trig {

// ---------------------------------------------------------------------------
// TrigPoly
// ---------------------------------------------------------------------------

double TrigPoly::eval(double t) const {
  // angle-addition recurrence for cos kt / sin kt
  double c1 = std::cos(t), s1 = std::sin(t);
  double ck = 1.0, sk = 0.0;
  double acc = a[0];
  for (int k = 1; k <= degree; ++k) {
    double cn = ck * c1 - sk * s1;
    double sn = sk * c1 + ck * s1;
    ck = cn;
    sk = sn;
    acc += a[k] * ck + b[k] * sk;
  }
  return acc;
}

TrigPoly TrigPoly::derivative() const {
  TrigPoly d(degree);
  for (int k = 1; k <= degree; ++k) {
    d.a[k] = static_cast<double>(k) * b[k];
    d.b[k] = -static_cast<double>(k) * a[k];
  }
  return d;
}

std::vector<double> TrigPoly::packed() const {
  std::vector<double> v;
  v.reserve(2 * degree + 1);
  v.push_back(a[0]);
  for (int k = 1; k <= degree; ++k) {
    v.push_back(a[k]);
    v.push_back(b[k]);
  }
  return v;
}

TrigPoly TrigPoly::from_packed(std::span<const double> coeffs) {
  int n = static_cast<int>((coeffs.size() - 1) / 2);
  TrigPoly p(n);
  p.a[0] = coeffs[0];
  for (int k = 1; k <= n; ++k) {
    p.a[k] = coeffs[2 * k - 1];
    p.b[k] = coeffs[2 * k];
  }
  return p;
}

PointEvaluator PointEvaluator::from_trigpoly(const TrigPoly& p) {
  auto poly = std::make_shared<TrigPoly>(p);
  auto dpoly = std::make_shared<TrigPoly>(p.derivative());
  PointEvaluator ev;
  ev.degree = p.degree;
  ev.value = [poly](double t) { return SignedLog::from_value(poly->eval(t)); };
  ev.deriv = [dpoly](double t) { return SignedLog::from_value(dpoly->eval(t)); };
  return ev;
}

PointEvaluator PointEvaluator::constant_one() {
  PointEvaluator ev;
  ev.degree = 0;
  ev.value = [](double) { return SignedLog{0.0, 1}; };
  ev.deriv = [](double) { return SignedLog::zero(); };
  return ev;
}

// ---------------------------------------------------------------------------
// Chebyshev evaluation
// ---------------------------------------------------------------------------

double chebyshev_eval(int n, double x) {
  if (n < 0 || n > 10000 || std::fabs(x) > 2.0)
    throw DomainError("chebyshev_eval: need n <= 1e4 and |x| <= 2");
  if (std::fabs(x) <= 1.0) {
    double tm = 1.0, t = x;
    if (n == 0) return 1.0;
    for (int k = 2; k <= n; ++k) {
      double tn = 2.0 * x * t - tm;
      tm = t;
      t = tn;
    }
    return t;
  }
  double ax = std::fabs(x);
  double s = std::sqrt((ax - 1.0) * (ax + 1.0));
  double lg = n * std::log(ax + s);
  if (lg > 709.0) throw OverflowError("chebyshev_eval: use chebyshev_log_eval");
  double rho = ax - s;  // = 1/(ax+s) < 1
  double v = 0.5 * (std::exp(lg) + std::pow(rho, n));
  return (x < 0 && (n & 1)) ? -v : v;
}

ChebLog chebyshev_log_eval(long long n, double x) {
  if (!(x > 1.0)) throw DomainError("chebyshev_log_eval: x > 1 required");
  double d = x - 1.0;
  double theta;  // arccosh x
  if (d < 1e-8) {
    theta = std::sqrt(2.0 * d) * (1.0 - d / 12.0);
  } else {
    double s = std::sqrt(d * (x + 1.0));
    theta = std::log1p(d + s);
  }
  double y = static_cast<double>(n) * theta;
  // log cosh(y), log sinh(y) without overflow, stable at tiny y
  double log_cosh, log_sinh;
  if (y < 1e-4) {
    log_cosh = std::log1p(0.5 * y * y * (1.0 + y * y / 12.0));
    log_sinh = std::log(y) + std::log1p(y * y / 6.0);
  } else {
    log_cosh = y + std::log1p(std::exp(-2.0 * y)) - std::log(2.0);
    log_sinh = y + std::log1p(-std::exp(-2.0 * y)) - std::log(2.0);
  }
  double log_sinh_theta =
      (theta < 1e-4) ? std::log(theta) + std::log1p(theta * theta / 6.0)
                     : std::log(std::sinh(theta));
  ChebLog r;
  r.log_t = log_cosh;
  r.log_tprime = std::log(static_cast<double>(n)) + log_sinh - log_sinh_theta;
  if (x > 1.0 + 1.0 / (static_cast<double>(n) * static_cast<double>(n))) {
    double s2 = std::sqrt(d * (x + 1.0));
    double bound = std::log(static_cast<double>(n) / 4.0) - std::log(s2);
    if (r.log_tprime - r.log_t < bound - 1e-9)
      throw DomainError("chebyshev_log_eval: T'/T ratio check failed");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Counterexample evaluator Q(t) = T_K(1 + a^2 - sin^2 t)
// ---------------------------------------------------------------------------

namespace {

// T_K and T_K' in log-sign form at 1 + d, where d may have either sign.
// d <= 0: closed trig form cos(K phi) with phi = acos(1+d) (O(1) per point;
// phase error ~ K ulp, fine for the scan-scale uses of these evaluators).
// d > 0: hyperbolic log form.
void cheb_pair(long long K, double d, SignedLog& tval, SignedLog& tder) {
  if (d > 0.0) {
    ChebLog cl = chebyshev_log_eval(K, 1.0 + d);
    tval = {cl.log_t, 1};
    tder = {cl.log_tprime, 1};
    return;
  }
  if (d == 0.0) {
    tval = {0.0, 1};
    tder = {2.0 * std::log(static_cast<double>(K)), 1};
    return;
  }
  double phi = std::atan2(std::sqrt(-d * (2.0 + d)), 1.0 + d);  // acos(1+d)
  double kf = static_cast<double>(K);
  tval = SignedLog::from_value(std::cos(kf * phi));
  double sphi = std::sin(phi);
  double num = std::sin(kf * phi);
  if (phi < 1e-9) {
    tder = SignedLog::from_value(kf * kf);  // limit K sin(K phi)/sin(phi)
  } else {
    tder = SignedLog::from_value(kf * num / sphi);
  }
}

}  // namespace

PointEvaluator counterexample_evaluator(long long K, double a) {
  if (K < 1 || !(a > 0.0) || !(a < 1.0))
    throw DomainError("counterexample_evaluator: K >= 1 and a in (0,1)");
  PointEvaluator ev;
  ev.degree = 2 * K;
  ev.value = [K, a](double t) {
    double st = std::sin(t);
    double d = (a - st) * (a + st);  // a^2 - sin^2 t without cancellation
    SignedLog tv, td;
    cheb_pair(K, d, tv, td);
    return tv;
  };
  ev.deriv = [K, a](double t) {
    double st = std::sin(t);
    double d = (a - st) * (a + st);
    SignedLog tv, td;
    cheb_pair(K, d, tv, td);
    // Q' = -T'(1+d) sin 2t
    SignedLog s2 = SignedLog::from_value(std::sin(2.0 * t));
    return (td * s2).negate();
  };
  return ev;
}

// ---------------------------------------------------------------------------
// Fourier partial sums from equispaced samples
// ---------------------------------------------------------------------------

std::vector<double> sample_periodic(const std::function<double(double)>& fn,
                                    int two_m) {
  std::vector<double> s(two_m);
  for (int j = 0; j < two_m; ++j)
    s[j] = fn(-kPi + kTwoPi * static_cast<double>(j) / two_m);
  return s;
}

PartialSumResult fourier_partial_sum(std::span<const double> samples, int n) {
  int two_m = static_cast<int>(samples.size());
  int m = two_m / 2;
  if (two_m < 2 || two_m % 2 != 0 || m <= n)
    throw DomainError("fourier_partial_sum: need 2M samples with M > n");

  std::vector<double> in(samples.begin(), samples.end());
  std::vector<std::complex<double>> out(m + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(
      two_m, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
      FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  // Samples start at t = -pi, so c_k carries the phase e^{i k pi} = (-1)^k:
  //   a_hat_k = (1/M) (-1)^k Re c_k,  b_hat_k = -(1/M) (-1)^k Im c_k.
  auto a_hat = [&](int k) {
    double s = (k & 1) ? -1.0 : 1.0;
    return s * out[k].real() / m;
  };
  auto b_hat = [&](int k) {
    double s = (k & 1) ? -1.0 : 1.0;
    return -s * out[k].imag() / m;
  };

  PartialSumResult r;
  r.poly = TrigPoly(n);
  r.poly.a[0] = 0.5 * a_hat(0);
  for (int k = 1; k <= n; ++k) {
    r.poly.a[k] = a_hat(k);
    r.poly.b[k] = b_hat(k);
  }

  double total = 0.0, top = 0.0;
  for (int k = 1; k <= m; ++k) {
    double e = std::norm(out[k]) / (static_cast<double>(m) * m);
    total += e;
    if (k >= (3 * m) / 4) top += e;
  }
  r.top_band_energy = total > 0 ? top / total : 0.0;
  r.aliasing_warning = r.top_band_energy > 1e-10;
  return r;
}

}  // namespace polyweight::trig
