#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <random>

#include "polyweight/errors.hpp"
#include "polyweight/trigpoly.hpp"

using namespace polyweight;
using namespace polyweight::trig;

namespace {

// 200-bit three-term recurrence, the independent oracle for the closed-form
// log evaluation path.
using big200 = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<60>>;

big200 cheb_recurrence_oracle(int n, const big200& x) {
  big200 tm = 1, t = x;
  if (n == 0) return tm;
  for (int k = 2; k <= n; ++k) {
    big200 tn = 2 * x * t - tm;
    tm = t;
    t = tn;
  }
  return t;
}

}  // namespace

TEST_CASE("TrigPoly eval and derivative") {
  CHECK(TrigPoly::cosine(3).eval(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(TrigPoly::sine(2).eval(kPi / 4) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(TrigPoly::constant(1.0).eval(2.31) == 1.0);

  TrigPoly d = TrigPoly::cosine(3).derivative();
  CHECK(d.a[3] == 0.0);
  CHECK(d.b[3] == -3.0);
  CHECK(TrigPoly::constant(5.0).derivative().degree == 0);
  CHECK(TrigPoly::constant(5.0).derivative().a[0] == 0.0);

  TrigPoly dd = TrigPoly::cosine(7).derivative().derivative();
  CHECK(dd.a[7] == -49.0);
  CHECK(dd.b[7] == 0.0);
}

TEST_CASE("TrigPoly interpolation round-trip at 2n+2 points") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  int n = 9;
  TrigPoly p(n);
  p.a[0] = g(rng);
  for (int k = 1; k <= n; ++k) {
    p.a[k] = g(rng);
    p.b[k] = g(rng);
  }
  int m = 2 * n + 2;
  std::vector<double> samples(m);
  for (int j = 0; j < m; ++j) samples[j] = p.eval(-kPi + kTwoPi * j / m);
  auto r = fourier_partial_sum(samples, n);
  for (int k = 0; k <= n; ++k) {
    CHECK(r.poly.a[k] == doctest::Approx(p.a[k]).epsilon(1e-12));
    CHECK(r.poly.b[k] == doctest::Approx(p.b[k]).epsilon(1e-12));
  }
}

TEST_CASE("chebyshev_eval: classical values") {
  CHECK(chebyshev_eval(3, 0.5) == doctest::Approx(-1.0).epsilon(1e-14));
  for (int n : {0, 1, 5, 40}) CHECK(chebyshev_eval(n, 1.0) == doctest::Approx(1.0));
  CHECK(chebyshev_eval(2, 2.0) == doctest::Approx(7.0).epsilon(1e-14));
  CHECK_THROWS_AS(chebyshev_eval(1000, 2.0), OverflowError);
  CHECK_THROWS_AS(chebyshev_eval(3, 2.5), DomainError);
}

TEST_CASE("|T_n(x)| <= 1 on [-1,1]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> nd(0, 200);
  for (int i = 0; i < 2000; ++i)
    CHECK(std::fabs(chebyshev_eval(nd(rng), u(rng))) <= 1.0 + 1e-12);
}

TEST_CASE("chebyshev_log_eval vs 200-bit recurrence oracle") {
  // frozen anchor: log T_64(2), computed by the high-precision recurrence
  CHECK(chebyshev_log_eval(64, 2.0).log_t ==
        doctest::Approx(83.5921582226283240).epsilon(1e-13));
  big200 oracle = cheb_recurrence_oracle(64, big200(2));
  CHECK(chebyshev_log_eval(64, 2.0).log_t ==
        doctest::Approx(static_cast<double>(log(oracle))).epsilon(1e-13));

  // (p4) instance: T_10(1.01) stays below the absolute constant
  double t10 = std::exp(chebyshev_log_eval(10, 1.01).log_t);
  CHECK(t10 == doctest::Approx(2.1759096797141811).epsilon(1e-12));
  CHECK(t10 <= 2.2);

  CHECK_THROWS_AS(chebyshev_log_eval(5, 1.0), DomainError);
}

TEST_CASE("chebyshev_eval vs chebyshev_log_eval cross-check") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(1.0 + 1e-6, 2.0);
  for (int i = 0; i < 400; ++i) {
    int n = 1 + static_cast<int>(rng() % 50);
    double x = u(rng);
    double direct;
    try {
      direct = chebyshev_eval(n, x);
    } catch (const OverflowError&) {
      continue;
    }
    double via_log = std::exp(chebyshev_log_eval(n, x).log_t);
    CHECK(std::fabs(via_log - direct) <= 1e-12 * std::fabs(direct));
  }
}

TEST_CASE("T_n(1 + 1/n^2) <= 2.2 up to n = 1e6; limit is cosh sqrt 2") {
  double limit = std::cosh(std::sqrt(2.0));
  for (long long n = 3; n <= 1000000; n = n * 3 + 1) {
    double x = 1.0 + 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    double v = std::exp(chebyshev_log_eval(n, x).log_t);
    CHECK(v <= 2.2);
    CHECK(v >= 1.0);
    if (n > 1000) CHECK(v == doctest::Approx(limit).epsilon(1e-3));
  }
}

TEST_CASE("(p5) ratio postcondition instance") {
  long long n = 5;
  double x = 1.0 + 1.0 / 25.0 + 1e-9;
  auto cl = chebyshev_log_eval(n, x);
  double ratio = std::exp(cl.log_tprime - cl.log_t);
  CHECK(ratio >= 5.0 / (4.0 * std::sqrt(x * x - 1.0)));
}

TEST_CASE("counterexample evaluator composition identities") {
  long long K = 37;
  double a = 0.2;
  auto Q = counterexample_evaluator(K, a);
  CHECK(Q.degree == 2 * K);

  // Q(0) = T_K(1 + a^2)
  auto v0 = Q.value(0.0);
  CHECK(v0.sign == 1);
  CHECK(v0.log_abs ==
        doctest::Approx(chebyshev_log_eval(K, 1.0 + a * a).log_t).epsilon(1e-12));

  // |Q(pi/2)| = |T_K(a^2)| <= 1
  auto vh = Q.value(kPi / 2);
  CHECK(vh.log_abs <= 1e-12);
  CHECK(vh.value() == doctest::Approx(chebyshev_eval(static_cast<int>(K), a * a)).epsilon(1e-9));

  // Q'(0) = 0 (sin 0 = 0)
  CHECK(Q.deriv(0.0).sign == 0);
}

TEST_CASE("counterexample evaluator: log derivative matches finite differences") {
  long long K = 120;
  double a = 0.15;
  auto Q = counterexample_evaluator(K, a);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  int checked = 0;
  for (int i = 0; i < 300 && checked < 60; ++i) {
    double t = u(rng);
    auto v = Q.value(t);
    auto d = Q.deriv(t);
    if (v.sign == 0 || d.sign == 0) continue;
    // skip near zeros of Q or Q' where the difference quotient degenerates
    if (d.log_abs - v.log_abs < -4 || d.log_abs - v.log_abs > 12) continue;
    double h = 1e-7;
    auto vp = Q.value(t + h), vm = Q.value(t - h);
    if (vp.sign != v.sign || vm.sign != v.sign) continue;
    double fd = (vp.log_abs - vm.log_abs) / (2 * h);  // d/dt log|Q| = Q'/Q
    double an = d.sign * v.sign * std::exp(d.log_abs - v.log_abs);
    CHECK(an == doctest::Approx(fd).epsilon(1e-5));
    ++checked;
  }
  CHECK(checked >= 40);
}

TEST_CASE("fourier_partial_sum: exact recovery and truncation") {
  auto samples = sample_periodic([](double t) { return std::cos(5 * t); }, 64);
  auto r5 = fourier_partial_sum(samples, 8);
  CHECK_FALSE(r5.aliasing_warning);
  for (int k = 0; k <= 8; ++k) {
    CHECK(r5.poly.a[k] == doctest::Approx(k == 5 ? 1.0 : 0.0).epsilon(1e-14));
    CHECK(r5.poly.b[k] == doctest::Approx(0.0).epsilon(1e-14));
  }

  auto r4 = fourier_partial_sum(samples, 4);
  for (int k = 0; k <= 4; ++k) {
    CHECK(r4.poly.a[k] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(r4.poly.b[k] == doctest::Approx(0.0).epsilon(1e-14));
  }

  // sine phase convention
  auto ss = sample_periodic([](double t) { return std::sin(3 * t) + 0.5; }, 64);
  auto rs = fourier_partial_sum(ss, 6);
  CHECK(rs.poly.b[3] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rs.poly.a[0] == doctest::Approx(0.5).epsilon(1e-14));

  // an undersampled rough signal trips the aliasing alarm
  auto rough = sample_periodic(
      [](double t) { return std::exp(-1.0 / std::fabs(std::sin(t))); }, 32);
  auto ra = fourier_partial_sum(rough, 4);
  CHECK(ra.aliasing_warning);

  CHECK_THROWS_AS(fourier_partial_sum(samples, 40), DomainError);
}

TEST_CASE("point evaluator from trigpoly agrees with direct evaluation") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  TrigPoly p(6);
  for (int k = 0; k <= 6; ++k) {
    p.a[k] = g(rng);
    p.b[k] = k ? g(rng) : 0.0;
  }
  auto ev = PointEvaluator::from_trigpoly(p);
  for (double t = -3.1; t < 3.1; t += 0.21) {
    double direct = p.eval(t);
    auto v = ev.value(t);
    if (std::fabs(direct) > 1e-280)
      CHECK(v.value() == doctest::Approx(direct).epsilon(1e-12));
  }
}
