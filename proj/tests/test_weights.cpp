#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "polyweight/errors.hpp"
#include "polyweight/weights.hpp"

using namespace polyweight;
using namespace polyweight::weights;

namespace {

OmegaWeight make_power_sin(double alpha) {
  FSpec f;
  f.family = FFamily::Power;
  f.alpha = alpha;
  return OmegaWeight(f, GSpec{GKind::Sin});
}

// Independent root finder for the x0/x1 oracles: plain bisection on
// [1e-12, A] in the value domain, no log tricks.
double bisect_oracle(const std::function<double(double)>& h, double lo, double hi) {
  for (int i = 0; i < 400; ++i) {
    double mid = 0.5 * (lo + hi);
    (h(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("log_weight catalog values") {
  CompositeWeight w = CompositeWeight::from_omega(make_power_sin(2.0));
  CHECK(w.log_weight(kPi / 2) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(w.log_weight(0.0) == kNegInf);
  CHECK(w.log_weight(kPi / 6) == doctest::Approx(-4.0).epsilon(1e-14));
}

TEST_CASE("log_weight evenness for even g") {
  for (GKind kind : {GKind::Sin, GKind::Cos}) {
    FSpec f;
    f.alpha = 1.5;
    OmegaWeight w(f, GSpec{kind});
    for (double t : {0.3, 1.1, 2.7, 3.0})
      CHECK(w.log_weight(t) == doctest::Approx(w.log_weight(-t)).epsilon(1e-14));
  }
}

TEST_CASE("composite product adds logs exactly; empty product is unity") {
  CompositeWeight w;
  w.add_omega(make_power_sin(2.0));
  w.add_omega(OmegaWeight(FSpec{FFamily::Power, 4.0}, GSpec{GKind::Cos}));
  double t = 0.9;
  double expect = make_power_sin(2.0).log_weight(t) +
                  OmegaWeight(FSpec{FFamily::Power, 4.0}, GSpec{GKind::Cos}).log_weight(t);
  CHECK(w.log_weight(t) == doctest::Approx(expect).epsilon(1e-15));

  CompositeWeight unity;
  CHECK(unity.is_unity());
  CHECK(unity.log_weight(1.23) == 0.0);
}

TEST_CASE("log_weight_deriv matches central differences") {
  OmegaWeight w = make_power_sin(2.0);
  CHECK(w.log_weight_deriv(kPi / 2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(w.log_weight_deriv(kPi / 6) == doctest::Approx(8.0 * std::sqrt(3.0)).epsilon(1e-12));

  OmegaWeight w1 = make_power_sin(1.0);
  double t = 0.01, h = 1e-7;
  double fd = (w1.log_weight(t + h) - w1.log_weight(t - h)) / (2 * h);
  CHECK(w1.log_weight_deriv(t) == doctest::Approx(fd).epsilon(1e-6));

  CHECK_THROWS_AS(w1.log_weight_deriv(1e-16), AtSingularityError);
}

TEST_CASE("solve_x0: closed forms and oracle residuals") {
  FSpec p2{FFamily::Power, 2.0};
  CHECK(solve_x0(p2, 4.0) == doctest::Approx(0.5).epsilon(1e-12));
  FSpec p1{FFamily::Power, 1.0};
  CHECK(solve_x0(p1, 10.0) == doctest::Approx(0.1).epsilon(1e-12));

  FSpec pl{FFamily::PowerLog, 1.0, 1.0};
  double n = 50.0;
  double x = solve_x0(pl, n);
  CHECK(std::fabs(pl.f(x) - n) / n <= 1e-12);
  double xo = bisect_oracle([&](double y) { return pl.f(y) - n; }, 1e-12, pl.cap);
  CHECK(x == doctest::Approx(xo).epsilon(1e-10));

  CHECK_THROWS_AS(solve_x0(p2, 0.5), NoBracketError);  // n < F(A) = 1
}

TEST_CASE("solve_x1: closed forms for power family") {
  FSpec p2{FFamily::Power, 2.0};
  CHECK(solve_x1(p2, 8.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(solve_x1(p2, 1e6) == doctest::Approx(0.01).epsilon(1e-12));
  FSpec p1{FFamily::Power, 1.0};
  CHECK(solve_x1(p1, 4.0) == doctest::Approx(0.5).epsilon(1e-12));

  // x1(n) = n^{-1/(alpha+1)}, x0(n) = n^{-1/alpha} to rel 1e-12
  for (double alpha : {0.5, 1.0, 2.0, 3.0}) {
    FSpec f{FFamily::Power, alpha};
    for (double n : {2.0, 31.0, 1024.0, 1e7}) {
      CHECK(solve_x1(f, n) ==
            doctest::Approx(std::pow(n, -1.0 / (alpha + 1))).epsilon(1e-12));
      if (n >= f.f(f.cap))
        CHECK(solve_x0(f, n) == doctest::Approx(std::pow(n, -1.0 / alpha)).epsilon(1e-12));
    }
  }

  // n x1(n) strictly increasing
  FSpec pl{FFamily::PowerLog, 1.0, -0.5};
  double prev = 0;
  for (double n = 4; n < 4e6; n *= 3.7) {
    double v = n * solve_x1(pl, n);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("empirical F4 bounds bracket the ratio; Lemma 1 envelope") {
  for (auto fam : {FSpec{FFamily::Power, 2.0}, FSpec{FFamily::PowerLog, 1.0, 1.0},
                   FSpec{FFamily::PowerLog, 2.0, -1.0}}) {
    F4Bounds b = fam.empirical_f4();
    CHECK(b.a2 > 0);
    CHECK(b.a1 >= b.a2);
    // c x^{-A2} < F(x) < C x^{-A1} with the proof's explicit constants
    double A = fam.verify_cap();
    double FA = fam.f(A);
    for (int i = 0; i < 64; ++i) {
      double x = std::exp(std::log(1e-10) + (std::log(A) - std::log(1e-10)) * i / 63.0);
      double lo = std::log(FA) + b.a2 * (std::log(A) - std::log(x));
      double hi = std::log(FA) + b.a1 * (std::log(A) - std::log(x));
      double lf = fam.log_f(x);
      CHECK(lf >= lo - 1e-9);
      CHECK(lf <= hi + 1e-9);
    }
  }
  // power family: ratio is exactly alpha
  F4Bounds b = FSpec{FFamily::Power, 2.5}.empirical_f4();
  CHECK(b.a1 == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(b.a2 == doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("Lemma 3 sandwich with the computed epsilon") {
  for (double alpha : {1.0, 2.0}) {
    FSpec f{FFamily::Power, alpha};
    F4Bounds b = f.empirical_f4();
    double eps = 0.5 * std::min(1.0 / (1.0 + 2.0 * b.a1), b.a2 / (1.0 + b.a2));
    for (long long n = 8; n <= (1 << 15); n *= 2) {
      double x1n = solve_x1(f, static_cast<double>(n));
      double x12n = solve_x1(f, static_cast<double>(2 * n));
      CHECK((1 + eps) * x12n < x1n);
      CHECK(x1n < (2 - eps) * x12n);
    }
  }
}

TEST_CASE("Lemma 2.5: n x1(n) >= n^a for a fitted positive a") {
  FSpec f{FFamily::PowerLog, 1.0, 2.0};
  double a_fit = kPosInf;
  for (double n = 16; n <= (1 << 20); n *= 2)
    a_fit = std::min(a_fit, std::log(n * solve_x1(f, n)) / std::log(n));
  CHECK(a_fit > 0);
  for (double n = 16; n <= (1 << 20); n *= 2)
    CHECK(n * solve_x1(f, n) >= std::pow(n, a_fit) * (1 - 1e-12));
}

TEST_CASE("singular_set closed forms") {
  GSpec gsin{GKind::Sin};
  IntervalSet b = singular_set(gsin, 0.1);
  CHECK(b.circular_arc_count() == 2);
  CHECK(b.measure() == doctest::Approx(4 * std::asin(0.1)).epsilon(1e-13));

  CHECK(singular_set(gsin, 2.0).covers_circle());
  CHECK(singular_set(gsin, 2.0).measure() == doctest::Approx(kTwoPi));

  GSpec gsc{GKind::ProductSinCos};
  IntervalSet b4 = singular_set(gsc, 0.05);
  CHECK(b4.circular_arc_count() == 4);
  CHECK(b4.measure() <= 8 * std::asin(0.1) + 1e-13);
  CHECK(b4.measure() == doctest::Approx(4 * std::asin(0.1)).epsilon(1e-12));

  // measure <= C(g) eps, monotone in eps
  for (const GSpec& g : {gsin, GSpec{GKind::Cos}, gsc}) {
    double c = singular_set_constant(g);
    double prev = 0;
    for (double eps : {1e-4, 1e-3, 0.01, 0.1, 0.3}) {
      double m = singular_set(g, eps).measure();
      CHECK(m <= c * eps + 1e-13);
      CHECK(m >= prev);
      prev = m;
    }
  }
}

TEST_CASE("widened_singular_set: arc lengths and containment") {
  GSpec gsin{GKind::Sin};
  IntervalSet w = widened_singular_set(gsin, 100, 0.001);
  CHECK(w.circular_arc_count() == 2);
  CHECK(w.min_circular_arc_length() == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(w.measure() == doctest::Approx(0.02).epsilon(1e-12));

  IntervalSet w2 = widened_singular_set(gsin, 1000000, 0.1);
  IntervalSet s2 = singular_set(gsin, 0.1);
  CHECK(w2.measure() == doctest::Approx(s2.measure()).epsilon(1e-12));

  GSpec gsc{GKind::ProductSinCos};
  IntervalSet w3 = widened_singular_set(gsc, 50, 1e-6);
  CHECK(w3.circular_arc_count() == 4);
  CHECK(w3.measure() == doctest::Approx(4 * 0.02).epsilon(1e-10));

  // containment and measure bound vs singular_set
  for (double eps : {1e-5, 0.01, 0.2}) {
    for (long long n : {3LL, 50LL, 5000LL}) {
      IntervalSet bs = singular_set(gsin, eps);
      IntervalSet bw = widened_singular_set(gsin, n, eps);
      CHECK(bw.measure() <= bs.measure() + 2.0 / static_cast<double>(n) + 1e-12);
      for (double t = -3.14; t < 3.14; t += 0.037)
        if (bs.contains(t)) CHECK(bw.contains(t));
    }
  }
}

TEST_CASE("lemma0_sum equals half the central binomial") {
  CHECK(lemma0_sum(1) == 1);
  CHECK(lemma0_sum(2) == 3);
  CHECK(lemma0_sum(3) == 10);
  for (int k = 1; k <= 20; ++k) CHECK(lemma0_sum(k) == half_central_binomial(k));
  CHECK_THROWS_AS(lemma0_sum(26), OverflowError);
}

TEST_CASE("optimal_fourier_k: scan result and consequence check") {
  FSpec p1{FFamily::Power, 1.0};
  long long k = optimal_fourier_k(p1, 2700, 3.0);
  CHECK(k == 19);
  // minimality: k-1 fails the criterion (closed form x0(k)=1/k)
  CHECK(3.0 * 19.0 * 19.0 / 2700.0 > std::exp(-1.0));
  CHECK(3.0 * 18.0 * 18.0 / 2700.0 <= std::exp(-1.0));
  CHECK(static_cast<double>(k) >= 2700.0 * solve_x1(p1, 2700) / 9.0);

  FSpec p2{FFamily::Power, 2.0};
  long long k2 = optimal_fourier_k(p2, 1000000, 3.0);
  auto crit = [&](long long q) {
    return 3.0 * static_cast<double>(q) / (1e6 * solve_x0(p2, static_cast<double>(q)));
  };
  CHECK(crit(k2) > std::exp(-1.0));
  if (k2 > 1) CHECK(crit(k2 - 1) <= std::exp(-1.0));
}

TEST_CASE("tail_sum_check against direct summation") {
  FSpec p1{FFamily::Power, 1.0};
  auto r = tail_sum_check(p1, 400, 1.0);
  CHECK(r.pass);
  // independent oracle: direct sum in plain doubles (values here are mild)
  double s = 0;
  for (long long v = 400; v < 200000; ++v)
    s += std::exp(-std::sqrt(static_cast<double>(v)));
  CHECK(r.lhs_log == doctest::Approx(std::log(s)).epsilon(1e-9));
  CHECK(r.rhs_log == doctest::Approx(-10.0).epsilon(1e-12));

  FSpec p2{FFamily::Power, 2.0};
  CHECK(tail_sum_check(p2, 1000, 5.0).pass);

  auto small = tail_sum_check(p1, 4, 0.01);
  CHECK_FALSE(small.pass);  // the lemma is asymptotic; small n may fail
}

TEST_CASE("weight spec mini-language round-trips") {
  auto w = parse_weight_spec("omega(pow:2,sin) * omega(pow:4,cos) * jacobi(0.5,0)");
  CHECK(w.omega_factors().size() == 2);
  CHECK(w.jacobi_factors().size() == 1);
  // at pi/2 the cos factor crushes the weight (cos(pi/2) rounds to 6e-17,
  // not an exact zero, so the log is astronomically negative, not -inf)
  CHECK(w.log_weight(kPi / 2) < -1e60);

  std::string canon = format_weight_spec(w);
  auto w2 = parse_weight_spec(canon);
  CHECK(format_weight_spec(w2) == canon);
  for (double t : {0.1, 0.7, 2.0})
    CHECK(w.log_weight(t) == doctest::Approx(w2.log_weight(t)).epsilon(1e-15));

  CHECK(parse_weight_spec("one").is_unity());
  CHECK(parse_weight_spec("omega(exppow:1,sin)").omega_factors().size() == 1);
  CHECK(parse_weight_spec("omega(powlog:1:1,sincos)").omega_factors()[0].f.xi1 == 1.0);
  CHECK_THROWS_AS(parse_weight_spec("omega(pow:2,tan)"), ParseError);
  CHECK_THROWS_AS(parse_weight_spec("jacobi(1,0) * jacobi(1,1)"), ParseError);
  CHECK_THROWS_AS(parse_weight_spec(""), ParseError);
}

TEST_CASE("power scaling of a composite weight is a log multiplier") {
  auto w = parse_weight_spec("omega(pow:1,sin) * jacobi(2,0)");
  auto wp = w.power(0.5);
  for (double t : {0.2, 1.0, 2.5})
    CHECK(wp.log_weight(t) == doctest::Approx(0.5 * w.log_weight(t)).epsilon(1e-15));
}

TEST_CASE("doubling ratio: Lebesgue doubles exactly, jacobi stable, omega diverges") {
  CHECK(doubling_ratio(CompositeWeight::one(), 1024) == doctest::Approx(2.0).epsilon(1e-12));

  auto jac = parse_weight_spec("jacobi(1,0)");
  double r1 = doubling_ratio(jac, 512);
  double r2 = doubling_ratio(jac, 1024);
  CHECK(std::isfinite(r1));
  CHECK(std::fabs(r2 - r1) / r1 < 0.05);

  auto om = parse_weight_spec("omega(pow:1,sin)");
  double d1 = doubling_ratio(om, 64);
  double d2 = doubling_ratio(om, 256);
  double d3 = doubling_ratio(om, 1024);
  CHECK(d2 > 2 * d1);
  CHECK(d3 > 2 * d2);
}

TEST_CASE("A* tester: unity gives 1, jacobi stable, omega diverges") {
  CHECK(astar_constant(CompositeWeight::one(), 256) == doctest::Approx(1.0).epsilon(1e-12));

  auto jac = parse_weight_spec("jacobi(2,0)");
  double a1 = astar_constant(jac, 512);
  double a2 = astar_constant(jac, 1024);
  CHECK(std::isfinite(a1));
  CHECK(std::fabs(a2 - a1) / a1 < 0.1);

  auto om = parse_weight_spec("omega(pow:2,sin)");
  double b1 = astar_constant(om, 64);
  double b2 = astar_constant(om, 512);
  CHECK(b2 > 4 * b1);
}

TEST_CASE("interval set algebra") {
  auto s = IntervalSet::from_arcs({{3.0, 3.5}});  // wraps the seam
  CHECK(s.measure() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.piece_count() == 2);
  CHECK(s.circular_arc_count() == 1);
  CHECK(s.contains(3.1));
  CHECK(s.contains(-3.0));
  CHECK_FALSE(s.contains(0.0));

  auto c = s.complement();
  CHECK(c.measure() == doctest::Approx(kTwoPi - 0.5).epsilon(1e-13));
  auto cc = c.complement();
  CHECK(cc.measure() == doctest::Approx(s.measure()).epsilon(1e-13));
  for (double t = -3.14159; t < 3.14159; t += 0.0531)
    CHECK(cc.contains(t) == s.contains(t));

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    std::vector<std::pair<double, double>> arcs;
    for (int i = 0; i < 5; ++i) {
      double a = u(rng);
      arcs.emplace_back(a, a + std::fabs(u(rng)) * 0.2);
    }
    auto r = IntervalSet::from_arcs(arcs);
    CHECK(r.measure() + r.complement().measure() == doctest::Approx(kTwoPi).epsilon(1e-12));
  }
}
