#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "polyweight/errors.hpp"
#include "polyweight/quad.hpp"

using namespace polyweight;
using namespace polyweight::trig;
using namespace polyweight::quad;
using polyweight::weights::CompositeWeight;
using polyweight::weights::parse_weight_spec;

namespace {

TrigPoly random_poly(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  TrigPoly p(n);
  p.a[0] = g(rng);
  for (int k = 1; k <= n; ++k) {
    p.a[k] = g(rng);
    p.b[k] = g(rng);
  }
  return p;
}

}  // namespace

TEST_CASE("weighted_lp_norm: classical anchors") {
  auto T = PointEvaluator::from_trigpoly(TrigPoly::cosine(1));
  LogNorm n2 = weighted_lp_norm(T, unit_weight_fn(), 2.0, IntervalSet::full_circle());
  CHECK(n2.converged);
  CHECK(n2.log_value == doctest::Approx(0.5 * std::log(kPi)).epsilon(1e-11));

  // int_T 1 dt = 2 pi at p = 1
  LogNorm n1 = weighted_lp_norm(PointEvaluator::constant_one(), unit_weight_fn(), 1.0,
                                IntervalSet::full_circle());
  CHECK(n1.log_value == doctest::Approx(std::log(kTwoPi)).epsilon(1e-11));
}

TEST_CASE("scaling exactness is bitwise in the log domain") {
  std::mt19937_64 rng(3);
  auto p = random_poly(7, rng);
  auto w = make_weight_fn(parse_weight_spec("omega(pow:1,sin)"));
  for (double pp : {0.5, 1.0, 2.0, 3.5}) {
    auto T = PointEvaluator::from_trigpoly(p);
    LogNorm base = weighted_lp_norm(T, w, pp, IntervalSet::full_circle());
    LogNorm scaled = weighted_lp_norm(T.scaled(std::log(2.0)), w, pp,
                                      IntervalSet::full_circle());
    CHECK(scaled.log_value == base.log_value + std::log(2.0));  // exact
  }
  auto T = PointEvaluator::constant_one();
  LogNorm s = weighted_sup_norm(T.scaled(std::log(2.0)), w, IntervalSet::full_circle());
  LogNorm b = weighted_sup_norm(T, w, IntervalSet::full_circle());
  CHECK(s.log_value == b.log_value + std::log(2.0));
}

TEST_CASE("essentially singular weight: production vs serial reference vs frozen") {
  auto w = make_weight_fn(parse_weight_spec("omega(pow:1,sin)"));
  auto one = PointEvaluator::constant_one();
  LogNorm prod = weighted_lp_norm(one, w, 1.0, IntervalSet::full_circle());
  LogNorm ref = reference_lp_norm(one, w, 1.0, IntervalSet::full_circle(), 1e-10);
  CHECK(prod.converged);
  CHECK(ref.converged);
  // frozen independent value: log int_T exp(-1/|sin t|) dt
  CHECK(prod.log_value == doctest::Approx(0.2724257183804395).epsilon(1e-10));
  CHECK(std::fabs(prod.log_value - ref.log_value) <= 1e-8);
}

TEST_CASE("Parseval for random polynomials") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    TrigPoly p = random_poly(3 + 3 * trial, rng);
    double sum = 2 * kPi * p.a[0] * p.a[0];
    for (int k = 1; k <= p.degree; ++k) sum += kPi * (p.a[k] * p.a[k] + p.b[k] * p.b[k]);
    auto T = PointEvaluator::from_trigpoly(p);
    LogNorm n = weighted_lp_norm(T, unit_weight_fn(), 2.0, IntervalSet::full_circle());
    CHECK(2 * n.log_value == doctest::Approx(std::log(sum)).epsilon(1e-10));
  }
}

TEST_CASE("restricted monotonicity: norm over T minus E never exceeds the full norm") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  auto w = make_weight_fn(parse_weight_spec("omega(pow:2,sin) * jacobi(1,0)"));
  for (int trial = 0; trial < 8; ++trial) {
    TrigPoly p = random_poly(5, rng);
    auto T = PointEvaluator::from_trigpoly(p);
    double a = u(rng);
    IntervalSet e = IntervalSet::from_arcs({{a, a + 0.4}, {u(rng), u(rng) + 0.1}});
    IntervalSet rest = e.complement();
    for (double pp : {1.0, 2.0}) {
      LogNorm full = weighted_lp_norm(T, w, pp, IntervalSet::full_circle());
      LogNorm part = weighted_lp_norm(T, w, pp, rest);
      CHECK(part.log_value <= full.log_value + 1e-12);
    }
    LogNorm fs = weighted_sup_norm(T, w, IntervalSet::full_circle());
    LogNorm ps = weighted_sup_norm(T, w, rest);
    CHECK(ps.log_value <= fs.log_value + 1e-12);
  }
}

TEST_CASE("weighted_sup_norm: classical and singular anchors") {
  auto cosn = PointEvaluator::from_trigpoly(TrigPoly::cosine(6));
  LogNorm s = weighted_sup_norm(cosn, unit_weight_fn(), IntervalSet::full_circle());
  CHECK(s.log_value == doctest::Approx(0.0).epsilon(1e-11));
  REQUIRE(s.argmax.has_value());
  double frac = *s.argmax / (kPi / 6);
  CHECK(std::fabs(frac - std::round(frac)) < 1e-6);

  auto w = make_weight_fn(parse_weight_spec("omega(pow:1,sin)"));
  LogNorm s2 = weighted_sup_norm(PointEvaluator::constant_one(), w,
                                 IntervalSet::full_circle());
  CHECK(s2.log_value == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(std::fabs(std::fabs(*s2.argmax) - kPi / 2) < 1e-7);
}

TEST_CASE("fourier_coefficient: trivial and closed-form cases") {
  CHECK(fourier_coefficient(CompositeWeight::one(), 0) == doctest::Approx(2.0).epsilon(1e-12));
  for (long long k : {1LL, 2LL, 9LL})
    CHECK(std::fabs(fourier_coefficient(CompositeWeight::one(), k)) < 1e-13);

  // |sin(t/2)| has hat w_k = -4 / (pi (4k^2 - 1))
  auto jac = parse_weight_spec("jacobi(1,0)");
  for (long long k : {0LL, 1LL, 3LL, 8LL}) {
    double expect = -4.0 / (kPi * (4.0 * k * k - 1.0));
    CHECK(fourier_coefficient(jac, k) == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("fourier_coefficient: essential singularity, frozen anchors") {
  auto om = parse_weight_spec("omega(pow:1,sin)");
  auto c64 = fourier_coefficient_log(om, 64);
  CHECK(c64.converged);
  CHECK_FALSE(c64.censored);
  CHECK(c64.log_abs == doctest::Approx(-13.6199171181667).epsilon(1e-8));
  CHECK(c64.sign == 1);

  // the weight is pi-periodic: odd coefficients vanish identically
  auto c7 = fourier_coefficient_log(om, 7);
  CHECK((c7.censored || c7.log_abs < -100.0));

  // decay bound wired to the scale function: |hat w_64| <= exp(-c 64 x1(64))
  double nx1 = 64.0 * weights::solve_x1(om.omega_factors()[0].f, 64.0);
  double c_fit = -c64.log_abs / nx1;
  CHECK(c_fit > 0);
}

TEST_CASE("fourier_coefficient matches the sample-DFT path at moderate k") {
  auto om = parse_weight_spec("omega(pow:1,sin)");
  auto samples = sample_periodic([&](double t) { return std::exp(om.log_weight(t)); }, 4096);
  auto ps = fourier_partial_sum(samples, 16);
  for (long long k : {0LL, 2LL, 8LL, 16LL}) {
    double via_quad = fourier_coefficient(om, k);
    double via_dft = (k == 0) ? 2.0 * ps.poly.a[0] : ps.poly.a[k];
    CHECK(via_quad == doctest::Approx(via_dft).epsilon(1e-8));
  }
  // spec anchor: coefficient 7 agrees between paths (both essentially zero)
  CHECK(std::fabs(ps.poly.a[7]) < 1e-13);
}

TEST_CASE("Remez sanity on random polynomials and interval sets") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::uniform_int_distribution<int> nd(1, 32);
  for (int trial = 0; trial < 60; ++trial) {
    int n = nd(rng);
    TrigPoly p = random_poly(n, rng);
    auto T = PointEvaluator::from_trigpoly(p);
    double total = 0.05 + 0.15 * (trial % 4) / 3.0;  // |B| <= 0.2
    double a1 = u(rng), a2 = u(rng);
    IntervalSet b = IntervalSet::from_arcs({{a1, a1 + total / 2}, {a2, a2 + total / 2}});
    double mb = b.measure();
    IntervalSet rest = b.complement();

    LogNorm full = weighted_sup_norm(T, unit_weight_fn(), IntervalSet::full_circle());
    LogNorm off = weighted_sup_norm(T, unit_weight_fn(), rest);
    CHECK(full.log_value <= 4.0 * n * mb + off.log_value + 1e-9);

    double pp = 0.5 + (trial % 3);
    LogNorm fullp = weighted_lp_norm(T, unit_weight_fn(), pp, IntervalSet::full_circle());
    LogNorm offp = weighted_lp_norm(T, unit_weight_fn(), pp, rest);
    double factor = std::log1p(std::exp(std::min(700.0, 4.0 * n * mb * pp))) / pp;
    CHECK(fullp.log_value <= factor + offp.log_value + 1e-9);
  }
}

TEST_CASE("node set reuse matches one-shot norms") {
  auto w = make_weight_fn(parse_weight_spec("omega(pow:2,sin)"));
  QuadConfig cfg;
  NodeSet ns = build_node_set(w, IntervalSet::full_circle(), 8, cfg, 1);
  std::mt19937_64 rng(19);
  TrigPoly p = random_poly(8, rng);
  LogAccumulator acc;
  for (std::size_t i = 0; i < ns.t.size(); ++i) {
    if (ns.log_qw[i] == kNegInf) continue;
    double v = p.eval(ns.t[i]);
    if (v == 0) continue;
    acc.add_log(2.0 * std::log(std::fabs(v)) + ns.log_qw[i]);
  }
  auto T = PointEvaluator::from_trigpoly(p);
  LogNorm full = weighted_lp_norm(T, w, 2.0, IntervalSet::full_circle(), cfg);
  CHECK(acc.log_total() / 2.0 == doctest::Approx(full.log_value).epsilon(1e-8));
}

TEST_CASE("errors: empty domain and bad p") {
  auto T = PointEvaluator::constant_one();
  CHECK_THROWS_AS(weighted_lp_norm(T, unit_weight_fn(), 2.0, IntervalSet::empty_set()),
                  DomainError);
  CHECK_THROWS_AS(weighted_lp_norm(T, unit_weight_fn(), kPosInf, IntervalSet::full_circle()),
                  DomainError);
}
