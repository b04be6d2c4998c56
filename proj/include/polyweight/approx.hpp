#pragma once

#include <vector>

#include "polyweight/quad.hpp"
#include "polyweight/trigpoly.hpp"
#include "polyweight/weights.hpp"

namespace polyweight::approx {

struct DecayRow {
  long long n;
  double coeff_log;  // log |hat w_n|
  int sign;
  double n_x1;       // n * x1(n)
  bool censored;     // below the resolvable floor (or exp(-700))
};

/// Fourier-coefficient decay against the n x1(n) scale. fitted_c is the
/// largest c with |hat w_n| <= exp(-c n x1(n)) row-wise on the fit window
/// (the upper geometric half of the uncensored rows).
struct DecayReport {
  std::vector<DecayRow> rows;
  double fitted_c = 0.0;
  std::size_t window_begin = 0;  // index into rows of the fit window start
  bool pass = false;             // fitted_c > 0 and the window is nonempty
};

DecayReport fourier_decay_report(const weights::OmegaWeight& w, long long n_min,
                                 long long n_max, const quad::QuadConfig& cfg = {});

struct PartialSumError {
  double e0_log;        // log sup |w - w_n|
  double e1_log;        // log sup |w' - w_n'|
  int samples_used;
  bool aliasing_clean;
};

/// Sup errors of the degree-n Fourier partial sum of w and of its
/// derivative, on a dense grid (16n points) plus graded points near the
/// zeros of g. Sampling is raised until aliasing-clean.
PartialSumError partial_sum_error(const weights::OmegaWeight& w, int n);

struct EquivalenceResult {
  int K = 0;
  bool found = false;
  double worst_violation_log = 0.0;  // worst |log ratio| at the last K tried
  std::vector<int> tried;
};

/// Least K in {1, 2, 4, ..., K_max} such that for every test polynomial,
///   1/2 N(v_Kn) <= N_w <= 2 N(v_Kn),
/// where v = w^{1/p} (v = w at p = inf) and N replaces w u by |v_Kn|^p u.
EquivalenceResult norm_equivalence_K(const weights::OmegaWeight& w,
                                     const weights::CompositeWeight& u, double p,
                                     int n, int k_max,
                                     const std::vector<trig::PointEvaluator>& test_polys,
                                     const quad::QuadConfig& cfg = {});

}  // namespace polyweight::approx
