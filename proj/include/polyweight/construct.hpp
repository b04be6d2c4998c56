#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "polyweight/quad.hpp"
#include "polyweight/trigpoly.hpp"
#include "polyweight/weights.hpp"

namespace polyweight::construct {

/// xi = log omega restricted to its monotone branch (0, eps): negative,
/// increasing, xi(0+) = -inf. Requires g(0) = 0.
struct XiFunction {
  weights::OmegaWeight w;
  double eps;

  static XiFunction from_weight(const weights::OmegaWeight& w);
  double xi(double t) const { return w.log_weight(t); }

  /// Samples log w(rt)/log w(t) along t = eps 2^{-j}; the limsup form of the
  /// growth condition holds when the ratio exceeds `threshold` somewhere.
  bool limit_condition_holds(double r = 0.5, double threshold = 1e3) const;
};

/// Unique root of xi(y) = -M y on (0, eps). Throws NoBracketError when M is
/// too small for the bracket to close.
double solve_lemma_m(const XiFunction& xi, double m_slope);

struct ScheduleRow {
  long long n;
  double lambda;
  double a;
  double aux;        // z_n (growth schedule) or c_n (limsup schedule)
  long long k_deg;   // K_n; saturated at int64 max on overflow
  double k_log;      // log K_n (always finite when defined)
  bool feasible;     // K_n <= K_cap (neg11) / evaluation-ready
  double p13;        // growth diagnostic, must trend to +inf
  double p14_r05;    // decay diagnostic at r = 0.5, must trend to -inf
  double p14_r09;    // decay diagnostic at r = 0.9
  double residual;   // defining-equation residual
  bool hn_ordered;   // z_n < h_n side condition
};

struct Schedule {
  std::vector<ScheduleRow> rows;
  double p = std::numeric_limits<double>::infinity();
};

/// Schedule for the limit-condition construction: lambda_n = sqrt(1 - n^{-1/2}),
/// z_n solves xi(z) = -(1/2) n z sqrt(1 - lambda_n^2), a_n = z_n / lambda_n.
/// The p < inf variant solves xi((2 lambda - 1) a) = -p n lambda a (1 - lambda^2).
Schedule neg_schedule(const weights::OmegaWeight& w, const std::vector<long long>& n_list,
                      double p = std::numeric_limits<double>::infinity());

/// Schedule for the limsup construction: lambda_n = 1 - 1/n, c_n the largest
/// c <= min(c_{n-1}, eps/2) with xi((1-1/n)c)/xi(c) >= 2 n^2,
/// K_n = 2 floor(-xi(c_n) / (lambda_n a_n sqrt(1-lambda_n^2))).
Schedule neg11_schedule(const weights::OmegaWeight& w, const std::vector<long long>& n_list,
                        long long k_cap = 100000000LL);

struct DivergenceRow {
  long long n;
  long long k_deg;
  double ratio;       // R_n = ||Q'|| / (K_n ||Q||)
  double lower_bound; // LB_n from the Chebyshev ratio at the argmax (p = inf)
  double b_over_a;    // argmax location relative to a_n
};

/// Builds Q = T_{K_n}(1 + a_n^2 - sin^2 t) per feasible row and measures the
/// Bernstein ratio against the row's K_n. Rows flagged infeasible are skipped.
std::vector<DivergenceRow> divergence_report(const weights::CompositeWeight& w,
                                             const Schedule& s, double p,
                                             const quad::QuadConfig& cfg = {});

/// Piecewise weight with plateau levels d_n = exp(-exp(gamma n^2)) on
/// [alpha_n, alpha_{n-1}/2], alpha_n = d_n^2, joined by the smooth bridge
/// W(x) = int_0^{pi x} exp(-1/sin^2 s) ds (normalized). All arithmetic on
/// log t so levels near the double floor stay usable.
class StaircaseWeight {
 public:
  StaircaseWeight(double gamma, int n_max);

  double log_d(int n) const { return -std::exp(gamma_ * n * n); }
  double log_alpha(int n) const { return 2.0 * log_d(n); }
  double gamma() const { return gamma_; }
  int n_max() const { return n_max_; }

  double log_eval(double t) const;
  double log_eval_logt(double log_t) const;  // extended range

  /// log W(x), x in [0, 1]; quadrature-backed with memoization.
  double bridge_log(double x) const;

  quad::WeightFn to_weight_fn() const;

  /// K_n = floor(1 / (100 alpha_n)); <= 0 when alpha_n is too large.
  long long k_of(int n) const;

 private:
  double gamma_;
  int n_max_;
  double log_bridge_norm_;  // log int_0^pi exp(-1/sin^2)
};

struct StaircaseRow {
  int n;
  long long k_deg;
  double log_alpha;
  double empirical_c;      // max over trials of ||T' w|| / (K_n ||T w||)
  double scale_probe;      // same trials normalized by K_n/100
};

/// Random + adversarial trig polynomials of degree <= K_n against the
/// staircase weight; heuristic evidence for the subsequence Bernstein bound.
std::vector<StaircaseRow> staircase_bernstein_check(const StaircaseWeight& sw,
                                                    const std::vector<int>& n_rows,
                                                    int trials, std::uint64_t seed = 1,
                                                    const quad::QuadConfig& cfg = {});

}  // namespace polyweight::construct
