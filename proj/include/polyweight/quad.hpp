#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "polyweight/interval_set.hpp"
#include "polyweight/logdomain.hpp"
#include "polyweight/trigpoly.hpp"
#include "polyweight/weights.hpp"

namespace polyweight::quad {

struct QuadConfig {
  int base_panels = 64;      // per arc, before oscillation scaling
  int grading_depth = 40;    // geometric levels toward each weight zero, ratio 1/2
  int nodes = 16;            // Gauss-Legendre points per panel
  double tol = 1e-9;         // relative tolerance between refinement levels
  int sup_density = 64;      // sup-norm scan samples per unit of degree
  int max_refine_levels = 8;
  double discard_nats = 1e4; // contributions this far below the max are dropped
  int mp_digits = 50;        // fourier_coefficient working precision (escalated on demand)
};

/// A weighted norm in log form. error_log is the natural log of the
/// absolute-error estimate (refinement delta plus certified discards).
struct LogNorm {
  double log_value = kNegInf;
  double error_log = kNegInf;
  double p = 2.0;
  std::optional<double> argmax;  // sup norm only
  bool converged = true;
};

/// What the panel machinery needs to know about a weight: its log value,
/// where to grade panels, and how oscillatory it is (partial-sum weights
/// carry their trig degree so panel widths resolve them).
struct WeightFn {
  std::function<double(double)> log_w = [](double) { return 0.0; };
  struct Anchor {
    double t;
    double min_gamma = 0.0;  // most negative jacobi exponent here (0: decay)
  };
  std::vector<Anchor> anchors;
  long long osc_degree = 0;
};

WeightFn make_weight_fn(const weights::CompositeWeight& w);
WeightFn unit_weight_fn();

/// Nodes of the graded panel scheme with combined log quadrature weights
/// log(gauss w_i * halfwidth) + log w(t_i); reusable across many
/// polynomials against the same weight/domain (Gram assembly).
struct NodeSet {
  std::vector<double> t;
  std::vector<double> log_qw;   // includes the weight
  std::vector<double> log_gw;   // geometry only (no weight)
  double discard_log = kNegInf; // certified bound on omitted gap mass
};

NodeSet build_node_set(const WeightFn& w, const IntervalSet& domain,
                       long long degree, const QuadConfig& cfg, int level);

/// log of (int_domain |T|^p w)^(1/p), p in (0, inf). Panels are geometrically
/// refined toward every anchor of w; two successive refinement levels must
/// agree to cfg.tol or the result is flagged converged = false.
LogNorm weighted_lp_norm(const trig::PointEvaluator& T, const WeightFn& w,
                         double p, const IntervalSet& domain,
                         const QuadConfig& cfg = {});

/// ess sup |T w| over the domain: dense scan at cfg.sup_density * degree plus
/// graded samples near anchors, then golden-section refinement of the top 8
/// local maxima to |dt| <= 1e-12.
LogNorm weighted_sup_norm(const trig::PointEvaluator& T, const WeightFn& w,
                          const IntervalSet& domain, const QuadConfig& cfg = {});

/// Serial brute-force reference: midpoint rule over each arc, point count
/// doubled until successive values agree to tol. Kept independent of the
/// panel path; the production scheme is validated against it.
LogNorm reference_lp_norm(const trig::PointEvaluator& T, const WeightFn& w,
                          double p, const IntervalSet& domain, double tol = 1e-10,
                          long long max_points = 1 << 24);

struct FourierCoeff {
  int sign = 0;
  double log_abs = kNegInf;
  double noise_floor_log = kNegInf;  // arithmetic floor of the computation
  bool converged = true;
  bool censored = false;             // |value| below the resolvable floor
};

/// hat w_k = (1/pi) int_T w(t) cos kt dt, computed in extended precision
/// (the integrand is signed; double cancels around 1e-16 of its scale).
/// Odd part is asserted to vanish for even weights.
FourierCoeff fourier_coefficient_log(const weights::CompositeWeight& w,
                                     long long k, const QuadConfig& cfg = {});

double fourier_coefficient(const weights::CompositeWeight& w, long long k,
                           const QuadConfig& cfg = {});

/// Gauss-Legendre rule on [-1, 1], cached per order.
void gauss_legendre(int order, std::vector<double>& x, std::vector<double>& w);

}  // namespace polyweight::quad
