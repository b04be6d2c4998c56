#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyweight/quad.hpp"
#include "polyweight/trigpoly.hpp"
#include "polyweight/weights.hpp"

namespace polyweight::extremal {

/// An estimated extremal constant with its extremizer and diagnostics.
/// The reported constant always re-reproduces the ratio achieved by the
/// extremizer when re-evaluated through quad (to 1e-9 in log scale).
struct ExtremalReport {
  double log_constant = kNegInf;
  double normalized = 0.0;  // constant / paper rate (n, n^2, n^{1/p-1/q})
  trig::TrigPoly extremizer;
  std::vector<double> coefficients;  // basis coefficients (algebraic ops)
  std::string method;                // "eigen" | "multistart"
  int restarts_used = 0;
  double residual = 0.0;  // refinement delta / optimizer spread
  bool ill_conditioned = false;

  double constant() const { return std::exp(log_constant); }
};

/// Sharp L2 Bernstein constant via the generalized symmetric eigenproblem
/// A v = lambda B v on the basis {1, cos kt, sin kt}. Falls back to modified
/// Gram-Schmidt B-orthonormalization when cond(B) > 1e12.
ExtremalReport bernstein_l2(const weights::CompositeWeight& w, int n,
                            const quad::QuadConfig& cfg = {});

/// Certified lower bound for the L_p Bernstein constant: coordinate-wise
/// golden search plus Nelder-Mead polish over the coefficient sphere, from
/// `restarts` random starts plus the seeds {cos nt, L2 extremizer}.
ExtremalReport bernstein_lp(const weights::CompositeWeight& w, int n, double p,
                            int restarts, std::uint64_t seed = 1,
                            const quad::QuadConfig& cfg = {});

struct RemezCheck {
  double lhs_log;
  double rhs_log;
  bool pass;
};

/// Checks ||T||_{p,(w,T)} <= exp(C n |E|) ||T||_{p,(w,T\E)}.
RemezCheck remez_verify(const weights::CompositeWeight& w, double p,
                        const trig::PointEvaluator& T, const IntervalSet& E,
                        double C, const quad::QuadConfig& cfg = {});

enum class RemezFamily { Random, Concentrated };
enum class RemezSetKind { Intervals, MeasurableUnion };

/// Lower estimate of the optimal Remez constant from sampled (T, E) pairs:
/// max of (log ratio) / (n |E|).
double remez_constant_fit(const weights::CompositeWeight& w, double p,
                          const std::vector<int>& n_list, RemezFamily family,
                          RemezSetKind kind, int samples_per_n = 60,
                          std::uint64_t seed = 1, const quad::QuadConfig& cfg = {});

/// Nikolskii ratio ||T||_{q,(wu)} / ||T||_{p,((wu)^{p/q})}, maximized over
/// the coefficient sphere; normalized by n^{1/p-1/q}.
ExtremalReport nikolskii_ratio(const weights::CompositeWeight& w, int n, double p,
                               double q, int restarts, std::uint64_t seed = 1,
                               const quad::QuadConfig& cfg = {});

struct AlgebraicCheck {
  double lhs_log;
  double rhs_log;
  bool pass;
};

/// || phi P' w u ||_p <= C n || P w u ||_p on [-1,1], phi = sqrt(1-x^2),
/// via x = cos t. P is given by Chebyshev-basis coefficients c_0..c_n;
/// the |sin t| Jacobian is included at p < infinity and dropped at p = inf.
AlgebraicCheck algebraic_bernstein_verify(const std::vector<double>& cheb_coeffs,
                                          const weights::CompositeWeight& w_pullback,
                                          double p, double C,
                                          const quad::QuadConfig& cfg = {});

/// Markov constant sup ||P'||_{p,(wu)} / ||P||_{p,(wu)} over degree-n
/// algebraic polynomials (Chebyshev coefficient sphere); normalized by n^2.
ExtremalReport algebraic_markov_constant(const weights::CompositeWeight& w_pullback,
                                         int n, double p, int restarts,
                                         std::uint64_t seed = 1,
                                         const quad::QuadConfig& cfg = {});

/// Mhaskar-Rakhmanov-Saff number for the external field Q(x) = (1-x^2)^{-alpha}:
/// the root a_n in (0,1) of n = (2/pi) int_0^1 a x Q'(a x) / sqrt(1-x^2) dx.
double mrs_number(double alpha, double n);

/// The defining-equation residual |n(a_n) - n| at a higher quadrature order.
double mrs_residual(double alpha, double n, double a_n);

/// Evaluators for the x = cos t pullback of a Chebyshev-coefficient
/// polynomial: value sum c_k cos kt, "phi P'" as sum k c_k sin kt, and P'
/// itself via the second-kind Clenshaw series.
trig::PointEvaluator pullback_value(const std::vector<double>& cheb_coeffs);
trig::PointEvaluator pullback_phi_deriv(const std::vector<double>& cheb_coeffs);
trig::PointEvaluator pullback_deriv(const std::vector<double>& cheb_coeffs);

}  // namespace polyweight::extremal
