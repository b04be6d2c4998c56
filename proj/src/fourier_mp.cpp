// hat w_k = (1/pi) int w cos kt dt in extended precision. The integrand is
// signed, so a double-precision panel sum stalls at ~1e-16 of the integrand
// scale while the true coefficient sits many orders below it; MPFR arithmetic
// pushes the cancellation floor to the working precision.
#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <limits>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "polyweight/errors.hpp"
#include "polyweight/parallel.hpp"
#include "polyweight/quad.hpp"

namespace polyweight::quad {

namespace {

namespace bmp = boost::multiprecision;

template <unsigned D>
using BigF = bmp::number<bmp::mpfr_float_backend<D>>;

template <class Big>
struct MpRule {
  std::vector<Big> x, w;
};

// Gauss-Legendre nodes at full working precision; double nodes would pin the
// quadrature error at ~1e-16 regardless of the arithmetic.
template <class Big>
const MpRule<Big>& mp_gauss(int order) {
  static std::map<int, MpRule<Big>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  MpRule<Big> r;
  r.x.assign(order, Big(0));
  r.w.assign(order, Big(0));
  const Big one(1);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    Big z(std::cos(kPi * (i + 0.75) / (order + 0.5)));
    Big pp(0);
    for (int it2 = 0; it2 < 200; ++it2) {
      Big p1(1), p2(0);
      for (int j = 0; j < order; ++j) {
        Big p3 = p2;
        p2 = p1;
        p1 = ((2 * j + one) * z * p2 - j * p3) / (j + 1);
      }
      pp = order * (z * p1 - p2) / (z * z - one);
      Big dz = p1 / pp;
      z -= dz;
      if (abs(dz) < pow(Big(10), -static_cast<int>(std::numeric_limits<Big>::digits10) - 2))
        break;
    }
    r.x[i] = -z;
    r.x[order - 1 - i] = z;
    r.w[i] = r.w[order - 1 - i] = 2 / ((one - z * z) * pp * pp);
  }
  return cache.emplace(order, std::move(r)).first->second;
}

struct Edge {
  double a, b;
};

// Panel edges over the full circle: width-capped at pi/(8k) away from the
// weight's singular points and geometrically graded toward them, deep
// enough that the omitted slivers sit below `floor_log`.
std::vector<Edge> mp_panels(const weights::CompositeWeight& w, long long k,
                            double floor_log, int halvings) {
  std::vector<double> sing = w.singular_points();
  std::vector<double> cuts = {-kPi, kPi};
  for (double s : sing) cuts.push_back(s);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::fabs(a - b) < 1e-14; }),
             cuts.end());

  double maxw = kPi / (8.0 * static_cast<double>(std::max<long long>(k, 1)));
  maxw /= static_cast<double>(1 << halvings);

  auto near_singular = [&](double t) {
    for (double s : sing)
      if (std::fabs(wrap_angle(t - s)) < 1e-13) return true;
    return false;
  };

  std::vector<Edge> out;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    double lo = cuts[c], hi = cuts[c + 1];
    double len = hi - lo;
    if (!(len > 0)) continue;
    bool sing_lo = near_singular(lo), sing_hi = near_singular(hi);
    // graded zones at singular endpoints
    double zone = std::min(len / 4.0, 0.25);
    double body_lo = lo + (sing_lo ? zone : 0.0);
    double body_hi = hi - (sing_hi ? zone : 0.0);
    auto add_ladder = [&](double s, int dir) {
      double d = zone;
      while (true) {
        double dn = d * 0.5;
        double edge = s + dir * dn;
        double lw = w.log_weight(edge);
        out.push_back(dir > 0 ? Edge{edge, s + dir * d} : Edge{s + dir * d, edge});
        double gap_bound = lw + std::log(dn) + 3.0;
        if (gap_bound < floor_log || dn < 1e-290) break;
        d = dn;
      }
    };
    if (sing_lo) add_ladder(lo, +1);
    if (sing_hi) add_ladder(hi, -1);
    long long m = std::max<long long>(1, static_cast<long long>(std::ceil((body_hi - body_lo) / maxw)));
    double wdt = (body_hi - body_lo) / static_cast<double>(m);
    for (long long i = 0; i < m; ++i) {
      double a = body_lo + wdt * static_cast<double>(i);
      double b = (i + 1 == m) ? body_hi : a + wdt;
      if (b > a) out.push_back({a, b});
    }
  }
  return out;
}

template <unsigned D>
struct MpResult {
  BigF<D> cosI, sinI, absI;
};

template <unsigned D>
MpResult<D> mp_integrate(const weights::CompositeWeight& w, long long k,
                         const std::vector<Edge>& panels, int order) {
  using Big = BigF<D>;
  const MpRule<Big>& rule = mp_gauss<Big>(order);
  const std::size_t n = panels.size();
  std::vector<Big> pc(n), ps(n), pa(n);

#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    Big mid = (Big(panels[i].a) + Big(panels[i].b)) / 2;
    Big half = (Big(panels[i].b) - Big(panels[i].a)) / 2;
    Big sc(0), ss(0), sa(0);
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
      Big t = mid + half * rule.x[q];
      Big lw = w.log_weight_t(t);
      Big wv = exp(lw);
      Big kt = Big(k) * t;
      sc += rule.w[q] * wv * cos(kt);
      ss += rule.w[q] * wv * sin(kt);
      sa += rule.w[q] * wv;
    }
    pc[i] = sc * half;
    ps[i] = ss * half;
    pa[i] = sa * half;
  }
  MpResult<D> r;
  r.cosI = 0;
  r.sinI = 0;
  r.absI = 0;
  for (std::size_t i = 0; i < n; ++i) {
    r.cosI += pc[i];
    r.sinI += ps[i];
    r.absI += pa[i];
  }
  return r;
}

template <unsigned D>
FourierCoeff mp_coefficient(const weights::CompositeWeight& w, long long k,
                            const QuadConfig& cfg) {
  using Big = BigF<D>;
  const double digits_nats = static_cast<double>(D) * std::log(10.0);
  const double floor_target = -(digits_nats + 30.0);

  FourierCoeff out;
  Big prev(0);
  bool have_prev = false;
  for (int halvings = 0; halvings <= 2; ++halvings) {
    auto panels = mp_panels(w, k, floor_target, halvings);
    MpResult<D> r = mp_integrate<D>(w, k, panels, 2 * cfg.nodes);
    static const Big big_pi = acos(Big(-1));
    Big val = r.cosI / big_pi;
    double labs = val == 0 ? kNegInf : static_cast<double>(log(abs(val)));
    double noise = static_cast<double>(log(r.absI + Big(1e-300))) - digits_nats +
                   std::log(static_cast<double>(panels.size()) + 1.0) + 5.0;
    out.noise_floor_log = noise;
    if (have_prev) {
      Big delta = abs(val - prev);
      double ldelta = delta == 0 ? kNegInf : static_cast<double>(log(delta));
      if (ldelta <= std::max(labs + std::log(cfg.tol), noise)) {
        out.converged = true;
        if (labs <= noise + 3.0 || labs < -700.0) {
          out.censored = true;
          out.sign = 0;
          out.log_abs = kNegInf;
        } else {
          out.sign = val > 0 ? 1 : -1;
          out.log_abs = labs;
        }
        return out;
      }
    }
    prev = val;
    have_prev = true;
    if (halvings == 2) {
      out.converged = false;
      out.sign = val > 0 ? 1 : (val < 0 ? -1 : 0);
      out.log_abs = labs;
      if (labs <= noise + 3.0 || labs < -700.0) {
        out.censored = true;
        out.sign = 0;
        out.log_abs = kNegInf;
      }
    }
  }
  return out;
}

}  // namespace

FourierCoeff fourier_coefficient_log(const weights::CompositeWeight& w,
                                     long long k, const QuadConfig& cfg) {
  FourierCoeff c = mp_coefficient<50>(w, k, cfg);
  if (c.censored || !c.converged) {
    // below the 50-digit floor: escalate once before censoring for real
    FourierCoeff c2 = mp_coefficient<340>(w, k, cfg);
    return c2;
  }
  return c;
}

}  // namespace polyweight::quad
