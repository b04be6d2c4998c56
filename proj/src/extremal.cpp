#include "polyweight/extremal.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "polyweight/errors.hpp"
#include "polyweight/parallel.hpp"

namespace polyweight::extremal {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// ---------------------------------------------------------------------------
// Fast fixed-grid norms for optimizer inner loops. The returned ratios are
// search values only; every reported constant is re-evaluated through the
// adaptive quad path.
// ---------------------------------------------------------------------------

// Basis value matrices at quadrature (or scan) nodes. Column layout matches
// TrigPoly::packed(): (1, cos t, sin t, cos 2t, sin 2t, ...).
MatrixXd trig_basis(const std::vector<double>& ts, int n) {
  MatrixXd phi(ts.size(), 2 * n + 1);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double c1 = std::cos(ts[i]), s1 = std::sin(ts[i]);
    double ck = 1.0, sk = 0.0;
    phi(i, 0) = 1.0;
    for (int k = 1; k <= n; ++k) {
      double cn = ck * c1 - sk * s1;
      double sn = sk * c1 + ck * s1;
      ck = cn;
      sk = sn;
      phi(i, 2 * k - 1) = ck;
      phi(i, 2 * k) = sk;
    }
  }
  return phi;
}

MatrixXd trig_basis_deriv(const std::vector<double>& ts, int n) {
  MatrixXd d(ts.size(), 2 * n + 1);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double c1 = std::cos(ts[i]), s1 = std::sin(ts[i]);
    double ck = 1.0, sk = 0.0;
    d(i, 0) = 0.0;
    for (int k = 1; k <= n; ++k) {
      double cn = ck * c1 - sk * s1;
      double sn = sk * c1 + ck * s1;
      ck = cn;
      sk = sn;
      d(i, 2 * k - 1) = -k * sk;  // d/dt cos kt
      d(i, 2 * k) = k * ck;       // d/dt sin kt
    }
  }
  return d;
}

// log (sum_i qw_i |v_i|^p)^(1/p) for precomputed log quadrature weights.
double grid_lp(const VectorXd& v, const std::vector<double>& log_qw, double p) {
  LogAccumulator acc;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double av = std::fabs(v[i]);
    if (av == 0.0 || log_qw[i] == kNegInf) continue;
    acc.add_log(p * std::log(av) + log_qw[i]);
  }
  return acc.log_total() / p;
}

// smoothed sup: (1/s) log sum exp(s (log|v_i| + lw_i)); s = 1e3
double grid_sup_smoothed(const VectorXd& v, const std::vector<double>& log_w,
                         double sharp) {
  LogAccumulator acc;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double av = std::fabs(v[i]);
    if (av == 0.0 || log_w[i] == kNegInf) continue;
    acc.add_log(sharp * (std::log(av) + log_w[i]));
  }
  return acc.log_total() / sharp;
}

// Scan grid for sup-mode objectives: dense plus graded points near anchors.
std::vector<double> sup_grid(const quad::WeightFn& w, int degree, int density) {
  std::vector<double> ts;
  long long n = static_cast<long long>(density) * std::max(1, degree);
  n = std::min<long long>(n, 1 << 20);
  ts.reserve(static_cast<std::size_t>(n) + 256);
  for (long long i = 0; i < n; ++i)
    ts.push_back(-kPi + kTwoPi * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
  for (const auto& a : w.anchors) {
    for (int j = 1; j <= 50; ++j) {
      double d = 0.5 * std::pow(0.65, j);
      for (int side = -1; side <= 1; side += 2)
        ts.push_back(wrap_angle(a.t + side * d));
    }
  }
  std::sort(ts.begin(), ts.end());
  return ts;
}

// ---------------------------------------------------------------------------
// Multistart maximizer: coordinate-wise golden line search + Nelder-Mead.
// Deterministic for any thread count: per-start work is independent and the
// winner is picked in seed order.
// ---------------------------------------------------------------------------

using Objective = std::function<double(const VectorXd&)>;

double golden_line(const Objective& f, VectorXd& x, int coord, double fx) {
  const double gr = 0.6180339887498949;
  double scale = x.norm();
  double a = -1.5 * scale, b = 1.5 * scale;
  auto eval = [&](double tau) {
    VectorXd y = x;
    y[coord] += tau;
    double ny = y.norm();
    if (ny < 1e-12) return kNegInf;
    return f(y);
  };
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = eval(x1), f2 = eval(x2);
  for (int it = 0; it < 28; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = eval(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = eval(x1);
    }
  }
  double tau = f1 > f2 ? x1 : x2;
  double fv = std::max(f1, f2);
  if (fv > fx) {
    x[coord] += tau;
    x /= x.norm();
    return fv;
  }
  return fx;
}

double nelder_mead(const Objective& f, VectorXd& x, double fx, int budget) {
  const int dim = static_cast<int>(x.size());
  std::vector<VectorXd> pts(dim + 1, x);
  std::vector<double> vals(dim + 1, fx);
  for (int i = 0; i < dim; ++i) {
    pts[i + 1][i] += 0.05;
    pts[i + 1] /= pts[i + 1].norm();
    vals[i + 1] = f(pts[i + 1]);
  }
  int evals = dim;
  auto order = [&] {
    std::vector<int> idx(dim + 1);
    for (int i = 0; i <= dim; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] > vals[b]; });
    std::vector<VectorXd> np(dim + 1);
    std::vector<double> nv(dim + 1);
    for (int i = 0; i <= dim; ++i) {
      np[i] = pts[idx[i]];
      nv[i] = vals[idx[i]];
    }
    pts = np;
    vals = nv;
  };
  order();
  while (evals < budget) {
    VectorXd centroid = VectorXd::Zero(dim);
    for (int i = 0; i < dim; ++i) centroid += pts[i];
    centroid /= dim;
    VectorXd xr = centroid + (centroid - pts[dim]);
    double fr = f(xr);
    ++evals;
    if (fr > vals[0]) {
      VectorXd xe = centroid + 2.0 * (centroid - pts[dim]);
      double fe = f(xe);
      ++evals;
      pts[dim] = fe > fr ? xe : xr;
      vals[dim] = std::max(fe, fr);
    } else if (fr > vals[dim - 1]) {
      pts[dim] = xr;
      vals[dim] = fr;
    } else {
      VectorXd xc = centroid + 0.5 * (pts[dim] - centroid);
      double fc = f(xc);
      ++evals;
      if (fc > vals[dim]) {
        pts[dim] = xc;
        vals[dim] = fc;
      } else {
        for (int i = 1; i <= dim; ++i) {
          pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
          vals[i] = f(pts[i]);
        }
        evals += dim;
      }
    }
    order();
    if (vals[0] - vals[dim] < 1e-12) break;
  }
  if (vals[0] > fx) {
    x = pts[0];
    x /= x.norm();
    return vals[0];
  }
  return fx;
}

struct MultistartResult {
  VectorXd best;
  double value = kNegInf;
  int starts = 0;
  double spread = 0.0;  // best minus median of start results
};

MultistartResult multistart_maximize(const Objective& f,
                                     const std::vector<VectorXd>& seeds,
                                     int restarts, int dim, std::uint64_t seed) {
  std::vector<VectorXd> starts = seeds;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (int r = 0; r < restarts; ++r) {
    VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = g(rng);
    v /= v.norm();
    starts.push_back(v);
  }
  const int ns = static_cast<int>(starts.size());
  std::vector<double> results(ns, kNegInf);
  std::vector<VectorXd> points(ns);

#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
  for (int s = 0; s < ns; ++s) {
    VectorXd x = starts[s];
    x /= x.norm();
    double fx = f(x);
    for (int pass = 0; pass < 2; ++pass)
      for (int c = 0; c < dim; ++c) fx = golden_line(f, x, c, fx);
    fx = nelder_mead(f, x, fx, 120 + 30 * dim);
    results[s] = fx;
    points[s] = x;
  }

  MultistartResult out;
  out.starts = ns;
  int argbest = 0;
  for (int s = 0; s < ns; ++s)
    if (results[s] > results[argbest]) argbest = s;
  out.best = points[argbest];
  out.value = results[argbest];
  std::vector<double> sorted = results;
  std::sort(sorted.begin(), sorted.end());
  out.spread = out.value - sorted[sorted.size() / 2];
  return out;
}

// Norm contexts shared by the ratio objectives.
struct LpContext {
  std::vector<double> log_qw;
  MatrixXd num_basis;  // evaluated numerator basis (e.g. derivatives)
  MatrixXd den_basis;
  double p;
  double sup_sharp = 1e3;
  bool sup_mode = false;
  std::vector<double> log_w;  // sup mode: plain log weight at scan points
};

double ratio_objective(const LpContext& ctx, const VectorXd& c) {
  VectorXd num = ctx.num_basis * c;
  VectorXd den = ctx.den_basis * c;
  if (ctx.sup_mode) {
    double ln = grid_sup_smoothed(num, ctx.log_w, ctx.sup_sharp);
    double ld = grid_sup_smoothed(den, ctx.log_w, ctx.sup_sharp);
    return ln - ld;
  }
  return grid_lp(num, ctx.log_qw, ctx.p) - grid_lp(den, ctx.log_qw, ctx.p);
}

}  // namespace

// ---------------------------------------------------------------------------
// bernstein_l2: generalized symmetric-definite eigenproblem
// ---------------------------------------------------------------------------

ExtremalReport bernstein_l2(const weights::CompositeWeight& w, int n,
                            const quad::QuadConfig& cfg) {
  ExtremalReport rep;
  rep.method = "eigen";
  if (n == 0) {
    rep.extremizer = trig::TrigPoly::constant(1.0);
    rep.log_constant = kNegInf;
    rep.normalized = 0.0;
    return rep;
  }
  quad::WeightFn wf = quad::make_weight_fn(w);
  const int dim = 2 * n + 1;

  auto assemble = [&](int level, MatrixXd& A, MatrixXd& B) {
    quad::NodeSet ns = quad::build_node_set(wf, IntervalSet::full_circle(),
                                            2LL * n, cfg, level);
    double shift = kNegInf;
    for (double lw : ns.log_qw) shift = std::max(shift, lw);
    VectorXd qw(ns.t.size());
    for (std::size_t i = 0; i < ns.t.size(); ++i)
      qw[i] = ns.log_qw[i] == kNegInf ? 0.0 : std::exp(ns.log_qw[i] - shift);
    MatrixXd phi = trig_basis(ns.t, n);
    MatrixXd dphi = trig_basis_deriv(ns.t, n);
    B = phi.transpose() * qw.asDiagonal() * phi;
    A = dphi.transpose() * qw.asDiagonal() * dphi;
  };

  auto solve = [&](const MatrixXd& A, const MatrixXd& B, VectorXd& vec,
                   bool& fellback) -> double {
    Eigen::SelfAdjointEigenSolver<MatrixXd> bes(B);
    double bmin = bes.eigenvalues().minCoeff();
    double bmax = bes.eigenvalues().maxCoeff();
    fellback = !(bmin > 0.0) || bmax / bmin > 1e12;
    if (!fellback) {
      Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(A, B);
      Eigen::Index idx;
      double lam = ges.eigenvalues().maxCoeff(&idx);
      vec = ges.eigenvectors().col(idx);
      return lam;
    }
    // modified Gram-Schmidt orthonormalization against B, dropping the
    // numerically null directions
    std::vector<VectorXd> q;
    double scale = bmax;
    for (int i = 0; i < static_cast<int>(B.rows()); ++i) {
      VectorXd r = VectorXd::Unit(B.rows(), i);
      for (const auto& qi : q) r -= (qi.transpose() * B * r)(0) * qi;
      for (const auto& qi : q) r -= (qi.transpose() * B * r)(0) * qi;
      double nn = (r.transpose() * B * r)(0);
      if (nn <= scale * 1e-13) continue;
      q.push_back(r / std::sqrt(nn));
    }
    MatrixXd Q(B.rows(), q.size());
    for (std::size_t i = 0; i < q.size(); ++i) Q.col(i) = q[i];
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(Q.transpose() * A * Q);
    Eigen::Index idx;
    double lam = es.eigenvalues().maxCoeff(&idx);
    vec = Q * es.eigenvectors().col(idx);
    return lam;
  };

  MatrixXd A0(dim, dim), B0(dim, dim), A1(dim, dim), B1(dim, dim);
  assemble(0, A0, B0);
  assemble(1, A1, B1);
  VectorXd v0, v1;
  bool fb0 = false, fb1 = false;
  double l0 = solve(A0, B0, v0, fb0);
  double l1 = solve(A1, B1, v1, fb1);
  rep.ill_conditioned = fb1;
  rep.residual = std::fabs(std::log(std::max(l1, 1e-300)) - std::log(std::max(l0, 1e-300)));
  rep.log_constant = 0.5 * std::log(l1);
  rep.extremizer = trig::TrigPoly::from_packed(
      std::span<const double>(v1.data(), static_cast<std::size_t>(v1.size())));
  rep.normalized = std::exp(rep.log_constant) / n;
  return rep;
}

// ---------------------------------------------------------------------------
// bernstein_lp
// ---------------------------------------------------------------------------

ExtremalReport bernstein_lp(const weights::CompositeWeight& w, int n, double p,
                            int restarts, std::uint64_t seed,
                            const quad::QuadConfig& cfg) {
  if (n < 1) throw DomainError("bernstein_lp: n >= 1");
  quad::WeightFn wf = quad::make_weight_fn(w);
  const int dim = 2 * n + 1;

  LpContext ctx;
  ctx.p = p;
  if (std::isinf(p)) {
    ctx.sup_mode = true;
    std::vector<double> ts = sup_grid(wf, n, cfg.sup_density);
    ctx.log_w.resize(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) ctx.log_w[i] = wf.log_w(ts[i]);
    ctx.num_basis = trig_basis_deriv(ts, n);
    ctx.den_basis = trig_basis(ts, n);
  } else {
    long long deg = static_cast<long long>(std::ceil(n * std::max(1.0, p)));
    quad::NodeSet ns =
        quad::build_node_set(wf, IntervalSet::full_circle(), deg, cfg, 1);
    ctx.log_qw = ns.log_qw;
    ctx.num_basis = trig_basis_deriv(ns.t, n);
    ctx.den_basis = trig_basis(ns.t, n);
  }
  Objective obj = [&](const VectorXd& c) { return ratio_objective(ctx, c); };

  std::vector<VectorXd> seeds;
  VectorXd cosn = VectorXd::Zero(dim);
  cosn[2 * n - 1] = 1.0;
  seeds.push_back(cosn);
  ExtremalReport l2 = bernstein_l2(w, n, cfg);
  VectorXd l2v = Eigen::Map<const VectorXd>(l2.extremizer.packed().data(), dim);
  if (l2v.norm() > 0) seeds.push_back(l2v / l2v.norm());

  MultistartResult ms = multistart_maximize(obj, seeds, restarts, dim, seed);

  ExtremalReport rep;
  rep.method = "multistart";
  rep.restarts_used = ms.starts;
  rep.extremizer = trig::TrigPoly::from_packed(
      std::span<const double>(ms.best.data(), static_cast<std::size_t>(ms.best.size())));
  auto tv = trig::PointEvaluator::from_trigpoly(rep.extremizer);
  auto td = trig::PointEvaluator::from_trigpoly(rep.extremizer.derivative());
  quad::LogNorm nn, nd;
  if (std::isinf(p)) {
    nn = quad::weighted_sup_norm(td, wf, IntervalSet::full_circle(), cfg);
    nd = quad::weighted_sup_norm(tv, wf, IntervalSet::full_circle(), cfg);
  } else {
    nn = quad::weighted_lp_norm(td, wf, p, IntervalSet::full_circle(), cfg);
    nd = quad::weighted_lp_norm(tv, wf, p, IntervalSet::full_circle(), cfg);
  }
  rep.log_constant = nn.log_value - nd.log_value;
  rep.normalized = std::exp(rep.log_constant) / n;
  rep.residual = ms.spread;
  return rep;
}

// ---------------------------------------------------------------------------
// Remez
// ---------------------------------------------------------------------------

RemezCheck remez_verify(const weights::CompositeWeight& w, double p,
                        const trig::PointEvaluator& T, const IntervalSet& E,
                        double C, const quad::QuadConfig& cfg) {
  IntervalSet rest = E.complement();
  if (rest.is_empty() || rest.measure() <= 0)
    throw EmptyComplementError("remez_verify: E covers the circle");
  quad::WeightFn wf = quad::make_weight_fn(w);
  quad::LogNorm full, off;
  if (std::isinf(p)) {
    full = quad::weighted_sup_norm(T, wf, IntervalSet::full_circle(), cfg);
    off = quad::weighted_sup_norm(T, wf, rest, cfg);
  } else {
    full = quad::weighted_lp_norm(T, wf, p, IntervalSet::full_circle(), cfg);
    off = quad::weighted_lp_norm(T, wf, p, rest, cfg);
  }
  RemezCheck r;
  r.lhs_log = full.log_value;
  r.rhs_log = C * static_cast<double>(T.degree) * E.measure() + off.log_value;
  r.pass = r.lhs_log <= r.rhs_log + 1e-12;
  return r;
}

namespace {

IntervalSet sample_remez_set(RemezSetKind kind, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> pos(-kPi, kPi);
  std::vector<std::pair<double, double>> arcs;
  if (kind == RemezSetKind::Intervals) {
    int m = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < m; ++i) {
      double len = std::max(1.0 / n, u(rng) * 0.3 / m);
      double a = pos(rng);
      arcs.emplace_back(a, a + len);
    }
  } else {
    int m = 8 + static_cast<int>(rng() % 12);
    for (int i = 0; i < m; ++i) {
      double len = u(rng) * 0.3 / m;
      double a = pos(rng);
      arcs.emplace_back(a, a + len);
    }
  }
  return IntervalSet::from_arcs(arcs);
}

trig::PointEvaluator shifted_concentrated(int n, double center, double a) {
  long long K = std::max<long long>(1, n / 2);
  auto base = trig::counterexample_evaluator(K, std::min(0.9, a));
  trig::PointEvaluator ev;
  ev.degree = base.degree;
  ev.value = [base, center](double t) { return base.value(t - center); };
  ev.deriv = [base, center](double t) { return base.deriv(t - center); };
  return ev;
}

}  // namespace

double remez_constant_fit(const weights::CompositeWeight& w, double p,
                          const std::vector<int>& n_list, RemezFamily family,
                          RemezSetKind kind, int samples_per_n,
                          std::uint64_t seed, const quad::QuadConfig& cfg) {
  quad::WeightFn wf = quad::make_weight_fn(w);
  double chat = 0.0;
  for (int n : n_list) {
    for (int s = 0; s < samples_per_n; ++s) {
      std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + n * 1315423911ULL + s);
      IntervalSet e = sample_remez_set(kind, n, rng);
      if (e.complement().is_empty()) continue;
      trig::PointEvaluator T;
      if (family == RemezFamily::Random) {
        std::normal_distribution<double> g;
        trig::TrigPoly tp(n);
        tp.a[0] = g(rng);
        for (int k = 1; k <= n; ++k) {
          tp.a[k] = g(rng);
          tp.b[k] = g(rng);
        }
        T = trig::PointEvaluator::from_trigpoly(tp);
      } else {
        double c0 = 0.5 * (e.pieces()[0].lo + e.pieces()[0].hi);
        double scale = 0.5 + 1.5 * std::generate_canonical<double, 53>(rng);
        T = shifted_concentrated(n, c0, std::max(0.02, e.measure() * scale));
      }
      IntervalSet rest = e.complement();
      quad::LogNorm full, off;
      if (std::isinf(p)) {
        full = quad::weighted_sup_norm(T, wf, IntervalSet::full_circle(), cfg);
        off = quad::weighted_sup_norm(T, wf, rest, cfg);
      } else {
        full = quad::weighted_lp_norm(T, wf, p, IntervalSet::full_circle(), cfg);
        off = quad::weighted_lp_norm(T, wf, p, rest, cfg);
      }
      double denom = static_cast<double>(T.degree) * e.measure();
      if (denom <= 0) continue;
      chat = std::max(chat, (full.log_value - off.log_value) / denom);
    }
  }
  return chat;
}

// ---------------------------------------------------------------------------
// Nikolskii
// ---------------------------------------------------------------------------

ExtremalReport nikolskii_ratio(const weights::CompositeWeight& w, int n, double p,
                               double q, int restarts, std::uint64_t seed,
                               const quad::QuadConfig& cfg) {
  if (!(p > 0) || p > q) throw DomainError("nikolskii_ratio: 0 < p <= q");
  const int dim = 2 * n + 1;
  quad::WeightFn wf = quad::make_weight_fn(w);
  // power weight: (wu)^{p/q} for finite q, (wu)^p when q = inf (the sup-norm
  // comparison pairs ||T w u||_inf with the p-norm against (w u)^p)
  double expo = std::isinf(q) ? p : p / q;
  weights::CompositeWeight wp = w.power(expo);
  quad::WeightFn wfp = quad::make_weight_fn(wp);

  // numerator grid (q-norm or sup) and denominator grid (p-norm)
  LpContext num_ctx, den_ctx;
  std::vector<double> ts;
  if (std::isinf(q)) {
    ts = sup_grid(wf, n, cfg.sup_density);
    num_ctx.sup_mode = true;
    num_ctx.log_w.resize(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) num_ctx.log_w[i] = wf.log_w(ts[i]);
    num_ctx.num_basis = trig_basis(ts, n);
  } else {
    long long deg = static_cast<long long>(std::ceil(n * std::max(1.0, q)));
    quad::NodeSet ns = quad::build_node_set(wf, IntervalSet::full_circle(), deg, cfg, 1);
    num_ctx.p = q;
    num_ctx.log_qw = ns.log_qw;
    num_ctx.num_basis = trig_basis(ns.t, n);
  }
  {
    long long deg = static_cast<long long>(std::ceil(n * std::max(1.0, p)));
    quad::NodeSet ns = quad::build_node_set(wfp, IntervalSet::full_circle(), deg, cfg, 1);
    den_ctx.p = p;
    den_ctx.log_qw = ns.log_qw;
    den_ctx.den_basis = trig_basis(ns.t, n);
  }

  Objective obj = [&](const VectorXd& c) {
    double ln;
    if (num_ctx.sup_mode) {
      VectorXd v = num_ctx.num_basis * c;
      ln = grid_sup_smoothed(v, num_ctx.log_w, num_ctx.sup_sharp);
    } else {
      VectorXd v = num_ctx.num_basis * c;
      ln = grid_lp(v, num_ctx.log_qw, num_ctx.p);
    }
    VectorXd d = den_ctx.den_basis * c;
    return ln - grid_lp(d, den_ctx.log_qw, den_ctx.p);
  };

  std::vector<VectorXd> seeds;
  VectorXd cosn = VectorXd::Zero(dim);
  cosn[n == 0 ? 0 : 2 * n - 1] = 1.0;
  seeds.push_back(cosn);
  VectorXd flat = VectorXd::Ones(dim);
  seeds.push_back(flat / flat.norm());

  MultistartResult ms = multistart_maximize(obj, seeds, restarts, dim, seed);

  ExtremalReport rep;
  rep.method = "multistart";
  rep.restarts_used = ms.starts;
  rep.extremizer = trig::TrigPoly::from_packed(
      std::span<const double>(ms.best.data(), static_cast<std::size_t>(ms.best.size())));
  auto tv = trig::PointEvaluator::from_trigpoly(rep.extremizer);
  quad::LogNorm nn, nd;
  if (std::isinf(q))
    nn = quad::weighted_sup_norm(tv, wf, IntervalSet::full_circle(), cfg);
  else
    nn = quad::weighted_lp_norm(tv, wf, q, IntervalSet::full_circle(), cfg);
  nd = quad::weighted_lp_norm(tv, wfp, p, IntervalSet::full_circle(), cfg);
  rep.log_constant = nn.log_value - nd.log_value;
  double rate = 1.0 / p - (std::isinf(q) ? 0.0 : 1.0 / q);
  rep.normalized = std::exp(rep.log_constant - rate * std::log(static_cast<double>(n)));
  rep.residual = ms.spread;
  return rep;
}

// ---------------------------------------------------------------------------
// Algebraic pullbacks
// ---------------------------------------------------------------------------

trig::PointEvaluator pullback_value(const std::vector<double>& c) {
  int n = static_cast<int>(c.size()) - 1;
  trig::TrigPoly tp(n);
  for (int k = 0; k <= n; ++k) tp.a[k] = c[k];
  return trig::PointEvaluator::from_trigpoly(tp);
}

trig::PointEvaluator pullback_phi_deriv(const std::vector<double>& c) {
  int n = static_cast<int>(c.size()) - 1;
  trig::TrigPoly tp(n);
  for (int k = 1; k <= n; ++k) tp.b[k] = k * c[k];
  return trig::PointEvaluator::from_trigpoly(tp);
}

trig::PointEvaluator pullback_deriv(const std::vector<double>& c) {
  // P'(x) = sum_k k c_k U_{k-1}(x); evaluated at x = cos t through the
  // sin kt / sin t form with the t -> 0, pi limits handled explicitly.
  auto coeffs = std::make_shared<std::vector<double>>(c);
  int n = static_cast<int>(c.size()) - 1;
  trig::PointEvaluator ev;
  ev.degree = std::max(0, n - 1);
  auto eval = [coeffs](double t) {
    double st = std::sin(t);
    double acc = 0.0;
    if (std::fabs(st) < 1e-9) {
      double sgn = std::cos(t) > 0 ? 1.0 : -1.0;  // t near 0 vs near pi
      for (std::size_t k = 1; k < coeffs->size(); ++k) {
        double kk = static_cast<double>(k);
        double uk = (sgn > 0) ? kk : ((k % 2 == 1) ? kk : -kk);  // U_{k-1}(+-1)
        acc += (*coeffs)[k] * kk * uk;
      }
      return SignedLog::from_value(acc);
    }
    for (std::size_t k = 1; k < coeffs->size(); ++k)
      acc += (*coeffs)[k] * static_cast<double>(k) * std::sin(k * t) / st;
    return SignedLog::from_value(acc);
  };
  ev.value = eval;
  ev.deriv = [](double) { return SignedLog::zero(); };  // unused
  return ev;
}

AlgebraicCheck algebraic_bernstein_verify(const std::vector<double>& cheb_coeffs,
                                          const weights::CompositeWeight& w_pullback,
                                          double p, double C,
                                          const quad::QuadConfig& cfg) {
  int n = static_cast<int>(cheb_coeffs.size()) - 1;
  auto val = pullback_value(cheb_coeffs);
  auto phid = pullback_phi_deriv(cheb_coeffs);
  AlgebraicCheck r;
  if (std::isinf(p)) {
    quad::WeightFn wf = quad::make_weight_fn(w_pullback);
    r.lhs_log = quad::weighted_sup_norm(phid, wf, IntervalSet::full_circle(), cfg).log_value;
    r.rhs_log = std::log(C) + std::log(static_cast<double>(std::max(1, n))) +
                quad::weighted_sup_norm(val, wf, IntervalSet::full_circle(), cfg).log_value;
  } else {
    weights::CompositeWeight wj = w_pullback;
    wj.add_sin_jacobian(1.0);
    quad::WeightFn wf = quad::make_weight_fn(wj);
    r.lhs_log = quad::weighted_lp_norm(phid, wf, p, IntervalSet::full_circle(), cfg).log_value;
    r.rhs_log = std::log(C) + std::log(static_cast<double>(std::max(1, n))) +
                quad::weighted_lp_norm(val, wf, p, IntervalSet::full_circle(), cfg).log_value;
  }
  r.pass = r.lhs_log <= r.rhs_log + 1e-12;
  return r;
}

ExtremalReport algebraic_markov_constant(const weights::CompositeWeight& w_pullback,
                                         int n, double p, int restarts,
                                         std::uint64_t seed,
                                         const quad::QuadConfig& cfg) {
  if (n < 1) throw DomainError("algebraic_markov_constant: n >= 1");
  const int dim = n + 1;

  // basis matrices: value cos kt, derivative k sin kt / sin t
  auto deriv_basis = [&](const std::vector<double>& ts) {
    MatrixXd m(ts.size(), dim);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      double st = std::sin(ts[i]);
      m(i, 0) = 0.0;
      for (int k = 1; k <= n; ++k) {
        if (std::fabs(st) < 1e-9) {
          double sgn = std::cos(ts[i]) > 0 ? 1.0 : -1.0;
          double uk = (sgn > 0) ? k : ((k % 2 == 1) ? k : -k);
          m(i, k) = k * uk;
        } else {
          m(i, k) = k * std::sin(k * ts[i]) / st;
        }
      }
    }
    return m;
  };
  auto value_basis = [&](const std::vector<double>& ts) {
    MatrixXd m(ts.size(), dim);
    for (std::size_t i = 0; i < ts.size(); ++i)
      for (int k = 0; k <= n; ++k) m(i, k) = std::cos(k * ts[i]);
    return m;
  };

  LpContext ctx;
  quad::WeightFn wf_plain = quad::make_weight_fn(w_pullback);
  if (std::isinf(p)) {
    ctx.sup_mode = true;
    std::vector<double> ts = sup_grid(wf_plain, n, cfg.sup_density);
    ctx.log_w.resize(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) ctx.log_w[i] = wf_plain.log_w(ts[i]);
    ctx.num_basis = deriv_basis(ts);
    ctx.den_basis = value_basis(ts);
  } else {
    weights::CompositeWeight wj = w_pullback;
    wj.add_sin_jacobian(1.0);
    quad::WeightFn wf = quad::make_weight_fn(wj);
    long long deg = static_cast<long long>(std::ceil(n * std::max(1.0, p)));
    quad::NodeSet ns = quad::build_node_set(wf, IntervalSet::full_circle(), deg, cfg, 1);
    ctx.p = p;
    ctx.log_qw = ns.log_qw;
    ctx.num_basis = deriv_basis(ns.t);
    ctx.den_basis = value_basis(ns.t);
  }
  Objective obj = [&](const VectorXd& c) { return ratio_objective(ctx, c); };

  std::vector<VectorXd> seeds;
  VectorXd tn = VectorXd::Zero(dim);
  tn[n] = 1.0;
  seeds.push_back(tn);

  MultistartResult ms = multistart_maximize(obj, seeds, restarts, dim, seed);

  ExtremalReport rep;
  rep.method = "multistart";
  rep.restarts_used = ms.starts;
  rep.coefficients.assign(ms.best.data(), ms.best.data() + ms.best.size());

  auto val = pullback_value(rep.coefficients);
  auto der = pullback_deriv(rep.coefficients);
  quad::LogNorm nn, nd;
  if (std::isinf(p)) {
    nn = quad::weighted_sup_norm(der, wf_plain, IntervalSet::full_circle(), cfg);
    nd = quad::weighted_sup_norm(val, wf_plain, IntervalSet::full_circle(), cfg);
  } else {
    weights::CompositeWeight wj = w_pullback;
    wj.add_sin_jacobian(1.0);
    quad::WeightFn wf = quad::make_weight_fn(wj);
    nn = quad::weighted_lp_norm(der, wf, p, IntervalSet::full_circle(), cfg);
    nd = quad::weighted_lp_norm(val, wf, p, IntervalSet::full_circle(), cfg);
  }
  rep.log_constant = nn.log_value - nd.log_value;
  rep.normalized = std::exp(rep.log_constant - 2.0 * std::log(static_cast<double>(n)));
  rep.residual = ms.spread;
  return rep;
}

// ---------------------------------------------------------------------------
// Mhaskar-Rakhmanov-Saff numbers
// ---------------------------------------------------------------------------

namespace {

// (2/pi) int_0^{pi/2} 2 alpha a^2 sin^2(phi) (1 - a^2 sin^2 phi)^{-alpha-1} dphi,
// graded toward phi = pi/2 where the integrand peaks as a -> 1.
double mrs_field_integral(double alpha, double a, int levels) {
  std::vector<double> gx, gw;
  quad::gauss_legendre(16, gx, gw);
  std::vector<double> edges;
  edges.push_back(0.0);
  double d = kPi / 4;
  edges.push_back(kPi / 2 - d);
  for (int j = 0; j < levels; ++j) {
    d *= 0.5;
    edges.push_back(kPi / 2 - d);
  }
  edges.push_back(kPi / 2);
  std::sort(edges.begin(), edges.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double mid = 0.5 * (edges[i] + edges[i + 1]);
    double half = 0.5 * (edges[i + 1] - edges[i]);
    double s = 0.0;
    for (std::size_t q = 0; q < gx.size(); ++q) {
      double phi = mid + half * gx[q];
      double sp = std::sin(phi), cp = std::cos(phi);
      double one_minus = (1.0 - a * sp) * (1.0 + a * sp);  // 1 - a^2 sin^2
      double v = 2.0 * alpha * a * a * sp * sp *
                 std::exp(-(alpha + 1.0) * std::log(one_minus));
      (void)cp;
      s += gw[q] * v;
    }
    total += s * half;
  }
  return total * 2.0 / kPi;
}

}  // namespace

double mrs_number(double alpha, double n) {
  if (!(alpha > 0) || !(n >= 1)) throw DomainError("mrs_number: alpha > 0, n >= 1");
  int levels = 60;
  double lo = 1e-8, hi = 1.0 - 1e-15;
  if (mrs_field_integral(alpha, hi, levels) < n)
    throw NoBracketError("mrs_number: field integral saturates below n");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (mrs_field_integral(alpha, mid, levels) < n ? lo : hi) = mid;
  }
  double a = 0.5 * (lo + hi);
  if (std::fabs(mrs_field_integral(alpha, a, levels) - n) > 1e-10 * n) {
    // tighten with more grading if the plain budget fell short
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      (mrs_field_integral(alpha, mid, levels + 20) < n ? lo : hi) = mid;
    }
    a = 0.5 * (lo + hi);
  }
  return a;
}

double mrs_residual(double alpha, double n, double a_n) {
  return std::fabs(mrs_field_integral(alpha, a_n, 90) - n);
}

}  // namespace polyweight::extremal
