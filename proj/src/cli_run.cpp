#include "polyweight/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "polyweight/approx.hpp"
#include "polyweight/construct.hpp"
#include "polyweight/errors.hpp"
#include "polyweight/extremal.hpp"
#include "polyweight/parallel.hpp"
#include "polyweight/quad.hpp"
#include "polyweight/weights.hpp"

namespace polyweight::cli {

using report::CsvValue;
using report::RunReport;

std::vector<long long> parse_n_list(const std::string& text) {
  std::vector<long long> out;
  auto range_pos = text.find("..");
  if (range_pos != std::string::npos) {
    long long lo = std::stoll(text.substr(0, range_pos));
    long long hi = std::stoll(text.substr(range_pos + 2));
    for (long long n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoll(tok));
  }
  return out;
}

std::string format_n_list(const std::vector<long long>& ns) {
  // contiguous runs collapse back to the range form
  if (ns.size() >= 2) {
    bool contiguous = true;
    for (std::size_t i = 1; i < ns.size(); ++i)
      if (ns[i] != ns[i - 1] + 1) contiguous = false;
    if (contiguous)
      return std::to_string(ns.front()) + ".." + std::to_string(ns.back());
  }
  std::string s;
  for (std::size_t i = 0; i < ns.size(); ++i)
    s += std::to_string(ns[i]) + (i + 1 < ns.size() ? "," : "");
  return s;
}

namespace {

std::string fmt_p(double p) {
  if (std::isinf(p)) return "inf";
  return report::format_value(CsvValue(p));
}

double parse_p(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF") return kPosInf;
  return std::stod(s);
}

}  // namespace

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << command << " --weight \"" << weight_spec << "\"";
  if (!n_list.empty()) os << " --n " << format_n_list(n_list);
  os << " --p " << fmt_p(p) << " --q " << fmt_p(q) << " --C "
     << report::format_value(CsvValue(c_const)) << " --alpha "
     << report::format_value(CsvValue(alpha)) << " --gamma "
     << report::format_value(CsvValue(gamma)) << " --tol "
     << report::format_value(CsvValue(tol)) << " --seed " << seed << " --restarts "
     << restarts << " --resolution " << resolution << " --trials " << trials
     << " --kcap " << k_cap;
  return os.str();
}

namespace {

quad::QuadConfig quad_cfg(const ExperimentConfig& cfg) {
  quad::QuadConfig qc;
  qc.tol = cfg.tol;
  return qc;
}

std::vector<trig::PointEvaluator> equiv_test_set(int n, std::uint64_t seed) {
  std::vector<trig::PointEvaluator> polys;
  for (int k = 0; k <= n; ++k)
    polys.push_back(trig::PointEvaluator::from_trigpoly(trig::TrigPoly::cosine(k)));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (int i = 0; i < 20; ++i) {
    trig::TrigPoly tp(n);
    tp.a[0] = g(rng);
    for (int k = 1; k <= n; ++k) {
      tp.a[k] = g(rng);
      tp.b[k] = g(rng);
    }
    polys.push_back(trig::PointEvaluator::from_trigpoly(tp));
  }
  return polys;
}

void run_bernstein(const ExperimentConfig& cfg, RunReport& rep) {
  rep.header = {"n", "constant_log", "constant_over_rate"};
  rep.provenance = {"config", "computed", "computed"};
  auto w = weights::parse_weight_spec(cfg.weight_spec);
  for (long long n : cfg.n_list) {
    extremal::ExtremalReport r =
        (cfg.p == 2.0)
            ? extremal::bernstein_l2(w, static_cast<int>(n), quad_cfg(cfg))
            : extremal::bernstein_lp(w, static_cast<int>(n), cfg.p, cfg.restarts,
                                     cfg.seed, quad_cfg(cfg));
    rep.rows.push_back({CsvValue(n), CsvValue(r.log_constant), CsvValue(r.normalized)});
  }
}

void run_markov(const ExperimentConfig& cfg, RunReport& rep) {
  rep.header = {"n", "constant_log", "constant_over_rate"};
  rep.provenance = {"config", "computed", "computed"};
  auto w = weights::parse_weight_spec(cfg.weight_spec);
  for (long long n : cfg.n_list) {
    auto r = extremal::algebraic_markov_constant(w, static_cast<int>(n), cfg.p,
                                                 cfg.restarts, cfg.seed, quad_cfg(cfg));
    rep.rows.push_back({CsvValue(n), CsvValue(r.log_constant), CsvValue(r.normalized)});
  }
}

void run_nikolskii(const ExperimentConfig& cfg, RunReport& rep) {
  rep.header = {"n", "constant_log", "constant_over_rate"};
  rep.provenance = {"config", "computed", "computed"};
  auto w = weights::parse_weight_spec(cfg.weight_spec);
  for (long long n : cfg.n_list) {
    auto r = extremal::nikolskii_ratio(w, static_cast<int>(n), cfg.p, cfg.q,
                                       cfg.restarts, cfg.seed, quad_cfg(cfg));
    rep.rows.push_back({CsvValue(n), CsvValue(r.log_constant), CsvValue(r.normalized)});
  }
}

void run_remez(const ExperimentConfig& cfg, RunReport& rep) {
  rep.header = {"n", "family", "c_hat"};
  rep.provenance = {"config", "config", "fitted"};
  auto w = weights::parse_weight_spec(cfg.weight_spec);
  for (long long n : cfg.n_list) {
    for (auto family : {extremal::RemezFamily::Random, extremal::RemezFamily::Concentrated}) {
      double chat = extremal::remez_constant_fit(
          w, cfg.p, {static_cast<int>(n)}, family, extremal::RemezSetKind::Intervals,
          cfg.trials * 4, cfg.seed, quad_cfg(cfg));
      rep.rows.push_back(
          {CsvValue(n),
           CsvValue(std::string(family == extremal::RemezFamily::Random ? "random"
                                                                        : "concentrated")),
           CsvValue(chat)});
    }
  }
}

void run_decay(const ExperimentConfig& cfg, RunReport& rep) {
  rep.header = {"n", "coeff_log", "n_x1", "censored"};
  rep.provenance = {"config", "computed", "computed", "censored"};
  auto w = weights::parse_weight_spec(cfg.weight_spec);
  if (w.omega_factors().size() != 1 || !w.jacobi_factors().empty())
    throw DomainError("decay: weight must be a single omega factor");
  long long n_min = cfg.n_list.empty() ? 64 : cfg.n_list.front();
  long long n_max = cfg.n_list.empty() ? 1024 : cfg.n_list.back();
  auto reprt = approx::fourier_decay_report(w.omega_factors()[0], n_min, n_max,
                                            quad_cfg(cfg));
  for (const auto& row : reprt.rows)
    rep.rows.push_back({CsvValue(row.n), CsvValue(row.coeff_log), CsvValue(row.n_x1),
                        CsvValue(row.censored)});
  rep.notes.push_back("fitted_c=" + report::format_value(CsvValue(reprt.fitted_c)));
  rep.all_pass = rep.all_pass && reprt.pass;
}

void run_equiv_k(const ExperimentConfig& cfg, RunReport& rep) {
  rep.header = {"p", "n", "K", "found", "worst_violation_log"};
  rep.provenance = {"config", "config", "computed", "computed", "computed"};
  auto w = weights::parse_weight_spec(cfg.weight_spec);
  if (w.omega_factors().size() != 1)
    throw DomainError("equiv-k: weight must contain exactly one omega factor");
  weights::CompositeWeight u = weights::CompositeWeight::one();
  for (const auto& j : w.jacobi_factors()) u.add_jacobi(j);
  int n = cfg.n_list.empty() ? 32 : static_cast<int>(cfg.n_list.front());
  auto polys = equiv_test_set(n, cfg.seed);
  auto res = approx::norm_equivalence_K(w.omega_factors()[0], u, cfg.p, n, 64, polys,
                                        quad_cfg(cfg));
  rep.rows.push_back({CsvValue(fmt_p(cfg.p)), CsvValue(static_cast<long long>(n)),
                      CsvValue(static_cast<long long>(res.K)), CsvValue(res.found),
                      CsvValue(res.worst_violation_log)});
  rep.all_pass = rep.all_pass && res.found;
}

void run_counterexample(const ExperimentConfig& cfg, RunReport& rep) {
  rep.header = {"n", "lambda", "a", "c", "K", "feasible", "R", "LB", "b_over_a"};
  rep.provenance = {"config",   "computed", "computed", "computed", "computed",
                    "computed", "computed", "computed", "computed"};
  auto w = weights::parse_weight_spec(cfg.weight_spec);
  if (w.omega_factors().size() != 1 || !w.jacobi_factors().empty())
    throw DomainError("counterexample: weight must be a single omega factor");
  auto sched = construct::neg11_schedule(w.omega_factors()[0], cfg.n_list, cfg.k_cap);
  auto div = construct::divergence_report(w, sched, cfg.p, quad_cfg(cfg));
  std::size_t di = 0;
  for (const auto& row : sched.rows) {
    CsvValue r = std::string("");
    CsvValue lb = std::string("");
    CsvValue boa = std::string("");
    if (row.feasible && di < div.size() && div[di].n == row.n) {
      r = div[di].ratio;
      lb = div[di].lower_bound;
      boa = div[di].b_over_a;
      bool ok = !(div[di].ratio < div[di].lower_bound - 1e-9);
      rep.all_pass = rep.all_pass && ok;
      ++di;
    }
    rep.rows.push_back({CsvValue(row.n), CsvValue(row.lambda), CsvValue(row.a),
                        CsvValue(row.aux), CsvValue(row.k_deg), CsvValue(row.feasible),
                        r, lb, boa});
  }
}

void run_mrs(const ExperimentConfig& cfg, RunReport& rep) {
  rep.header = {"n", "a_n", "residual"};
  rep.provenance = {"config", "computed", "computed"};
  for (long long n : cfg.n_list) {
    double a = extremal::mrs_number(cfg.alpha, static_cast<double>(n));
    double res = extremal::mrs_residual(cfg.alpha, static_cast<double>(n), a);
    rep.rows.push_back({CsvValue(n), CsvValue(a), CsvValue(res)});
    rep.all_pass = rep.all_pass && res <= 1e-8 * static_cast<double>(n);
  }
}

void run_weight_info(const ExperimentConfig& cfg, RunReport& rep) {
  rep.header = {"n", "x0", "x1", "n_x1"};
  rep.provenance = {"config", "computed", "computed", "computed"};
  auto w = weights::parse_weight_spec(cfg.weight_spec);
  if (!w.omega_factors().empty()) {
    const auto& f = w.omega_factors()[0].f;
    for (long long n : cfg.n_list) {
      double nf = static_cast<double>(n);
      double x0 = std::numeric_limits<double>::quiet_NaN();
      try {
        x0 = weights::solve_x0(f, nf);
      } catch (const NoBracketError&) {
      }
      double x1 = weights::solve_x1(f, nf);
      rep.rows.push_back({CsvValue(n), CsvValue(x0), CsvValue(x1), CsvValue(nf * x1)});
    }
    auto b = f.empirical_f4();
    rep.notes.push_back("empirical_A1=" + report::format_value(CsvValue(b.a1)));
    rep.notes.push_back("empirical_A2=" + report::format_value(CsvValue(b.a2)));
  }
  rep.notes.push_back("doubling_ratio=" + report::format_value(CsvValue(
                          weights::doubling_ratio(w, cfg.resolution))));
  rep.notes.push_back("astar_constant=" + report::format_value(CsvValue(
                          weights::astar_constant(w, cfg.resolution))));
  rep.notes.push_back("testers are finite-resolution heuristics, not deciders");
}

void run_staircase(const ExperimentConfig& cfg, RunReport& rep) {
  rep.header = {"n", "K", "log_alpha", "empirical_C", "scale_probe"};
  rep.provenance = {"config", "computed", "computed", "computed", "computed"};
  int n_max = 8;
  std::vector<int> ns;
  for (long long n : cfg.n_list) {
    ns.push_back(static_cast<int>(n));
    n_max = std::max(n_max, static_cast<int>(n) + 1);
  }
  construct::StaircaseWeight sw(cfg.gamma, n_max);
  auto rows = construct::staircase_bernstein_check(sw, ns, cfg.trials, cfg.seed,
                                                   quad_cfg(cfg));
  if (rows.empty()) throw NotFoundError("staircase: no feasible rows");
  for (const auto& r : rows)
    rep.rows.push_back({CsvValue(static_cast<long long>(r.n)), CsvValue(r.k_deg),
                        CsvValue(r.log_alpha), CsvValue(r.empirical_c),
                        CsvValue(r.scale_probe)});
}

void maybe_plot(const ExperimentConfig& cfg, const RunReport& rep) {
  if (cfg.svg_path.empty() || rep.rows.empty()) {
    if (!cfg.svg_path.empty())
      report::emit_plot(cfg.svg_path, {}, {}, "x", "y");
    return;
  }
  // per-command default series
  int xi = 0, yi = 1;
  std::string xl = rep.header.empty() ? "x" : rep.header[0];
  std::string yl;
  if (rep.command == "decay") {
    xi = 2;
    yi = 1;
  } else if (rep.command == "bernstein" || rep.command == "markov" ||
             rep.command == "nikolskii") {
    xi = 0;
    yi = 2;
  } else if (rep.command == "mrs") {
    xi = 0;
    yi = 1;
  } else if (rep.header.size() < 2) {
    return;
  }
  auto as_double = [](const CsvValue& v) {
    if (std::holds_alternative<double>(v)) return std::get<double>(v);
    if (std::holds_alternative<long long>(v))
      return static_cast<double>(std::get<long long>(v));
    return std::numeric_limits<double>::quiet_NaN();
  };
  std::vector<double> xs, ys;
  for (const auto& row : rep.rows) {
    xs.push_back(as_double(row[xi]));
    ys.push_back(as_double(row[yi]));
  }
  xl = rep.header[xi];
  yl = rep.header[yi];
  report::emit_plot(cfg.svg_path, xs, ys, xl, yl);
}

}  // namespace

RunReport run(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.command = cfg.command;
  rep.config_echo = cfg.canonical();
  try {
    if (cfg.command == "bernstein") {
      run_bernstein(cfg, rep);
    } else if (cfg.command == "markov") {
      run_markov(cfg, rep);
    } else if (cfg.command == "nikolskii") {
      run_nikolskii(cfg, rep);
    } else if (cfg.command == "remez") {
      run_remez(cfg, rep);
    } else if (cfg.command == "decay") {
      run_decay(cfg, rep);
    } else if (cfg.command == "equiv-k") {
      run_equiv_k(cfg, rep);
    } else if (cfg.command == "counterexample") {
      run_counterexample(cfg, rep);
    } else if (cfg.command == "mrs") {
      run_mrs(cfg, rep);
    } else if (cfg.command == "weight-info") {
      run_weight_info(cfg, rep);
    } else if (cfg.command == "staircase") {
      run_staircase(cfg, rep);
    } else {
      throw DomainError("unknown command: " + cfg.command);
    }
  } catch (const std::exception& e) {
    // row-level machinery embeds its own errors; reaching here means the
    // whole command failed to set up
    rep.notes.push_back(std::string("error: ") + e.what());
    rep.all_pass = false;
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!cfg.csv_path.empty()) report::emit_csv(cfg.csv_path, rep.header, rep.rows);
  if (!cfg.json_path.empty()) {
    std::ofstream f(cfg.json_path, std::ios::binary);
    f << rep.to_json();
  }
  maybe_plot(cfg, rep);
  return rep;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"polyweight: weighted polynomial inequality laboratory"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string n_text, p_text = "2", q_text = "2";

  for (const char* name :
       {"bernstein", "markov", "nikolskii", "remez", "decay", "equiv-k",
        "counterexample", "mrs", "weight-info", "staircase"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--weight", cfg.weight_spec, "weight spec, e.g. omega(pow:1,sin)");
    sub->add_option("--n", n_text, "degree list 4,8,16 or range 3..6");
    sub->add_option("--p", p_text, "exponent p (number or inf)");
    sub->add_option("--q", q_text, "exponent q (number or inf)");
    sub->add_option("--C", cfg.c_const, "constant for verification commands");
    sub->add_option("--alpha", cfg.alpha, "field exponent (mrs)");
    sub->add_option("--gamma", cfg.gamma, "staircase level parameter");
    sub->add_option("--tol", cfg.tol, "quadrature relative tolerance");
    sub->add_option("--seed", cfg.seed, "RNG seed; pins all stochastic choices");
    sub->add_option("--restarts", cfg.restarts, "multistart restarts");
    sub->add_option("--resolution", cfg.resolution, "doubling/A* tester resolution");
    sub->add_option("--trials", cfg.trials, "sampling trials");
    sub->add_option("--kcap", cfg.k_cap, "degree cap for schedule evaluation");
    sub->add_option("--csv", cfg.csv_path, "CSV output path");
    sub->add_option("--json", cfg.json_path, "JSON report path");
    sub->add_option("--svg", cfg.svg_path, "SVG plot path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  try {
    if (!n_text.empty()) cfg.n_list = parse_n_list(n_text);
    cfg.p = parse_p(p_text);
    cfg.q = parse_p(q_text);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "argument error: %s\n", e.what());
    return 2;
  }

  RunReport rep = run(cfg);
  if (!rep.notes.empty())
    for (const auto& note : rep.notes) std::fprintf(stderr, "%s\n", note.c_str());
  std::printf("%s: %zu rows, %s (%.2fs)\n", rep.command.c_str(), rep.rows.size(),
              rep.all_pass ? "all checks passed" : "CHECK FAILED",
              rep.wall_seconds);
  return rep.all_pass ? 0 : 1;
}

}  // namespace polyweight::cli
