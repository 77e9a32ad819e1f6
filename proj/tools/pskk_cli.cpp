// Command-line front end: lattice construction, model fitting/evaluation and
// MISE benchmark sweeps.
//
// Exit codes: 0 success, 2 argument/validation error, 3 runtime/numeric error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pskk/pskk.hpp"

namespace {

struct CbcArgs {
  std::size_t dim = 1;
  std::uint64_t n = 2;
  int alpha = 2;
  std::string objective = "approximation";
  std::string out;
};

struct FitArgs {
  std::string samples;
  std::string out;
  std::string lattice;
  int alpha = 2;
  std::string a = "auto";
  std::string n = "auto";
  std::string lambda = "auto";
  double beta = 1.0;
  double q = 2.0;
  double epsilon = 0.1;
  double eta = 1.0;
  std::uint64_t n_max = 4001;
};

struct EvalArgs {
  std::string model;
  std::string points;
  std::string out;
};

struct BenchArgs {
  std::string example = "gm4d";
  std::string m_list = "1e2,1e3,1e4";
  std::string methods = "pskk,kde";
  bool schedule = false;
  int alpha = 2;
  double a = 2.5;
  std::uint64_t n = 1009;
  double lambda = 1e-6;
  double beta = 1.0;
  double q = 2.0;
  double epsilon = 0.1;
  double eta = 1.0;
  std::uint64_t n_max = 4001;
  int s = 20;
  int t = 16;
  double l = 6.0;
  std::uint64_t seed = 0;
  std::size_t trunc_samples = 1'000'000;
  double slope_min_m = 100.0;
  std::string out;
  std::string plot;
  bool no_timings = false;
};

//! Parses "1e2,1e3,1e4" into sample counts; failures are argument errors.
std::vector<std::size_t> parse_m_list(const std::string& text) {
  std::vector<std::size_t> ms;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(cur, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != cur.size() || !(v >= 1.0) || v > 1e12) {
      throw CLI::ValidationError("--m", "'" + cur + "' is not a sample count in [1, 1e12]");
    }
    ms.push_back(static_cast<std::size_t>(v + 0.5));
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',') {
      flush();
    } else {
      cur.push_back(ch);
    }
  }
  flush();
  if (ms.empty()) throw CLI::ValidationError("--m", "empty sample-count list");
  return ms;
}

int run_cbc(const CbcArgs& args) {
  if (!pskk::is_prime(args.n)) {
    std::cerr << "error: --n " << args.n << " is not prime; the lattice construction requires a prime point count\n";
    return 2;
  }
  const pskk::Lattice lat = args.objective == "integration"
                                ? pskk::cbc_construct(args.dim, args.n, args.alpha)
                                : pskk::cbc_construct_approximation(args.dim, args.n, args.alpha);
  if (args.out.empty()) {
    pskk::save_lattice(lat, args.alpha, std::cout);
  } else {
    pskk::save_lattice(lat, args.alpha, std::filesystem::path(args.out));
    std::cout << "wrote " << args.out << " (n=" << lat.n << ", d=" << lat.dim() << ")\n";
  }
  return 0;
}

int run_fit(const FitArgs& args) {
  const pskk::PointSet samples = pskk::read_points_csv(std::filesystem::path(args.samples));
  const int d = static_cast<int>(samples.dim());
  const std::size_t m = samples.size();

  const bool auto_a = args.a == "auto";
  const bool auto_n = args.n == "auto";
  const bool auto_lambda = args.lambda == "auto";
  std::optional<pskk::ScheduleParams> sched;
  if (auto_a || auto_n || auto_lambda) {
    sched = pskk::default_params(m, args.alpha, args.beta, args.q, args.epsilon, args.eta, args.n_max);
  }
  const double a = auto_a ? sched->a : std::stod(args.a);
  const std::uint64_t n = auto_n ? sched->n : static_cast<std::uint64_t>(std::stoull(args.n));
  const double lambda = auto_lambda ? sched->lambda : std::stod(args.lambda);

  std::optional<pskk::Lattice> lattice;
  if (!args.lattice.empty()) lattice = pskk::load_lattice(std::filesystem::path(args.lattice)).lattice;

  const pskk::KernelParams kp(args.alpha, a, d);
  const pskk::PskkModel model = pskk::fit(samples, kp, n, lambda, lattice);
  pskk::save_model(model, std::filesystem::path(args.out));

  std::printf("fitted %zu samples in d=%d\n", m, d);
  std::printf("a = %.17g\nN = %llu\nlambda = %.17g\n", a, static_cast<unsigned long long>(n), lambda);
  std::printf("mass = %.17g (diagnostic; not constrained to 1)\n", model.mass());
  std::printf("model written to %s\n", args.out.c_str());
  return 0;
}

int run_eval(const EvalArgs& args) {
  const pskk::PskkModel model = pskk::load_model(std::filesystem::path(args.model));
  const pskk::PointSet points = pskk::read_points_csv(std::filesystem::path(args.points));
  if (points.dim() != model.nodes.points.dim()) {
    throw pskk::ConfigError("eval: points have dimension " + std::to_string(points.dim()) +
                            " but the model expects " + std::to_string(model.nodes.points.dim()));
  }
  const std::vector<double> values = pskk::evaluate_batch(model, points);
  std::ofstream out(args.out);
  if (!out) throw pskk::IoError("eval: cannot open " + args.out);
  out << "density\n";
  for (double v : values) out << pskk::detail::format_full(v) << '\n';
  std::printf("evaluated %zu points -> %s\n", points.size(), args.out.c_str());
  return 0;
}

int run_bench(const BenchArgs& args) {
  pskk::StudyConfig cfg;
  cfg.truth = pskk::example_mixture(args.example);
  cfg.ms = parse_m_list(args.m_list);
  cfg.run_pskk = args.methods.find("pskk") != std::string::npos;
  cfg.run_kde = args.methods.find("kde") != std::string::npos;
  cfg.alpha = args.alpha;
  cfg.a = args.a;
  cfg.n = args.n;
  cfg.lambda = args.lambda;
  cfg.schedule = args.schedule;
  cfg.beta = args.beta;
  cfg.q = args.q;
  cfg.epsilon = args.epsilon;
  cfg.eta = args.eta;
  cfg.n_max = args.n_max;
  cfg.kde_halfwidth = args.l;
  cfg.mise.replications = args.s;
  cfg.mise.log2_points = args.t;
  cfg.mise.seed = args.seed;
  cfg.mise.exterior_samples = args.trunc_samples;
  cfg.slope_min_m = args.slope_min_m;

  const pskk::StudyResult result = pskk::convergence_study(cfg);
  pskk::write_report_csv(result.reports, std::filesystem::path(args.out), !args.no_timings);
  if (!args.plot.empty()) {
    pskk::write_loglog_svg(result.reports, result.slopes, std::filesystem::path(args.plot),
                           args.example + " MISE convergence");
  }

  for (const auto& r : result.reports) {
    std::printf("%-5s M=%-9zu mise=%-12.5g stderr=%-11.4g (%.1fs)\n", r.method.c_str(), r.m, r.mise,
                r.std_error, r.runtime_seconds);
  }
  for (const auto& [name, slope] : result.slopes) {
    std::printf("%s log-log slope (M >= %g): %.4f\n", name.c_str(), args.slope_min_m, slope);
  }
  std::printf("report written to %s\n", args.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonparametric density estimation with the periodic scaled Korobov kernel method"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "cap on worker threads (overrides PSKK_THREADS)");

  CbcArgs cbc;
  auto* cbc_cmd = app.add_subcommand("cbc", "construct a rank-1 lattice generating vector");
  cbc_cmd->add_option("--dim", cbc.dim, "dimension")->required()->check(CLI::Range(std::size_t{1}, std::size_t{64}));
  cbc_cmd->add_option("--n", cbc.n, "prime point count")->required();
  cbc_cmd->add_option("--alpha", cbc.alpha, "smoothness order")->required()->check(CLI::Range(1, 3));
  cbc_cmd->add_option("--objective", cbc.objective,
                      "construction criterion: 'approximation' (what fit uses) or 'integration'")
      ->check(CLI::IsMember({"approximation", "integration"}));
  cbc_cmd->add_option("--out", cbc.out, "output file (default: stdout)");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit a density model to CSV samples");
  fit_cmd->add_option("--samples", fit.samples, "input CSV, one sample per row")->required();
  fit_cmd->add_option("--alpha", fit.alpha, "smoothness order")->check(CLI::Range(1, 3));
  fit_cmd->add_option("--a", fit.a, "box half-width, or 'auto'");
  fit_cmd->add_option("--n", fit.n, "prime node count, or 'auto'");
  fit_cmd->add_option("--lambda", fit.lambda, "regularization weight, or 'auto'");
  fit_cmd->add_option("--beta", fit.beta, "decay rate prior (used by auto)");
  fit_cmd->add_option("--q", fit.q, "decay exponent prior (used by auto)");
  fit_cmd->add_option("--epsilon", fit.epsilon, "rate slack (used by auto)");
  fit_cmd->add_option("--eta", fit.eta, "scale constant (used by auto)");
  fit_cmd->add_option("--n-max", fit.n_max, "cap on auto-selected N");
  fit_cmd->add_option("--lattice", fit.lattice, "generating-vector file (default: CBC construction)");
  fit_cmd->add_option("--out", fit.out, "output model file")->required();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a fitted model on CSV points");
  eval_cmd->add_option("--model", eval.model, "model file from 'fit'")->required();
  eval_cmd->add_option("--points", eval.points, "query points CSV")->required();
  eval_cmd->add_option("--out", eval.out, "output CSV of density values")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "run a MISE convergence benchmark");
  bench_cmd->add_option("--example", bench.example, "test density")
      ->required()
      ->check(CLI::IsMember({"gm2d", "gm4d", "gm5d", "gm6d"}));
  bench_cmd->add_option("--m", bench.m_list, "comma-separated sample counts (e.g. 1e2,1e3,1e4)");
  bench_cmd->add_option("--methods", bench.methods, "comma-separated subset of pskk,kde");
  bench_cmd->add_flag("--schedule", bench.schedule, "derive (a, N, lambda) per M from the parameter schedule");
  bench_cmd->add_option("--alpha", bench.alpha, "smoothness order")->check(CLI::Range(1, 3));
  bench_cmd->add_option("--a", bench.a, "box half-width (fixed-parameter mode)");
  bench_cmd->add_option("--n", bench.n, "prime node count (fixed-parameter mode)");
  bench_cmd->add_option("--lambda", bench.lambda, "regularization weight (fixed-parameter mode)");
  bench_cmd->add_option("--beta", bench.beta, "decay rate prior (schedule mode)");
  bench_cmd->add_option("--q", bench.q, "decay exponent prior (schedule mode)");
  bench_cmd->add_option("--epsilon", bench.epsilon, "rate slack (schedule mode)");
  bench_cmd->add_option("--eta", bench.eta, "scale constant (schedule mode)");
  bench_cmd->add_option("--n-max", bench.n_max, "cap on schedule-selected N");
  bench_cmd->add_option("--s", bench.s, "replications per (method, M)");
  bench_cmd->add_option("--t", bench.t, "log2 of the Sobol' quadrature size");
  bench_cmd->add_option("--l", bench.l, "KDE integration half-width");
  bench_cmd->add_option("--seed", bench.seed, "base RNG seed");
  bench_cmd->add_option("--trunc-samples", bench.trunc_samples, "Monte Carlo size for the exterior term");
  bench_cmd->add_option("--slope-min-m", bench.slope_min_m, "smallest M used in the slope fit");
  bench_cmd->add_option("--out", bench.out, "report CSV path")->required();
  bench_cmd->add_option("--plot", bench.plot, "optional SVG plot path");
  bench_cmd->add_flag("--no-timings", bench.no_timings, "omit runtimes for byte-reproducible reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e);
      return 0;
    }
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  if (threads > 0) pskk::set_thread_count(threads);

  try {
    if (cbc_cmd->parsed()) return run_cbc(cbc);
    if (fit_cmd->parsed()) {
      if (fit.lambda != "auto" && !(std::stod(fit.lambda) > 0.0)) {
        std::cerr << "error: --lambda must be positive\n";
        return 2;
      }
      if (fit.a != "auto" && !(std::stod(fit.a) > 0.0)) {
        std::cerr << "error: --a must be positive\n";
        return 2;
      }
      return run_fit(fit);
    }
    if (eval_cmd->parsed()) return run_eval(eval);
    if (bench_cmd->parsed()) return run_bench(bench);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
