// rspca: sparse PCA by l1 relaxation and randomized rounding.
//
//   rspca solve      --input X.mtx --k 10 [--out-dir out]
//   rspca generate   --out-dir synth [--m 128 --n 4096 --theta-pi 0.27]
//   rspca experiment --out-dir runs [--input X.mtx] --k 50,100 | --ratios 0.05,0.1
//   rspca deflate    --input X.mtx --components 3 --k 10 --out-dir out
//   rspca verify     --input A.mtx --covariance --k 2 --epsilon 0.5
//
// Exit status: 0 success, 1 input error, 2 convergence or guard error.

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "rspca/errors.hpp"
#include "rspca/experiment.hpp"

namespace fs = std::filesystem;
using namespace rspca;

namespace {

struct Common {
  Seed seed = 0;
  std::string input;
  std::string format;
  std::string out_dir;
  Index k = 0;
  std::size_t s = 0;
  std::size_t trials = 32;
  std::optional<double> epsilon;
  std::string normalization = "svd";
  std::string scale_rows = "on";
  std::string center;
  int restarts = SolverConfig{}.restarts;
};

void add_data_flags(CLI::App* cmd, Common& c, bool input_required) {
  auto* in = cmd->add_option("--input", c.input, "Data matrix (Matrix Market or CSV)");
  if (input_required) in->required();
  cmd->add_option("--format", c.format, "mm or csv; guessed from the extension by default")
      ->check(CLI::IsMember({"mm", "mtx", "matrix-market", "csv"}));
  cmd->add_option("--center", c.center, "Column-center X (default: on for files, off for synthetic data)")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--scale-rows", c.scale_rows, "Divide A by its largest row norm")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
}

void add_seed(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Base random seed")->capture_default_str();
}

void add_out_dir(CLI::App* cmd, Common& c, bool required) {
  auto* opt = cmd->add_option("--out-dir", c.out_dir, "Output directory");
  if (required) opt->required();
}

void add_rounding_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--s", c.s, "Expected nnz of the rounding (default: k)");
  cmd->add_option("--trials", c.trials, "Best-of-t rounding trials")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon", c.epsilon, "Keep trials with ||x_hat|| <= 1 + 0.15 eps")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--restarts", c.restarts, "Random restarts of the relaxation solver")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
}

MatrixFormat resolve_format(const Common& c) {
  return c.format.empty() ? format_from_path(c.input) : parse_format(c.format);
}

DataMatrix load_data(const Common& c) {
  DataMatrix x(load_matrix(c.input, resolve_format(c)));
  return c.center != "off" ? center_columns(x) : x;
}

RspcaOptions rspca_options(const Common& c) {
  RspcaOptions opts;
  opts.k = c.k;
  opts.plan.s = c.s != 0 ? c.s : static_cast<std::size_t>(c.k);
  opts.plan.trials = c.trials;
  opts.plan.seed = c.seed;
  if (c.epsilon) opts.plan.norm_cap = RoundingPlan::norm_cap_for(*c.epsilon);
  opts.solver.seed = c.seed;
  opts.solver.restarts = c.restarts;
  opts.mode = parse_normalization(c.normalization);
  opts.scale_rows = c.scale_rows == "on";
  return opts;
}

Json header(std::string_view command) {
  Json j;
  j["tool"] = "rspca";
  j["version"] = version();
  j["command"] = command;
  return j;
}

Json options_json(const Common& c, const RspcaOptions& opts) {
  return {{"input", c.input},
          {"center", c.center != "off"},
          {"scale_rows", opts.scale_rows},
          {"k", opts.k},
          {"s", opts.plan.s},
          {"trials", opts.plan.trials},
          {"epsilon", c.epsilon ? Json(*c.epsilon) : Json(nullptr)},
          {"normalization", to_string(opts.mode)},
          {"restarts", opts.solver.restarts},
          {"seed", c.seed}};
}

void emit(const Common& c, const std::string& name, const Json& doc) {
  if (c.out_dir.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    write_json(fs::path(c.out_dir) / name, doc);
  }
}

int run_solve(const Common& c) {
  if (c.k < 1) throw InputError("--k must be at least 1");
  const DataMatrix x = load_data(c);
  const RspcaOptions opts = rspca_options(c);
  const RspcaResult res = rspca::rspca(x, opts);

  Json doc = header("solve");
  doc["options"] = options_json(c, opts);
  doc["shape"] = {x.rows(), x.cols()};
  doc["covariance_scale"] = res.covariance_scale;
  doc["degenerate"] = res.degenerate;
  doc["relaxed"] = {{"objective", res.relaxed.objective},
                    {"converged", res.relaxed.converged},
                    {"iterations", res.relaxed.iterations},
                    {"run", res.relaxed.run}};
  doc["norm_cap_met"] = res.norm_cap_met;
  doc["nnz"] = res.direction.nnz();
  doc["sparsity_ratio"] = static_cast<double>(res.direction.nnz()) / static_cast<double>(x.cols());
  if (!res.degenerate) {
    const Covariance a = covariance(x, opts.scale_rows);
    doc["f_value"] = f_metric(res.direction, a);
  }
  doc["support"] = res.direction.support();

  if (!c.out_dir.empty()) {
    save_matrix(fs::path(c.out_dir) / "direction.csv", res.direction.to_dense(), MatrixFormat::kCsv);
    doc["files"] = {"direction.csv"};
  }
  emit(c, "solve.json", doc);
  return 0;
}

struct GenerateFlags {
  Index m = SyntheticSpec{}.m;
  Index n = SyntheticSpec{}.n;
  double theta_pi = 0.27;
  double sigma1 = SyntheticSpec{}.sigma1;
  double noise = SyntheticSpec{}.noise_std;
  bool no_tail = false;

  SyntheticSpec spec(Seed seed) const {
    SyntheticSpec s;
    s.m = m;
    s.n = n;
    s.theta = theta_pi * std::numbers::pi;
    s.sigma1 = sigma1;
    s.noise_std = noise;
    s.seed = seed;
    s.decaying_tail = !no_tail;
    return s;
  }
};

void add_generate_flags(CLI::App* cmd, GenerateFlags& g) {
  cmd->add_option("--m", g.m, "Rows (power of two)")->capture_default_str();
  cmd->add_option("--n", g.n, "Columns (power of two, >= m)")->capture_default_str();
  cmd->add_option("--theta-pi", g.theta_pi, "Givens angle as a multiple of pi")->capture_default_str();
  cmd->add_option("--sigma1", g.sigma1, "Leading singular value")->capture_default_str();
  cmd->add_option("--noise", g.noise, "Standard deviation of the additive Gaussian noise")->capture_default_str();
  cmd->add_flag("--no-tail", g.no_tail, "Zero every singular value after the first");
}

int run_generate(const Common& c, const GenerateFlags& g) {
  const SyntheticSpec spec = g.spec(c.seed);
  const SyntheticData data = generate(spec);
  const fs::path dir(c.out_dir);
  save_matrix(dir / "X.mtx", data.x.values(), MatrixFormat::kMatrixMarket);
  save_matrix(dir / "V.mtx", data.v, MatrixFormat::kMatrixMarket);
  save_matrix(dir / "sigma.csv", data.sigma, MatrixFormat::kCsv);

  Json doc = header("generate");
  doc["spec"] = to_json(spec);
  doc["shape"] = {data.x.rows(), data.x.cols()};
  doc["files"] = {{"x", "X.mtx"}, {"v", "V.mtx"}, {"sigma", "sigma.csv"}};
  write_json(dir / "generate.json", doc);
  return 0;
}

struct ExperimentFlags {
  std::vector<Index> grid_k;
  std::vector<double> ratios;
  std::vector<std::string> methods{"rspca", "maxcomp"};
  std::vector<std::string> normalizations{"naive", "svd"};
};

int run_experiment_cmd(const Common& c, const GenerateFlags& g, const ExperimentFlags& e) {
  ExperimentConfig cfg;
  if (!c.input.empty()) {
    cfg.input = c.input;
    cfg.format = resolve_format(c);
  }
  cfg.synthetic = g.spec(c.seed);
  if (!c.center.empty()) cfg.center = c.center == "on";
  cfg.scale_rows = c.scale_rows == "on";
  cfg.methods.clear();
  for (const auto& m : e.methods) cfg.methods.push_back(parse_method(m));
  cfg.normalizations.clear();
  for (const auto& m : e.normalizations) cfg.normalizations.push_back(parse_normalization(m));
  cfg.grid_k = e.grid_k;
  cfg.grid_ratios = e.ratios;
  cfg.s = c.s;
  cfg.trials = c.trials;
  cfg.epsilon = c.epsilon;
  cfg.solver.restarts = c.restarts;
  cfg.seed = c.seed;
  cfg.out_dir = c.out_dir;

  const ExperimentResult res = run_experiment(cfg);
  for (const auto& rec : res.grid) {
    std::cout << "k=" << rec.k;
    if (!rec.ok) {
      std::cout << " failed: " << rec.error << '\n';
      continue;
    }
    std::cout << " nnz=" << rec.nnz;
    for (const auto& p : rec.points) {
      std::cout << ' ' << to_string(p.method) << '/' << to_string(p.normalization) << '=' << format_double(p.f_value);
    }
    std::cout << '\n';
  }
  if (!res.normalization_dominance) std::cerr << "warning: svd normalization scored below naive somewhere\n";
  return 0;
}

int run_deflate(const Common& c, Index components, bool right_only) {
  if (c.k < 1) throw InputError("--k must be at least 1");
  const DataMatrix x = load_data(c);
  DeflationOptions opts;
  opts.components = components;
  opts.rspca = rspca_options(c);
  opts.compute_left = !right_only;
  const ComponentSet set = compute_k_components(x, opts);

  const fs::path dir(c.out_dir);
  Matrix v = Matrix::Zero(x.cols(), static_cast<Index>(set.v.size()));
  for (std::size_t i = 0; i < set.v.size(); ++i) v.col(static_cast<Index>(i)) = set.v[i];
  save_matrix(dir / "components_v.csv", v, MatrixFormat::kCsv);
  Json files = {"components_v.csv"};
  if (!set.u.empty()) {
    Matrix u = Matrix::Zero(x.rows(), static_cast<Index>(set.u.size()));
    for (std::size_t i = 0; i < set.u.size(); ++i) u.col(static_cast<Index>(i)) = set.u[i];
    save_matrix(dir / "components_u.csv", u, MatrixFormat::kCsv);
    files.push_back("components_u.csv");
  }
  // One row per component: nnz, sparsity ratio, f, cumulative captured variance (%).
  Matrix summary(static_cast<Index>(set.reports.size()), 4);
  for (std::size_t i = 0; i < set.reports.size(); ++i) {
    const auto& r = set.reports[i];
    summary.row(static_cast<Index>(i)) << static_cast<double>(r.nnz), r.sparsity_ratio, r.f_value,
        r.captured_variance_pct;
  }
  save_matrix(dir / "variance.csv", summary, MatrixFormat::kCsv);
  files.push_back("variance.csv");

  Json doc = header("deflate");
  doc["options"] = options_json(c, opts.rspca);
  doc["options"]["components"] = components;
  doc["shape"] = {x.rows(), x.cols()};
  doc["result"] = to_json(set);
  doc["variance_columns"] = {"nnz", "sparsity_ratio", "f_value", "cumulative_variance_pct"};
  doc["files"] = files;
  write_json(dir / "deflate.json", doc);

  for (const auto& r : set.reports) {
    std::cout << "nnz=" << r.nnz << " f=" << format_double(r.f_value)
              << " cumulative_variance=" << format_double(r.captured_variance_pct) << '\n';
  }
  return 0;
}

int run_verify(const Common& c, bool is_covariance, bool relaxation_only) {
  if (c.k < 1) throw InputError("--k must be at least 1");
  const Matrix raw = load_matrix(c.input, resolve_format(c));
  const bool scale = c.scale_rows == "on";
  const Covariance a = is_covariance ? Covariance::from_symmetric(raw, scale)
                                     : covariance(c.center == "on" ? center_columns(DataMatrix(raw)) : DataMatrix(raw),
                                                  scale);
  BoundCheckOptions opts;
  opts.k = c.k;
  opts.epsilon = c.epsilon.value_or(1.0);
  opts.trials = c.trials;
  opts.seed = c.seed;
  opts.s_override = c.s;
  opts.use_exhaustive = !relaxation_only;
  opts.solver.seed = c.seed;
  opts.solver.restarts = c.restarts;
  const BoundCheckReport report = verify_theorem1(a, opts);

  Json doc = header("verify");
  doc["options"] = {{"input", c.input}, {"covariance", is_covariance}, {"seed", c.seed}};
  doc["report"] = to_json(report);
  emit(c, "verify.json", doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse PCA by l1 relaxation and randomized rounding"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  Common c;
  GenerateFlags g;
  ExperimentFlags e;
  Index components = 1;
  bool right_only = false;
  bool is_covariance = false;
  bool relaxation_only = false;

  auto* solve = app.add_subcommand("solve", "Sparse direction of one data matrix");
  add_data_flags(solve, c, true);
  solve->add_option("--k", c.k, "Sparsity budget")->required();
  add_rounding_flags(solve, c);
  solve->add_option("--normalization", c.normalization, "naive or svd")->capture_default_str();
  add_seed(solve, c);
  add_out_dir(solve, c, false);

  auto* gen = app.add_subcommand("generate", "Write a synthetic Hadamard/Givens instance");
  add_generate_flags(gen, g);
  add_seed(gen, c);
  add_out_dir(gen, c, true);

  auto* exp = app.add_subcommand("experiment", "f versus sparsity ratio for rspca and MaxComp");
  add_data_flags(exp, c, false);
  add_generate_flags(exp, g);
  exp->add_option("--k", e.grid_k, "Sparsity grid in k")->delimiter(',');
  exp->add_option("--ratios", e.ratios, "Sparsity grid as target nnz/n ratios")->delimiter(',');
  exp->add_option("--methods", e.methods, "rspca,maxcomp")->delimiter(',')->capture_default_str();
  exp->add_option("--normalization", e.normalizations, "naive,svd")->delimiter(',')->capture_default_str();
  add_rounding_flags(exp, c);
  add_seed(exp, c);
  add_out_dir(exp, c, true);

  auto* defl = app.add_subcommand("deflate", "Several sparse components by deflation");
  add_data_flags(defl, c, true);
  defl->add_option("--k", c.k, "Sparsity budget per component")->required();
  defl->add_option("--components", components, "Number of components")->capture_default_str();
  defl->add_flag("--right-only", right_only, "Skip the left vectors u_i");
  add_rounding_flags(defl, c);
  defl->add_option("--normalization", c.normalization, "naive or svd")->capture_default_str();
  add_seed(defl, c);
  add_out_dir(defl, c, true);

  auto* ver = app.add_subcommand("verify", "Monte Carlo check of the rounding guarantees");
  add_data_flags(ver, c, true);
  ver->add_flag("--covariance", is_covariance, "--input holds A itself rather than X");
  ver->add_flag("--relaxation-only", relaxation_only, "Compare against the relaxation instead of the exact optimum");
  ver->add_option("--k", c.k, "Sparsity budget")->required();
  ver->add_option("--epsilon", c.epsilon, "Accuracy parameter in (0, 1]")->check(CLI::Range(0.0, 1.0));
  ver->add_option("--s", c.s, "Override s = ceil(200 k / eps^2)");
  ver->add_option("--trials", c.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  ver->add_option("--restarts", c.restarts, "Random restarts of the relaxation solver")->check(CLI::NonNegativeNumber);
  add_seed(ver, c);
  add_out_dir(ver, c, false);

  c.trials = 32;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }
  // verify defaults to more trials than the rounding loop of the other commands.
  if (ver->parsed() && ver->count("--trials") == 0) c.trials = 1000;

  try {
    if (solve->parsed()) return run_solve(c);
    if (gen->parsed()) return run_generate(c, g);
    if (exp->parsed()) return run_experiment_cmd(c, g, e);
    if (defl->parsed()) return run_deflate(c, components, right_only);
    return run_verify(c, is_covariance, relaxation_only);
  } catch (const InputError& err) {
    std::cerr << "input error: " << err.what() << '\n';
    return 1;
  } catch (const ConvergenceError& err) {
    std::cerr << "convergence error: " << err.what() << '\n';
    return 2;
  } catch (const GuardError& err) {
    std::cerr << "guard error: " << err.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& err) {
    std::cerr << "input error: " << err.what() << '\n';
    return 1;
  }
}
