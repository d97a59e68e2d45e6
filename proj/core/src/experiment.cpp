#include "rspca/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "rspca/errors.hpp"

#ifndef RSPCA_VERSION
#define RSPCA_VERSION "0.0.0"
#endif

namespace rspca {

std::string_view version() { return RSPCA_VERSION; }

std::string_view to_string(Method method) { return method == Method::kRspca ? "rspca" : "maxcomp"; }

Method parse_method(std::string_view name) {
  if (name == "rspca") return Method::kRspca;
  if (name == "maxcomp") return Method::kMaxComp;
  throw InputError("unknown method '" + std::string(name) + "'");
}

DataMatrix prepare_data(const ExperimentConfig& cfg) {
  if (cfg.input) {
    DataMatrix x(load_matrix(*cfg.input, cfg.format));
    return cfg.center.value_or(true) ? center_columns(x) : x;
  }
  DataMatrix x = generate(cfg.synthetic).x;
  return cfg.center.value_or(false) ? center_columns(x) : x;
}

namespace {

std::vector<Index> resolve_grid(const ExperimentConfig& cfg, Index n) {
  std::vector<Index> grid = cfg.grid_k;
  for (double ratio : cfg.grid_ratios) {
    if (!(ratio > 0.0 && ratio <= 1.0)) throw InputError("sparsity ratios must lie in (0, 1]");
    grid.push_back(std::max<Index>(1, static_cast<Index>(std::llround(ratio * static_cast<double>(n)))));
  }
  if (grid.empty()) throw InputError("sparsity grid is empty");
  for (Index k : grid) {
    if (k < 1 || k > n) throw InputError("grid value k=" + std::to_string(k) + " outside [1, n]");
  }
  return grid;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.methods.empty()) throw InputError("method list is empty");
  if (cfg.normalizations.empty()) throw InputError("normalization list is empty");
  if (cfg.trials == 0) throw InputError("trial count must be positive");
}

std::string series_name(Method method, NormalizationMode mode) {
  return "curve_" + std::string(to_string(method)) + "_" + std::string(to_string(mode)) + ".csv";
}

Json point_json(const CurvePoint& p) {
  Json j;
  j["method"] = to_string(p.method);
  j["normalization"] = to_string(p.normalization);
  j["sparsity_ratio"] = p.sparsity_ratio;
  j["f_value"] = p.f_value;
  return j;
}

GridPointRecord run_point(const ExperimentConfig& cfg, const Covariance& a, const Vector& top, Index k,
                          std::size_t point_index) {
  GridPointRecord rec;
  rec.k = k;
  rec.seed = derive_seed(cfg.seed, point_index);
  const Index n = a.dim();

  SolverConfig solver = cfg.solver;
  solver.seed = rec.seed;
  RoundingPlan plan;
  plan.s = cfg.s != 0 ? cfg.s : static_cast<std::size_t>(k);
  plan.trials = cfg.trials;
  plan.seed = rec.seed;
  if (cfg.epsilon) plan.norm_cap = RoundingPlan::norm_cap_for(*cfg.epsilon);

  const DenseDirection relaxed = solve_relaxed(RelaxationProblem(a, k), solver);
  rec.relaxed_objective = relaxed.objective;
  rec.relaxed_converged = relaxed.converged;
  const BestOfResult rounded = sparsify_best_of(relaxed.x, a, plan);
  rec.norm_cap_met = rounded.norm_cap_met;
  if (rounded.direction.empty()) throw InputError("rounding kept no coordinate");
  rec.nnz = rounded.direction.nnz();
  rec.support = rounded.direction.support();

  // MaxComp is held to the nnz that rounding realized.
  const SparseDirection maxcomp = keep_top_k(top, static_cast<Index>(rec.nnz));

  for (Method method : {Method::kRspca, Method::kMaxComp}) {
    const SparseDirection& raw = method == Method::kRspca ? rounded.direction : maxcomp;
    double naive_f = 0.0;
    double svd_f = 0.0;
    for (NormalizationMode mode : {NormalizationMode::kNaive, NormalizationMode::kSvdBased}) {
      const double f = f_metric(normalize(raw, a, mode), a);
      (mode == NormalizationMode::kNaive ? naive_f : svd_f) = f;
      CurvePoint p;
      p.method = method;
      p.normalization = mode;
      p.k = k;
      p.nnz = raw.nnz();
      p.sparsity_ratio = static_cast<double>(raw.nnz()) / static_cast<double>(n);
      p.f_value = f;
      rec.points.push_back(p);
    }
    if (svd_f < naive_f - 1e-10) rec.normalization_dominance = false;
  }
  rec.ok = true;
  return rec;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) { return run_experiment(cfg, prepare_data(cfg)); }

ExperimentResult run_experiment(const ExperimentConfig& cfg, const DataMatrix& x) {
  validate(cfg);
  ExperimentResult result;
  result.m = x.rows();
  result.n = x.cols();
  const std::vector<Index> grid = resolve_grid(cfg, x.cols());

  Covariance a = covariance(x, cfg.scale_rows);
  result.covariance_scale = a.scale_factor();
  if (a.matrix().isZero(0.0)) throw InputError("data matrix is zero after preprocessing");
  const SingularPair top = top_singular_pair(a, {.seed = cfg.seed});
  a.set_spectral_norm(top.value);
  result.spectral_norm = top.value;

  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      result.grid.push_back(run_point(cfg, a, top.vector, grid[i], i));
    } catch (const std::exception& e) {
      GridPointRecord failed;
      failed.k = grid[i];
      failed.seed = derive_seed(cfg.seed, i);
      failed.error = e.what();
      result.grid.push_back(std::move(failed));
    }
    result.normalization_dominance = result.normalization_dominance && result.grid.back().normalization_dominance;
  }

  for (Method method : cfg.methods) {
    for (NormalizationMode mode : cfg.normalizations) {
      std::vector<CurvePoint> series;
      for (const auto& rec : result.grid) {
        for (const auto& p : rec.points) {
          if (p.method == method && p.normalization == mode) series.push_back(p);
        }
      }
      std::stable_sort(series.begin(), series.end(),
                       [](const CurvePoint& l, const CurvePoint& r) { return l.sparsity_ratio < r.sparsity_ratio; });
      result.series.push_back(std::move(series));
    }
  }

  if (cfg.out_dir.empty()) return result;

  std::size_t s_index = 0;
  Json files = Json::array();
  for (Method method : cfg.methods) {
    for (NormalizationMode mode : cfg.normalizations) {
      const auto& series = result.series[s_index++];
      Matrix table(static_cast<Index>(series.size()), 2);
      for (std::size_t r = 0; r < series.size(); ++r) {
        table(static_cast<Index>(r), 0) = series[r].sparsity_ratio;
        table(static_cast<Index>(r), 1) = series[r].f_value;
      }
      const std::string name = series_name(method, mode);
      auto out = open_output(cfg.out_dir / name);
      write_csv(out, table);
      result.files.push_back(cfg.out_dir / name);
      files.push_back(name);
    }
  }

  Json manifest;
  manifest["tool"] = "rspca";
  manifest["version"] = version();
  manifest["config"] = to_json(cfg);
  manifest["data"] = {{"rows", result.m},
                      {"cols", result.n},
                      {"covariance_scale", result.covariance_scale},
                      {"spectral_norm", result.spectral_norm}};
  manifest["curve_columns"] = {"sparsity_ratio", "f_value"};
  manifest["files"] = files;
  Json points = Json::array();
  for (const auto& rec : result.grid) {
    Json p;
    p["k"] = rec.k;
    p["seed"] = rec.seed;
    p["ok"] = rec.ok;
    if (!rec.ok) {
      p["error"] = rec.error;
    } else {
      p["nnz"] = rec.nnz;
      p["sparsity_ratio"] = static_cast<double>(rec.nnz) / static_cast<double>(result.n);
      p["relaxed_objective"] = rec.relaxed_objective;
      p["relaxed_converged"] = rec.relaxed_converged;
      p["norm_cap_met"] = rec.norm_cap_met;
      p["normalization_dominance"] = rec.normalization_dominance;
      Json values = Json::array();
      for (const auto& cp : rec.points) values.push_back(point_json(cp));
      p["f_values"] = values;
    }
    points.push_back(p);
  }
  manifest["grid"] = points;
  manifest["normalization_dominance"] = result.normalization_dominance;
  write_json(cfg.out_dir / "manifest.json", manifest);
  result.files.push_back(cfg.out_dir / "manifest.json");
  return result;
}

Json to_json(const SyntheticSpec& spec) {
  Json j;
  j["m"] = spec.m;
  j["n"] = spec.n;
  j["theta"] = spec.theta;
  j["sigma1"] = spec.sigma1;
  j["noise_std"] = spec.noise_std;
  j["seed"] = spec.seed;
  j["decaying_tail"] = spec.decaying_tail;
  return j;
}

Json to_json(const ExperimentConfig& cfg) {
  Json j;
  if (cfg.input) {
    j["input"] = cfg.input->generic_string();
    j["format"] = cfg.format == MatrixFormat::kCsv ? "csv" : "matrix-market";
  } else {
    j["synthetic"] = to_json(cfg.synthetic);
  }
  j["center"] = cfg.center.value_or(cfg.input.has_value());
  j["scale_rows"] = cfg.scale_rows;
  Json methods = Json::array();
  for (Method m : cfg.methods) methods.push_back(to_string(m));
  j["methods"] = methods;
  Json norms = Json::array();
  for (NormalizationMode m : cfg.normalizations) norms.push_back(to_string(m));
  j["normalizations"] = norms;
  j["grid_k"] = cfg.grid_k;
  j["grid_ratios"] = cfg.grid_ratios;
  j["s"] = cfg.s == 0 ? Json("k") : Json(cfg.s);
  j["trials"] = cfg.trials;
  j["epsilon"] = cfg.epsilon ? Json(*cfg.epsilon) : Json(nullptr);
  j["solver"] = {{"max_iter", cfg.solver.max_iter}, {"tol", cfg.solver.tol}, {"restarts", cfg.solver.restarts}};
  j["seed"] = cfg.seed;
  return j;
}

Json to_json(const BoundCheckReport& r) {
  Json j;
  j["trials"] = r.trials;
  j["n"] = r.n;
  j["k"] = r.k;
  j["epsilon"] = r.epsilon;
  j["s"] = r.s;
  j["covariance_scale"] = r.covariance_scale;
  j["relaxed_objective"] = r.relaxed_objective;
  j["reference"] = {{"label", r.reference_label}, {"value", r.reference_value}};
  j["sparsity"] = {{"expected_nnz", r.expected_nnz},
                   {"mean_nnz", r.mean_nnz},
                   {"standard_error", r.nnz_standard_error},
                   {"bound", static_cast<double>(r.s)}};
  j["norm"] = {{"bound_lemma", r.norm_bound_lemma},
               {"bound_theorem", r.norm_bound_theorem},
               {"frac_ok", r.frac_norm_ok},
               {"frac_ok_theorem", r.frac_norm_ok_theorem},
               {"floor", frequency_floor(0.75, r.trials)}};
  j["additive"] = {{"frac_ok", r.frac_additive_ok},
                   {"frac_joint_ok", r.frac_joint_ok},
                   {"floor", frequency_floor(0.75, r.trials)}};
  j["sq_residual"] = {{"mean", r.mean_sq_residual}, {"exact", r.exact_sq_residual}, {"bound", r.sq_residual_bound}};
  j["cross_term"] = {{"bound", r.cross_term_bound},
                     {"frac_ok", r.cross_term_frac},
                     {"floor", frequency_floor(0.875, r.trials)}};
  j["quad_term"] = {{"bound", r.quad_term_bound},
                    {"frac_ok", r.quad_term_frac},
                    {"floor", frequency_floor(0.875, r.trials)}};
  j["expectation_gap"] = {{"mean", r.expectation_gap},
                          {"standard_error", r.expectation_gap_standard_error},
                          {"exact", r.exact_expectation_gap}};
  const BoundVerdicts v = judge(r);
  j["verdicts"] = {{"sparsity", v.sparsity},   {"norm", v.norm},
                   {"additive", v.additive},   {"sq_residual", v.sq_residual},
                   {"cross_term", v.cross_term}, {"quad_term", v.quad_term},
                   {"expectation", v.expectation}, {"all", v.all()}};
  return j;
}

Json to_json(const ComponentSet& components) {
  Json j;
  j["normalization"] = to_string(components.mode);
  j["components"] = components.v.size();
  j["truncated"] = components.truncated;
  Json reports = Json::array();
  for (const auto& r : components.reports) {
    reports.push_back({{"method", r.method},
                       {"normalization", to_string(r.normalization)},
                       {"f_value", r.f_value},
                       {"nnz", r.nnz},
                       {"sparsity_ratio", r.sparsity_ratio},
                       {"cumulative_variance_pct", r.captured_variance_pct}});
  }
  j["reports"] = reports;
  return j;
}

BoundVerdicts judge(const BoundCheckReport& r) {
  BoundVerdicts v;
  const double n = static_cast<double>(r.trials);
  v.sparsity = r.sparsity_ok;
  v.norm = r.frac_norm_ok >= frequency_floor(0.75, r.trials);
  v.additive = r.frac_additive_ok >= frequency_floor(0.75, r.trials);
  v.sq_residual = r.mean_sq_residual <= r.sq_residual_bound * (1.0 + 3.0 / std::sqrt(n));
  v.cross_term = r.cross_term_frac >= frequency_floor(0.875, r.trials);
  v.quad_term = r.quad_term_frac >= frequency_floor(0.875, r.trials);
  v.expectation = r.expectation_gap >= -3.0 * r.expectation_gap_standard_error - 1e-12;
  return v;
}

}  // namespace rspca
