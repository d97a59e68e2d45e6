#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rspca/baselines.hpp"
#include "rspca/deflation.hpp"
#include "rspca/eval.hpp"
#include "rspca/io.hpp"
#include "rspca/relax.hpp"
#include "rspca/rounding.hpp"
#include "rspca/synthetic.hpp"

namespace rspca {

std::string_view version();

enum class Method { kRspca, kMaxComp };
std::string_view to_string(Method method);
Method parse_method(std::string_view name);

struct ExperimentConfig {
  /// Data source: a matrix file, or the synthetic generator when unset.
  std::optional<std::filesystem::path> input;
  MatrixFormat format = MatrixFormat::kMatrixMarket;
  SyntheticSpec synthetic;
  /// Column-center X before forming A. Unset means: center file inputs,
  /// leave synthetic data as generated.
  std::optional<bool> center;
  bool scale_rows = true;

  std::vector<Method> methods{Method::kRspca, Method::kMaxComp};
  std::vector<NormalizationMode> normalizations{NormalizationMode::kNaive, NormalizationMode::kSvdBased};
  /// Sparsity grid in k; target ratios are converted to k = max(1, round(ratio * n)).
  std::vector<Index> grid_k;
  std::vector<double> grid_ratios;

  /// Rounding target; 0 means s = k at every grid point.
  std::size_t s = 0;
  std::size_t trials = 32;
  /// Norm cap 1 + 0.15 eps for best-of-t selection when set.
  std::optional<double> epsilon;
  SolverConfig solver;
  Seed seed = 0;

  /// Where curve CSVs and manifest.json go; nothing is written when empty.
  std::filesystem::path out_dir;
};

struct CurvePoint {
  double sparsity_ratio = 0.0;
  double f_value = 0.0;
  Method method = Method::kRspca;
  NormalizationMode normalization = NormalizationMode::kSvdBased;
  Index k = 0;
  std::size_t nnz = 0;
};

struct GridPointRecord {
  Index k = 0;
  Seed seed = 0;
  bool ok = false;
  std::string error;
  std::size_t nnz = 0;
  /// Support of the rounded rspca vector.
  std::vector<Index> support;
  double relaxed_objective = 0.0;
  bool relaxed_converged = false;
  bool norm_cap_met = true;
  /// f values keyed as (method, normalization) in the order they were evaluated.
  std::vector<CurvePoint> points;
  /// f(svd) >= f(naive) - 1e-10 for every method at this point.
  bool normalization_dominance = true;
};

struct ExperimentResult {
  Index m = 0;
  Index n = 0;
  double covariance_scale = 1.0;
  double spectral_norm = 0.0;
  std::vector<GridPointRecord> grid;
  /// One sorted series per requested (method, normalization).
  std::vector<std::vector<CurvePoint>> series;
  bool normalization_dominance = true;
  std::vector<std::filesystem::path> files;
};

/// Loads or generates X, centers it per config, and returns it.
DataMatrix prepare_data(const ExperimentConfig& cfg);

/// Runs the sparsity sweep. At each grid point rspca fixes the nnz, MaxComp
/// is truncated to that same nnz, both are normalized every requested way
/// and scored with f. Failures are recorded per point. Writes
/// curve_<method>_<normalization>.csv (sparsity_ratio,f_value rows, no
/// header) and manifest.json to cfg.out_dir when it is set.
ExperimentResult run_experiment(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg, const DataMatrix& x);

Json to_json(const BoundCheckReport& report);
Json to_json(const SyntheticSpec& spec);
Json to_json(const ExperimentConfig& cfg);
Json to_json(const ComponentSet& components);

/// Pass/fail per bound of a report at the Monte Carlo floors.
struct BoundVerdicts {
  bool sparsity = false;
  bool norm = false;
  bool additive = false;
  bool sq_residual = false;
  bool cross_term = false;
  bool quad_term = false;
  bool expectation = false;

  bool all() const { return sparsity && norm && additive && sq_residual && cross_term && quad_term && expectation; }
};
BoundVerdicts judge(const BoundCheckReport& report);

}  // namespace rspca
