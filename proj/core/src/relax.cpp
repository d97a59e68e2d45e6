#include "rspca/relax.hpp"

#include <cmath>
#include <limits>

#include "rspca/errors.hpp"

namespace rspca {

namespace {

enum class Scaling { kClip, kUnit };

Vector soft_threshold(const Vector& v, double delta) {
  return v.unaryExpr([delta](double x) {
    const double mag = std::abs(x) - delta;
    return mag > 0.0 ? std::copysign(mag, x) : 0.0;
  });
}

// Returns the scaled thresholded vector, or an empty vector when S(v, delta)
// vanishes in unit mode (no direction to normalize).
Vector scaled_shrink(const Vector& v, double delta, Scaling mode) {
  Vector s = soft_threshold(v, delta);
  const double norm = s.norm();
  if (mode == Scaling::kClip) {
    if (norm > 1.0) s /= norm;
    return s;
  }
  if (norm == 0.0) return {};
  return s / norm;
}

bool within_budget(const Vector& w, double budget) {
  return w.size() == 0 || w.lpNorm<1>() <= budget;
}

struct Threshold {
  double delta = 0.0;
  Vector w;
};

Threshold bisect_threshold(const Vector& v, double budget, Scaling mode) {
  if (!(budget >= 1.0)) throw InputError("l1 budget must be at least 1");
  const double vmax = v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  if (vmax == 0.0) return {0.0, Vector::Zero(v.size())};

  Vector w = scaled_shrink(v, 0.0, mode);
  if (within_budget(w, budget)) return {0.0, std::move(w)};

  double lo = 0.0;
  double hi = vmax;
  const double precision = 1e-12 * vmax;
  while (hi - lo > precision) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (within_budget(scaled_shrink(v, mid, mode), budget)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  w = scaled_shrink(v, hi, mode);
  if (w.size() == 0) {
    // Unit mode with every entry thresholded away: the maximizer sits on the
    // largest-magnitude coordinate.
    Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    w = Vector::Zero(v.size());
    w[arg] = std::copysign(1.0, v[arg]);
  }
  return {hi, std::move(w)};
}

Vector random_feasible_start(Index n, double budget, Seed seed) {
  Rng rng(seed);
  Vector g(n);
  for (Index i = 0; i < n; ++i) g[i] = rng.normal();
  return project_feasible(g / g.norm(), budget);
}

double quad(const Matrix& a, const Vector& x) { return x.dot(a * x); }

}  // namespace

RelaxationProblem::RelaxationProblem(const Covariance& cov, Index sparsity) : a(cov), k(sparsity) {
  if (k < 1 || k > cov.dim()) throw InputError("sparsity k must satisfy 1 <= k <= n");
}

double RelaxationProblem::budget() const { return std::sqrt(static_cast<double>(k)); }

double feasible_threshold(const Vector& v, double budget) {
  return bisect_threshold(v, budget, Scaling::kClip).delta;
}

Vector project_feasible(const Vector& v, double budget) {
  return bisect_threshold(v, budget, Scaling::kClip).w;
}

Vector linear_maximizer(const Vector& c, double budget) {
  return bisect_threshold(c, budget, Scaling::kUnit).w;
}

DenseDirection solve_relaxed(const RelaxationProblem& prob, const SolverConfig& cfg,
                             std::vector<std::vector<double>>* trace) {
  if (cfg.max_iter < 1 || !(cfg.tol > 0.0) || cfg.restarts < 0) {
    throw InputError("solver config needs max_iter >= 1, tol > 0, restarts >= 0");
  }
  const Matrix& a = prob.a.matrix();
  const Index n = prob.a.dim();
  const double budget = prob.budget();

  if (a.isZero(0.0)) {
    DenseDirection zero;
    zero.x = Vector::Zero(n);
    zero.converged = true;
    return zero;
  }

  Vector top;
  try {
    top = top_singular_pair(a, {.seed = cfg.seed}).vector;
  } catch (const ConvergenceError& e) {
    top = e.last_iterate();
  }

  DenseDirection best;
  best.objective = -std::numeric_limits<double>::infinity();

  for (int run = 0; run <= cfg.restarts; ++run) {
    Vector x = run == 0 ? project_feasible(top, budget)
                        : random_feasible_start(n, budget, derive_seed(cfg.seed, run - 1));
    double objective = quad(a, x);
    std::vector<double> history{objective};
    bool converged = false;
    int iter = 0;
    while (iter < cfg.max_iter) {
      ++iter;
      const Vector ax = a * x;
      if (ax.isZero(0.0)) {
        converged = true;
        break;
      }
      Vector next = linear_maximizer(ax, budget);
      const double next_objective = quad(a, next);
      history.push_back(next_objective);
      if (next_objective <= objective) {
        // No ascent left beyond rounding error; x is a fixed point.
        converged = true;
        break;
      }
      const double gain = (next_objective - objective) / std::abs(next_objective);
      x = std::move(next);
      objective = next_objective;
      if (gain < cfg.tol) {
        converged = true;
        break;
      }
    }
    if (trace != nullptr) trace->push_back(std::move(history));
    if (objective > best.objective) {
      best.x = std::move(x);
      best.objective = objective;
      best.converged = converged;
      best.iterations = iter;
      best.run = run;
    }
  }
  return best;
}

}  // namespace rspca
