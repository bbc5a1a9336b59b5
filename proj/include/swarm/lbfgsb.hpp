#pragma once

#include <functional>

#include <Eigen/Core>

// Limited-memory BFGS with box constraints (generalized Cauchy point,
// primal subspace minimization, strong-Wolfe line search on the feasible
// segment).
namespace swarm::optim {

using Vector = Eigen::VectorXd;

// Returns f(x) and writes the gradient into `grad` (already sized).
using Objective = std::function<double(const Vector& x, Vector& grad)>;

struct LbfgsbOptions {
  int memory = 10;
  int max_iterations = 200;
  int max_line_search = 20;
  // Stop when the infinity norm of the projected gradient falls below this.
  double pgtol = 1e-8;
  // Stop when the relative reduction in f is below factr * machine epsilon.
  double factr = 1e7;
  // Checked after every accepted step; returning true ends the run.
  std::function<bool(const Vector& x, double f)> stop;
};

enum class LbfgsbStatus {
  kConverged,
  kRelativeReduction,
  kStopCriterion,
  kMaxIterations,
  kLineSearchFailed,
};

struct LbfgsbResult {
  Vector x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  LbfgsbStatus status = LbfgsbStatus::kMaxIterations;
};

// Minimizes `objective` over lower <= x <= upper starting from the projection
// of `x0`. The returned point is the best iterate seen.
LbfgsbResult minimize(const Objective& objective, Vector x0, const Vector& lower,
                      const Vector& upper, const LbfgsbOptions& options = {});

// Infinity norm of the gradient projected onto the feasible box.
double projected_gradient_norm(const Vector& x, const Vector& g,
                               const Vector& lower, const Vector& upper);

}  // namespace swarm::optim
