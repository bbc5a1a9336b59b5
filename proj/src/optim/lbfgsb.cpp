#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "swarm/lbfgsb.hpp"

namespace swarm::optim {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Compact representation B = theta*I - W M W^T of the limited-memory
// BFGS matrix.
class Memory {
 public:
  explicit Memory(int capacity) : capacity_(capacity) {}

  int size() const { return static_cast<int>(s_.size()); }
  double theta() const { return theta_; }
  const Eigen::MatrixXd& w() const { return w_; }
  const Eigen::MatrixXd& m() const { return m_; }

  void clear() {
    s_.clear();
    y_.clear();
    theta_ = 1.0;
    w_.resize(0, 0);
    m_.resize(0, 0);
  }

  // Returns false (and keeps the memory) when the pair fails the curvature
  // test.
  bool push(const Vector& s, const Vector& y) {
    const double sy = s.dot(y);
    const double yy = y.squaredNorm();
    if (!(sy > kEps * yy)) return false;
    if (size() == capacity_) {
      s_.pop_front();
      y_.pop_front();
    }
    s_.push_back(s);
    y_.push_back(y);
    theta_ = yy / sy;
    rebuild();
    return true;
  }

 private:
  void rebuild() {
    const int k = size();
    const auto n = s_.front().size();
    Eigen::MatrixXd s(n, k), y(n, k);
    for (int j = 0; j < k; ++j) {
      s.col(j) = s_[j];
      y.col(j) = y_[j];
    }
    w_.resize(n, 2 * k);
    w_ << y, theta_ * s;

    const Eigen::MatrixXd sy = s.transpose() * y;
    Eigen::MatrixXd middle = Eigen::MatrixXd::Zero(2 * k, 2 * k);
    middle.topLeftCorner(k, k) = Eigen::MatrixXd((-sy.diagonal()).asDiagonal());
    const Eigen::MatrixXd lower = sy.triangularView<Eigen::StrictlyLower>();
    middle.bottomLeftCorner(k, k) = lower;
    middle.topRightCorner(k, k) = lower.transpose();
    middle.bottomRightCorner(k, k) = theta_ * (s.transpose() * s);
    m_ = middle.fullPivLu().inverse();
  }

  int capacity_;
  std::deque<Vector> s_;
  std::deque<Vector> y_;
  double theta_ = 1.0;
  Eigen::MatrixXd w_;
  Eigen::MatrixXd m_;
};

struct CauchyPoint {
  Vector xc;
  Vector c;
};

// Minimizer of the quadratic model along the projected steepest-descent path.
CauchyPoint cauchy_point(const Vector& x, const Vector& g, const Vector& lower,
                         const Vector& upper, const Memory& mem) {
  const auto n = x.size();
  const int k2 = 2 * mem.size();
  const double theta = mem.theta();
  const Eigen::MatrixXd& w = mem.w();
  const Eigen::MatrixXd& m = mem.m();

  Vector t(n), d(n);
  std::vector<Eigen::Index> breakpoints;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (g[i] < 0.0) {
      t[i] = (x[i] - upper[i]) / g[i];
    } else if (g[i] > 0.0) {
      t[i] = (x[i] - lower[i]) / g[i];
    } else {
      t[i] = kInf;
    }
    d[i] = t[i] == 0.0 ? 0.0 : -g[i];
    if (t[i] > 0.0 && t[i] < kInf) breakpoints.push_back(i);
  }
  std::stable_sort(breakpoints.begin(), breakpoints.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return t[a] < t[b]; });

  CauchyPoint out{x, Vector::Zero(k2)};
  Vector p = k2 > 0 ? Vector(w.transpose() * d) : Vector::Zero(0);
  double fp = -d.squaredNorm();
  if (fp == 0.0) return out;
  double fpp = -theta * fp - (k2 > 0 ? p.dot(m * p) : 0.0);
  const double fpp0 = -theta * fp;
  fpp = std::max(fpp, kEps * fpp0);
  double dt_min = -fp / fpp;
  double t_old = 0.0;

  for (const Eigen::Index b : breakpoints) {
    const double dt = t[b] - t_old;
    if (dt_min < dt) break;
    out.xc[b] = d[b] > 0.0 ? upper[b] : lower[b];
    const double zb = out.xc[b] - x[b];
    const double gb = g[b];
    if (k2 > 0) {
      out.c += dt * p;
      const Vector wb = w.row(b).transpose();
      fp += dt * fpp + gb * gb + theta * gb * zb - gb * wb.dot(m * out.c);
      fpp -= theta * gb * gb + 2.0 * gb * wb.dot(m * p) + gb * gb * wb.dot(m * wb);
      p += gb * wb;
    } else {
      fp += dt * fpp + gb * gb + theta * gb * zb;
      fpp -= theta * gb * gb;
    }
    fpp = std::max(fpp, kEps * fpp0);
    d[b] = 0.0;
    dt_min = -fp / fpp;
    t_old = t[b];
  }

  dt_min = std::max(dt_min, 0.0);
  t_old += dt_min;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d[i] != 0.0)
      out.xc[i] = std::clamp(x[i] + t_old * d[i], lower[i], upper[i]);
  }
  if (k2 > 0) out.c += dt_min * p;
  return out;
}

// Direct primal minimization of the model over the variables left free at
// the Cauchy point, truncated to stay feasible.
Vector subspace_minimum(const Vector& x, const Vector& g, const Vector& lower,
                        const Vector& upper, const CauchyPoint& cp,
                        const Memory& mem) {
  const auto n = x.size();
  const int k2 = 2 * mem.size();
  const double theta = mem.theta();

  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (cp.xc[i] > lower[i] && cp.xc[i] < upper[i]) free.push_back(i);
  }
  Vector xbar = cp.xc;
  if (free.empty()) return xbar;

  Vector r = g + theta * (cp.xc - x);
  if (k2 > 0) r -= mem.w() * (mem.m() * cp.c);

  const auto nz = static_cast<Eigen::Index>(free.size());
  Vector rz(nz);
  for (Eigen::Index j = 0; j < nz; ++j) rz[j] = r[free[j]];

  Vector du;
  if (k2 > 0) {
    Eigen::MatrixXd wz(nz, k2);
    for (Eigen::Index j = 0; j < nz; ++j) wz.row(j) = mem.w().row(free[j]);
    Vector v = mem.m() * (wz.transpose() * rz);
    const Eigen::MatrixXd big_n =
        Eigen::MatrixXd::Identity(k2, k2) - (mem.m() * (wz.transpose() * wz)) / theta;
    v = big_n.fullPivLu().solve(v);
    du = -rz / theta - (wz * v) / (theta * theta);
  } else {
    du = -rz / theta;
  }

  double alpha = 1.0;
  for (Eigen::Index j = 0; j < nz; ++j) {
    const Eigen::Index i = free[j];
    if (du[j] > 0.0) {
      alpha = std::min(alpha, (upper[i] - cp.xc[i]) / du[j]);
    } else if (du[j] < 0.0) {
      alpha = std::min(alpha, (lower[i] - cp.xc[i]) / du[j]);
    }
  }
  alpha = std::max(alpha, 0.0);
  for (Eigen::Index j = 0; j < nz; ++j) xbar[free[j]] += alpha * du[j];
  return xbar;
}

struct Trial {
  double step;
  double f;
  double dg;  // directional derivative
  Vector x;
  Vector g;
};

class LineSearch {
 public:
  LineSearch(const Objective& objective, const Vector& x, const Vector& d,
             const Vector& lower, const Vector& upper, double f0, double dg0,
             int max_evals, int& evaluations)
      : objective_(objective), x_(x), d_(d), lower_(lower), upper_(upper),
        f0_(f0), dg0_(dg0), max_evals_(max_evals), evaluations_(evaluations) {}

  // Strong Wolfe search on (0, 1]; steps past 1 would leave the box.
  // Falls back to the best sufficient-decrease point when curvature cannot
  // be satisfied within the budget.
  bool run(double initial_step, Trial& accepted) {
    constexpr double c1 = 1e-4, c2 = 0.9, step_max = 1.0;
    Trial prev{0.0, f0_, dg0_, x_, Vector()};
    double step = std::min(initial_step, step_max);
    for (int i = 0; i < max_evals_; ++i) {
      Trial cur = evaluate(step);
      if (cur.f > f0_ + c1 * step * dg0_ || (i > 0 && cur.f >= prev.f)) {
        return zoom(prev, cur, accepted);
      }
      remember(cur);
      if (std::abs(cur.dg) <= -c2 * dg0_ || step >= step_max) {
        accepted = std::move(cur);
        return true;
      }
      if (cur.dg >= 0.0) return zoom(cur, prev, accepted);
      prev = std::move(cur);
      step = std::min(2.0 * step, step_max);
    }
    return best(accepted);
  }

 private:
  Trial evaluate(double step) {
    Trial t{step, 0.0, 0.0, x_ + step * d_, Vector(x_.size())};
    t.x = t.x.cwiseMax(lower_).cwiseMin(upper_);
    t.f = objective_(t.x, t.g);
    t.dg = t.g.dot(d_);
    ++evaluations_;
    ++used_;
    return t;
  }

  void remember(const Trial& t) {
    constexpr double c1 = 1e-4;
    if (t.f <= f0_ + c1 * t.step * dg0_ && (!best_ || t.f < best_->f)) best_ = t;
  }

  bool best(Trial& accepted) {
    if (!best_) return false;
    accepted = *best_;
    return true;
  }

  bool zoom(Trial lo, Trial hi, Trial& accepted) {
    constexpr double c1 = 1e-4, c2 = 0.9;
    while (used_ < max_evals_) {
      double step = interpolate(lo, hi);
      const double a = std::min(lo.step, hi.step), b = std::max(lo.step, hi.step);
      const double margin = 0.1 * (b - a);
      if (!(step > a + margin && step < b - margin)) step = 0.5 * (a + b);
      if (b - a < 1e-14) break;
      Trial cur = evaluate(step);
      if (cur.f > f0_ + c1 * step * dg0_ || cur.f >= lo.f) {
        hi = std::move(cur);
        continue;
      }
      remember(cur);
      if (std::abs(cur.dg) <= -c2 * dg0_) {
        accepted = std::move(cur);
        return true;
      }
      if (cur.dg * (hi.step - lo.step) >= 0.0) hi = lo;
      lo = std::move(cur);
    }
    return best(accepted);
  }

  // Minimizer of the cubic through both endpoints' values and slopes.
  static double interpolate(const Trial& a, const Trial& b) {
    const double d1 = a.dg + b.dg - 3.0 * (a.f - b.f) / (a.step - b.step);
    const double disc = d1 * d1 - a.dg * b.dg;
    if (disc < 0.0) return 0.5 * (a.step + b.step);
    const double d2 = std::copysign(std::sqrt(disc), b.step - a.step);
    const double denom = b.dg - a.dg + 2.0 * d2;
    if (denom == 0.0) return 0.5 * (a.step + b.step);
    return b.step - (b.step - a.step) * (b.dg + d2 - d1) / denom;
  }

  const Objective& objective_;
  const Vector& x_;
  const Vector& d_;
  const Vector& lower_;
  const Vector& upper_;
  double f0_;
  double dg0_;
  int max_evals_;
  int& evaluations_;
  int used_ = 0;
  std::optional<Trial> best_;
};

}  // namespace

double projected_gradient_norm(const Vector& x, const Vector& g,
                               const Vector& lower, const Vector& upper) {
  double norm = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double projected = std::clamp(x[i] - g[i], lower[i], upper[i]) - x[i];
    norm = std::max(norm, std::abs(projected));
  }
  return norm;
}

LbfgsbResult minimize(const Objective& objective, Vector x0, const Vector& lower,
                      const Vector& upper, const LbfgsbOptions& options) {
  LbfgsbResult result;
  Vector x = x0.cwiseMax(lower).cwiseMin(upper);
  Vector g(x.size());
  double f = objective(x, g);
  result.evaluations = 1;

  Memory memory(options.memory);
  auto finish = [&](LbfgsbStatus status) {
    result.x = x;
    result.f = f;
    result.status = status;
    return result;
  };

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (projected_gradient_norm(x, g, lower, upper) <= options.pgtol)
      return finish(LbfgsbStatus::kConverged);

    const CauchyPoint cp = cauchy_point(x, g, lower, upper, memory);
    Vector d = subspace_minimum(x, g, lower, upper, cp, memory) - x;
    double dg = g.dot(d);
    if (!(dg < 0.0)) {
      d = cp.xc - x;
      dg = g.dot(d);
    }
    if (!(dg < 0.0)) {
      if (memory.size() == 0) return finish(LbfgsbStatus::kConverged);
      memory.clear();
      continue;
    }

    const double initial_step =
        memory.size() == 0 ? std::min(1.0, 1.0 / d.norm()) : 1.0;
    Trial accepted;
    LineSearch search(objective, x, d, lower, upper, f, dg,
                      options.max_line_search, result.evaluations);
    if (!search.run(initial_step, accepted)) {
      if (memory.size() == 0) return finish(LbfgsbStatus::kLineSearchFailed);
      memory.clear();
      continue;
    }

    const Vector s = accepted.x - x;
    const Vector y = accepted.g - g;
    const double f_old = f;
    x = std::move(accepted.x);
    g = std::move(accepted.g);
    f = accepted.f;
    result.iterations = iter + 1;
    memory.push(s, y);

    if (options.stop && options.stop(x, f))
      return finish(LbfgsbStatus::kStopCriterion);
    const double scale = std::max({std::abs(f_old), std::abs(f), 1.0});
    if ((f_old - f) <= options.factr * kEps * scale)
      return finish(LbfgsbStatus::kRelativeReduction);
  }
  return finish(LbfgsbStatus::kMaxIterations);
}

}  // namespace swarm::optim
