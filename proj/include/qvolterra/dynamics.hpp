#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qvolterra/operator.hpp"
#include "qvolterra/qset.hpp"

namespace qvolterra {

inline constexpr double kDefaultConvergenceTol = 1e-9;
inline constexpr std::size_t kDefaultConvergenceWindow = 50;

// x^(0), V x^(0), V^2 x^(0), ... Points are kept every `stride` steps (the
// final point is always kept); step sizes are recorded for every step.
struct Trajectory {
  OperatorHandle op;
  std::size_t stride = 1;
  std::vector<std::size_t> steps;  // step number of each stored point
  std::vector<SimplexPoint> points;
  std::vector<double> step_sizes;  // step_sizes[m] = ||x^(m+1) - x^(m)||_1
  // First step at which a Volterra image lost a support coordinate to
  // floating-point underflow. Volterra maps preserve support exactly, so
  // after this step the computed orbit no longer tracks the true one.
  std::optional<std::size_t> support_lost_at;

  std::size_t length() const noexcept { return step_sizes.size(); }
  const SimplexPoint& initial() const { return points.front(); }
  const SimplexPoint& last() const { return points.back(); }
};

Trajectory iterate(const OperatorHandle& op, const SimplexPoint& x0, std::size_t steps,
                   std::size_t stride = 1);

struct ConvergenceVerdict {
  enum class Status { kConverged, kNotConvergedWithinBudget, kOscillating };

  Status status = Status::kNotConvergedWithinBudget;
  std::optional<SimplexPoint> limit;  // set when Converged
  std::size_t at_step = 0;            // first step of the final run below tol
  std::size_t window = 0;
  double tol = 0.0;
  std::string note;
};

const char* to_string(ConvergenceVerdict::Status s);

// Windowed Cauchy test on the trailing `window` step sizes:
//   Converged    every step < tol (and no support was lost to underflow);
//   Oscillating  every step > 10 tol and the steps are not strictly
//                decreasing (heuristic: non-convergence cannot be proven);
//   otherwise    NotConvergedWithinBudget.
// Throws TrajectoryTooShort when fewer than `window` steps exist.
ConvergenceVerdict detect_convergence(const Trajectory& traj, double tol = kDefaultConvergenceTol,
                                      std::size_t window = kDefaultConvergenceWindow);

struct GrowthReport {
  Verdict verdict;
  std::size_t step = 0;
  Index k = 0;
  double max_ratio = 0.0;  // max over (m, k) of x^(m)_k / (2^m x^(0)_k)
};

// (V^m x)_k <= 2^m x_k + 1e-12 on every stored point. Volterra only.
GrowthReport check_growth_bound(const Trajectory& traj);

struct LimitQReport {
  Verdict verdict;
  Index worst_k = 0;
  double worst_value = 0.0;
};

// The limit of a converged Volterra trajectory lies in Q_K for K = supp(x^(0)):
// sum_i a_ki q_i <= tol for every k in K.
LimitQReport check_limit_in_Q(const Trajectory& traj, const ConvergenceVerdict& verdict,
                              double tol = kQTol);

}  // namespace qvolterra
