#include "qvolterra/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qvolterra {

Trajectory iterate(const OperatorHandle& op, const SimplexPoint& x0, std::size_t steps, std::size_t stride) {
  if (steps == 0) throw Error(ErrorCode::kInvalidArgument, "iterate needs steps >= 1");
  if (stride == 0) throw Error(ErrorCode::kInvalidArgument, "stride must be >= 1");
  Trajectory traj{op, stride, {0}, {x0}, {}, std::nullopt};
  traj.step_sizes.reserve(steps);
  const bool volterra = op.is_volterra();
  SimplexPoint current = x0;
  for (std::size_t m = 1; m <= steps; ++m) {
    SimplexPoint next = op.apply(current);
    traj.step_sizes.push_back(l1_distance(next, current));
    if (volterra && !traj.support_lost_at && next.support_size() < current.support_size()) {
      traj.support_lost_at = m;
    }
    if (m % stride == 0 || m == steps) {
      traj.steps.push_back(m);
      traj.points.push_back(next);
    }
    current = std::move(next);
  }
  return traj;
}

const char* to_string(ConvergenceVerdict::Status s) {
  switch (s) {
    case ConvergenceVerdict::Status::kConverged: return "Converged";
    case ConvergenceVerdict::Status::kNotConvergedWithinBudget: return "NotConvergedWithinBudget";
    case ConvergenceVerdict::Status::kOscillating: return "Oscillating";
  }
  return "Unknown";
}

ConvergenceVerdict detect_convergence(const Trajectory& traj, double tol, std::size_t window) {
  if (window < 2) throw Error(ErrorCode::kInvalidArgument, "convergence window must be >= 2");
  if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "convergence tol must be > 0");
  const auto& s = traj.step_sizes;
  if (s.size() < window) {
    throw Error(ErrorCode::kTrajectoryTooShort,
                std::to_string(s.size()) + " steps, window " + std::to_string(window));
  }
  ConvergenceVerdict v;
  v.window = window;
  v.tol = tol;
  const std::size_t first = s.size() - window;

  bool all_small = true, all_large = true, decreasing = true;
  for (std::size_t j = first; j < s.size(); ++j) {
    all_small = all_small && s[j] < tol;
    all_large = all_large && s[j] > 10.0 * tol;
    if (j > first) decreasing = decreasing && s[j] < s[j - 1];
  }

  if (all_small) {
    std::size_t m = s.size();
    while (m > 0 && s[m - 1] < tol) --m;
    if (traj.support_lost_at) {
      std::ostringstream os;
      os << "step sizes fell below tol, but a support coordinate underflowed to 0 at step "
         << *traj.support_lost_at << "; the computed orbit left the face of x0";
      v.status = ConvergenceVerdict::Status::kNotConvergedWithinBudget;
      v.at_step = m;
      v.note = os.str();
      return v;
    }
    v.status = ConvergenceVerdict::Status::kConverged;
    v.at_step = m;
    v.limit = traj.last();
    return v;
  }
  if (all_large && !decreasing) {
    v.status = ConvergenceVerdict::Status::kOscillating;
    v.note = "heuristic: trailing steps stay above 10*tol without monotone decrease";
    return v;
  }
  v.status = ConvergenceVerdict::Status::kNotConvergedWithinBudget;
  return v;
}

GrowthReport check_growth_bound(const Trajectory& traj) {
  if (!traj.op.is_volterra()) throw Error(ErrorCode::kInvalidArgument, "growth bound applies to Volterra trajectories");
  GrowthReport rep;
  const SimplexPoint& x0 = traj.initial();
  for (std::size_t p = 0; p < traj.points.size(); ++p) {
    const std::size_t m = traj.steps[p];
    const double factor = std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(m, 4096)));
    for (const auto& e : traj.points[p].entries()) {
      const double bound = factor * x0[e.index];
      if (bound > 0.0 && std::isfinite(bound)) rep.max_ratio = std::max(rep.max_ratio, e.weight / bound);
      if (e.weight > bound + 1e-12) {
        std::ostringstream os;
        os << "step " << m << ", k = " << e.index << ": " << e.weight << " > 2^" << m << " * " << x0[e.index];
        rep.verdict = Verdict::fail(ErrorCode::kBoundViolated, os.str());
        rep.step = m;
        rep.k = e.index;
        return rep;
      }
    }
  }
  return rep;
}

LimitQReport check_limit_in_Q(const Trajectory& traj, const ConvergenceVerdict& verdict, double tol) {
  if (verdict.status != ConvergenceVerdict::Status::kConverged || !verdict.limit) {
    throw Error(ErrorCode::kInvalidArgument, "limit check needs a Converged verdict");
  }
  const SkewSpec& spec = traj.op.spec();
  const FaceIndexSet face = FaceIndexSet::support_of(traj.initial());
  LimitQReport rep;
  rep.worst_value = -std::numeric_limits<double>::infinity();
  for (Index k : face.indices()) {
    double s = 0.0;
    for (const auto& e : verdict.limit->entries()) s += spec.entry(k, e.index) * e.weight;
    if (s > rep.worst_value) {
      rep.worst_value = s;
      rep.worst_k = k;
    }
  }
  std::ostringstream os;
  os << "max_k sum_i a_ki q_i = " << rep.worst_value << " at k = " << rep.worst_k;
  rep.verdict = rep.worst_value <= tol ? Verdict::pass(os.str()) : Verdict::fail(ErrorCode::kLimitNotInQ, os.str());
  return rep;
}

}  // namespace qvolterra
