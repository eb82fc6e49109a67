#pragma once

#include <cstddef>
#include <vector>

#include "qvolterra/lp.hpp"
#include "qvolterra/skew.hpp"

namespace qvolterra {

// Membership threshold for the fixed-point region Q.
inline constexpr double kQTol = 1e-9;

// Rows sum_{i in face} a_ki y_i (sense) 0 for every k in the face.
LPProblem face_system(const SkewSpec& spec, const FaceIndexSet& face, Sense sense);

// A point of Q_K = {y in S^K : sum_i a_ki y_i <= 0, k in K}.
LPResult q_set_point(const SkewSpec& spec, const FaceIndexSet& face);

// max_k sum_i a_ki y_i clipped below at 0. Rows run over the full range of
// finite kinds and over 1..max supp(y) + 2 for infinite kinds.
double q_membership_residual(const SkewSpec& spec, const SimplexPoint& y);

// Same quantity with rows restricted to k in `face` (the Q_K condition).
double face_q_residual(const SkewSpec& spec, const SimplexPoint& y, const FaceIndexSet& face);

// Points of Q are fixed: checks ||V(y) - y||_1 <= 1e-9. Throws
// InvalidArgument when y is not in Q to begin with.
Verdict verify_q_subset_fix(const SkewSpec& spec, const SimplexPoint& y);

// Solves A_b z >= 0 on each block's simplex and glues the pieces with
// weights 1/2, 1/4, ..., 2^-(N-1), 2^-(N-1). Blocks must be Dense.
// Throws BlockInfeasible if a block system has no solution.
SimplexPoint finitely_generated_solution(const std::vector<SkewSpec>& blocks);

struct EmptinessReport {
  std::size_t n = 0;
  LPResult lp;
  Verdict verdict;  // UnexpectedlyFeasible when the LP found a point
};

// LP over face {1..n} with alternating-sign rows k = 1..n+2; expected
// infeasible for every n >= 2.
LPProblem example52_system(std::size_t n);
EmptinessReport example52_emptiness(std::size_t n);

}  // namespace qvolterra
