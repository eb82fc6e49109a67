#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qvolterra/simplex.hpp"

namespace qvolterra {

inline constexpr double kPivotTol = 1e-10;
inline constexpr double kFeasibilityTol = 1e-9;

enum class Sense { kLessEqual, kGreaterEqual };

// One linear constraint sum_j coeffs[j] * y_{face[j]} (<= | >=) rhs.
struct LPRow {
  std::vector<double> coeffs;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

// Linear constraints over the simplex of a face: y >= 0, sum y = 1,
// variables indexed by the face indices.
struct LPProblem {
  FaceIndexSet face;
  std::vector<LPRow> rows;
};

struct LPResult {
  enum class Status { kFeasible, kInfeasible };

  Status status = Status::kInfeasible;
  std::optional<SimplexPoint> witness;
  std::size_t iterations = 0;
  double phase_one_objective = 0.0;

  bool feasible() const noexcept { return status == Status::kFeasible; }
};

// Phase-I simplex method: dense tableau, Dantzig pricing, lexicographic
// ratio test, tableau recomputed from the original data every few pivots.
// A Feasible result carries a witness re-checked against every row within
// kFeasibilityTol; Infeasible means the Phase-I optimum exceeds
// kFeasibilityTol.
// Throws CyclingDetected if the iteration cap is hit.
LPResult lp_feasible(const LPProblem& problem);

// Largest violation of the rows by y (0 when all rows hold). Independent of
// the solver; used to re-verify witnesses.
double max_row_violation(const LPProblem& problem, const SimplexPoint& y);

}  // namespace qvolterra
