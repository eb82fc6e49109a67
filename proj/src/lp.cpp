#include "qvolterra/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qvolterra/error.hpp"

namespace qvolterra {
namespace {

constexpr double kReducedCostTol = 1e-12;
// Rounding noise thresholds: tableau entries and right-hand sides this small
// are treated as exact zeros so degenerate ties are recognized as ties.
constexpr double kZeroTol = 1e-14;
constexpr double kRhsZeroTol = 1e-12;
constexpr double kRatioTieTol = 1e-12;
constexpr std::size_t kRefactorEvery = 8;
constexpr double kRelativePivotTol = 1e-3;

// Dense Phase-I tableau. Columns: [y (n) | slack (m) | artificial | rhs].
// Rows are sign-normalized to rhs >= 0; a row whose slack enters with +1
// starts with the slack basic, the others (and the sum row) get an
// artificial variable.
class PhaseOneTableau {
 public:
  explicit PhaseOneTableau(const LPProblem& problem)
      : n_(problem.face.size()), m_(problem.rows.size()), rows_(m_ + 1), basis_(rows_) {
    std::vector<double> sign(m_, 1.0);
    std::vector<bool> needs_artificial(rows_, true);
    for (std::size_t r = 0; r < m_; ++r) {
      const LPRow& row = problem.rows[r];
      if (row.coeffs.size() != n_) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "row " + std::to_string(r) + " has " + std::to_string(row.coeffs.size()) +
                        " coefficients for a face of size " + std::to_string(n_));
      }
      const bool le = row.sense == Sense::kLessEqual;
      if (row.rhs < 0.0 || (row.rhs == 0.0 && !le)) sign[r] = -1.0;
      needs_artificial[r] = (sign[r] > 0.0) != le;
    }
    std::size_t artificials = 0;
    for (bool a : needs_artificial) artificials += a;
    cols_ = n_ + m_ + artificials;
    t_.assign(rows_ * (cols_ + 1), 0.0);
    reduced_.assign(cols_, 0.0);

    std::size_t next_artificial = n_ + m_;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r < m_) {
        const LPRow& row = problem.rows[r];
        for (std::size_t j = 0; j < n_; ++j) at(r, j) = sign[r] * row.coeffs[j];
        at(r, n_ + r) = sign[r] * (row.sense == Sense::kLessEqual ? 1.0 : -1.0);
        rhs(r) = sign[r] * row.rhs;
      } else {
        for (std::size_t j = 0; j < n_; ++j) at(r, j) = 1.0;
        rhs(r) = 1.0;
      }
      if (needs_artificial[r]) {
        at(r, next_artificial) = 1.0;
        basis_[r] = next_artificial++;
      } else {
        basis_[r] = n_ + r;
      }
    }
    original_ = t_;
    initial_basis_ = basis_;
  }

  // Runs to optimality; returns the number of pivots.
  std::size_t solve() {
    const std::size_t cap = 200 * (rows_ + cols_) + 1000;
    std::size_t iter = 0;
    for (;;) {
      bool fresh = iter % kRefactorEvery == 0;
      if (fresh) refactor();
      refresh_reduced_costs();
      std::vector<bool> skip(cols_, false);
      std::size_t enter = cols_, leave = rows_;
      for (;;) {
        enter = first_improving(skip);
        if (enter == cols_ && !fresh) {
          // Confirm optimality on a freshly computed tableau.
          refactor();
          refresh_reduced_costs();
          std::fill(skip.begin(), skip.end(), false);
          fresh = true;
          continue;
        }
        if (enter == cols_) return iter;
        leave = leaving_row(enter);
        if (leave != rows_) break;
        // Only negligible entries in this column: Phase I is bounded below,
        // so the column cannot improve the objective. Try the next one.
        skip[enter] = true;
      }
      pivot(leave, enter);
      if (++iter > cap) {
        throw Error(ErrorCode::kCyclingDetected, "Phase-I exceeded " + std::to_string(cap) + " pivots");
      }
    }
  }

  double objective() const {
    double z = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (is_artificial(basis_[r])) z += rhs(r);
    }
    return z;
  }

  // Values of the structural variables y.
  std::vector<double> primal() const {
    std::vector<double> y(n_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < n_) y[basis_[r]] = rhs(r);
    }
    return y;
  }

 private:
  // Dantzig's rule: most negative reduced cost, lowest index on ties.
  std::size_t first_improving(const std::vector<bool>& skip) const {
    std::vector<bool> basic(cols_, false);
    for (std::size_t b : basis_) basic[b] = true;
    std::size_t best = cols_;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (basic[j] || skip[j] || reduced_[j] >= -kReducedCostTol) continue;
      if (best == cols_ || reduced_[j] < reduced_[best]) best = j;
    }
    return best;
  }

  // Minimum-ratio row for `enter`, or rows_ if none. Pivot entries must
  // exceed kPivotTol relative to the column's magnitude; among tied rows,
  // pivots much smaller than the largest tied one are skipped, and the
  // remaining ties are broken lexicographically.
  std::size_t leaving_row(std::size_t enter) const {
    double scale = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) scale = std::max(scale, std::abs(at(r, enter)));
    const double tol = kPivotTol * scale;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows_; ++r) {
      const double a = at(r, enter);
      if (a > tol) best = std::min(best, rhs(r) / a);
    }
    double largest = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double a = at(r, enter);
      if (a > tol && rhs(r) / a <= best + kRatioTieTol) largest = std::max(largest, a);
    }
    std::size_t leave = rows_;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double a = at(r, enter);
      if (a <= tol || rhs(r) / a > best + kRatioTieTol || a < kRelativePivotTol * largest) continue;
      if (leave == rows_ || lex_less(r, leave, enter)) leave = r;
    }
    return leave;
  }

  // Lexicographic ratio tie-break: compares rows of B^-1 (the columns of
  // the initial basis) scaled by the pivot column entry.
  bool lex_less(std::size_t r, std::size_t s, std::size_t enter) const {
    const double ar = at(r, enter), as = at(s, enter);
    for (std::size_t c : initial_basis_) {
      const double u = at(r, c) / ar, v = at(s, c) / as;
      if (u < v - kRatioTieTol) return true;
      if (u > v + kRatioTieTol) return false;
    }
    return basis_[r] < basis_[s];
  }

  // Recomputes the tableau as B^-1 [A | b] from the original data by
  // Gaussian elimination with partial pivoting, discarding the rounding
  // accumulated by successive pivots. Leaves the tableau unchanged if the
  // basis matrix is numerically singular.
  void refactor() {
    const std::size_t w = cols_ + 1;
    std::vector<double> b(rows_ * rows_), x = original_;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < rows_; ++c) b[r * rows_ + c] = original_[r * w + basis_[c]];
    for (std::size_t c = 0; c < rows_; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < rows_; ++r) {
        if (std::abs(b[r * rows_ + c]) > std::abs(b[piv * rows_ + c])) piv = r;
      }
      if (std::abs(b[piv * rows_ + c]) < 1e-13) return;
      if (piv != c) {
        for (std::size_t k = 0; k < rows_; ++k) std::swap(b[c * rows_ + k], b[piv * rows_ + k]);
        for (std::size_t k = 0; k < w; ++k) std::swap(x[c * w + k], x[piv * w + k]);
      }
      const double inv = 1.0 / b[c * rows_ + c];
      for (std::size_t r = 0; r < rows_; ++r) {
        if (r == c) continue;
        const double f = b[r * rows_ + c] * inv;
        if (f == 0.0) continue;
        for (std::size_t k = c; k < rows_; ++k) b[r * rows_ + k] -= f * b[c * rows_ + k];
        for (std::size_t k = 0; k < w; ++k) x[r * w + k] -= f * x[c * w + k];
      }
      for (std::size_t k = 0; k < w; ++k) x[c * w + k] *= inv;
      for (std::size_t k = c; k < rows_; ++k) b[c * rows_ + k] *= inv;
    }
    // Row c of x now belongs to basic variable basis_[c]; basic columns are
    // exact unit vectors.
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t k = 0; k < w; ++k) {
        double& v = x[r * w + k];
        if (std::abs(v) < kZeroTol) v = 0.0;
      }
      for (std::size_t q = 0; q < rows_; ++q) x[q * w + basis_[r]] = q == r ? 1.0 : 0.0;
      if (std::abs(x[r * w + cols_]) < kRhsZeroTol) x[r * w + cols_] = 0.0;
    }
    t_ = std::move(x);
  }

  // Phase-I costs: 1 on artificials, 0 elsewhere. Recomputed from the
  // tableau every pivot so rounding in earlier updates does not accumulate.
  void refresh_reduced_costs() {
    for (std::size_t j = 0; j < cols_; ++j) {
      double s = is_artificial(j) ? 1.0 : 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (is_artificial(basis_[r])) s -= at(r, j);
      }
      reduced_[j] = s;
    }
  }

  bool is_artificial(std::size_t j) const { return j >= n_ + m_; }
  double& at(std::size_t r, std::size_t c) { return t_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
      for (std::size_t c = 0; c <= cols_; ++c) {
        if (std::abs(at(r, c)) < kZeroTol) at(r, c) = 0.0;
      }
      if (std::abs(rhs(r)) < kRhsZeroTol) rhs(r) = 0.0;
    }
    const double f = reduced_[pc];
    for (std::size_t c = 0; c < cols_; ++c) reduced_[c] -= f * at(pr, c);
    reduced_[pc] = 0.0;
    basis_[pr] = pc;
  }

  std::size_t n_, m_, rows_, cols_ = 0;
  std::vector<double> t_;
  std::vector<double> original_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> initial_basis_;
  std::vector<double> reduced_;
};

}  // namespace

double max_row_violation(const LPProblem& problem, const SimplexPoint& y) {
  const auto& idx = problem.face.indices();
  double worst = 0.0;
  for (const auto& row : problem.rows) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < idx.size(); ++j) lhs += row.coeffs[j] * y[idx[j]];
    const double v = row.sense == Sense::kLessEqual ? lhs - row.rhs : row.rhs - lhs;
    worst = std::max(worst, v);
  }
  return worst;
}

LPResult lp_feasible(const LPProblem& problem) {
  PhaseOneTableau tab(problem);
  LPResult res;
  res.iterations = tab.solve();
  res.phase_one_objective = tab.objective();
  if (res.phase_one_objective > kFeasibilityTol) {
    res.status = LPResult::Status::kInfeasible;
    return res;
  }

  std::vector<double> y = tab.primal();
  double total = 0.0;
  for (auto& v : y) {
    v = std::max(v, 0.0);
    total += v;
  }
  std::vector<SimplexPoint::Entry> entries;
  const auto& idx = problem.face.indices();
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (y[j] > 0.0) entries.push_back({idx[j], y[j] / total});
  }
  SimplexPoint witness = SimplexPoint::from_entries(std::move(entries));
  const double viol = max_row_violation(problem, witness);
  if (viol > kFeasibilityTol) {
    std::ostringstream os;
    os << "Phase-I witness violates a row by " << viol;
    throw Error(ErrorCode::kBoundViolated, os.str());
  }
  res.status = LPResult::Status::kFeasible;
  res.witness = std::move(witness);
  return res;
}

}  // namespace qvolterra
