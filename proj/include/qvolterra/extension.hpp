#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qvolterra/operator.hpp"

namespace qvolterra {

// Compatible family of finite-dimensional truncations V_{n]} of a base
// coefficient matrix, plus the matrix whose entries drive the tail operators
// W_{[n+1} on indices > n. Compatibility holds by construction: every
// V_{n]} reads the same base entries.
class CompatibleFamily {
 public:
  explicit CompatibleFamily(SkewSpec base);
  CompatibleFamily(SkewSpec base, SkewSpec tail);

  const SkewSpec& base() const noexcept { return base_; }
  const SkewSpec& tail() const noexcept { return tail_; }

 private:
  SkewSpec base_;
  SkewSpec tail_;
};

// V_n: truncated Volterra form on indices <= n, identity above n.
SimplexPoint vn_apply(const CompatibleFamily& fam, std::size_t n, const SimplexPoint& x);

// W_n: V_{n]} on indices <= n, tail operator built from fam.tail() entries
// over indices >= n+1 on the rest.
SimplexPoint wn_apply(const CompatibleFamily& fam, std::size_t n, const SimplexPoint& x);

// m-fold V_n using a precomputed truncation of size >= n.
SimplexPoint vn_power(const DenseSkew& truncated, std::size_t n, const SimplexPoint& x, std::size_t m);

// alpha_1 = 1, alpha_m = alpha_{m-1} (2 + 2^{m-1}) + 2^{2(m-1)}.
double alpha(std::size_t m);

struct GapRow {
  Index k = 0;
  double gap = 0.0;
  double bound = 0.0;
};

struct GapReport {
  std::size_t m = 0, n = 0, p = 0;
  double window_mass = 0.0;  // mass of x on n+1..n+p
  std::vector<GapRow> rows;  // one per k <= n in supp(x)
  double max_ratio = 0.0;    // max gap / bound over rows with bound > 0
  Verdict verdict;
};

inline constexpr double kGapSlack = 1e-10;

// |(V_n^m x)_k - (V_{n+p}^m x)_k| <= alpha(m) x_k (mass of x on n+1..n+p)
// for every k <= n, with additive slack 1e-10.
GapReport power_truncation_gap(const CompatibleFamily& fam, const SimplexPoint& x, std::size_t m,
                               std::size_t n, std::size_t p);
// Same, reusing a truncation of the base of size >= n + p.
GapReport power_truncation_gap(const DenseSkew& truncated, const SimplexPoint& x, std::size_t m,
                               std::size_t n, std::size_t p);

struct PowerApproximation {
  SimplexPoint point;
  std::size_t n = 0;     // truncation used
  double bound = 0.0;    // alpha(m) * tail_mass(x, n)
  bool exact = false;    // n >= max supp(x)
};

// Picks n in steps of 16 until alpha(m) tail_mass(x, n) < eps (capped at
// max supp(x), where the result is exact) and returns V_n^m(x).
PowerApproximation converge_power(const CompatibleFamily& fam, const SimplexPoint& x, std::size_t m,
                                  double eps);

struct TailCheck {
  double max_ratio = 0.0;  // max_k |W_n(x)_k - V_n(x)_k| / (x_k tail)
  Verdict verdict;
};

struct WEqualsVReport {
  std::size_t n = 0;
  double tail = 0.0;  // tail_mass(x, n)
  TailCheck family_tail;
  TailCheck alternate_tail;
  Verdict verdict;
};

// |W_n(x)_k - V_n(x)_k| <= x_k tail_mass(x, n) + 1e-12 for every k, for the
// family's tail and for `alternate` in its place.
WEqualsVReport check_w_equals_v(const CompatibleFamily& fam, const SimplexPoint& x, std::size_t n,
                                const SkewSpec& alternate = SkewSpec::alternating_sign());

}  // namespace qvolterra
