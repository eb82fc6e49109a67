#include "qvolterra/extension.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qvolterra {

CompatibleFamily::CompatibleFamily(SkewSpec base) : CompatibleFamily(base, base) {}

CompatibleFamily::CompatibleFamily(SkewSpec base, SkewSpec tail) : base_(std::move(base)), tail_(std::move(tail)) {
  require_valid(base_);
  require_valid(tail_);
}

SimplexPoint vn_apply(const CompatibleFamily& fam, std::size_t n, const SimplexPoint& x) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "truncation index n must be >= 1");
  return volterra_apply_truncated(truncate_dense(fam.base(), n), n, x);
}

SimplexPoint wn_apply(const CompatibleFamily& fam, std::size_t n, const SimplexPoint& x) {
  const SimplexPoint head = vn_apply(fam, n, x);
  const auto& xs = x.entries();
  std::vector<SimplexPoint::Entry> out;
  out.reserve(xs.size());
  for (const auto& e : head.entries()) {
    if (e.index <= n) out.push_back(e);
  }
  for (const auto& ek : xs) {
    if (ek.index <= n) continue;
    double s = 0.0;
    for (const auto& ei : xs) {
      if (ei.index > n) s += fam.tail().entry(ek.index, ei.index) * ei.weight;
    }
    double r = ek.weight * (1.0 + s);
    if (r < 0.0 && r >= -kDustTol) r = 0.0;
    out.push_back({ek.index, r});
  }
  return SimplexPoint::from_entries(std::move(out));
}

SimplexPoint vn_power(const DenseSkew& truncated, std::size_t n, const SimplexPoint& x, std::size_t m) {
  SimplexPoint y = x;
  for (std::size_t s = 0; s < m; ++s) y = volterra_apply_truncated(truncated, n, y);
  return y;
}

double alpha(std::size_t m) {
  if (m == 0) throw Error(ErrorCode::kInvalidArgument, "alpha is defined for m >= 1");
  double a = 1.0;
  for (std::size_t j = 2; j <= m; ++j) {
    const int e = static_cast<int>(j - 1);
    a = a * (2.0 + std::ldexp(1.0, e)) + std::ldexp(1.0, 2 * e);
  }
  return a;
}

GapReport power_truncation_gap(const DenseSkew& truncated, const SimplexPoint& x, std::size_t m, std::size_t n,
                               std::size_t p) {
  if (m == 0 || n == 0 || p == 0) throw Error(ErrorCode::kInvalidArgument, "m, n, p must be >= 1");
  if (truncated.n < n + p) throw Error(ErrorCode::kDimensionMismatch, "truncation smaller than n + p");
  GapReport rep;
  rep.m = m;
  rep.n = n;
  rep.p = p;
  rep.window_mass = range_mass(x, n + 1, n + p);
  const double am = alpha(m);
  const SimplexPoint a = vn_power(truncated, n, x, m);
  const SimplexPoint b = vn_power(truncated, n + p, x, m);
  for (const auto& e : x.entries()) {
    if (e.index > n) break;
    GapRow row{e.index, std::abs(a[e.index] - b[e.index]), am * e.weight * rep.window_mass};
    if (row.bound > 0.0) rep.max_ratio = std::max(rep.max_ratio, row.gap / row.bound);
    if (rep.verdict && row.gap > row.bound + kGapSlack) {
      std::ostringstream os;
      os << "m = " << m << ", k = " << row.k << ": gap " << row.gap << " > bound " << row.bound;
      rep.verdict = Verdict::fail(ErrorCode::kBoundViolated, os.str());
    }
    rep.rows.push_back(row);
  }
  return rep;
}

GapReport power_truncation_gap(const CompatibleFamily& fam, const SimplexPoint& x, std::size_t m, std::size_t n,
                               std::size_t p) {
  return power_truncation_gap(truncate_dense(fam.base(), n + p), x, m, n, p);
}

PowerApproximation converge_power(const CompatibleFamily& fam, const SimplexPoint& x, std::size_t m, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be > 0");
  if (m == 0) throw Error(ErrorCode::kInvalidArgument, "power m must be >= 1");
  const std::size_t support_bound = x.max_index();
  const double am = alpha(m);
  std::size_t n = std::min<std::size_t>(16, support_bound);
  while (n < support_bound && !(am * tail_mass(x, n) < eps)) n = std::min(n + 16, support_bound);

  PowerApproximation out{vn_power(truncate_dense(fam.base(), n), n, x, m), n, am * tail_mass(x, n),
                         n >= support_bound};
  return out;
}

namespace {

TailCheck compare_tail(const SimplexPoint& w, const SimplexPoint& v, const SimplexPoint& x, double tail) {
  TailCheck c;
  std::vector<Index> idx;
  for (const auto& e : w.entries()) idx.push_back(e.index);
  for (const auto& e : v.entries()) idx.push_back(e.index);
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  for (Index k : idx) {
    const double gap = std::abs(w[k] - v[k]);
    const double bound = x[k] * tail;
    if (bound > 0.0) c.max_ratio = std::max(c.max_ratio, gap / bound);
    if (c.verdict && gap > bound + 1e-12) {
      std::ostringstream os;
      os << "k = " << k << ": |W - V| = " << gap << " > x_k * tail = " << bound;
      c.verdict = Verdict::fail(ErrorCode::kBoundViolated, os.str());
    }
  }
  return c;
}

}  // namespace

WEqualsVReport check_w_equals_v(const CompatibleFamily& fam, const SimplexPoint& x, std::size_t n,
                                const SkewSpec& alternate) {
  WEqualsVReport rep;
  rep.n = n;
  rep.tail = tail_mass(x, n);
  const SimplexPoint v = vn_apply(fam, n, x);
  rep.family_tail = compare_tail(wn_apply(fam, n, x), v, x, rep.tail);
  const CompatibleFamily other(fam.base(), alternate);
  rep.alternate_tail = compare_tail(wn_apply(other, n, x), v, x, rep.tail);
  if (!rep.family_tail.verdict) {
    rep.verdict = rep.family_tail.verdict;
  } else if (!rep.alternate_tail.verdict) {
    rep.verdict = rep.alternate_tail.verdict;
  }
  return rep;
}

}  // namespace qvolterra
