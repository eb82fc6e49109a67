#include "qvolterra/qset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qvolterra/operator.hpp"

namespace qvolterra {

LPProblem face_system(const SkewSpec& spec, const FaceIndexSet& face, Sense sense) {
  LPProblem p{face, {}};
  const auto& idx = face.indices();
  p.rows.reserve(idx.size());
  for (Index k : idx) {
    LPRow row;
    row.sense = sense;
    row.coeffs.reserve(idx.size());
    for (Index i : idx) row.coeffs.push_back(spec.entry(k, i));
    p.rows.push_back(std::move(row));
  }
  return p;
}

LPResult q_set_point(const SkewSpec& spec, const FaceIndexSet& face) {
  return lp_feasible(face_system(spec, face, Sense::kLessEqual));
}

namespace {

double row_value(const SkewSpec& spec, Index k, const SimplexPoint& y) {
  double s = 0.0;
  for (const auto& e : y.entries()) s += spec.entry(k, e.index) * e.weight;
  return s;
}

}  // namespace

double q_membership_residual(const SkewSpec& spec, const SimplexPoint& y) {
  const auto ext = spec.extent();
  const std::size_t upper = ext ? std::max<std::size_t>(*ext, y.max_index()) : y.max_index() + 2;
  double worst = 0.0;
  for (Index k = 1; k <= upper; ++k) worst = std::max(worst, row_value(spec, k, y));
  return worst;
}

double face_q_residual(const SkewSpec& spec, const SimplexPoint& y, const FaceIndexSet& face) {
  double worst = 0.0;
  for (Index k : face.indices()) worst = std::max(worst, row_value(spec, k, y));
  return worst;
}

Verdict verify_q_subset_fix(const SkewSpec& spec, const SimplexPoint& y) {
  const double q = q_membership_residual(spec, y);
  if (q > kQTol) {
    std::ostringstream os;
    os << "point is not in Q (residual " << q << ")";
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
  const double r = l1_distance(volterra_apply(spec, y), y);
  std::ostringstream os;
  os << "||V(y) - y||_1 = " << r;
  if (r > kQTol) return Verdict::fail(ErrorCode::kFixViolation, os.str());
  return Verdict::pass(os.str());
}

SimplexPoint finitely_generated_solution(const std::vector<SkewSpec>& blocks) {
  if (blocks.empty()) throw Error(ErrorCode::kInvalidArgument, "need at least one block");
  const std::size_t count = blocks.size();
  std::vector<SimplexPoint::Entry> entries;
  Index offset = 0;
  for (std::size_t b = 0; b < count; ++b) {
    const DenseSkew& d = blocks[b].as_dense();
    require_valid(blocks[b]);
    const LPResult r = lp_feasible(face_system(blocks[b], FaceIndexSet::first_n(d.n), Sense::kGreaterEqual));
    if (!r.feasible()) {
      throw Error(ErrorCode::kBlockInfeasible, "block " + std::to_string(b + 1) + " system A z >= 0 has no solution");
    }
    // 2^-(b+1) for all but the last block, which repeats the previous weight.
    const int exponent = (b + 1 < count) ? static_cast<int>(b + 1) : static_cast<int>(count - 1);
    const double weight = std::ldexp(1.0, -exponent);
    for (const auto& e : r.witness->entries()) entries.push_back({offset + e.index, weight * e.weight});
    offset += d.n;
  }
  return SimplexPoint::from_entries(std::move(entries));
}

LPProblem example52_system(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "emptiness system needs n >= 2");
  const SkewSpec alt = SkewSpec::alternating_sign();
  LPProblem p{FaceIndexSet::first_n(n), {}};
  for (Index k = 1; k <= n + 2; ++k) {
    LPRow row;
    row.sense = Sense::kLessEqual;
    for (Index i = 1; i <= n; ++i) row.coeffs.push_back(alt.entry(k, i));
    p.rows.push_back(std::move(row));
  }
  return p;
}

EmptinessReport example52_emptiness(std::size_t n) {
  EmptinessReport rep;
  rep.n = n;
  rep.lp = lp_feasible(example52_system(n));
  if (rep.lp.feasible()) {
    rep.verdict = Verdict::fail(ErrorCode::kUnexpectedlyFeasible,
                                "n = " + std::to_string(n) + ": LP returned a witness");
  } else {
    std::ostringstream os;
    os << "n = " << n << ": infeasible, Phase-I objective " << rep.lp.phase_one_objective;
    rep.verdict = Verdict::pass(os.str());
  }
  return rep;
}

}  // namespace qvolterra
