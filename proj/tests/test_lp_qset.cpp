#include <gtest/gtest.h>

#include <random>

#include "qvolterra/qset.hpp"
#include "support.hpp"

using namespace qvolterra;
using qvtest::random_dense;

namespace {

// Row residuals recomputed from the spec, not from the LP rows.
double worst_q_row(const SkewSpec& s, const SimplexPoint& y, std::size_t upto) {
  double worst = -1.0;
  for (Index k = 1; k <= upto; ++k) {
    double acc = 0.0;
    for (const auto& e : y.entries()) acc += s.entry(k, e.index) * e.weight;
    worst = std::max(worst, acc);
  }
  return worst;
}

LPRow row(std::vector<double> c, Sense s, double rhs) { return LPRow{std::move(c), s, rhs}; }

}  // namespace

TEST(LpFeasible, NoRows) {
  const auto r = lp_feasible(LPProblem{FaceIndexSet{1, 2}, {}});
  ASSERT_TRUE(r.feasible());
  EXPECT_NEAR(r.witness->sum(), 1.0, 1e-12);
}

TEST(LpFeasible, SingleBound) {
  const auto r = lp_feasible(LPProblem{FaceIndexSet{1, 2}, {row({1, 0}, Sense::kLessEqual, 0)}});
  ASSERT_TRUE(r.feasible());
  EXPECT_EQ(*r.witness, extreme_point(2));
}

TEST(LpFeasible, Contradiction) {
  const LPProblem p{FaceIndexSet{1, 2},
                    {row({-1, 1}, Sense::kLessEqual, 0), row({1, -1}, Sense::kLessEqual, -0.1)}};
  const auto r = lp_feasible(p);
  EXPECT_FALSE(r.feasible());
  EXPECT_FALSE(r.witness.has_value());
  EXPECT_GT(r.phase_one_objective, kFeasibilityTol);
}

TEST(LpFeasible, GreaterEqualAndNegativeRhs) {
  // y1 >= 0.7, y2 >= 0.2 on {1,2,3}: y3 <= 0.1.
  const LPProblem p{FaceIndexSet{1, 2, 3},
                    {row({1, 0, 0}, Sense::kGreaterEqual, 0.7), row({0, -1, 0}, Sense::kLessEqual, -0.2)}};
  const auto r = lp_feasible(p);
  ASSERT_TRUE(r.feasible());
  EXPECT_GE((*r.witness)[1], 0.7 - 1e-9);
  EXPECT_GE((*r.witness)[2], 0.2 - 1e-9);
  EXPECT_LE(max_row_violation(p, *r.witness), 1e-9);
}

TEST(LpFeasible, WitnessUsesFaceIndices) {
  const LPProblem p{FaceIndexSet{4, 9}, {row({1, 0}, Sense::kLessEqual, 0)}};
  const auto r = lp_feasible(p);
  ASSERT_TRUE(r.feasible());
  EXPECT_EQ(*r.witness, extreme_point(9));
}

TEST(LpFeasible, DegenerateRowsTerminate) {
  // Many duplicated and zero rows exercise the anti-cycling rule.
  LPProblem p{FaceIndexSet::first_n(6), {}};
  for (int c = 0; c < 20; ++c) {
    p.rows.push_back(row({1, -1, 0, 0, 0, 0}, Sense::kLessEqual, 0));
    p.rows.push_back(row({0, 0, 0, 0, 0, 0}, Sense::kLessEqual, 0));
    p.rows.push_back(row({0, 1, -1, 0, 0, 0}, Sense::kLessEqual, 0));
    p.rows.push_back(row({0, 0, 1, -1, 0, 0}, Sense::kGreaterEqual, 0));
  }
  const auto r = lp_feasible(p);
  ASSERT_TRUE(r.feasible());
  EXPECT_LE(max_row_violation(p, *r.witness), 1e-9);
}

TEST(LpFeasible, MaxRowViolation) {
  const LPProblem p{FaceIndexSet{1, 2}, {row({1, 0}, Sense::kLessEqual, 0.25)}};
  EXPECT_DOUBLE_EQ(max_row_violation(p, extreme_point(1)), 0.75);
  EXPECT_EQ(max_row_violation(p, extreme_point(2)), 0.0);
}

TEST(QSetPoint, Zero) {
  const auto r = q_set_point(SkewSpec::zero(), FaceIndexSet::first_n(5));
  ASSERT_TRUE(r.feasible());
  EXPECT_EQ(q_membership_residual(SkewSpec::zero(), *r.witness), 0.0);
}

TEST(QSetPoint, PairSequence) {
  const auto r = q_set_point(SkewSpec::pair_sequence({1.0}), FaceIndexSet{1, 2});
  ASSERT_TRUE(r.feasible());
  EXPECT_EQ(*r.witness, extreme_point(2));
  // On a longer face every odd coordinate vanishes.
  const auto s = SkewSpec::pair_sequence(std::vector<double>(10, 1.0));
  const auto w = q_set_point(s, FaceIndexSet::first_n(20));
  ASSERT_TRUE(w.feasible());
  for (Index k = 1; k <= 20; k += 2) EXPECT_LE((*w.witness)[k], 1e-9);
}

TEST(QSetPoint, RpsBarycenter) {
  const auto r = q_set_point(qvtest::rps(), FaceIndexSet{1, 2, 3});
  ASSERT_TRUE(r.feasible());
  for (Index k = 1; k <= 3; ++k) EXPECT_NEAR((*r.witness)[k], 1.0 / 3.0, 1e-9);
}

TEST(QMembership, Examples) {
  const auto pair = SkewSpec::pair_sequence({1.0});
  EXPECT_EQ(q_membership_residual(SkewSpec::zero(), sample_interior(FaceIndexSet::first_n(7), 1)), 0.0);
  EXPECT_EQ(q_membership_residual(pair, extreme_point(2)), 0.0);
  EXPECT_EQ(q_membership_residual(pair, extreme_point(1)), 1.0);
}

TEST(QMembership, AlternatingRowsBeyondSupport) {
  // Row k = n+1 or n+2 (odd) reads -(sum y) = ... for i < k: a_ki = -(-1)^k = 1.
  const auto alt = SkewSpec::alternating_sign();
  const auto y = uniform_point(FaceIndexSet::first_n(6));
  EXPECT_NEAR(q_membership_residual(alt, y), 1.0, 1e-15);
  EXPECT_NEAR(worst_q_row(alt, y, 8), 1.0, 1e-15);
  EXPECT_LE(face_q_residual(alt, *q_set_point(alt, FaceIndexSet::first_n(6)).witness, FaceIndexSet::first_n(6)),
            1e-9);
}

TEST(VerifyQSubsetFix, Examples) {
  EXPECT_TRUE(verify_q_subset_fix(SkewSpec::zero(), sample_interior(FaceIndexSet::first_n(4), 2)));
  EXPECT_TRUE(verify_q_subset_fix(qvtest::rps(), uniform_point(FaceIndexSet::first_n(3))));
  EXPECT_TRUE(verify_q_subset_fix(SkewSpec::pair_sequence({1.0}), extreme_point(2)));
  EXPECT_THROW(verify_q_subset_fix(SkewSpec::pair_sequence({1.0}), extreme_point(1)), Error);
}

TEST(VerifyQSubsetFix, RandomSpecs) {
  std::mt19937_64 rng(51);
  for (int r = 0; r < 100; ++r) {
    const std::size_t n = 2 + r % 30;
    const auto s = random_dense(n, rng);
    const auto res = q_set_point(s, FaceIndexSet::first_n(n));
    ASSERT_TRUE(res.feasible()) << "skew systems always have a Q point";
    ASSERT_LE(worst_q_row(s, *res.witness, n), 1e-9);
    ASSERT_NEAR(res.witness->sum(), 1.0, 1e-12);
    ASSERT_LE(l1_distance(volterra_apply(s, *res.witness), *res.witness), 1e-9);
    ASSERT_TRUE(verify_q_subset_fix(s, *res.witness));
  }
}

TEST(Duality, NegatedSpecSolvesReverseSystem) {
  std::mt19937_64 rng(52);
  for (int r = 0; r < 40; ++r) {
    const std::size_t n = 2 + r % 10;
    const auto s = random_dense(n, rng);
    const FaceIndexSet face = FaceIndexSet::first_n(n);
    const auto neg = q_set_point(negate(s), face);
    ASSERT_TRUE(neg.feasible());
    EXPECT_LE(max_row_violation(face_system(s, face, Sense::kGreaterEqual), *neg.witness), 1e-9);
  }
}

TEST(FinitelyGenerated, Examples) {
  const auto b = SkewSpec::dense({{0, 1}, {-1, 0}});
  EXPECT_EQ(finitely_generated_solution({b}), extreme_point(2));
  EXPECT_EQ(finitely_generated_solution({b, b}), make_point({{2, 0.5}, {4, 0.5}}));
  const auto z = SkewSpec::dense(3, std::vector<double>(9, 0.0));
  const auto zz = finitely_generated_solution({z, z, z});
  EXPECT_NEAR(zz.sum(), 1.0, 1e-12);
  EXPECT_NEAR(range_mass(zz, 1, 3), 0.5, 1e-15);
  EXPECT_NEAR(range_mass(zz, 4, 6), 0.25, 1e-15);
  EXPECT_NEAR(range_mass(zz, 7, 9), 0.25, 1e-15);
}

TEST(FinitelyGenerated, RandomBlocks) {
  std::mt19937_64 rng(53);
  for (int r = 0; r < 30; ++r) {
    const std::size_t nb = 1 + r % 8;
    std::vector<SkewSpec> blocks;
    for (std::size_t b = 0; b < nb; ++b) blocks.push_back(random_dense(1 + rng() % 8, rng));
    const auto z = finitely_generated_solution(blocks);
    const auto whole = SkewSpec::block_diagonal(blocks);
    EXPECT_NEAR(z.sum(), 1.0, 1e-12);
    const std::size_t ext = *whole.extent();
    for (Index k = 1; k <= ext; ++k) {
      double acc = 0.0;
      for (const auto& e : z.entries()) acc += whole.entry(k, e.index) * e.weight;
      ASSERT_GE(acc, -1e-9);
    }
  }
}

TEST(Example52, EmptyForAllSizes) {
  for (std::size_t n = 2; n <= 64; ++n) {
    const auto rep = example52_emptiness(n);
    EXPECT_FALSE(rep.lp.feasible()) << n;
    EXPECT_TRUE(rep.verdict) << n;
  }
}

TEST(Example52, SystemShape) {
  const auto p = example52_system(5);
  ASSERT_EQ(p.rows.size(), 7u);
  EXPECT_EQ(p.face, FaceIndexSet::first_n(5));
  // Row k = 7 (odd, beyond the face) has every coefficient a_7i = 1.
  for (double c : p.rows[6].coeffs) EXPECT_EQ(c, 1.0);
  // Row k = 6 (even): a_6i = -1.
  for (double c : p.rows[5].coeffs) EXPECT_EQ(c, -1.0);
  EXPECT_THROW(example52_system(1), Error);
}
