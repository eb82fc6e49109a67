#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qvolterra/error.hpp"
#include "qvolterra/simplex.hpp"

namespace qvolterra {

// Finite n x n coefficient block, row-major, 1-based accessors.
struct DenseSkew {
  std::size_t n = 0;
  std::vector<double> a;

  double operator()(Index k, Index i) const noexcept { return a[(k - 1) * n + (i - 1)]; }
  double& operator()(Index k, Index i) noexcept { return a[(k - 1) * n + (i - 1)]; }
  const double* row(Index k) const noexcept { return a.data() + (k - 1) * n; }

  friend bool operator==(const DenseSkew&, const DenseSkew&) = default;
};

struct ZeroSkew {
  friend bool operator==(const ZeroSkew&, const ZeroSkew&) = default;
};

// Dense blocks placed on consecutive index ranges; entries across blocks are 0.
struct BlockSkew {
  std::vector<DenseSkew> blocks;
  std::vector<Index> offsets;  // offsets[b] + 1 is the first index of block b

  friend bool operator==(const BlockSkew&, const BlockSkew&) = default;
};

// coeffs[p-1] couples the pair (2p-1, 2p): a_{2p,2p-1} = coeffs[p-1].
struct PairSkew {
  std::vector<double> coeffs;

  friend bool operator==(const PairSkew&, const PairSkew&) = default;
};

// Infinite pure matrix: a_ki = (-1)^i for i > k, completed skew-symmetrically.
struct AlternatingSkew {
  friend bool operator==(const AlternatingSkew&, const AlternatingSkew&) = default;
};

// Skew-symmetric coefficient matrix (a_ki) of a Volterra operator,
// evaluable lazily at any index pair.
class SkewSpec {
 public:
  enum class Kind { kZero, kDense, kBlockDiagonal, kPairSequence, kAlternatingSign };
  using Repr = std::variant<ZeroSkew, DenseSkew, BlockSkew, PairSkew, AlternatingSkew>;

  static SkewSpec zero() { return SkewSpec(ZeroSkew{}); }
  // Shape is checked here; skew-symmetry and bounds are checked by validate().
  static SkewSpec dense(std::size_t n, std::vector<double> row_major);
  static SkewSpec dense(const std::vector<std::vector<double>>& rows);
  static SkewSpec dense(DenseSkew d);
  // Every block must be of Dense kind.
  static SkewSpec block_diagonal(const std::vector<SkewSpec>& blocks);
  // Requires 0 < a^(k) <= 1.
  static SkewSpec pair_sequence(std::vector<double> coeffs);
  static SkewSpec alternating_sign() { return SkewSpec(AlternatingSkew{}); }

  Kind kind() const noexcept { return static_cast<Kind>(repr_.index()); }
  const Repr& repr() const noexcept { return repr_; }

  // a_ki; 0 beyond the range of finite kinds.
  double entry(Index k, Index i) const noexcept;

  // Largest index that can carry a nonzero entry; nullopt for infinite kinds.
  std::optional<std::size_t> extent() const noexcept;

  // Only valid for Dense specs.
  const DenseSkew& as_dense() const;

  friend bool operator==(const SkewSpec&, const SkewSpec&) = default;

 private:
  explicit SkewSpec(Repr r) : repr_(std::move(r)) {}
  Repr repr_;
};

const char* kind_name(SkewSpec::Kind kind);

struct SkewValidation {
  Verdict verdict;
  Index k = 0;
  Index i = 0;
  std::size_t checked_up_to = 0;  // largest index examined
  bool exhaustive = false;        // true when the whole matrix was covered
};

// Checks zero diagonal, |a_ki| <= 1 and a_ki = -a_ik. Finite kinds are
// checked over their full range; infinite kinds on indices 1..window.
SkewValidation validate(const SkewSpec& spec, std::size_t window);

// Throws the first violation found by validate().
void require_valid(const SkewSpec& spec, std::size_t window = 256);

// Dense n x n restriction (a_ki for k, i <= n).
SkewSpec truncate(const SkewSpec& spec, std::size_t n);
DenseSkew truncate_dense(const SkewSpec& spec, std::size_t n);

struct PurityReport {
  bool pure = false;
  std::size_t checked_up_to = 0;
  bool exhaustive = false;
};

// |a_ki| = 1 for every k != i in the checked range.
PurityReport is_pure(const SkewSpec& spec, std::size_t window);

// Entrywise lambda * a + (1 - lambda) * b on Dense specs of equal size.
SkewSpec mix(const SkewSpec& a, const SkewSpec& b, double lambda);

SkewSpec negate(const SkewSpec& spec);

// Heredity coefficients p_{ij,k} of a quadratic stochastic operator on
// indices 1..dim.
class DeterminingTensor {
 public:
  // Checks p >= 0, p_{ij,k} = p_{ji,k} and sum_k p_{ij,k} = 1 (1e-12).
  // values is indexed [(i-1)*dim*dim + (j-1)*dim + (k-1)].
  static DeterminingTensor from_values(std::size_t dim, std::vector<double> values);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(Index i, Index j, Index k) const noexcept {
    return p_[((i - 1) * dim_ + (j - 1)) * dim_ + (k - 1)];
  }
  // p_{ij,.} as a contiguous span over k.
  std::span<const double> outcome(Index i, Index j) const noexcept {
    return {p_.data() + ((i - 1) * dim_ + (j - 1)) * dim_, dim_};
  }
  const std::vector<double>& values() const noexcept { return p_; }

  // p_{ij,k} = 0 whenever k is neither i nor j.
  bool is_volterra() const noexcept { return volterra_; }

 private:
  DeterminingTensor() = default;
  std::size_t dim_ = 0;
  std::vector<double> p_;
  bool volterra_ = false;
};

// p_{kk,k} = 1, p_{ik,k} = (1 + a_ki) / 2. Spec must be Dense and valid.
DeterminingTensor to_tensor(const SkewSpec& spec);

// a_ki = 2 p_{ik,k} - 1. Throws NotVolterra on mass outside {i, j}.
SkewSpec from_tensor(const DeterminingTensor& t);

// p_{ij,k} = (P_ik + P_jk) / 2 for a row-stochastic P. Throws NotStochastic.
DeterminingTensor linear_induced_tensor(const std::vector<std::vector<double>>& stoch);

}  // namespace qvolterra
