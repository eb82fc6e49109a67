#pragma once

#include <cstddef>
#include <limits>
#include <variant>

#include "qvolterra/simplex.hpp"
#include "qvolterra/skew.hpp"

namespace qvolterra {

// Results in [-kDustTol, 0) are rounding noise and are clamped to zero.
inline constexpr double kDustTol = 1e-15;

// (V x)_k = x_k (1 + sum_i a_ki x_i). Inner sums run over supp(x) only.
// The spec is assumed valid; OperatorHandle::volterra validates.
SimplexPoint volterra_apply(const SkewSpec& spec, const SimplexPoint& x);

// Volterra step restricted to indices <= limit: coordinates above `limit`
// are left unchanged and do not enter the inner sums. Uses the same
// arithmetic as volterra_apply, so for limit >= max supp(x) the result is
// bit-identical to it.
SimplexPoint volterra_apply_truncated(const DenseSkew& a, std::size_t limit, const SimplexPoint& x);

// Conjugate bilinear form: (1/2)(x_k(1 + sum a_ki y_i) + y_k(1 + sum a_ki x_i)).
SimplexPoint conjugate_apply(const SkewSpec& spec, const SimplexPoint& x, const SimplexPoint& y);

// (V x)_k = sum_{i,j} p_{ij,k} x_i x_j. Throws SupportOverflow when supp(x)
// exceeds the tensor dimension or the image needs indices above max_support.
SimplexPoint tensor_apply(const DeterminingTensor& t, const SimplexPoint& x,
                          std::size_t max_support = std::numeric_limits<std::size_t>::max());

// (0, x_1, x_2, ...): every index moves one step to the right.
SimplexPoint shift_apply(const SimplexPoint& x);

class OperatorHandle {
 public:
  struct Volterra {
    SkewSpec spec;
  };
  struct Tensor {
    DeterminingTensor tensor;
    std::size_t max_support;
  };
  struct Shift {};
  using Variant = std::variant<Volterra, Tensor, Shift>;

  // Validates the spec (windowed for infinite kinds).
  static OperatorHandle volterra(SkewSpec spec);
  static OperatorHandle tensor(DeterminingTensor t,
                               std::size_t max_support = std::numeric_limits<std::size_t>::max());
  static OperatorHandle shift() { return OperatorHandle(Shift{}); }

  const Variant& variant() const noexcept { return v_; }
  bool is_volterra() const noexcept { return std::holds_alternative<Volterra>(v_); }
  const SkewSpec& spec() const;  // Volterra handles only

  SimplexPoint apply(const SimplexPoint& x) const;

 private:
  explicit OperatorHandle(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// l1 distance between V(x) and x.
double fixed_point_residual(const OperatorHandle& op, const SimplexPoint& x);

}  // namespace qvolterra
