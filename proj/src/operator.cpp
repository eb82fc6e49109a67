#include "qvolterra/operator.hpp"

#include <sstream>

namespace qvolterra {
namespace {

double clamp_dust(double r, Index k) {
  if (r >= 0.0) return r;
  if (r >= -kDustTol) return 0.0;
  std::ostringstream os;
  os.precision(17);
  os << "coordinate " << k << " evaluated to " << r << "; coefficients outside the Volterra class?";
  throw Error(ErrorCode::kNegativeWeight, os.str());
}

// Shared Volterra kernel. Coordinates with index > limit pass through.
template <class EntryFn>
SimplexPoint volterra_kernel(EntryFn&& a, std::size_t limit, const SimplexPoint& x) {
  const auto& xs = x.entries();
  std::vector<SimplexPoint::Entry> out;
  out.reserve(xs.size());
  for (const auto& ek : xs) {
    if (ek.index > limit) {
      out.push_back(ek);
      continue;
    }
    double s = 0.0;
    for (const auto& ei : xs) {
      if (ei.index > limit) break;
      s += a(ek.index, ei.index) * ei.weight;
    }
    out.push_back({ek.index, clamp_dust(ek.weight * (1.0 + s), ek.index)});
  }
  return SimplexPoint::from_entries(std::move(out));
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

SimplexPoint volterra_apply(const SkewSpec& spec, const SimplexPoint& x) {
  constexpr auto kAll = std::numeric_limits<std::size_t>::max();
  if (const auto* d = std::get_if<DenseSkew>(&spec.repr())) {
    const std::size_t n = d->n;
    return volterra_kernel(
        [d, n](Index k, Index i) { return (k <= n && i <= n) ? (*d)(k, i) : 0.0; }, kAll, x);
  }
  return volterra_kernel([&spec](Index k, Index i) { return spec.entry(k, i); }, kAll, x);
}

SimplexPoint volterra_apply_truncated(const DenseSkew& a, std::size_t limit, const SimplexPoint& x) {
  if (limit > a.n) throw Error(ErrorCode::kDimensionMismatch, "truncation limit exceeds matrix size");
  return volterra_kernel([&a](Index k, Index i) { return a(k, i); }, limit, x);
}

SimplexPoint conjugate_apply(const SkewSpec& spec, const SimplexPoint& x, const SimplexPoint& y) {
  auto affine = [&spec](Index k, const SimplexPoint& z) {
    double s = 0.0;
    for (const auto& e : z.entries()) s += spec.entry(k, e.index) * e.weight;
    return 1.0 + s;
  };
  std::vector<SimplexPoint::Entry> out;
  const auto& xs = x.entries();
  const auto& ys = y.entries();
  std::size_t i = 0, j = 0;
  while (i < xs.size() || j < ys.size()) {
    Index k;
    double xk = 0.0, yk = 0.0;
    if (j == ys.size() || (i < xs.size() && xs[i].index < ys[j].index)) {
      k = xs[i].index;
      xk = xs[i++].weight;
    } else if (i == xs.size() || ys[j].index < xs[i].index) {
      k = ys[j].index;
      yk = ys[j++].weight;
    } else {
      k = xs[i].index;
      xk = xs[i++].weight;
      yk = ys[j++].weight;
    }
    const double left = xk > 0.0 ? xk * affine(k, y) : 0.0;
    const double right = yk > 0.0 ? yk * affine(k, x) : 0.0;
    out.push_back({k, clamp_dust(0.5 * (left + right), k)});
  }
  return SimplexPoint::from_entries(std::move(out));
}

SimplexPoint tensor_apply(const DeterminingTensor& t, const SimplexPoint& x, std::size_t max_support) {
  const std::size_t n = t.dim();
  if (x.max_index() > n) {
    throw Error(ErrorCode::kSupportOverflow,
                "point index " + std::to_string(x.max_index()) + " beyond tensor dimension " + std::to_string(n));
  }
  std::vector<double> acc(n, 0.0);
  for (const auto& ei : x.entries()) {
    for (const auto& ej : x.entries()) {
      const double w = ei.weight * ej.weight;
      const auto row = t.outcome(ei.index, ej.index);
      for (std::size_t k = 0; k < n; ++k) acc[k] += row[k] * w;
    }
  }
  std::vector<SimplexPoint::Entry> out;
  for (std::size_t k = 0; k < n; ++k) {
    if (acc[k] > 0.0 && k + 1 > max_support) {
      throw Error(ErrorCode::kSupportOverflow,
                  "image needs index " + std::to_string(k + 1) + " > max_support " + std::to_string(max_support));
    }
    if (acc[k] != 0.0) out.push_back({k + 1, clamp_dust(acc[k], k + 1)});
  }
  return SimplexPoint::from_entries(std::move(out));
}

SimplexPoint shift_apply(const SimplexPoint& x) {
  std::vector<SimplexPoint::Entry> out = x.entries();
  for (auto& e : out) ++e.index;
  return SimplexPoint::from_entries(std::move(out));
}

OperatorHandle OperatorHandle::volterra(SkewSpec spec) {
  require_valid(spec);
  return OperatorHandle(Volterra{std::move(spec)});
}

OperatorHandle OperatorHandle::tensor(DeterminingTensor t, std::size_t max_support) {
  if (max_support == 0) throw Error(ErrorCode::kInvalidArgument, "max_support must be >= 1");
  return OperatorHandle(Tensor{std::move(t), max_support});
}

const SkewSpec& OperatorHandle::spec() const {
  if (const auto* v = std::get_if<Volterra>(&v_)) return v->spec;
  throw Error(ErrorCode::kInvalidArgument, "operator is not of Volterra form");
}

SimplexPoint OperatorHandle::apply(const SimplexPoint& x) const {
  return std::visit(Overloaded{
                        [&](const Volterra& v) { return volterra_apply(v.spec, x); },
                        [&](const Tensor& t) { return tensor_apply(t.tensor, x, t.max_support); },
                        [&](const Shift&) { return shift_apply(x); },
                    },
                    v_);
}

double fixed_point_residual(const OperatorHandle& op, const SimplexPoint& x) {
  return l1_distance(op.apply(x), x);
}

}  // namespace qvolterra
