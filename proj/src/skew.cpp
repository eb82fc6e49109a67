#include "qvolterra/skew.hpp"

#include <cmath>
#include <sstream>

namespace qvolterra {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double alternating_entry(Index k, Index i) noexcept {
  if (i > k) return (i % 2 == 0) ? 1.0 : -1.0;
  if (i < k) return (k % 2 == 0) ? -1.0 : 1.0;
  return 0.0;
}

std::string at(Index k, Index i) {
  return "(" + std::to_string(k) + "," + std::to_string(i) + ")";
}

// First violation within the leading n x n window of `entry`.
template <class Entry>
SkewValidation check_window(std::size_t n, Entry&& entry) {
  SkewValidation out;
  out.checked_up_to = n;
  for (Index k = 1; k <= n; ++k) {
    for (Index i = 1; i <= n; ++i) {
      const double v = entry(k, i);
      if (k == i) {
        if (v != 0.0) {
          out.verdict = Verdict::fail(ErrorCode::kNonzeroDiagonal, "diagonal entry at " + at(k, i));
          out.k = k;
          out.i = i;
          return out;
        }
        continue;
      }
      if (!(std::abs(v) <= 1.0)) {
        out.verdict = Verdict::fail(ErrorCode::kBoundExceeded, "|a| > 1 at " + at(k, i));
        out.k = k;
        out.i = i;
        return out;
      }
      if (v != -entry(i, k)) {
        out.verdict = Verdict::fail(ErrorCode::kNotSkew, "a_ki != -a_ik at " + at(k, i));
        out.k = k;
        out.i = i;
        return out;
      }
    }
  }
  return out;
}

}  // namespace

SkewSpec SkewSpec::dense(std::size_t n, std::vector<double> row_major) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "dense spec needs n >= 1");
  if (row_major.size() != n * n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(n * n) + " entries, got " + std::to_string(row_major.size()));
  }
  return SkewSpec(DenseSkew{n, std::move(row_major)});
}

SkewSpec SkewSpec::dense(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw Error(ErrorCode::kDimensionMismatch, "dense spec rows must be square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return dense(n, std::move(flat));
}

SkewSpec SkewSpec::dense(DenseSkew d) { return dense(d.n, std::move(d.a)); }

SkewSpec SkewSpec::block_diagonal(const std::vector<SkewSpec>& blocks) {
  if (blocks.empty()) throw Error(ErrorCode::kInvalidArgument, "block spec needs at least one block");
  BlockSkew b;
  Index offset = 0;
  for (const auto& blk : blocks) {
    const DenseSkew& d = blk.as_dense();
    b.offsets.push_back(offset);
    b.blocks.push_back(d);
    offset += d.n;
  }
  return SkewSpec(std::move(b));
}

SkewSpec SkewSpec::pair_sequence(std::vector<double> coeffs) {
  if (coeffs.empty()) throw Error(ErrorCode::kInvalidArgument, "pair spec needs at least one coefficient");
  for (std::size_t p = 0; p < coeffs.size(); ++p) {
    if (!(coeffs[p] > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "pair coefficient " + std::to_string(p + 1) + " must be > 0");
    }
    if (coeffs[p] > 1.0) {
      throw Error(ErrorCode::kBoundExceeded, "pair coefficient " + std::to_string(p + 1) + " exceeds 1");
    }
  }
  return SkewSpec(PairSkew{std::move(coeffs)});
}

double SkewSpec::entry(Index k, Index i) const noexcept {
  return std::visit(
      Overloaded{
          [](const ZeroSkew&) { return 0.0; },
          [&](const DenseSkew& d) { return (k <= d.n && i <= d.n) ? d(k, i) : 0.0; },
          [&](const BlockSkew& b) {
            for (std::size_t j = 0; j < b.blocks.size(); ++j) {
              const Index lo = b.offsets[j];
              const Index hi = lo + b.blocks[j].n;
              if (k > lo && k <= hi) {
                return (i > lo && i <= hi) ? b.blocks[j](k - lo, i - lo) : 0.0;
              }
            }
            return 0.0;
          },
          [&](const PairSkew& p) {
            const Index pk = (k + 1) / 2;
            if (pk != (i + 1) / 2 || k == i || pk > p.coeffs.size()) return 0.0;
            return (k % 2 == 0) ? p.coeffs[pk - 1] : -p.coeffs[pk - 1];
          },
          [&](const AlternatingSkew&) { return alternating_entry(k, i); },
      },
      repr_);
}

std::optional<std::size_t> SkewSpec::extent() const noexcept {
  return std::visit(
      Overloaded{
          [](const ZeroSkew&) -> std::optional<std::size_t> { return 0; },
          [](const DenseSkew& d) -> std::optional<std::size_t> { return d.n; },
          [](const BlockSkew& b) -> std::optional<std::size_t> {
            return b.offsets.back() + b.blocks.back().n;
          },
          [](const PairSkew& p) -> std::optional<std::size_t> { return 2 * p.coeffs.size(); },
          [](const AlternatingSkew&) -> std::optional<std::size_t> { return std::nullopt; },
      },
      repr_);
}

const DenseSkew& SkewSpec::as_dense() const {
  if (const auto* d = std::get_if<DenseSkew>(&repr_)) return *d;
  throw Error(ErrorCode::kInvalidArgument, std::string("expected a dense spec, got ") + kind_name(kind()));
}

const char* kind_name(SkewSpec::Kind kind) {
  switch (kind) {
    case SkewSpec::Kind::kZero: return "zero";
    case SkewSpec::Kind::kDense: return "dense";
    case SkewSpec::Kind::kBlockDiagonal: return "block";
    case SkewSpec::Kind::kPairSequence: return "pair";
    case SkewSpec::Kind::kAlternatingSign: return "alternating";
  }
  return "unknown";
}

SkewValidation validate(const SkewSpec& spec, std::size_t window) {
  if (window == 0) throw Error(ErrorCode::kInvalidArgument, "validation window must be >= 1");
  return std::visit(
      Overloaded{
          [&](const ZeroSkew&) {
            SkewValidation v;
            v.exhaustive = true;
            return v;
          },
          [&](const DenseSkew& d) {
            auto v = check_window(d.n, [&](Index k, Index i) { return d(k, i); });
            v.exhaustive = true;
            return v;
          },
          [&](const BlockSkew& b) {
            SkewValidation v;
            for (std::size_t j = 0; j < b.blocks.size(); ++j) {
              const DenseSkew& d = b.blocks[j];
              v = check_window(d.n, [&](Index k, Index i) { return d(k, i); });
              if (!v.verdict) {
                v.k += b.offsets[j];
                v.i += b.offsets[j];
                v.verdict.detail += " (global " + at(v.k, v.i) + ")";
                break;
              }
            }
            v.checked_up_to = *spec.extent();
            v.exhaustive = true;
            return v;
          },
          [&](const PairSkew&) {
            const std::size_t n = *spec.extent();
            auto v = check_window(n, [&](Index k, Index i) { return spec.entry(k, i); });
            v.exhaustive = true;
            return v;
          },
          [&](const AlternatingSkew&) {
            auto v = check_window(window, alternating_entry);
            v.exhaustive = false;
            return v;
          },
      },
      spec.repr());
}

void require_valid(const SkewSpec& spec, std::size_t window) {
  const auto v = validate(spec, window);
  if (!v.verdict) throw Error(v.verdict.code, v.verdict.detail);
}

DenseSkew truncate_dense(const SkewSpec& spec, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "truncation size must be >= 1");
  DenseSkew out{n, std::vector<double>(n * n, 0.0)};
  std::visit(Overloaded{
                 [](const ZeroSkew&) {},
                 [&](const DenseSkew& d) {
                   const std::size_t m = std::min(n, d.n);
                   for (Index k = 1; k <= m; ++k) {
                     for (Index i = 1; i <= m; ++i) out(k, i) = d(k, i);
                   }
                 },
                 [&](const BlockSkew& b) {
                   for (std::size_t j = 0; j < b.blocks.size(); ++j) {
                     const Index lo = b.offsets[j];
                     const DenseSkew& d = b.blocks[j];
                     for (Index k = 1; k <= d.n && lo + k <= n; ++k) {
                       for (Index i = 1; i <= d.n && lo + i <= n; ++i) out(lo + k, lo + i) = d(k, i);
                     }
                   }
                 },
                 [&](const PairSkew& p) {
                   for (std::size_t j = 1; j <= p.coeffs.size() && 2 * j <= n; ++j) {
                     out(2 * j, 2 * j - 1) = p.coeffs[j - 1];
                     out(2 * j - 1, 2 * j) = -p.coeffs[j - 1];
                   }
                 },
                 [&](const AlternatingSkew&) {
                   for (Index k = 1; k <= n; ++k) {
                     for (Index i = 1; i <= n; ++i) out(k, i) = alternating_entry(k, i);
                   }
                 },
             },
             spec.repr());
  return out;
}

SkewSpec truncate(const SkewSpec& spec, std::size_t n) {
  return SkewSpec::dense(truncate_dense(spec, n));
}

PurityReport is_pure(const SkewSpec& spec, std::size_t window) {
  PurityReport r;
  if (spec.kind() == SkewSpec::Kind::kZero) {
    r.exhaustive = true;
    return r;
  }
  const auto ext = spec.extent();
  r.exhaustive = ext.has_value();
  r.checked_up_to = ext ? *ext : window;
  r.pure = true;
  for (Index k = 1; k <= r.checked_up_to && r.pure; ++k) {
    for (Index i = 1; i <= r.checked_up_to; ++i) {
      if (i != k && std::abs(spec.entry(k, i)) != 1.0) {
        r.pure = false;
        break;
      }
    }
  }
  return r;
}

SkewSpec mix(const SkewSpec& a, const SkewSpec& b, double lambda) {
  const DenseSkew& da = a.as_dense();
  const DenseSkew& db = b.as_dense();
  if (da.n != db.n) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(da.n) + " vs " + std::to_string(db.n));
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "lambda must lie in [0, 1]");
  DenseSkew out{da.n, std::vector<double>(da.a.size())};
  for (std::size_t j = 0; j < out.a.size(); ++j) out.a[j] = lambda * da.a[j] + (1.0 - lambda) * db.a[j];
  return SkewSpec::dense(std::move(out));
}

SkewSpec negate(const SkewSpec& spec) {
  return std::visit(
      Overloaded{
          [](const ZeroSkew&) { return SkewSpec::zero(); },
          [](const DenseSkew& d) {
            DenseSkew out = d;
            for (auto& v : out.a) v = -v;
            return SkewSpec::dense(std::move(out));
          },
          [](const BlockSkew& b) {
            std::vector<SkewSpec> blocks;
            for (const auto& d : b.blocks) blocks.push_back(negate(SkewSpec::dense(d)));
            return SkewSpec::block_diagonal(blocks);
          },
          [](const PairSkew&) -> SkewSpec {
            throw Error(ErrorCode::kInvalidArgument, "negated pair spec violates a^(k) > 0; truncate first");
          },
          [](const AlternatingSkew&) -> SkewSpec {
            throw Error(ErrorCode::kInvalidArgument, "negated alternating spec has no structural kind; truncate first");
          },
      },
      spec.repr());
}

DeterminingTensor DeterminingTensor::from_values(std::size_t dim, std::vector<double> values) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "tensor dimension must be >= 1");
  if (values.size() != dim * dim * dim) throw Error(ErrorCode::kDimensionMismatch, "tensor needs dim^3 values");
  DeterminingTensor t;
  t.dim_ = dim;
  t.p_ = std::move(values);
  t.volterra_ = true;
  for (Index i = 1; i <= dim; ++i) {
    for (Index j = 1; j <= dim; ++j) {
      double s = 0.0;
      for (Index k = 1; k <= dim; ++k) {
        const double v = t(i, j, k);
        if (!(v >= 0.0)) {
          std::ostringstream os;
          os << "p_{" << i << j << "," << k << "} = " << v;
          throw Error(ErrorCode::kNegativeWeight, os.str());
        }
        if (v != t(j, i, k)) {
          throw Error(ErrorCode::kInvalidArgument, "tensor not symmetric in (i,j) at " + at(i, j));
        }
        if (v > 0.0 && k != i && k != j) t.volterra_ = false;
        s += v;
      }
      if (std::abs(s - 1.0) > kNormalizationTol) {
        throw Error(ErrorCode::kNotNormalized, "sum_k p_{ij,k} != 1 at " + at(i, j));
      }
    }
  }
  return t;
}

DeterminingTensor to_tensor(const SkewSpec& spec) {
  const DenseSkew& d = spec.as_dense();
  require_valid(spec);
  const std::size_t n = d.n;
  std::vector<double> p(n * n * n, 0.0);
  auto cell = [n](Index i, Index j, Index k) { return ((i - 1) * n + (j - 1)) * n + (k - 1); };
  for (Index k = 1; k <= n; ++k) {
    p[cell(k, k, k)] = 1.0;
    for (Index i = 1; i <= n; ++i) {
      if (i == k) continue;
      const double v = (1.0 + d(k, i)) / 2.0;
      p[cell(i, k, k)] = v;
      p[cell(k, i, k)] = v;
    }
  }
  return DeterminingTensor::from_values(n, std::move(p));
}

SkewSpec from_tensor(const DeterminingTensor& t) {
  if (!t.is_volterra()) {
    const std::size_t n = t.dim();
    for (Index i = 1; i <= n; ++i) {
      for (Index j = 1; j <= n; ++j) {
        for (Index k = 1; k <= n; ++k) {
          if (k != i && k != j && t(i, j, k) > 0.0) {
            std::ostringstream os;
            os << "p_{" << i << j << "," << k << "} = " << t(i, j, k) << " with k outside {i,j}";
            throw Error(ErrorCode::kNotVolterra, os.str());
          }
        }
      }
    }
  }
  const std::size_t n = t.dim();
  DenseSkew d{n, std::vector<double>(n * n, 0.0)};
  for (Index k = 1; k <= n; ++k) {
    for (Index i = 1; i <= n; ++i) {
      // Equals 2 p_{ik,k} - 1 since p_{ik,k} + p_{ik,i} = 1, and is exactly
      // antisymmetric in floating point.
      if (i != k) d(k, i) = t(i, k, k) - t(i, k, i);
    }
  }
  SkewSpec out = SkewSpec::dense(std::move(d));
  require_valid(out);
  return out;
}

DeterminingTensor linear_induced_tensor(const std::vector<std::vector<double>>& stoch) {
  const std::size_t n = stoch.size();
  if (n == 0) throw Error(ErrorCode::kNotStochastic, "empty matrix");
  for (std::size_t r = 0; r < n; ++r) {
    if (stoch[r].size() != n) throw Error(ErrorCode::kNotStochastic, "matrix must be square");
    double s = 0.0;
    for (double v : stoch[r]) {
      if (!(v >= 0.0)) throw Error(ErrorCode::kNotStochastic, "negative entry in row " + std::to_string(r + 1));
      s += v;
    }
    if (std::abs(s - 1.0) > kNormalizationTol) {
      throw Error(ErrorCode::kNotStochastic, "row " + std::to_string(r + 1) + " does not sum to 1");
    }
  }
  std::vector<double> p(n * n * n);
  for (Index i = 1; i <= n; ++i) {
    for (Index j = 1; j <= n; ++j) {
      for (Index k = 1; k <= n; ++k) {
        p[((i - 1) * n + (j - 1)) * n + (k - 1)] = (stoch[i - 1][k - 1] + stoch[j - 1][k - 1]) / 2.0;
      }
    }
  }
  return DeterminingTensor::from_values(n, std::move(p));
}

}  // namespace qvolterra
